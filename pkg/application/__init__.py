"""Application layer: services, schemas and the command line."""
