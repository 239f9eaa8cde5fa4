class DiagramValidationError(Exception):
    """Raised when a diagram fails the homological validity checks."""

    def __init__(self, reasons: list[str]) -> None:
        self.reasons = list(reasons)
        super().__init__("Diagram is not homologically valid: " + "; ".join(self.reasons))


class SectorIndexError(Exception):
    """Raised when a sector index is out of range."""

    def __init__(self, index: int, n: int) -> None:
        self.index = index
        self.n = n
        super().__init__(f"Sector index {index} out of range for a diagram with {n} sectors")


class ClosedModelError(Exception):
    """Raised when an operation that needs a bounded central surface is called on a closed diagram."""

    def __init__(self, operation: str) -> None:
        self.operation = operation
        super().__init__(f"'{operation}' requires a central surface with boundary")


class BoundedModelError(Exception):
    """Raised when an operation that needs a closed diagram is called on a bounded one."""

    def __init__(self, operation: str) -> None:
        self.operation = operation
        super().__init__(f"'{operation}' requires a closed diagram")


class SurfaceConstructionError(Exception):
    """Raised when the rose model of a surface cannot be built."""

    def __init__(self, genus: int, boundary: int, reason: str) -> None:
        self.genus = genus
        self.boundary = boundary
        self.reason = reason
        super().__init__(f"Cannot build surface with genus={genus}, boundary={boundary}: {reason}")
