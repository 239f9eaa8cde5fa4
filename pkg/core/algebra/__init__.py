"""Exact matrices over ZZ, QQ and the Laurent rings, Smith normal form and lattice helpers."""
