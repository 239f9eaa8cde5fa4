class ComplexIntegrityError(Exception):
    """Raised when consecutive boundary maps do not compose to zero."""

    def __init__(self, degree: int, detail: str = "") -> None:
        self.degree = degree
        self.detail = detail
        extra = f" ({detail})" if detail else ""
        super().__init__(f"Boundary maps fail d o d = 0 at degree {degree}{extra}")


class CertificateError(Exception):
    """Raised when a Smith normal form certificate does not verify."""

    def __init__(self, reason: str) -> None:
        self.reason = reason
        super().__init__(f"Smith normal form certificate failed: {reason}")


class IntegralityError(Exception):
    """Raised when a coordinate expression leaves the coefficient ring."""

    def __init__(self, context: str) -> None:
        self.context = context
        super().__init__(f"Coordinates are not integral: {context}")


class HomologyBasisError(Exception):
    """Raised when a homology basis is missing or invalid for a torsion computation."""

    def __init__(self, reason: str) -> None:
        self.reason = reason
        super().__init__(reason)


class CycleError(Exception):
    """Raised when a supplied chain is not a cycle of the expected complex."""

    def __init__(self, reason: str) -> None:
        self.reason = reason
        super().__init__(f"Invalid cycle: {reason}")


class MonodromyError(Exception):
    """Raised when the monodromy recursion cannot be carried out."""

    def __init__(self, reason: str) -> None:
        self.reason = reason
        super().__init__(f"Monodromy computation failed: {reason}")


class BasisCompletionError(Exception):
    """Raised when a sublattice cannot be completed to a basis of the ambient lattice."""

    def __init__(self, reason: str) -> None:
        self.reason = reason
        super().__init__(f"Basis completion failed: {reason}")
