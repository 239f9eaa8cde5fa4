class DiagramParseError(Exception):
    """Raised when a diagram file cannot be read or does not match the file format."""

    def __init__(self, path: str, message: str, line: int | None = None, column: int | None = None) -> None:
        self.path = path
        self.message = message
        self.line = line
        self.column = column
        where = f":{line}:{column}" if line is not None else ""
        super().__init__(f"{path}{where}: {message}")


class WordSyntaxError(Exception):
    """Raised when a curve word contains a malformed token."""

    def __init__(self, token: str, location: str = "") -> None:
        self.token = token
        self.location = location
        suffix = f" in {location}" if location else ""
        super().__init__(f"Malformed word token '{token}'{suffix}; expected NAME or NAME^-1")


class UnknownGeneratorError(Exception):
    """Raised when a word or twist names a generator the surface does not have."""

    def __init__(self, name: str, location: str = "") -> None:
        self.name = name
        self.location = location
        suffix = f" in {location}" if location else ""
        super().__init__(f"Unknown generator '{name}'{suffix}")


class TwistSyntaxError(Exception):
    """Raised when a twist image is not a signed monomial in t."""

    def __init__(self, generator: str, text: str) -> None:
        self.generator = generator
        self.text = text
        super().__init__(f"Twist image '{text}' for generator '{generator}' is not of the form [+-]t^k or [+-]1")
