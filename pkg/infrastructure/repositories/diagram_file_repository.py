import re
from pathlib import Path

from pydantic import ValidationError

from application.schemas.diagram_schema import DiagramFileSchema
from domain.entities.diagram_model import MultisectionDiagram
from domain.exceptions.parse_errors import DiagramParseError
from domain.interfaces.diagram_repository import DiagramRepositoryInterface
from infrastructure.observability.logging.decorators import log_operation

_POSITION = re.compile(r"line (\d+) column (\d+)")


def _describe(error: ValidationError) -> tuple[str, int | None, int | None]:
    """First error of a pydantic validation failure as (message, line, column)."""
    first = error.errors()[0]
    if first["type"] == "json_invalid":
        detail = str(first.get("ctx", {}).get("error", first["msg"]))
        match = _POSITION.search(detail)
        if match:
            return f"invalid JSON: {detail}", int(match.group(1)), int(match.group(2))
        return f"invalid JSON: {detail}", None, None
    location = ".".join(str(part) for part in first["loc"])
    return f"{location}: {first['msg']}", None, None


class DiagramFileRepository(DiagramRepositoryInterface):
    """Diagrams stored as JSON documents (one diagram per .msd file)."""

    def __init__(self, encoding: str = "utf-8"):
        self.encoding = encoding

    @log_operation(operation_type="diagram_load")
    def load(self, path: Path) -> MultisectionDiagram:
        path = Path(path)
        try:
            text = path.read_text(encoding=self.encoding)
        except OSError as e:
            raise DiagramParseError(str(path), f"cannot read file: {e.strerror or e}") from e
        return self.loads(text, str(path))

    def loads(self, text: str, source: str = "<string>") -> MultisectionDiagram:
        if not text.strip():
            raise DiagramParseError(source, "empty document", 1, 1)
        try:
            schema = DiagramFileSchema.model_validate_json(text)
        except ValidationError as e:
            message, line, column = _describe(e)
            raise DiagramParseError(source, message, line, column) from e
        return schema.to_model()

    @log_operation(operation_type="diagram_dump")
    def dump(self, diagram: MultisectionDiagram, path: Path) -> None:
        Path(path).write_text(self.dumps(diagram) + "\n", encoding=self.encoding)

    def dumps(self, diagram: MultisectionDiagram) -> str:
        return DiagramFileSchema.from_model(diagram).model_dump_json(indent=2, exclude_none=True)
