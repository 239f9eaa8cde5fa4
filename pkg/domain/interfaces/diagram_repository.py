from abc import ABC, abstractmethod
from pathlib import Path

from domain.entities.diagram_model import MultisectionDiagram


class DiagramRepositoryInterface(ABC):
    """Abstract base class defining how diagrams are loaded and stored."""

    @abstractmethod
    def load(self, path: Path) -> MultisectionDiagram:
        """Parse the diagram stored at path."""
        pass

    @abstractmethod
    def dump(self, diagram: MultisectionDiagram, path: Path) -> None:
        """Write the diagram to path."""
        pass

    @abstractmethod
    def loads(self, text: str, source: str = "<string>") -> MultisectionDiagram:
        """Parse a diagram document held in memory."""
        pass

    @abstractmethod
    def dumps(self, diagram: MultisectionDiagram) -> str:
        """Serialize a diagram to a document."""
        pass
