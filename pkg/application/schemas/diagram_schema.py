from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from application.services.surface_service import standard_rose
from domain.entities.diagram_model import Arc, CurveCollection, DiagramOptions, MultisectionDiagram, Variant
from domain.entities.surface_model import TwistSpec, Word, parse_monomial


class SurfaceSection(BaseModel):
    model_config = ConfigDict(extra="forbid")

    genus: int = Field(..., ge=0)
    boundary: int = Field(0, ge=0)
    closed: bool = False
    generators: list[str] | None = Field(None, description="Custom names in the order a1, b1, ..., ag, bg, d1, ...")


class CollectionSection(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str = Field(..., min_length=1, max_length=32)
    curves: list[str] = Field(default_factory=list)


class ArcSection(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str = Field(..., min_length=1, max_length=32)
    vector: list[int]


class OptionsSection(BaseModel):
    model_config = ConfigDict(extra="forbid")

    variant: Variant | None = None
    homology_basis: dict[int, list[list[str]]] = Field(
        default_factory=dict, description="Degree -> cycle vectors (scalars such as '1', '-t', 't - 1')"
    )
    monodromy_subbases: list[list[int]] | None = None


class DiagramFileSchema(BaseModel):
    """One diagram per file: surface, twist, collections, optional arcs and options."""

    model_config = ConfigDict(extra="forbid")

    name: str = "diagram"
    surface: SurfaceSection
    twist: dict[str, str] = Field(default_factory=dict)
    collections: list[CollectionSection] = Field(..., min_length=1)
    arcs: list[ArcSection] = Field(default_factory=list)
    options: OptionsSection = Field(default_factory=OptionsSection)

    @field_validator("twist")
    @classmethod
    def validate_twist_images(cls, v: dict[str, str]) -> dict[str, str]:
        for generator, text in v.items():
            parse_monomial(generator, text)
        return v

    @model_validator(mode="after")
    def validate_unique_names(self) -> "DiagramFileSchema":
        names = [c.name for c in self.collections]
        if len(set(names)) != len(names):
            raise ValueError(f"collection names must be distinct, got {names}")
        arc_names = [a.name for a in self.arcs]
        if len(set(arc_names)) != len(arc_names):
            raise ValueError(f"arc names must be distinct, got {arc_names}")
        return self

    def to_model(self) -> MultisectionDiagram:
        """Build the diagram; words and twists are checked against the surface generators."""
        rose = standard_rose(
            self.surface.genus,
            self.surface.boundary,
            closed=self.surface.closed,
            generators=self.surface.generators,
        )
        collections = tuple(
            CurveCollection(
                c.name,
                tuple(
                    Word.parse(text, rose.generators, location=f"collection {c.name}, curve {k + 1}")
                    for k, text in enumerate(c.curves)
                ),
            )
            for c in self.collections
        )
        return MultisectionDiagram(
            rose=rose,
            collections=collections,
            twist=TwistSpec.parse(self.twist, rose.generators),
            arcs=tuple(Arc(a.name, tuple(a.vector)) for a in self.arcs),
            options=DiagramOptions(
                variant=self.options.variant,
                homology_basis={k: [list(v) for v in vs] for k, vs in self.options.homology_basis.items()},
                monodromy_subbases=self.options.monodromy_subbases,
            ),
            name=self.name,
        )

    @classmethod
    def from_model(cls, diagram: MultisectionDiagram) -> "DiagramFileSchema":
        rose = diagram.rose
        return cls(
            name=diagram.name,
            surface=SurfaceSection(
                genus=rose.genus,
                boundary=rose.boundary,
                closed=rose.closed,
                generators=list(rose.generators),
            ),
            twist=diagram.twist.as_strings(),
            collections=[
                CollectionSection(name=c.name, curves=[str(w) for w in c.curves]) for c in diagram.collections
            ],
            arcs=[ArcSection(name=a.name, vector=list(a.vector)) for a in diagram.arcs],
            options=OptionsSection(
                variant=diagram.options.variant,
                homology_basis=dict(diagram.options.homology_basis),
                monodromy_subbases=diagram.options.monodromy_subbases,
            ),
        )
