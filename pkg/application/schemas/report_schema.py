from typing import Any, Sequence

from pydantic import BaseModel, Field

from core.algebra.matrix import Matrix
from core.algebra.rings import format_scalar
from domain.entities.chain_complex_model import ChainComplex
from domain.entities.diagram_model import ValidationReport
from domain.entities.form_model import FormReport
from domain.entities.homology_model import HomologyGroup, HomologyReport
from domain.entities.monodromy_model import BoundaryHomologyResult, MonodromyResult, PageData
from domain.entities.torsion_model import TorsionValue


def _scalar(value: Any) -> str | None:
    return None if value is None else format_scalar(value)


class MatrixReport(BaseModel):
    """Row-major matrix with entries rendered as strings."""

    ring: str
    shape: tuple[int, int]
    rows: list[list[str]]
    row_labels: list[str] = Field(default_factory=list)
    col_labels: list[str] = Field(default_factory=list)

    @classmethod
    def from_matrix(
        cls, matrix: Matrix, row_labels: Sequence[str] = (), col_labels: Sequence[str] = ()
    ) -> "MatrixReport":
        return cls(
            ring=matrix.ring.value,
            shape=matrix.shape,
            rows=[[format_scalar(x) for x in row] for row in matrix.rows],
            row_labels=list(row_labels),
            col_labels=list(col_labels),
        )


class ValidationResponse(BaseModel):
    diagram: str
    valid: bool
    reasons: list[str]
    collection_ranks: dict[str, int]
    page_genus: int | None = None
    page_components: int | None = None
    euler_characteristic: int | None = None

    @classmethod
    def from_report(cls, report: ValidationReport) -> "ValidationResponse":
        return cls(
            diagram=report.name,
            valid=report.valid,
            reasons=list(report.reasons),
            collection_ranks=dict(report.collection_ranks),
            page_genus=report.page_genus,
            page_components=report.page_components,
            euler_characteristic=report.euler_characteristic,
        )


class HomologyGroupResponse(BaseModel):
    degree: int
    group: str
    free_rank: int
    torsion: list[str]
    presentation: MatrixReport | None = None

    @classmethod
    def from_group(cls, group: HomologyGroup) -> "HomologyGroupResponse":
        return cls(
            degree=group.degree,
            group=str(group),
            free_rank=group.free_rank,
            torsion=[format_scalar(f) for f in group.torsion],
            presentation=MatrixReport.from_matrix(group.presentation) if group.presentation is not None else None,
        )


class ComplexTrace(BaseModel):
    """Boundary matrices of a built complex with labelled rows and columns."""

    name: str
    ring: str
    ranks: dict[int, int]
    exact_bases: bool
    boundaries: dict[int, MatrixReport]

    @classmethod
    def from_complex(cls, complex_: ChainComplex) -> "ComplexTrace":
        return cls(
            name=complex_.name,
            ring=complex_.ring.value,
            ranks={k: complex_.rank(k) for k in complex_.degrees},
            exact_bases=complex_.exact_bases,
            boundaries={
                k: MatrixReport.from_matrix(
                    complex_.boundary(k), complex_.basis_labels(k - 1), complex_.basis_labels(k)
                )
                for k in range(complex_.low + 1, complex_.high + 1)
            },
        )


class HomologyResponse(BaseModel):
    diagram: str
    ring: str
    summary: str
    acyclic: bool
    exact_bases: bool
    groups: list[HomologyGroupResponse]
    trace: ComplexTrace | None = None

    @classmethod
    def from_report(
        cls, diagram: str, report: HomologyReport, complex_: ChainComplex | None = None
    ) -> "HomologyResponse":
        return cls(
            diagram=diagram,
            ring=report.ring.value,
            summary=report.summary(),
            acyclic=report.acyclic,
            exact_bases=report.exact_bases,
            groups=[HomologyGroupResponse.from_group(g) for g in report.groups],
            trace=ComplexTrace.from_complex(complex_) if complex_ is not None else None,
        )


class TorsionResponse(BaseModel):
    diagram: str
    representative: str
    ambiguity: str
    raw: str
    acyclic: bool
    homology_basis: str
    trace: ComplexTrace | None = None

    @classmethod
    def from_value(
        cls, diagram: str, value: TorsionValue, complex_: ChainComplex | None = None
    ) -> "TorsionResponse":
        return cls(
            diagram=diagram,
            representative=str(value.representative),
            ambiguity=value.ambiguity.value,
            raw=str(value.raw),
            acyclic=value.acyclic,
            homology_basis=value.homology_basis,
            trace=ComplexTrace.from_complex(complex_) if complex_ is not None else None,
        )


class FormResponse(BaseModel):
    kind: str
    matrix: MatrixReport
    rank: int
    determinant: str | None = None
    signature: int | None = None
    symmetric: bool | None = None

    @classmethod
    def from_report(cls, report: FormReport) -> "FormResponse":
        return cls(
            kind=report.kind,
            matrix=MatrixReport.from_matrix(report.matrix, report.row_labels, report.col_labels),
            rank=report.rank,
            determinant=_scalar(report.determinant),
            signature=report.signature,
            symmetric=report.symmetric,
        )


class IntersectionFormResponse(BaseModel):
    diagram: str
    forms: list[FormResponse]


class PageResponse(BaseModel):
    genus: int
    boundary: int
    components: int
    rank_L: int
    rank_J: int
    rank_dual_L: int
    rank_dual_J: int

    @classmethod
    def from_page(cls, page: PageData) -> "PageResponse":
        return cls(**page.__dict__)


class MonodromyStepResponse(BaseModel):
    step: int
    R: MatrixReport
    arcs: list[list[int]]
    epsilon: list[list[int]]


class MonodromyResponse(BaseModel):
    diagram: str
    R: MatrixReport
    determinant: str
    arc_names: list[str]
    subbases: list[list[int]]
    page: PageResponse
    steps: list[MonodromyStepResponse] = Field(default_factory=list)

    @classmethod
    def from_result(cls, result: MonodromyResult, trace: bool = True) -> "MonodromyResponse":
        names = list(result.arc_names)
        return cls(
            diagram=result.name,
            R=MatrixReport.from_matrix(result.R, names, names),
            determinant=format_scalar(result.R.determinant()),
            arc_names=names,
            subbases=[list(s) for s in result.subbases],
            page=PageResponse.from_page(result.page),
            steps=[
                MonodromyStepResponse(
                    step=s.sector,
                    R=MatrixReport.from_matrix(s.R, names),
                    arcs=[list(v) for v in s.arcs],
                    epsilon=[list(v) for v in s.epsilon],
                )
                for s in result.steps
            ]
            if trace
            else [],
        )


class BoundaryResponse(BaseModel):
    diagram: str
    summary: str
    xi: MatrixReport
    S: MatrixReport
    groups: list[HomologyGroupResponse]
    monodromy: MonodromyResponse

    @classmethod
    def from_result(cls, result: BoundaryHomologyResult, trace: bool = True) -> "BoundaryResponse":
        names = list(result.monodromy.arc_names)
        labels = list(result.completion_labels)
        return cls(
            diagram=result.monodromy.name,
            summary=" ".join(f"H{g.degree}(∂X)={g}" for g in result.homology.groups),
            xi=MatrixReport.from_matrix(result.xi, labels, names),
            S=MatrixReport.from_matrix(result.S, names, labels),
            groups=[HomologyGroupResponse.from_group(g) for g in result.homology.groups],
            monodromy=MonodromyResponse.from_result(result.monodromy, trace),
        )


class ErrorResponse(BaseModel):
    error: str
    message: str
    exit_code: int
