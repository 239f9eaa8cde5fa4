"""
Command layer: parses arguments, loads the diagram, runs one pipeline and reports.

Exit codes: 0 success, 3 parse errors, 4 validation errors, 5 computation errors.
"""

import argparse
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, TextIO

from pydantic import BaseModel

from application.schemas.report_schema import (
    BoundaryResponse,
    ErrorResponse,
    FormResponse,
    HomologyResponse,
    IntersectionFormResponse,
    MonodromyResponse,
    TorsionResponse,
    ValidationResponse,
)
from application.services.homology_service import HomologyService
from application.services.intersection_form_service import IntersectionFormService
from application.services.multisection_service import MultisectionService
from application.services.open_book_service import OpenBookService
from application.services.torsion_service import TorsionService
from core.settings import app_settings
from domain.entities.chain_complex_model import ChainComplex
from domain.entities.diagram_model import MultisectionDiagram, Variant
from domain.entities.surface_model import TwistSpec
from domain.exceptions.computation_errors import (
    BasisCompletionError,
    CertificateError,
    ComplexIntegrityError,
    CycleError,
    HomologyBasisError,
    IntegralityError,
    MonodromyError,
)
from domain.exceptions.diagram_errors import (
    BoundedModelError,
    ClosedModelError,
    DiagramValidationError,
    SectorIndexError,
    SurfaceConstructionError,
)
from domain.exceptions.parse_errors import (
    DiagramParseError,
    TwistSyntaxError,
    UnknownGeneratorError,
    WordSyntaxError,
)
from infrastructure.repositories.diagram_file_repository import DiagramFileRepository

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_PARSE = 3
EXIT_VALIDATION = 4
EXIT_COMPUTATION = 5

PARSE_ERRORS = (DiagramParseError, WordSyntaxError, UnknownGeneratorError, TwistSyntaxError)
VALIDATION_ERRORS = (
    DiagramValidationError,
    SectorIndexError,
    ClosedModelError,
    BoundedModelError,
    SurfaceConstructionError,
)
COMPUTATION_ERRORS = (
    ComplexIntegrityError,
    CertificateError,
    IntegralityError,
    HomologyBasisError,
    CycleError,
    MonodromyError,
    BasisCompletionError,
)

COMMANDS = (
    "validate",
    "homology",
    "rel-homology",
    "twisted-homology",
    "torsion",
    "intersection-form",
    "monodromy",
    "boundary",
)


def exit_code_for(exc: Exception) -> int | None:
    """Exit code of a domain error family, None for anything else."""
    if isinstance(exc, PARSE_ERRORS):
        return EXIT_PARSE
    if isinstance(exc, VALIDATION_ERRORS):
        return EXIT_VALIDATION
    if isinstance(exc, COMPUTATION_ERRORS):
        return EXIT_COMPUTATION
    return None


@dataclass
class Outcome:
    text: str
    response: BaseModel
    exit_code: int = EXIT_OK


@dataclass
class CommandContext:
    diagram: MultisectionDiagram
    variant: Variant | None
    trace: bool
    multisection: MultisectionService = field(default_factory=MultisectionService)

    def __post_init__(self) -> None:
        self.homology = HomologyService()
        self.torsion = TorsionService(self.multisection, self.homology)
        self.forms = IntersectionFormService(self.multisection, self.homology)
        self.open_book = OpenBookService(self.multisection, self.homology)

    def resolved_variant(self, fallback: Variant | None = None) -> Variant:
        if self.variant is not None:
            return self.variant
        if self.diagram.options.variant is not None:
            return self.diagram.options.variant
        if self.diagram.closed:
            return Variant.CLOSED
        return fallback or Variant(app_settings.default_variant)


def parse_twist_override(text: str, generators: tuple[str, ...]) -> TwistSpec:
    """``"x=t,y=-t^2"`` -> TwistSpec."""
    mapping = {}
    for pair in text.split(","):
        if not pair.strip():
            continue
        if "=" not in pair:
            raise TwistSyntaxError(pair.strip(), "")
        name, image = pair.split("=", 1)
        mapping[name.strip()] = image.strip()
    return TwistSpec.parse(mapping, generators)


def _trace_text(complex_: ChainComplex) -> str:
    lines = [f"# {complex_.name} over {complex_.ring.display}, ranks {list(complex_.ranks)}"]
    for k in range(complex_.low + 1, complex_.high + 1):
        lines.append(f"d{k}:")
        lines.append(complex_.boundary(k).format(complex_.basis_labels(k - 1), complex_.basis_labels(k)))
    return "\n".join(lines)


# handlers


def _validate(ctx: CommandContext) -> Outcome:
    report = ctx.multisection.validate(ctx.diagram)
    if report.valid:
        text = f"{report.name}: homologically valid"
        if report.page_genus is not None:
            text += f" (page genus {report.page_genus}, {report.page_components} page component(s))"
    else:
        text = f"{report.name}: invalid\n" + "\n".join(f"  - {r}" for r in report.reasons)
    return Outcome(text, ValidationResponse.from_report(report), EXIT_OK if report.valid else EXIT_VALIDATION)


def _homology_with(ctx: CommandContext, variant: Variant) -> Outcome:
    ctx.multisection.require_valid(ctx.diagram)
    complex_ = ctx.multisection.build_complex(ctx.diagram.untwisted(), variant)
    report = ctx.homology.homology(complex_)
    text = report.summary()
    if not report.exact_bases:
        text += f"\n(coefficients widened to {complex_.ring.display})"
    if ctx.trace:
        text += "\n" + _trace_text(complex_)
    response = HomologyResponse.from_report(ctx.diagram.name, report, complex_ if ctx.trace else None)
    return Outcome(text, response)


def _homology(ctx: CommandContext) -> Outcome:
    return _homology_with(ctx, ctx.resolved_variant())


def _rel_homology(ctx: CommandContext) -> Outcome:
    return _homology_with(ctx, Variant.RELATIVE)


def _twisted_homology(ctx: CommandContext) -> Outcome:
    ctx.multisection.require_valid(ctx.diagram)
    complex_ = ctx.multisection.build_complex(ctx.diagram, ctx.resolved_variant())
    report = ctx.homology.homology_over_laurent(complex_)
    over_field = ctx.homology.homology_over_field(complex_)
    text = report.summary() + "\n" + (
        f"over {over_field.ring.display}: acyclic" if over_field.acyclic else over_field.summary()
    )
    if ctx.trace:
        text += "\n" + _trace_text(complex_)
    response = HomologyResponse.from_report(ctx.diagram.name, report, complex_ if ctx.trace else None)
    return Outcome(text, response)


def _torsion(ctx: CommandContext) -> Outcome:
    variant = ctx.resolved_variant()
    value = ctx.torsion.torsion_of_diagram(ctx.diagram, variant=variant)
    text = str(value)
    complex_ = ctx.multisection.build_complex(ctx.diagram, variant) if ctx.trace else None
    if complex_ is not None:
        text += f"\nraw value: {value.raw}\n" + _trace_text(complex_)
    return Outcome(text, TorsionResponse.from_value(ctx.diagram.name, value, complex_))


def _intersection_form(ctx: CommandContext) -> Outcome:
    ctx.multisection.require_valid(ctx.diagram)
    if ctx.diagram.closed:
        reports = [ctx.forms.closed_H2_form(ctx.diagram)]
    else:
        reports = [ctx.forms.bounded_H2_pairing(ctx.diagram), ctx.forms.bounded_H1_H3_pairing(ctx.diagram)]
    blocks = []
    for report in reports:
        header = f"{report.kind}: rank {report.rank}"
        if report.determinant is not None:
            header += f", det {report.determinant}"
        if report.signature is not None:
            header += f", signature {report.signature}"
        blocks.append(header + "\n" + report.matrix.format(report.row_labels, report.col_labels))
    response = IntersectionFormResponse(
        diagram=ctx.diagram.name, forms=[FormResponse.from_report(r) for r in reports]
    )
    return Outcome("\n".join(blocks), response)


def _monodromy(ctx: CommandContext) -> Outcome:
    result = ctx.open_book.monodromy_action(ctx.diagram)
    names = list(result.arc_names)
    text = "R =\n" + result.R.format(names, names)
    if ctx.trace:
        for step in result.steps:
            text += f"\nR_{step.sector} =\n" + step.R.format(names)
            text += "\n" + "\n".join(f"  {n}: e={list(e)} eps={list(x)}" for n, e, x in zip(names, step.arcs, step.epsilon))
    return Outcome(text, MonodromyResponse.from_result(result, ctx.trace))


def _boundary(ctx: CommandContext) -> Outcome:
    result = ctx.open_book.boundary_homology(ctx.diagram)
    response = BoundaryResponse.from_result(result, ctx.trace)
    names = list(result.monodromy.arc_names)
    text = response.summary + "\nS =\n" + result.S.format(names, list(result.completion_labels))
    if ctx.trace:
        text += "\nR =\n" + result.monodromy.R.format(names, names)
    return Outcome(text, response)


HANDLERS: dict[str, Callable[[CommandContext], Outcome]] = {
    "validate": _validate,
    "homology": _homology,
    "rel-homology": _rel_homology,
    "twisted-homology": _twisted_homology,
    "torsion": _torsion,
    "intersection-form": _intersection_form,
    "monodromy": _monodromy,
    "boundary": _boundary,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="msd",
        description="Homology, torsion, intersection forms and boundary open books of multisection diagrams.",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("diagram", type=Path, help="Diagram file (.msd, JSON)")
    parser.add_argument("--twist-override", metavar="GEN=IMAGE,...", help='Override twist images, e.g. "x=t,y=1"')
    parser.add_argument("--variant", choices=[v.value for v in Variant], help="Complex variant")
    parser.add_argument("--trace", action="store_true", help="Print boundary matrices and recursion traces")
    parser.add_argument("--machine-output", action="store_true", help="Emit a JSON report instead of text")
    return parser


def run(argv: list[str] | None = None, stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    """Run one command; returns the process exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)

    try:
        diagram = DiagramFileRepository().load(args.diagram)
        if args.twist_override:
            override = parse_twist_override(args.twist_override, diagram.rose.generators)
            diagram = diagram.with_twist(diagram.twist.merged(override))
        ctx = CommandContext(
            diagram=diagram,
            variant=Variant(args.variant) if args.variant else None,
            trace=args.trace,
        )
        outcome = HANDLERS[args.command](ctx)
    except Exception as exc:
        code = exit_code_for(exc)
        if code is None:
            logger.exception("Unexpected error running %s on %s", args.command, args.diagram)
            raise
        logger.info("%s on %s failed with %s: %s", args.command, args.diagram, type(exc).__name__, exc)
        if args.machine_output:
            error = ErrorResponse(error=type(exc).__name__, message=str(exc), exit_code=code)
            print(error.model_dump_json(indent=2), file=stdout)
        else:
            print(f"error: {exc}", file=stderr)
        return code

    if args.machine_output:
        print(outcome.response.model_dump_json(indent=2), file=stdout)
    else:
        print(outcome.text, file=stdout)
    return outcome.exit_code
