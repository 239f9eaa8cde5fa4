import json

import pytest

from domain.entities.diagram_model import Variant
from domain.exceptions.diagram_errors import SurfaceConstructionError
from domain.exceptions.parse_errors import (
    DiagramParseError,
    TwistSyntaxError,
    UnknownGeneratorError,
    WordSyntaxError,
)


def _document(**overrides) -> str:
    document = {
        "name": "tiny",
        "surface": {"genus": 1, "boundary": 1},
        "collections": [
            {"name": "alpha", "curves": ["a1"]},
            {"name": "beta", "curves": ["b1"]},
        ],
    }
    document.update(overrides)
    return json.dumps(document)


def test_example_two_shape(ex2):
    assert (ex2.n, ex2.p) == (3, 1)
    assert (ex2.rose.genus, ex2.rose.boundary) == (2, 1)
    assert ex2.rose.generators == ("alpha", "beta", "x", "y")
    assert ex2.twist.image("x") == (1, 1)
    assert [a.name for a in ex2.arcs] == ["e", "e'"]


def test_closed_fixture(cp2):
    assert cp2.closed
    assert cp2.rose.generators == ("a1", "b1")


def test_round_trip(repository, ex1, ex2, cp2):
    for diagram in (ex1, ex2, cp2):
        assert repository.loads(repository.dumps(diagram)) == diagram


def test_dump_and_load_file(repository, ex2, tmp_path):
    path = tmp_path / "copy.msd"
    repository.dump(ex2, path)
    assert repository.load(path) == ex2


def test_options_are_read(repository):
    diagram = repository.loads(
        _document(options={"variant": "relative", "homology_basis": {"1": [["1", "t - 1"]]}})
    )
    assert diagram.options.variant is Variant.RELATIVE
    assert diagram.options.homology_basis == {1: [["1", "t - 1"]]}


def test_empty_document(repository):
    with pytest.raises(DiagramParseError) as info:
        repository.loads("   ", "empty.msd")
    assert info.value.line == 1


def test_malformed_json_reports_position(repository):
    with pytest.raises(DiagramParseError) as info:
        repository.loads('{\n  "name": "x",\n  "surface": {\n', "broken.msd")
    assert info.value.path == "broken.msd"
    assert "invalid JSON" in info.value.message


def test_missing_file(repository, tmp_path):
    with pytest.raises(DiagramParseError):
        repository.load(tmp_path / "absent.msd")


def test_unknown_field(repository):
    with pytest.raises(DiagramParseError):
        repository.loads(_document(colour="blue"))


def test_duplicate_collection_names(repository):
    collections = [{"name": "alpha", "curves": ["a1"]}, {"name": "alpha", "curves": ["b1"]}]
    with pytest.raises(DiagramParseError):
        repository.loads(_document(collections=collections))


def test_word_exponent_rejected(repository):
    collections = [{"name": "alpha", "curves": ["a1^-2"]}, {"name": "beta", "curves": ["b1"]}]
    with pytest.raises(WordSyntaxError):
        repository.loads(_document(collections=collections))


def test_unknown_generator_names_its_location(repository):
    collections = [{"name": "alpha", "curves": ["a1"]}, {"name": "beta", "curves": ["q"]}]
    with pytest.raises(UnknownGeneratorError) as info:
        repository.loads(_document(collections=collections))
    assert "collection beta" in info.value.location


def test_twist_must_be_monomial(repository):
    with pytest.raises(TwistSyntaxError):
        repository.loads(_document(twist={"a1": "t + 1"}))


def test_twist_on_unknown_generator(repository):
    with pytest.raises(UnknownGeneratorError):
        repository.loads(_document(twist={"z": "t"}))


def test_invalid_surface(repository):
    with pytest.raises(SurfaceConstructionError):
        repository.loads(_document(surface={"genus": 1, "boundary": 0}))
