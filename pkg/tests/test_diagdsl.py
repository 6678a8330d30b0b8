import json
from fractions import Fraction

import pytest

from preab import diagdsl, randgen
from preab.diagdsl import Ast, ObjectDecl, emit, format_ast, parse
from preab.errors import ElabError, ParseError
from preab.snake import SnakeInput
from preab.twosquare import TwoSquareInput

from conftest import FIXTURES


def fixture_text(name):
    return (FIXTURES / name).read_text()


class TestParse:
    def test_single_object(self):
        assert parse("object A dim 1") == Ast(objects=(ObjectDecl("A", 1),))

    def test_sign_fixture(self):
        ast = parse(fixture_text("snake_sign.pad"))
        assert (len(ast.objects), len(ast.morphisms), len(ast.checks)) == (6, 7, 1)
        assert ast.checks[0].kind == "snake"

    def test_missing_number(self):
        with pytest.raises(ParseError) as exc:
            parse("object A dim")
        assert (exc.value.line, exc.value.column) == (1, 13)

    def test_position_on_later_line(self):
        with pytest.raises(ParseError) as exc:
            parse("object A dim 1\n\n  morphism f A -> A matrix [1]")
        assert (exc.value.line, exc.value.column) == (3, 14)

    def test_comments_and_whitespace(self):
        text = "# header\n  object   A dim 2 # trailing\n\tobject B dim 0\n"
        assert [o.name for o in parse(text).objects] == ["A", "B"]

    def test_rationals(self):
        ast = parse("object A dim 2 sub [-1/2, 3; 0, 4/6]")
        assert ast.objects[0].sub == ((Fraction(-1, 2), Fraction(3)), (Fraction(0), Fraction(2, 3)))

    def test_zero_denominator(self):
        with pytest.raises(ParseError, match="zero denominator"):
            parse("object A dim 1 sub [1/0]")

    def test_empty_matrix(self):
        ast = parse("object Z dim 0\nobject A dim 1\nmorphism f : Z -> A matrix []")
        assert ast.morphisms[0].matrix == ()

    def test_unknown_kind(self):
        with pytest.raises(ParseError, match="check kind"):
            parse("check homology { }")

    def test_keyword_as_name(self):
        with pytest.raises(ParseError):
            parse("object dim dim 1")

    def test_bad_character(self):
        with pytest.raises(ParseError) as exc:
            parse("object A dim 1 @")
        assert exc.value.column == 16


class TestFormat:
    @pytest.mark.parametrize("name", ["snake_sign.pad", "nonstrict.pad", "two_square.pad"])
    def test_fixture_roundtrip(self, name):
        ast = parse(fixture_text(name))
        assert parse(format_ast(ast)) == ast

    def test_sub_presence_is_kept(self):
        a = parse("object A dim 1 sub []")
        b = parse("object A dim 1")
        assert a != b
        assert parse(format_ast(a)) == a


class TestElaborate:
    def test_sign_fixture(self):
        plan = diagdsl.load(fixture_text("snake_sign.pad"))
        assert isinstance(plan.checks[0].payload, SnakeInput)

    def test_two_square_fixture(self):
        plan = diagdsl.load(fixture_text("two_square.pad"))
        payload = plan.checks[0].payload
        assert isinstance(payload, TwoSquareInput) and not isinstance(payload, SnakeInput)

    def elab_kind(self, text):
        with pytest.raises(ElabError) as exc:
            diagdsl.load(text)
        return exc.value.kind

    def test_subspace_violation(self):
        text = "object A dim 1 sub [1]\nobject B dim 1\nmorphism f : A -> B matrix [1]"
        assert self.elab_kind(text) == "SubspaceViolation"

    def test_row_condition(self):
        text = fixture_text("snake_sign.pad").replace("morphism psi2 : A2 -> B2 matrix [1]",
                                                      "morphism psi2 : A2 -> B2 matrix [0]")
        assert self.elab_kind(text) == "RowCondition"

    def test_non_commuting(self):
        text = fixture_text("two_square.pad").replace("gamma = idC", "gamma = psi")
        assert self.elab_kind(text) == "DimensionMismatch"
        text = fixture_text("two_square.pad").replace(
            "morphism idC : C -> C matrix [1]", "morphism idC : C -> C matrix [2]"
        )
        assert self.elab_kind(text) == "NonCommuting"

    def test_inexact_row(self):
        text = fixture_text("two_square.pad").replace("matrix [0, 1]", "matrix [0, 0]")
        assert self.elab_kind(text) == "InexactRow"

    def test_dimension_mismatch(self):
        assert self.elab_kind("object A dim 2\nmorphism f : A -> A matrix [1, 0]") == "DimensionMismatch"
        assert self.elab_kind("object A dim 1\nmorphism f : A -> A matrix []") == "DimensionMismatch"
        assert self.elab_kind("object A dim 2\nmorphism f : A -> A matrix [1, 0; 1]") == "DimensionMismatch"

    def test_names(self):
        assert self.elab_kind("object A dim 1\nobject A dim 2") == "DuplicateName"
        assert self.elab_kind("object A dim 1\nmorphism f : A -> B matrix [1]") == "UnknownName"
        assert self.elab_kind("object A dim 1\nmorphism f : A -> A matrix [1]\ncheck decomp { f = g }") == "UnknownName"
        assert self.elab_kind("object A dim 1\nmorphism f : A -> A matrix [1]\ncheck exact { a = f }") == "MissingBinding"

    def test_error_position(self):
        with pytest.raises(ElabError) as exc:
            diagdsl.load("object A dim 1\n\nmorphism f : A -> Q matrix [1]")
        assert exc.value.line == 3

    def test_probe_requires_kernel(self):
        assert self.elab_kind(fixture_text("nonstrict.pad").replace("decomp", "probe").replace("f = f", "k = f")) == "RowCondition"


class TestWriter:
    @pytest.mark.parametrize("seed", range(5))
    def test_diagram_roundtrip(self, seed):
        inp = randgen.random_snake_input(seed, 4)
        text = format_ast(diagdsl.two_row_ast(inp, "snake"))
        assert diagdsl.load(text).checks[0].payload == inp

    def test_morphism_roundtrip(self):
        f = randgen.random_morphism(3)
        text = format_ast(diagdsl.morphism_ast(f))
        assert diagdsl.load(text).checks[0].payload == f


class TestEmit:
    def test_empty_report(self):
        assert emit({"version": 1, "checks": []}) == '{"checks":[],"version":1}'

    def test_rationals_as_strings(self):
        assert emit({"x": Fraction(-1, 2), "y": Fraction(3)}) == '{"x":"-1/2","y":"3"}'

    def test_sign_fixture_report(self):
        from preab import audit

        plan = diagdsl.load(fixture_text("snake_sign.pad"))
        text = emit({"version": 1, "checks": audit.run_plan(plan, 0)})
        assert '"name":"sign_check","pass":true' in text
        assert '"delta_i":[["1"]]' in text and '"delta_ii":[["-1"]]' in text

    def test_canonical_roundtrip(self):
        text = emit({"b": [1, {"z": True, "a": None}], "a": "p/q"})
        assert emit(json.loads(text)) == text
