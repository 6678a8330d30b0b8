"""The ``.pad`` diagram format.

Grammar::

    file      := { stmt }
    stmt      := objdecl | mordecl | checkdecl
    objdecl   := "object" IDENT "dim" NAT [ "sub" matrix ]
    mordecl   := "morphism" IDENT ":" IDENT "->" IDENT "matrix" matrix
    checkdecl := "check" kind "{" { IDENT "=" IDENT } "}"
    kind      := "two_square" | "snake" | "exact" | "decomp" | "probe"
    matrix    := "[" [ row { ";" row } ] "]"
    row       := rational { "," rational }
    rational  := [ "-" ] NAT [ "/" NAT ]

``#`` starts a comment running to the end of the line.  Morphism matrices act
on column vectors; the rows of ``sub`` are spanning vectors of the
distinguished subspace.  ``[]`` is the empty matrix (a map to or from the
zero object, or the zero subspace).

Example::

    object A dim 1
    object B dim 2 sub [1, 0]
    morphism f : A -> B matrix [1; 0]
    check decomp { f = f }
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, is_dataclass
from fractions import Fraction
from typing import Any, Iterator

from .errors import DiagramError, ElabError, ParseError, ShapeMismatch, SubspaceViolation
from .ratmat import Matrix, Subspace
from .snake import SnakeInput
from .twosquare import TwoSquareInput
from .vectpair import PairMorphism, PairObject

KINDS = ("two_square", "snake", "exact", "decomp", "probe")
KEYWORDS = {"object", "dim", "sub", "morphism", "matrix", "check"}
DIAGRAM_BINDINGS = ("psi", "phi", "psi2", "phi2", "alpha", "beta", "gamma")
REQUIRED_BINDINGS = {
    "two_square": DIAGRAM_BINDINGS,
    "snake": DIAGRAM_BINDINGS,
    "exact": ("a", "b"),
    "decomp": ("f",),
    "probe": ("k",),
}

Rows = tuple  # tuple[tuple[Fraction, ...], ...]


# -- AST ----------------------------------------------------------------------


@dataclass(frozen=True)
class ObjectDecl:
    name: str
    dim: int
    sub: Rows | None = None
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class MorphismDecl:
    name: str
    src: str
    dst: str
    matrix: Rows
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class CheckDecl:
    kind: str
    bindings: tuple  # tuple[tuple[str, str], ...]
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Ast:
    objects: tuple = ()
    morphisms: tuple = ()
    checks: tuple = ()


# -- lexer ----------------------------------------------------------------------

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<arrow>->)
  | (?P<nat>[0-9]+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<sym>[:\[\];,{}=/-])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # "ident" | "nat" | "sym" | "eof"
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    out = []
    pos, line, col0 = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - col0 + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            col0 = m.end()
        elif kind in ("ident", "nat"):
            out.append(Token(kind, m.group(), line, pos - col0 + 1))
        elif kind in ("arrow", "sym"):
            out.append(Token("sym", m.group(), line, pos - col0 + 1))
        pos = m.end()
    out.append(Token("eof", "", line, pos - col0 + 1))
    return out


# -- parser -----------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def fail(self, expected: str):
        t = self.tok
        if t.kind == "eof":
            # point just past the last real token, not at trailing blank lines
            if self.i:
                prev = self.toks[self.i - 1]
                raise ParseError(f"expected {expected}, got end of input", prev.line, prev.column + len(prev.text))
            raise ParseError(f"expected {expected}, got end of input", t.line, t.column)
        raise ParseError(f"expected {expected}, got {t.text!r}", t.line, t.column)

    def next(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def sym(self, s: str) -> Token:
        if self.tok.kind != "sym" or self.tok.text != s:
            self.fail(repr(s))
        return self.next()

    def keyword(self, word: str) -> Token:
        if self.tok.kind != "ident" or self.tok.text != word:
            self.fail(repr(word))
        return self.next()

    def ident(self) -> str:
        if self.tok.kind != "ident" or self.tok.text in KEYWORDS:
            self.fail("a name")
        return self.next().text

    def nat(self) -> int:
        if self.tok.kind != "nat":
            self.fail("a natural number")
        return int(self.next().text)

    def at(self, kind: str, text: str | None = None) -> bool:
        return self.tok.kind == kind and (text is None or self.tok.text == text)

    def rational(self) -> Fraction:
        neg = False
        if self.at("sym", "-"):
            self.next()
            neg = True
        num = self.nat()
        den = 1
        if self.at("sym", "/"):
            self.next()
            den_tok = self.tok
            den = self.nat()
            if den == 0:
                raise ParseError("zero denominator", den_tok.line, den_tok.column)
        v = Fraction(num, den)
        return -v if neg else v

    def matrix(self) -> Rows:
        self.sym("[")
        rows = []
        if not self.at("sym", "]"):
            rows.append(self.row())
            while self.at("sym", ";"):
                self.next()
                rows.append(self.row())
        self.sym("]")
        return tuple(rows)

    def row(self) -> tuple:
        vals = [self.rational()]
        while self.at("sym", ","):
            self.next()
            vals.append(self.rational())
        return tuple(vals)

    def file(self) -> Ast:
        objects, morphisms, checks = [], [], []
        while not self.at("eof"):
            t = self.tok
            if self.at("ident", "object"):
                self.next()
                name = self.ident()
                self.keyword("dim")
                dim = self.nat()
                sub = None
                if self.at("ident", "sub"):
                    self.next()
                    sub = self.matrix()
                objects.append(ObjectDecl(name, dim, sub, t.line, t.column))
            elif self.at("ident", "morphism"):
                self.next()
                name = self.ident()
                self.sym(":")
                src = self.ident()
                self.sym("->")
                dst = self.ident()
                self.keyword("matrix")
                morphisms.append(MorphismDecl(name, src, dst, self.matrix(), t.line, t.column))
            elif self.at("ident", "check"):
                self.next()
                if not (self.tok.kind == "ident" and self.tok.text in KINDS):
                    self.fail("a check kind (" + " | ".join(KINDS) + ")")
                kind = self.next().text
                self.sym("{")
                binds = []
                while not self.at("sym", "}"):
                    key = self.ident()
                    self.sym("=")
                    binds.append((key, self.ident()))
                self.sym("}")
                checks.append(CheckDecl(kind, tuple(binds), t.line, t.column))
            else:
                self.fail("'object', 'morphism' or 'check'")
        return Ast(tuple(objects), tuple(morphisms), tuple(checks))


def parse(text: str) -> Ast:
    return _Parser(text).file()


# -- formatter -----------------------------------------------------------------------


def format_matrix(rows: Rows) -> str:
    if not all(rows):
        return "[]"
    return "[" + "; ".join(", ".join(str(x) for x in r) for r in rows) + "]"


def format_ast(ast: Ast) -> str:
    lines = []
    for o in ast.objects:
        s = f"object {o.name} dim {o.dim}"
        if o.sub is not None:
            s += f" sub {format_matrix(o.sub)}"
        lines.append(s)
    for m in ast.morphisms:
        lines.append(f"morphism {m.name} : {m.src} -> {m.dst} matrix {format_matrix(m.matrix)}")
    for c in ast.checks:
        body = " ".join(f"{k} = {v}" for k, v in c.bindings)
        lines.append(f"check {c.kind} {{ {body} }}" if body else f"check {c.kind} {{ }}")
    return "\n".join(lines) + "\n"


# -- elaboration ----------------------------------------------------------------------


@dataclass
class PlannedCheck:
    kind: str
    payload: Any  # TwoSquareInput | SnakeInput | morphism | (a, b)
    bindings: dict[str, str]
    line: int = 0

    @property
    def label(self) -> str:
        return f"{self.kind}@{self.line}"


@dataclass
class CheckPlan:
    objects: dict[str, PairObject]
    morphisms: dict[str, PairMorphism]
    checks: list[PlannedCheck]


def _rows_to_matrix(rows: Rows, nrows: int, ncols: int, decl, what: str) -> Matrix:
    if not rows:
        if nrows * ncols:
            raise ElabError(
                f"{what}: empty matrix but shape must be {nrows}x{ncols}",
                decl.line, decl.column, "DimensionMismatch",
            )
        return Matrix.zeros(nrows, ncols)
    try:
        m = Matrix(rows)
    except ShapeMismatch as exc:
        raise ElabError(f"{what}: {exc}", decl.line, decl.column, "DimensionMismatch") from exc
    if m.shape != (nrows, ncols):
        raise ElabError(
            f"{what}: matrix is {m.nrows}x{m.ncols}, expected {nrows}x{ncols}",
            decl.line, decl.column, "DimensionMismatch",
        )
    return m


def elaborate(ast: Ast) -> CheckPlan:
    objects: dict[str, PairObject] = {}
    for o in ast.objects:
        if o.name in objects:
            raise ElabError(f"object {o.name} declared twice", o.line, o.column, "DuplicateName")
        if o.sub is None:
            sub = Subspace.zero(o.dim)
        else:
            vecs = _rows_to_matrix(o.sub, len(o.sub), o.dim, o, f"object {o.name} sub")
            sub = Subspace.span(o.dim, vecs.T)
        objects[o.name] = PairObject(o.dim, sub)

    morphisms: dict[str, PairMorphism] = {}
    for m in ast.morphisms:
        if m.name in morphisms:
            raise ElabError(f"morphism {m.name} declared twice", m.line, m.column, "DuplicateName")
        for end in (m.src, m.dst):
            if end not in objects:
                raise ElabError(f"unknown object {end}", m.line, m.column, "UnknownName")
        src, dst = objects[m.src], objects[m.dst]
        mat = _rows_to_matrix(m.matrix, dst.dim, src.dim, m, f"morphism {m.name}")
        try:
            morphisms[m.name] = PairMorphism(src, dst, mat)
        except SubspaceViolation as exc:
            raise ElabError(f"morphism {m.name}: {exc}", m.line, m.column, "SubspaceViolation") from exc

    checks = [_elaborate_check(c, morphisms) for c in ast.checks]
    return CheckPlan(objects, morphisms, checks)


def _elaborate_check(c: CheckDecl, morphisms: dict[str, PairMorphism]) -> PlannedCheck:
    binds: dict[str, str] = {}
    for key, val in c.bindings:
        if key in binds:
            raise ElabError(f"binding {key} given twice", c.line, c.column, "DuplicateName")
        binds[key] = val
    needed = REQUIRED_BINDINGS[c.kind]
    missing = [k for k in needed if k not in binds]
    if missing:
        raise ElabError(f"check {c.kind} misses bindings {missing}", c.line, c.column, "MissingBinding")
    extra = [k for k in binds if k not in needed]
    if extra:
        raise ElabError(f"check {c.kind} has unknown bindings {extra}", c.line, c.column, "UnknownName")
    for k, v in binds.items():
        if v not in morphisms:
            raise ElabError(f"binding {k} refers to unknown morphism {v}", c.line, c.column, "UnknownName")
    ms = {k: morphisms[v] for k, v in binds.items()}

    if c.kind in ("two_square", "snake"):
        cls = SnakeInput if c.kind == "snake" else TwoSquareInput
        inp = cls(**{k: ms[k] for k in DIAGRAM_BINDINGS})
        _check_diagram_shape(inp, c)
        problems = inp.failed_preconditions()
        for p in problems:
            kind = "NonCommuting" if "commute" in p else ("InexactRow" if "exact" in p else "RowCondition")
            raise ElabError(f"check {c.kind}: {p}", c.line, c.column, kind)
        payload: Any = inp
    elif c.kind == "exact":
        a, b = ms["a"], ms["b"]
        if a.dst != b.src:
            raise ElabError("check exact: a and b are not composable", c.line, c.column, "DimensionMismatch")
        payload = (a, b)
    elif c.kind == "decomp":
        payload = ms["f"]
    else:
        from .vectpair import closed_form_classify

        if not closed_form_classify(ms["k"]).is_kernel:
            raise ElabError("check probe: k is not a kernel", c.line, c.column, "RowCondition")
        payload = ms["k"]
    return PlannedCheck(c.kind, payload, binds, c.line)


def _check_diagram_shape(inp: TwoSquareInput, c: CheckDecl) -> None:
    pairs = [
        ("psi", "phi", inp.psi.dst, inp.phi.src),
        ("psi2", "phi2", inp.psi2.dst, inp.phi2.src),
        ("alpha", "psi", inp.alpha.src, inp.psi.src),
        ("alpha", "psi2", inp.alpha.dst, inp.psi2.src),
        ("beta", "psi", inp.beta.src, inp.psi.dst),
        ("beta", "psi2", inp.beta.dst, inp.psi2.dst),
        ("gamma", "phi", inp.gamma.src, inp.phi.dst),
        ("gamma", "phi2", inp.gamma.dst, inp.phi2.dst),
    ]
    for x, y, o1, o2 in pairs:
        if o1 != o2:
            raise ElabError(f"{x} and {y} do not meet at a common object", c.line, c.column, "DimensionMismatch")


def load(text: str) -> CheckPlan:
    return elaborate(parse(text))


# -- writing diagrams back out ------------------------------------------------------------


def object_rows(obj: PairObject) -> Rows:
    return tuple(tuple(c) for c in obj.sub.basis.columns())


def diagram_ast(objects: dict[str, PairObject], morphisms: dict[str, tuple[str, str, PairMorphism]], checks=()) -> Ast:
    obj_decls = tuple(
        ObjectDecl(n, o.dim, object_rows(o) if o.sub.dim else None) for n, o in objects.items()
    )
    mor_decls = tuple(
        MorphismDecl(n, s, d, m.mat.rows if m.mat.ncols else ()) for n, (s, d, m) in morphisms.items()
    )
    chk = tuple(CheckDecl(kind, tuple(binds)) for kind, binds in checks)
    return Ast(obj_decls, mor_decls, chk)


def two_row_ast(inp: TwoSquareInput, kind: str) -> Ast:
    objects = {
        "A": inp.psi.src, "B": inp.psi.dst, "C": inp.phi.dst,
        "A2": inp.psi2.src, "B2": inp.psi2.dst, "C2": inp.phi2.dst,
    }
    ends = {
        "psi": ("A", "B"), "phi": ("B", "C"), "psi2": ("A2", "B2"), "phi2": ("B2", "C2"),
        "alpha": ("A", "A2"), "beta": ("B", "B2"), "gamma": ("C", "C2"),
    }
    morphisms = {n: (*ends[n], getattr(inp, n)) for n in DIAGRAM_BINDINGS}
    return diagram_ast(objects, morphisms, [(kind, [(n, n) for n in DIAGRAM_BINDINGS])])


def morphism_ast(f: PairMorphism, kind: str = "decomp", name: str = "f") -> Ast:
    key = {"decomp": "f", "probe": "k"}[kind]
    return diagram_ast({"X": f.src, "Y": f.dst}, {name: ("X", "Y", f)}, [(kind, [(key, name)])])


# -- JSON reports ----------------------------------------------------------------------


def to_jsonable(x: Any) -> Any:
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, Matrix):
        return [[str(v) for v in r] for r in x.rows]
    if isinstance(x, PairObject):
        return {"dim": x.dim, "sub": [[str(v) for v in c] for c in x.sub.basis.columns()]}
    if isinstance(x, PairMorphism):
        return {"src": to_jsonable(x.src), "dst": to_jsonable(x.dst), "matrix": to_jsonable(x.mat)}
    if hasattr(x, "as_dict"):
        return to_jsonable(x.as_dict())
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if is_dataclass(x):
        return {k: to_jsonable(getattr(x, k)) for k in x.__dataclass_fields__}
    raise TypeError(f"cannot serialize {type(x).__name__}")


def emit(report: Any) -> str:
    """Canonical JSON: sorted keys, compact separators, rationals as strings."""
    return json.dumps(to_jsonable(report), sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def iter_errors(text: str) -> Iterator[DiagramError]:
    """Errors from parsing and elaborating ``text`` (at most one)."""
    try:
        load(text)
    except DiagramError as exc:
        yield exc
