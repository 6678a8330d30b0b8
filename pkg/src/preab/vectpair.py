"""Vector spaces with a distinguished subspace.

An object is a pair ``(V, W)`` with ``W`` a subspace of ``V = Q^dim``; a
morphism is a linear map sending ``W`` into the target's ``W``.  The category
is preabelian and quasi-abelian but not abelian: ``P(1|0) -> P(1|e1)`` given
by ``[1]`` is monic and epic without being invertible.

Kernels carry ``K ∩ W``; cokernels are realized on the non-pivot coordinates
of the image so that every construction is a concrete matrix.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from . import ratmat
from .catcore import Biproduct, MorphismClass, PreabelianCategory
from .errors import (
    DimensionMismatch,
    NoFactorization,
    NoSolution,
    NotInvertible,
    ShapeMismatch,
    SubspaceViolation,
)
from .ratmat import Matrix, Subspace


@dataclass(frozen=True)
class PairObject:
    dim: int
    sub: Subspace

    def __post_init__(self):
        if self.sub.ambient_dim != self.dim:
            raise DimensionMismatch("subspace ambient dimension differs from object dimension")

    def __repr__(self) -> str:
        if self.sub.dim == 0:
            w = "0"
        elif self.sub.dim == self.dim:
            w = "full"
        else:
            w = ", ".join(
                "(" + ",".join(str(x) for x in c) + ")" for c in self.sub.basis.columns()
            )
        return f"P({self.dim}|{w})"


@dataclass(frozen=True)
class PairMorphism:
    src: PairObject
    dst: PairObject
    mat: Matrix

    def __post_init__(self):
        if self.mat.shape != (self.dst.dim, self.src.dim):
            raise DimensionMismatch(
                f"matrix shape {self.mat.shape} does not fit {self.src} -> {self.dst}"
            )
        if not ratmat.subspace_contains(self.dst.sub, self.src.sub.image(self.mat)):
            raise SubspaceViolation("matrix does not map the source subspace into the target subspace")

    def __repr__(self) -> str:
        return f"PairMorphism({self.src} -> {self.dst}, {self.mat!r})"


def make_object(dim: int, sub_columns: Matrix | Sequence[Sequence] | None = None) -> PairObject:
    """Object ``(Q^dim, span(sub_columns))``.

    ``sub_columns`` is either a Matrix whose columns span W or a list of
    spanning vectors.
    """
    if sub_columns is None:
        return PairObject(dim, Subspace.zero(dim))
    if not isinstance(sub_columns, Matrix):
        vecs = [list(v) for v in sub_columns]
        for v in vecs:
            if len(v) != dim:
                raise DimensionMismatch(f"spanning vector of length {len(v)} in dimension {dim}")
        sub_columns = Matrix.from_columns(vecs, dim)
    if sub_columns.nrows != dim:
        raise DimensionMismatch(f"spanning vectors of length {sub_columns.nrows} in dimension {dim}")
    return PairObject(dim, Subspace.span(dim, sub_columns))


def full_object(dim: int) -> PairObject:
    return PairObject(dim, Subspace.full(dim))


def make_morphism(src: PairObject, dst: PairObject, mat) -> PairMorphism:
    if not isinstance(mat, Matrix):
        try:
            mat = Matrix(mat, ncols=src.dim)
        except ShapeMismatch as exc:
            raise DimensionMismatch(str(exc)) from exc
    return PairMorphism(src, dst, mat)


class VectPair(PreabelianCategory):
    quasi_abelian = True
    p_semi_abelian = True

    def compose(self, g: PairMorphism, f: PairMorphism) -> PairMorphism:
        if f.dst != g.src:
            raise ShapeMismatch(f"cannot compose {g} after {f}")
        return PairMorphism(f.src, g.dst, g.mat @ f.mat)

    def add(self, f, g):
        if f.src != g.src or f.dst != g.dst:
            raise ShapeMismatch("sum of morphisms between different objects")
        return PairMorphism(f.src, f.dst, f.mat + g.mat)

    def negate(self, f):
        return PairMorphism(f.src, f.dst, -f.mat)

    def identity(self, obj):
        return PairMorphism(obj, obj, Matrix.identity(obj.dim))

    def zero_object(self):
        return PairObject(0, Subspace.zero(0))

    def is_zero_object(self, obj) -> bool:
        return obj.dim == 0

    def zero_morphism(self, src, dst):
        return PairMorphism(src, dst, Matrix.zeros(dst.dim, src.dim))

    def biproduct(self, a, b) -> Biproduct:
        n = a.dim + b.dim
        obj = PairObject(n, Subspace.span(n, ratmat.block_diag(a.sub.basis, b.sub.basis)))
        ident = Matrix.identity(n)
        p1 = ident.select_rows(range(a.dim))
        p2 = ident.select_rows(range(a.dim, n))
        return Biproduct(
            obj,
            PairMorphism(a, obj, p1.T),
            PairMorphism(b, obj, p2.T),
            PairMorphism(obj, a, p1),
            PairMorphism(obj, b, p2),
        )

    def kernel(self, f):
        k = ratmat.kernel_basis(f.mat)
        meet = ratmat.subspace_meet(Subspace(f.src.dim, k), f.src.sub)
        coords = ratmat.solve_matrix(k, meet.basis) if k.ncols else Matrix.zeros(0, 0)
        obj = PairObject(k.ncols, Subspace.span(k.ncols, coords))
        return obj, PairMorphism(obj, f.src, k)

    def cokernel(self, f):
        img = Subspace(f.dst.dim, ratmat.image_basis(f.mat))
        proj, _ = ratmat.quotient_projection(img)
        q = proj.nrows
        obj = PairObject(q, Subspace.span(q, proj @ f.dst.sub.basis))
        return obj, PairMorphism(f.dst, obj, proj)

    def invert(self, f):
        n = f.mat.nrows
        if f.mat.ncols != n or ratmat.rank(f.mat) != n:
            raise NotInvertible("rank")
        if f.src.sub.image(f.mat) != f.dst.sub:
            raise NotInvertible("subspace")
        inv = ratmat.solve_matrix(f.mat, Matrix.identity(n))
        return PairMorphism(f.dst, f.src, inv)

    def lift(self, m, g):
        if m.dst != g.dst:
            raise ShapeMismatch("lift needs a common codomain")
        try:
            u = ratmat.solve_matrix(m.mat, g.mat)
        except NoSolution as exc:
            raise NoFactorization(str(exc)) from exc
        return self._as_morphism(g.src, m.src, u)

    def colift(self, e, g):
        if e.src != g.src:
            raise ShapeMismatch("colift needs a common domain")
        try:
            u = ratmat.solve_left(e.mat, g.mat)
        except NoSolution as exc:
            raise NoFactorization(str(exc)) from exc
        return self._as_morphism(e.dst, g.dst, u)

    @staticmethod
    def _as_morphism(src, dst, mat):
        try:
            return PairMorphism(src, dst, mat)
        except SubspaceViolation as exc:
            raise NoFactorization("solution is linear but not a morphism of pairs") from exc

    def random_morphism(self, rng: random.Random, src=None, dst=None, max_dim: int = 4):
        if src is None:
            src = random_object(rng, max_dim)
        if dst is None:
            dst = random_object(rng, max_dim)
        return random_morphism_between(rng, src, dst)

    # independent oracle: no kernel/cokernel constructions used here

    def closed_form_classify(self, f) -> MorphismClass:
        return closed_form_classify(f)


VECTPAIR = VectPair()


def closed_form_classify(f: PairMorphism) -> MorphismClass:
    r = ratmat.rank(f.mat)
    monic = r == f.src.dim
    epic = r == f.dst.dim
    img_w = f.src.sub.image(f.mat)
    img_v = Subspace(f.dst.dim, ratmat.image_basis(f.mat))
    strict = img_w == ratmat.subspace_meet(img_v, f.dst.sub)
    return MorphismClass(
        monic=monic,
        epic=epic,
        bimorphism=monic and epic,
        strict=strict,
        is_kernel=monic and strict,
        is_cokernel=epic and img_w == f.dst.sub,
        is_iso=monic and epic and strict,
    )


# -- random values ----------------------------------------------------------


def random_matrix(rng: random.Random, nrows: int, ncols: int, lo: int = -3, hi: int = 3) -> Matrix:
    """Entries in [lo, hi]; about a third of draws are low rank."""
    if nrows and ncols and rng.random() < 0.35:
        inner = rng.randint(0, min(nrows, ncols, 3))
        span = max(1, min(hi, -lo) // max(inner, 1))
        a = [[rng.randint(-span, span) for _ in range(inner)] for _ in range(nrows)]
        b = [[rng.randint(-1, 1) for _ in range(ncols)] for _ in range(inner)]
        return Matrix(a, inner) @ Matrix(b, ncols) if inner else Matrix.zeros(nrows, ncols)
    return Matrix([[rng.randint(lo, hi) for _ in range(ncols)] for _ in range(nrows)], ncols)


def random_subspace(rng: random.Random, dim: int) -> Subspace:
    roll = rng.random()
    if dim == 0 or roll < 0.15:
        return Subspace.zero(dim)
    if roll < 0.3:
        return Subspace.full(dim)
    k = rng.randint(1, dim)
    return Subspace.span(dim, random_matrix(rng, dim, k))


def random_object(rng: random.Random, max_dim: int, min_dim: int = 0) -> PairObject:
    d = rng.randint(min_dim, max_dim)
    return PairObject(d, random_subspace(rng, d))


def random_morphism_between(rng: random.Random, src: PairObject, dst: PairObject) -> PairMorphism:
    """Random morphism ``src -> dst`` (W is sent into W' by construction)."""
    w = src.sub.basis
    comp = [i for i in range(src.dim) if i not in _pivots(w)]
    # images of W's basis land in W'; complement coordinates go anywhere
    if dst.sub.dim:
        w_img = dst.sub.basis @ random_matrix(rng, dst.sub.dim, w.ncols)
    else:
        w_img = Matrix.zeros(dst.dim, w.ncols)
    c_img = random_matrix(rng, dst.dim, len(comp))
    basis = ratmat.hstack(w, Matrix.identity(src.dim).select_columns(comp))
    images = ratmat.hstack(w_img, c_img)
    mat = ratmat.solve_left(basis, images) if src.dim else Matrix.zeros(dst.dim, 0)
    return PairMorphism(src, dst, mat)


def random_pair_morphism(rng: random.Random, max_dim: int = 6) -> PairMorphism:
    """Corpus morphism: integer matrix in [-3, 3], target subspace a random enlargement of M(W)."""
    src = random_object(rng, max_dim)
    d = rng.randint(0, max_dim)
    m = random_matrix(rng, d, src.dim)
    img_w = src.sub.image(m)
    roll = rng.random()
    if roll < 0.4:
        sub = img_w
    elif roll < 0.55:
        sub = Subspace.full(d)
    else:
        extra = random_matrix(rng, d, rng.randint(0, max(d, 0)))
        sub = ratmat.subspace_join(img_w, Subspace.span(d, extra))
    return PairMorphism(src, PairObject(d, sub), m)


def _pivots(basis: Matrix) -> list[int]:
    out = []
    for c in basis.columns():
        out.append(next(i for i, x in enumerate(c) if x))
    return out
