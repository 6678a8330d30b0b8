"""Seeded generators of vector-pair diagrams.

Every generator is a pure function of ``(seed, max_dim, ...)``.  Vertical
maps of two-row diagrams are drawn from the solution space of the linear
constraints they must satisfy (commuting squares and subspace compatibility)
instead of rejection sampling whole diagrams.
"""

from __future__ import annotations

import random
from fractions import Fraction
from functools import reduce
from math import gcd, lcm

from . import ratmat
from .catcore import SquareData
from .errors import NotInvertible
from .ratmat import Matrix, Subspace
from .snake import SnakeInput
from .twosquare import LadderData, TwoSquareInput, ladder_hypotheses
from .vectpair import (
    VECTPAIR,
    PairMorphism,
    PairObject,
    random_matrix,
    random_morphism_between,
    random_object,
    random_pair_morphism,
    random_subspace,
)

V = VECTPAIR


def _rng(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def random_morphism(seed, max_dim: int = 6) -> PairMorphism:
    return random_pair_morphism(_rng(seed), max_dim)


def random_exact_row(seed, max_dim: int = 5):
    """(psi, phi) with phi the chosen cokernel of psi."""
    rng = _rng(seed)
    a = random_object(rng, max_dim)
    b = random_object(rng, max_dim, min_dim=1)
    psi = random_morphism_between(rng, a, b)
    _, phi = V.cokernel(psi)
    return psi, phi


def random_kernel(seed, max_dim: int = 5) -> PairMorphism:
    rng = _rng(seed)
    h = random_pair_morphism(rng, max_dim)
    return V.kernel(h)[1]


# -- non-kernel / non-cokernel rows -----------------------------------------------


def _random_monic_out_of(rng: random.Random, c: PairObject, max_dim: int) -> PairMorphism:
    """A monic ``c -> C`` that is not an isomorphism."""
    if c.sub.dim < c.dim and (c.dim == max_dim or rng.random() < 0.5):
        # same space, strictly larger distinguished subspace
        extra = random_matrix(rng, c.dim, rng.randint(1, c.dim))
        sub = ratmat.subspace_join(c.sub, Subspace.span(c.dim, extra))
        if sub == c.sub:
            sub = Subspace.full(c.dim)
        return PairMorphism(c, PairObject(c.dim, sub), Matrix.identity(c.dim))
    n = c.dim + rng.randint(1, 2)
    incl = Matrix.identity(n).select_columns(range(c.dim))
    sub = ratmat.subspace_join(c.sub.image(incl), random_subspace(rng, n))
    return PairMorphism(c, PairObject(n, sub), incl)


def _random_epic_onto(rng: random.Random, a: PairObject, max_dim: int) -> PairMorphism:
    """An epic ``A' -> a`` that is not an isomorphism."""
    if a.sub.dim > 0 and (a.dim == max_dim or rng.random() < 0.5):
        keep = rng.randint(0, a.sub.dim - 1)
        vecs = a.sub.basis @ random_matrix(rng, a.sub.dim, keep)
        sub = Subspace.span(a.dim, vecs)
        return PairMorphism(PairObject(a.dim, sub), a, Matrix.identity(a.dim))
    n = a.dim + rng.randint(1, 2)
    proj = Matrix.identity(n).select_rows(range(a.dim))
    lifted = ratmat.vstack(a.sub.basis, Matrix.zeros(n - a.dim, a.sub.dim))
    kernel_part = Matrix.identity(n).select_columns(range(a.dim, n))
    if rng.random() < 0.5:
        lifted = ratmat.hstack(lifted, kernel_part)
    return PairMorphism(PairObject(n, Subspace.span(n, lifted)), a, proj)


# -- verticals -----------------------------------------------------------------------


def _compat_block(dst: PairObject, src: PairObject) -> Matrix:
    """Rows expressing ``X (src.W) ⊆ dst.W`` on vec_rowmajor(X)."""
    proj, _ = ratmat.quotient_projection(dst.sub)
    return ratmat.kron(proj, src.sub.basis.T)


def solve_verticals(rng: random.Random, psi, phi, psi2, phi2, attempts: int = 4):
    """Random (alpha, beta, gamma) making both squares commute.

    The admissible triples form a linear space; a random integer combination
    of its basis is returned (scaled to integer entries).
    """
    A, B, C = psi.src, psi.dst, phi.dst
    A2, B2, C2 = psi2.src, psi2.dst, phi2.dst
    na, nb, nc = A2.dim * A.dim, B2.dim * B.dim, C2.dim * C.dim
    total = na + nb + nc

    def row_block(parts):
        nrows = next(m.nrows for m in parts if m is not None)
        return ratmat.hstack(
            *[m if m is not None else Matrix.zeros(nrows, w) for w, m in zip((na, nb, nc), parts)]
        )

    kron, eye = ratmat.kron, Matrix.identity
    # vec(L X R) = kron(L, R^T) vec(X) with row-major vec
    left_square = [kron(psi2.mat, eye(A.dim)), -kron(eye(B2.dim), psi.mat.T), None]
    right_square = [None, kron(phi2.mat, eye(B.dim)), -kron(eye(C2.dim), phi.mat.T)]
    blocks = [
        row_block(left_square),
        row_block(right_square),
        row_block([_compat_block(A2, A), None, None]),
        row_block([None, _compat_block(B2, B), None]),
        row_block([None, None, _compat_block(C2, C)]),
    ]
    blocks = [b for b in blocks if b.nrows]
    if total == 0:
        vec = []
    else:
        system = ratmat.vstack(*blocks) if blocks else Matrix.zeros(0, total)
        basis = ratmat.kernel_basis(system)
        vec = [Fraction(0)] * total
        for _ in range(attempts):
            if not basis.ncols:
                break
            # sparse combinations give lower-rank verticals (nonzero Ker/Coker)
            density = rng.choice((0.25, 0.5, 1.0))
            coeffs = [rng.randint(-2, 2) if rng.random() < density else 0 for _ in range(basis.ncols)]
            vec = [sum(basis[i, k] * coeffs[k] for k in range(basis.ncols)) for i in range(total)]
            if any(vec[na : na + nb]) or rng.random() < 0.1:
                break
        den = reduce(lcm, (x.denominator for x in vec), 1)
        num = reduce(gcd, (int(x * den) for x in vec), 0) or 1
        vec = [x * den / num for x in vec]
    alpha = PairMorphism(A, A2, ratmat.unvec(vec[:na], (A2.dim, A.dim)))
    beta = PairMorphism(B, B2, ratmat.unvec(vec[na : na + nb], (B2.dim, B.dim)))
    gamma = PairMorphism(C, C2, ratmat.unvec(vec[na + nb :], (C2.dim, C.dim)))
    return alpha, beta, gamma


# -- two-row diagrams ------------------------------------------------------------------


def _top_row(rng: random.Random, max_dim: int):
    # mostly dim A < dim B so that C = Coker psi is nonzero
    b = random_object(rng, max_dim, min_dim=1)
    a = random_object(rng, b.dim - 1 if rng.random() < 0.8 else max_dim)
    psi = random_morphism_between(rng, a, b)
    return psi, V.cokernel(psi)[1]


def _bottom_row(rng: random.Random, max_dim: int):
    b2 = random_object(rng, max_dim, min_dim=1)
    c2 = random_object(rng, b2.dim - 1 if rng.random() < 0.8 else max_dim)
    phi2 = random_morphism_between(rng, b2, c2)
    return V.kernel(phi2)[1], phi2


def random_two_square_input(
    seed, max_dim: int = 5, kernel_row: bool | None = None, cokernel_row: bool | None = None
) -> TwoSquareInput:
    """Exact-row diagram; ``psi2`` a kernel / ``phi`` a cokernel when asked.

    ``None`` picks at random (kernel and cokernel each with probability 3/4).
    Breaking rows are ``ker phi2 . e`` with ``e`` epic non-iso and
    ``m . coker psi`` with ``m`` monic non-iso, so both rows stay exact.
    """
    rng = _rng(seed)
    if kernel_row is None:
        kernel_row = rng.random() < 0.75
    if cokernel_row is None:
        cokernel_row = rng.random() < 0.75
    psi, phi = _top_row(rng, max_dim)
    if not cokernel_row:
        phi = V.compose(_random_monic_out_of(rng, phi.dst, max_dim), phi)
    psi2, phi2 = _bottom_row(rng, max_dim)
    if not kernel_row:
        psi2 = V.compose(psi2, _random_epic_onto(rng, psi2.src, max_dim))
    alpha, beta, gamma = solve_verticals(rng, psi, phi, psi2, phi2)
    return TwoSquareInput(psi, phi, psi2, phi2, alpha, beta, gamma)


def random_snake_input(seed, max_dim: int = 5) -> SnakeInput:
    """psi2 = ker phi2 and phi = coker psi, verticals solved from the constraints."""
    rng = _rng(seed)
    psi, phi = _top_row(rng, max_dim)
    psi2, phi2 = _bottom_row(rng, max_dim)
    alpha, beta, gamma = solve_verticals(rng, psi, phi, psi2, phi2)
    return SnakeInput(psi, phi, psi2, phi2, alpha, beta, gamma)


def random_pullback_row(seed, max_dim: int = 4):
    """(beta, gamma, psi2, phi2, phi) with ``phi2 beta = gamma phi`` a pullback and exact bottom row."""
    rng = _rng(seed)
    psi2, phi2 = _bottom_row(rng, max_dim)
    if rng.random() < 0.3:
        psi2 = V.compose(psi2, _random_epic_onto(rng, psi2.src, max_dim))
    gamma = random_morphism_between(rng, random_object(rng, max_dim), phi2.dst)
    pb = V.pullback(gamma, phi2)
    return pb.pb, gamma, psi2, phi2, pb.pa


# -- squares -----------------------------------------------------------------------------


def _random_automorphism(rng: random.Random, obj: PairObject, tries: int = 4) -> PairMorphism:
    for _ in range(tries):
        f = random_morphism_between(rng, obj, obj)
        try:
            V.invert(f)
        except NotInvertible:
            continue
        return f
    return V.identity(obj)


def random_pullback_square(seed, max_dim: int = 4) -> SquareData:
    rng = _rng(seed)
    if rng.random() < 0.5:
        f = random_kernel(rng, max_dim)
    else:
        f = random_pair_morphism(rng, max_dim)
    beta = random_morphism_between(rng, random_object(rng, max_dim), f.dst)
    pb = V.pullback(f, beta)
    iso = _random_automorphism(rng, pb.obj)
    return SquareData(V.compose(pb.pa, iso), V.compose(pb.pb, iso), f, beta, "pullback")


def random_pushout_square(seed, max_dim: int = 4) -> SquareData:
    rng = _rng(seed)
    if rng.random() < 0.5:
        h = random_pair_morphism(rng, max_dim)
        g = V.cokernel(h)[1]
    else:
        g = random_pair_morphism(rng, max_dim)
    alpha = random_morphism_between(rng, g.src, random_object(rng, max_dim))
    po = V.pushout(alpha, g)
    iso = _random_automorphism(rng, po.obj)
    return SquareData(alpha, g, V.compose(iso, po.ib), V.compose(iso, po.ic), "pushout")


def inflate_square(sq: SquareData, extra: int = 1) -> SquareData:
    """Commuting but non-universal square obtained by enlarging the corner."""
    e = PairObject(extra, Subspace.zero(extra))
    if sq.kind == "pullback":
        bp = V.biproduct(sq.top.src, e)
        return SquareData(V.compose(sq.top, bp.p1), V.compose(sq.left, bp.p1), sq.right, sq.bottom, "pullback")
    bp = V.biproduct(sq.right.dst, e)
    return SquareData(sq.top, sq.left, V.compose(bp.i1, sq.right), V.compose(bp.i1, sq.bottom), "pushout")


# -- ladders ---------------------------------------------------------------------------


def random_ladder(seed, max_dim: int = 4, mode: str = "semistable", attempts: int = 60) -> LadderData:
    """Ladder satisfying the hypotheses of ``mode``; retries until they hold.

    ``r`` is an inclusion of a subspace U ⊇ im p2 with a distinguished subspace
    between ``ker q2 ∩ W`` and ``U ∩ W``.  Falls back to the identity ladder.
    """
    rng = _rng(seed)
    for _ in range(attempts):
        b2 = random_object(rng, max_dim, min_dim=1)
        c = random_object(rng, max_dim)
        q2 = random_morphism_between(rng, b2, c)
        a, p2 = V.kernel(q2)
        k = Subspace(b2.dim, p2.mat)
        room = b2.dim - k.dim
        if room == 0 and rng.random() < 0.9:
            continue
        # mostly a proper U, so that r is not invertible
        n_extra = rng.randint(0, room - 1) if room > 0 and rng.random() < 0.75 else rng.randint(0, b2.dim)
        extra = random_matrix(rng, b2.dim, n_extra)
        u = ratmat.subspace_join(k, Subspace.span(b2.dim, extra))
        if u.dim == 0:
            continue
        lo = ratmat.subspace_meet(k, b2.sub)
        hi = ratmat.subspace_meet(u, b2.sub)
        if hi.dim:
            pick = hi.basis @ random_matrix(rng, hi.dim, rng.randint(0, hi.dim))
        else:
            pick = Matrix.zeros(b2.dim, 0)
        w1 = ratmat.subspace_join(lo, Subspace.span(b2.dim, pick))
        coords = ratmat.solve_matrix(u.basis, w1.basis)
        b1 = PairObject(u.dim, Subspace.span(u.dim, coords))
        r = PairMorphism(b1, b2, u.basis)
        d = LadderData(V.lift(r, p2), V.compose(q2, r), p2, q2, r)
        if not ladder_hypotheses(d, mode):
            return d
    b = random_object(rng, max_dim, min_dim=1)
    q = V.cokernel(V.kernel(random_morphism_between(rng, b, b))[1])[1]
    _, p = V.kernel(q)
    return LadderData(p, q, p, q, V.identity(b))
