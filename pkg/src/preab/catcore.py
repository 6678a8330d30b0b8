"""Generic preabelian-category operations.

A backend subclasses :class:`PreabelianCategory` and supplies the primitive
operations (composition, additive structure, biproducts, kernels, cokernels,
inversion and the two linear solvers ``lift``/``colift``).  Everything else
here is derived from those primitives: images, canonical decompositions,
chosen pullbacks and pushouts with their mediators, subobject comparison,
exactness and the per-instance audits of the classical lemmas.

Morphisms are opaque to this module apart from the ``src``/``dst``
attributes.
"""

from __future__ import annotations

import abc
import random
from dataclasses import dataclass, field
from typing import Any

from .errors import (
    NoFactorization,
    NotAKernel,
    NotAnnihilated,
    NotCommuting,
    NotInvertible,
    NotUniversal,
    ShapeMismatch,
)


@dataclass(frozen=True)
class CanonicalDecomposition:
    """f = im . mid . coim"""

    morphism: Any
    coim: Any
    mid: Any
    im: Any
    strict: bool


@dataclass(frozen=True)
class MorphismClass:
    monic: bool
    epic: bool
    bimorphism: bool
    strict: bool
    is_kernel: bool
    is_cokernel: bool
    is_iso: bool

    def as_dict(self) -> dict[str, bool]:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


@dataclass(frozen=True)
class Biproduct:
    obj: Any
    i1: Any
    i2: Any
    p1: Any
    p2: Any


@dataclass(frozen=True)
class Pullback:
    """Chosen pullback of ``f: A -> C`` and ``g: B -> C``.

    ``obj`` is the kernel of ``[f, -g]: A (+) B -> C`` and ``incl`` its
    inclusion into the biproduct.
    """

    obj: Any
    pa: Any
    pb: Any
    f: Any
    g: Any
    incl: Any
    diff: Any
    biproduct: Biproduct


@dataclass(frozen=True)
class Pushout:
    """Chosen pushout of ``f: A -> B`` and ``g: A -> C`` (cokernel of ``(f; -g)``)."""

    obj: Any
    ib: Any
    ic: Any
    f: Any
    g: Any
    proj: Any
    diff: Any
    biproduct: Biproduct


@dataclass(frozen=True)
class SquareData:
    """Commutative square ``right . top == bottom . left``.

    Corner layout::

        C --top--> D
        |          |
       left      right
        v          v
        A -bottom-> B
    """

    top: Any
    left: Any
    right: Any
    bottom: Any
    kind: str  # "pullback" | "pushout"


@dataclass
class CheckReport:
    """Named pass/fail clauses with free-form details."""

    name: str
    clauses: dict[str, bool] = field(default_factory=dict)
    details: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.clauses.values())

    def as_dict(self) -> dict[str, Any]:
        return {"name": self.name, "pass": self.passed, "clauses": dict(self.clauses), **self.details}


class PreabelianCategory(abc.ABC):
    """Backend contract plus the constructions derived from it."""

    # whether every kernel/cokernel is semi-stable (decided by backend theory)
    quasi_abelian = False
    # pushouts of kernels monic, pullbacks of cokernels epic
    p_semi_abelian = False

    # -- primitives ------------------------------------------------------

    @abc.abstractmethod
    def compose(self, g, f):
        """g . f"""

    @abc.abstractmethod
    def add(self, f, g): ...

    @abc.abstractmethod
    def negate(self, f): ...

    @abc.abstractmethod
    def identity(self, obj): ...

    @abc.abstractmethod
    def zero_object(self): ...

    @abc.abstractmethod
    def is_zero_object(self, obj) -> bool: ...

    @abc.abstractmethod
    def zero_morphism(self, src, dst): ...

    @abc.abstractmethod
    def biproduct(self, a, b) -> Biproduct: ...

    @abc.abstractmethod
    def kernel(self, f):
        """(Ker f, ker f)"""

    @abc.abstractmethod
    def cokernel(self, f):
        """(Coker f, coker f)"""

    @abc.abstractmethod
    def invert(self, f):
        """Inverse morphism or NotInvertible."""

    @abc.abstractmethod
    def lift(self, m, g):
        """Some u with ``m . u == g``, or NoFactorization."""

    @abc.abstractmethod
    def colift(self, e, g):
        """Some u with ``u . e == g``, or NoFactorization."""

    @abc.abstractmethod
    def random_morphism(self, rng: random.Random, src=None, dst=None, max_dim: int = 4):
        """A random morphism ``src -> dst``; a missing end is a random object."""

    def is_semistable_kernel(self, f) -> bool | None:
        """Backend-theoretic verdict; None when the backend cannot decide."""
        if self.quasi_abelian:
            return self.classify_morphism(f).is_kernel
        return None

    def is_semistable_cokernel(self, f) -> bool | None:
        if self.quasi_abelian:
            return self.classify_morphism(f).is_cokernel
        return None

    # -- small helpers -----------------------------------------------------

    def comp(self, *ms):
        """Compose right to left: comp(h, g, f) == h . g . f."""
        out = ms[-1]
        for m in reversed(ms[:-1]):
            out = self.compose(m, out)
        return out

    def sub(self, f, g):
        return self.add(f, self.negate(g))

    def is_zero(self, f) -> bool:
        return f == self.zero_morphism(f.src, f.dst)

    def is_invertible(self, f) -> bool:
        try:
            self.invert(f)
        except NotInvertible:
            return False
        return True

    def is_monic(self, f) -> bool:
        return self.is_zero_object(self.kernel(f)[0])

    def is_epic(self, f) -> bool:
        return self.is_zero_object(self.cokernel(f)[0])

    # -- kernels, cokernels, images -------------------------------------

    def factor_through_kernel(self, k, f, g):
        """Unique u with ``k . u == g`` where ``k`` is a kernel of ``f``."""
        if not self.is_zero(self.compose(f, g)):
            raise NotAnnihilated("f . g is not zero")
        return self.lift(k, g)

    def factor_through_cokernel(self, c, f, g):
        """Unique u with ``u . c == g`` where ``c`` is a cokernel of ``f``."""
        if not self.is_zero(self.compose(g, f)):
            raise NotAnnihilated("g . f is not zero")
        return self.colift(c, g)

    def image(self, f):
        """im f = ker coker f"""
        _, c = self.cokernel(f)
        return self.kernel(c)

    def coimage(self, f):
        """coim f = coker ker f"""
        _, k = self.kernel(f)
        return self.cokernel(k)

    def canonical_decomposition(self, f) -> CanonicalDecomposition:
        _, k = self.kernel(f)
        _, coim = self.cokernel(k)
        _, c = self.cokernel(f)
        _, im = self.kernel(c)
        upper = self.factor_through_kernel(im, c, f)
        mid = self.factor_through_cokernel(coim, k, upper)
        return CanonicalDecomposition(f, coim, mid, im, self.is_invertible(mid))

    def classify_morphism(self, f) -> MorphismClass:
        _, k = self.kernel(f)
        _, coim = self.cokernel(k)
        _, c = self.cokernel(f)
        _, im = self.kernel(c)
        monic = self.is_zero_object(k.src)
        epic = self.is_zero_object(c.dst)
        to_image = self.factor_through_kernel(im, c, f)
        from_coimage = self.factor_through_cokernel(coim, k, f)
        mid = self.factor_through_cokernel(coim, k, to_image)
        is_kernel = self.is_invertible(to_image)
        is_cokernel = self.is_invertible(from_coimage)
        return MorphismClass(
            monic=monic,
            epic=epic,
            bimorphism=monic and epic,
            strict=self.is_invertible(mid),
            is_kernel=is_kernel,
            is_cokernel=is_cokernel,
            is_iso=self.is_invertible(f),
        )

    # -- subobjects and quotients ---------------------------------------

    def same_subobject(self, m1, m2) -> bool:
        """Mutual factorization of two monos into the same object."""
        if m1.dst != m2.dst:
            return False
        try:
            a = self.lift(m2, m1)
            b = self.lift(m1, m2)
        except NoFactorization:
            return False
        return (
            self.compose(b, a) == self.identity(m1.src)
            and self.compose(a, b) == self.identity(m2.src)
        )

    def same_quotient(self, e1, e2) -> bool:
        if e1.src != e2.src:
            return False
        try:
            a = self.colift(e1, e2)  # a . e1 == e2
            b = self.colift(e2, e1)
        except NoFactorization:
            return False
        return (
            self.compose(b, a) == self.identity(e1.dst)
            and self.compose(a, b) == self.identity(e2.dst)
        )

    def is_exact_at(self, a, b) -> bool:
        """im a == ker b as subobjects of the middle object."""
        if a.dst != b.src:
            raise ShapeMismatch("a and b are not composable")
        _, im = self.image(a)
        _, k = self.kernel(b)
        return self.same_subobject(im, k)

    # -- pullbacks and pushouts -----------------------------------------

    def pullback(self, f, g) -> Pullback:
        if f.dst != g.dst:
            raise ShapeMismatch("pullback legs need a common codomain")
        bp = self.biproduct(f.src, g.src)
        diff = self.sub(self.compose(f, bp.p1), self.compose(g, bp.p2))
        obj, incl = self.kernel(diff)
        return Pullback(obj, self.compose(bp.p1, incl), self.compose(bp.p2, incl), f, g, incl, diff, bp)

    def pushout(self, f, g) -> Pushout:
        if f.src != g.src:
            raise ShapeMismatch("pushout legs need a common domain")
        bp = self.biproduct(f.dst, g.dst)
        diff = self.sub(self.compose(bp.i1, f), self.compose(bp.i2, g))
        obj, proj = self.cokernel(diff)
        return Pushout(obj, self.compose(proj, bp.i1), self.compose(proj, bp.i2), f, g, proj, diff, bp)

    def mediate_pullback(self, pb: Pullback, x, y):
        """Unique u with ``pa . u == x`` and ``pb . u == y``."""
        if self.compose(pb.f, x) != self.compose(pb.g, y):
            raise NotCommuting("f . x != g . y")
        pair = self.add(self.compose(pb.biproduct.i1, x), self.compose(pb.biproduct.i2, y))
        return self.factor_through_kernel(pb.incl, pb.diff, pair)

    def mediate_pushout(self, po: Pushout, x, y):
        """Unique u with ``u . ib == x`` and ``u . ic == y``."""
        if self.compose(x, po.f) != self.compose(y, po.g):
            raise NotCommuting("x . f != y . g")
        copair = self.add(self.compose(x, po.biproduct.p1), self.compose(y, po.biproduct.p2))
        return self.factor_through_cokernel(po.proj, po.diff, copair)

    def square_comparison(self, sq: SquareData):
        """Canonical comparison between ``sq`` and the chosen (co)limit.

        For a pullback square returns the mediator ``corner -> P``; for a
        pushout ``Q -> corner``.  The square is universal iff it is invertible.
        """
        if self.compose(sq.right, sq.top) != self.compose(sq.bottom, sq.left):
            raise NotCommuting("square does not commute")
        if sq.kind == "pullback":
            pb = self.pullback(sq.right, sq.bottom)
            return pb, self.mediate_pullback(pb, sq.top, sq.left)
        if sq.kind == "pushout":
            po = self.pushout(sq.top, sq.left)
            return po, self.mediate_pushout(po, sq.right, sq.bottom)
        raise ValueError(f"unknown square kind {sq.kind!r}")

    def is_universal(self, sq: SquareData) -> bool:
        return self.is_invertible(self.square_comparison(sq)[1])

    def square_transfer_check(self, sq: SquareData) -> CheckReport:
        """Kernel/cokernel transfer along a pullback or pushout square."""
        _, u = self.square_comparison(sq)
        if not self.is_invertible(u):
            raise NotUniversal(f"square is not a {sq.kind}")
        alpha, g, f, beta = sq.top, sq.left, sq.right, sq.bottom
        rep = CheckReport(f"transfer_{sq.kind}")
        if sq.kind == "pullback":
            _, kf = self.kernel(f)
            _, kg = self.kernel(g)
            rep.clauses["ker_f_eq_alpha_ker_g"] = self.same_subobject(kf, self.compose(alpha, kg))
            # f = ker h with h = coker f whenever f is a kernel
            cls_f = self.classify_morphism(f)
            cls_g = self.classify_morphism(g)
            if cls_f.is_kernel:
                _, h = self.cokernel(f)
                _, kh = self.kernel(self.compose(h, beta))
                rep.clauses["g_eq_ker_h_beta"] = self.same_subobject(g, kh)
                rep.clauses["kernel_pulls_back"] = cls_g.is_kernel
            if cls_f.monic:
                rep.clauses["monic_pulls_back"] = cls_g.monic
        else:
            _, cf = self.cokernel(f)
            _, cg = self.cokernel(g)
            rep.clauses["coker_g_eq_coker_f_beta"] = self.same_quotient(cg, self.compose(cf, beta))
            cls_f = self.classify_morphism(f)
            cls_g = self.classify_morphism(g)
            if cls_g.is_cokernel:
                _, e = self.kernel(g)
                _, ce = self.cokernel(self.compose(alpha, e))
                rep.clauses["f_eq_coker_alpha_e"] = self.same_quotient(f, ce)
                rep.clauses["cokernel_pushes_out"] = cls_f.is_cokernel
            if cls_g.epic:
                rep.clauses["epic_pushes_out"] = cls_f.epic
        return rep

    # -- audits ------------------------------------------------------------

    def semistable_kernel_probe(self, k, trials: int, seed: int, max_dim: int = 4) -> CheckReport:
        """Push ``k`` out along random morphisms and check each opposite leg is a kernel."""
        if not self.classify_morphism(k).is_kernel:
            raise NotAKernel("probe needs a kernel")
        rep = CheckReport("semistable_kernel_probe")
        violations = []
        for t in range(trials):
            rng = random.Random(derive_seed(seed, t))
            g = self.random_morphism(rng, src=k.src, max_dim=max_dim)
            po = self.pushout(k, g)
            if not self.classify_morphism(po.ic).is_kernel:
                violations.append({"trial": t, "g": g})
        rep.clauses["no_violations"] = not violations
        rep.details["trials"] = trials
        rep.details["violations"] = violations
        return rep

    def semistable_cokernel_probe(self, c, trials: int, seed: int, max_dim: int = 4) -> CheckReport:
        """Pull ``c`` back along random morphisms and check each opposite leg is a cokernel."""
        if not self.classify_morphism(c).is_cokernel:
            raise NotAKernel("probe needs a cokernel")
        rep = CheckReport("semistable_cokernel_probe")
        violations = []
        for t in range(trials):
            rng = random.Random(derive_seed(seed, t))
            g = self.random_morphism(rng, dst=c.dst, max_dim=max_dim)
            pb = self.pullback(c, g)
            if not self.classify_morphism(pb.pb).is_cokernel:
                violations.append({"trial": t, "g": g})
        rep.clauses["no_violations"] = not violations
        rep.details["trials"] = trials
        rep.details["violations"] = violations
        return rep

    def yakovlev_check(self, f) -> CheckReport:
        """ker f == ker coim f and coker f == coker im f."""
        _, coim = self.coimage(f)
        _, im = self.image(f)
        rep = CheckReport("yakovlev")
        rep.clauses["ker_f_eq_ker_coim"] = self.same_subobject(self.kernel(f)[1], self.kernel(coim)[1])
        rep.clauses["coker_f_eq_coker_im"] = self.same_quotient(
            self.cokernel(f)[1], self.cokernel(im)[1]
        )
        return rep

    def mid_bimorphism_check(self, f) -> bool:
        mid = self.canonical_decomposition(f).mid
        return self.is_monic(mid) and self.is_epic(mid)


_MASK64 = (1 << 64) - 1


def derive_seed(master: int, index: int) -> int:
    """Per-trial seed from a master seed (splitmix64 finalizer)."""
    z = (master * 0x9E3779B97F4A7C15 + (index + 1) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)
