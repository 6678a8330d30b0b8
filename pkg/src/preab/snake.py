"""Connecting morphism Ker gamma -> Coker alpha, built two ways.

Input is a diagram with ``psi2 = ker phi2`` and ``phi = coker psi``::

        A --psi--> B --phi--> C --> 0
        |alpha     |beta      |gamma
        v          v          v
    0-> A' -psi2-> B' -phi2-> C'

``delta_andre_maclane`` goes through the corners ``X`` (pullback of ``phi``
and ``ker gamma``) and ``Y`` (pushout of ``psi2`` and ``coker alpha``);
``delta_fhh`` goes through the Two-Square comparison ``eta``.  The two agree
up to sign: ``delta_ii == -delta_i``.

The maps of the cokernel row are called ``tau_c``/``theta_c`` to keep them
apart from the pushout legs ``tau``/``theta`` of the two-square data.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from . import ratmat
from .catcore import CheckReport, PreabelianCategory, Pullback, Pushout
from .errors import (
    AssumptionsAFailed,
    ChaseFailed,
    DiagramError,
    EtaNotInvertible,
    FactorizationFailed,
    NoSolution,
    NotInvertible,
    PreconditionFailed,
    ShapeMismatch,
)
from .ratmat import Matrix
from .twosquare import TwoSquareInput, TwoSquareResult, build_two_square
from .vectpair import VECTPAIR


@dataclass(frozen=True)
class SnakeInput(TwoSquareInput):
    def failed_preconditions(self, cat: PreabelianCategory = VECTPAIR) -> list[str]:
        out = []
        try:
            if cat.compose(self.psi2, self.alpha) != cat.compose(self.beta, self.psi):
                out.append("left square does not commute")
            if cat.compose(self.phi2, self.beta) != cat.compose(self.gamma, self.phi):
                out.append("right square does not commute")
        except DiagramError as exc:
            return [f"ill-typed diagram: {exc}"]
        if not cat.same_subobject(self.psi2, cat.kernel(self.phi2)[1]):
            out.append("psi2 is not ker phi2")
        if not cat.same_quotient(self.phi, cat.cokernel(self.psi)[1]):
            out.append("phi is not coker psi")
        return out

    def as_two_square(self) -> TwoSquareInput:
        return TwoSquareInput(self.psi, self.phi, self.psi2, self.phi2, self.alpha, self.beta, self.gamma)


@dataclass(frozen=True)
class Corners:
    X: Pullback  # of (phi, ker gamma); pa = u: X -> B, pb = s: X -> Ker gamma
    Y: Pushout  # of (psi2, coker alpha); ib = v: B' -> Y, ic = t: Coker alpha -> Y
    ker_gamma: Any
    coker_alpha: Any

    @property
    def s(self):
        return self.X.pb

    @property
    def u(self):
        return self.X.pa

    @property
    def t(self):
        return self.Y.ic

    @property
    def v(self):
        return self.Y.ib


@dataclass
class SnakeResult:
    input: SnakeInput
    ker_alpha: Any
    ker_beta: Any
    ker_gamma: Any
    coker_alpha: Any
    coker_beta: Any
    coker_gamma: Any
    epsilon: Any
    zeta: Any
    tau_c: Any
    theta_c: Any
    corners: Corners
    n: Any
    m: Any
    delta_i: Any
    two_square: TwoSquareResult
    eta_inv: Any
    q: Any  # Q -> Coker alpha, the cokernel of tau
    j: Any  # Ker gamma -> Q2, the kernel of sigma2
    delta_ii: Any
    delta_1: Any  # Q2 -> Coker alpha
    delta_2: Any  # Ker gamma -> Q
    checks: dict[str, CheckReport] = field(default_factory=dict)


def boundary_rows(inp: SnakeInput, cat: PreabelianCategory = VECTPAIR):
    """epsilon, zeta on the kernel row and tau_c, theta_c on the cokernel row."""
    _, ka = cat.kernel(inp.alpha)
    _, kb = cat.kernel(inp.beta)
    _, kc = cat.kernel(inp.gamma)
    _, ca = cat.cokernel(inp.alpha)
    _, cb = cat.cokernel(inp.beta)
    _, cc = cat.cokernel(inp.gamma)
    try:
        eps = cat.factor_through_kernel(kb, inp.beta, cat.compose(inp.psi, ka))
        zeta = cat.factor_through_kernel(kc, inp.gamma, cat.compose(inp.phi, kb))
        tau_c = cat.factor_through_cokernel(ca, inp.alpha, cat.compose(cb, inp.psi2))
        theta_c = cat.factor_through_cokernel(cb, inp.beta, cat.compose(cc, inp.phi2))
    except DiagramError as exc:
        raise PreconditionFailed(f"boundary rows: {exc}") from exc
    if not cat.is_zero(cat.compose(zeta, eps)) or not cat.is_zero(cat.compose(theta_c, tau_c)):
        raise PreconditionFailed("consecutive boundary maps do not compose to zero")
    return eps, zeta, tau_c, theta_c


def build_corners(inp: SnakeInput, cat: PreabelianCategory = VECTPAIR) -> Corners:
    _, kc = cat.kernel(inp.gamma)
    _, ca = cat.cokernel(inp.alpha)
    X = cat.pullback(inp.phi, kc)
    Y = cat.pushout(inp.psi2, ca)
    return Corners(X, Y, kc, ca)


def assumptions_a_check(corners: Corners, cat: PreabelianCategory = VECTPAIR) -> dict[str, bool]:
    cs = cat.classify_morphism(corners.s)
    ct = cat.classify_morphism(corners.t)
    flags = {
        "s_epic": cs.epic,
        "s_cokernel": cs.is_cokernel,
        "t_kernel": ct.is_kernel,
        "t_monic": ct.monic,
    }
    flags["A"] = flags["s_epic"] and flags["t_kernel"]
    flags["A_star"] = flags["s_cokernel"] and flags["t_monic"]
    return flags


def delta_andre_maclane(inp: SnakeInput, corners: Corners, cat: PreabelianCategory = VECTPAIR):
    """(n, m, delta_i) with ``t . delta_i . s == v . beta . u``."""
    flags = assumptions_a_check(corners, cat)
    if not flags["A"]:
        raise AssumptionsAFailed(f"s epic and t kernel required, got {flags}")
    s, u, t, v = corners.s, corners.u, corners.t, corners.v
    try:
        n = cat.factor_through_cokernel(inp.phi, inp.psi, cat.comp(v, inp.beta))
        m = cat.factor_through_kernel(inp.psi2, inp.phi2, cat.comp(inp.beta, u))
        _, coker_t = cat.cokernel(t)
        delta = cat.factor_through_kernel(t, coker_t, cat.comp(n, corners.ker_gamma))
    except DiagramError as exc:
        raise FactorizationFailed(str(exc)) from exc
    if cat.comp(t, delta, s) != cat.comp(v, inp.beta, u):
        raise FactorizationFailed("t delta s != v beta u")
    return n, m, delta


def delta_andre_maclane_dual(inp: SnakeInput, corners: Corners, cat: PreabelianCategory = VECTPAIR):
    """delta_i under the dual assumptions (s a cokernel, t monic)."""
    flags = assumptions_a_check(corners, cat)
    if not flags["A_star"]:
        raise AssumptionsAFailed(f"s cokernel and t monic required, got {flags}")
    s, u = corners.s, corners.u
    try:
        m = cat.factor_through_kernel(inp.psi2, inp.phi2, cat.comp(inp.beta, u))
        _, ker_s = cat.kernel(s)
        delta = cat.factor_through_cokernel(s, ker_s, cat.comp(corners.coker_alpha, m))
    except DiagramError as exc:
        raise FactorizationFailed(str(exc)) from exc
    return delta


def delta_fhh(inp: SnakeInput, cat: PreabelianCategory = VECTPAIR, two_square: TwoSquareResult | None = None):
    """(two-square data, q, j, eta^-1, delta_ii) with ``delta_ii = q . eta^-1 . j``."""
    ts = two_square or build_two_square(inp.as_two_square(), cat, check=False)
    try:
        eta_inv = cat.invert(ts.eta)
    except NotInvertible as exc:
        raise EtaNotInvertible(str(exc)) from exc
    _, ca = cat.cokernel(inp.alpha)
    _, kc = cat.kernel(inp.gamma)
    q = cat.mediate_pushout(ts.pushout, cat.zero_morphism(inp.psi.dst, ca.dst), ca)
    j = cat.mediate_pullback(ts.pullback, kc, cat.zero_morphism(kc.src, inp.phi2.src))
    return ts, q, j, eta_inv, cat.comp(q, eta_inv, j)


def sign_check(delta_i, delta_ii, cat: PreabelianCategory = VECTPAIR) -> bool:
    if delta_i.src != delta_ii.src or delta_i.dst != delta_ii.dst:
        raise ShapeMismatch("connecting morphisms have different ends")
    return cat.is_zero(cat.add(delta_i, delta_ii))


def proof_intermediates_check(res: SnakeResult, cat: PreabelianCategory = VECTPAIR) -> CheckReport:
    ts, inp, cr = res.two_square, res.input, res.corners
    rep = CheckReport("proof_intermediates")
    lhs1 = cat.compose(cr.t, res.delta_1)
    rhs1 = cat.sub(cat.compose(cr.v, ts.sigma2), cat.compose(res.n, ts.sigma))
    rep.clauses["t_delta1_eq_v_sigma2_minus_n_sigma"] = lhs1 == rhs1
    lhs2 = cat.compose(res.delta_2, cr.s)
    rhs2 = cat.sub(cat.compose(ts.tau, cr.u), cat.compose(ts.tau2, res.m))
    rep.clauses["delta2_s_eq_tau_u_minus_tau2_m"] = lhs2 == rhs2
    rep.clauses["q_tau_zero"] = cat.is_zero(cat.compose(res.q, ts.tau))
    rep.clauses["q_tau2_eq_coker_alpha"] = cat.compose(res.q, ts.tau2) == res.corners.coker_alpha
    rep.clauses["sigma_j_eq_ker_gamma"] = cat.compose(ts.sigma, res.j) == res.corners.ker_gamma
    rep.clauses["sigma2_j_zero"] = cat.is_zero(cat.compose(ts.sigma2, res.j))
    return rep


def build_snake(inp: SnakeInput, cat: PreabelianCategory = VECTPAIR, check: bool = True) -> SnakeResult:
    if check:
        bad = inp.failed_preconditions(cat)
        if bad:
            raise PreconditionFailed("; ".join(bad))
    eps, zeta, tau_c, theta_c = boundary_rows(inp, cat)
    corners = build_corners(inp, cat)
    n, m, delta_i = delta_andre_maclane(inp, corners, cat)
    ts, q, j, eta_inv, delta_ii = delta_fhh(inp, cat)
    res = SnakeResult(
        input=inp,
        ker_alpha=cat.kernel(inp.alpha),
        ker_beta=cat.kernel(inp.beta),
        ker_gamma=cat.kernel(inp.gamma),
        coker_alpha=cat.cokernel(inp.alpha),
        coker_beta=cat.cokernel(inp.beta),
        coker_gamma=cat.cokernel(inp.gamma),
        epsilon=eps,
        zeta=zeta,
        tau_c=tau_c,
        theta_c=theta_c,
        corners=corners,
        n=n,
        m=m,
        delta_i=delta_i,
        two_square=ts,
        eta_inv=eta_inv,
        q=q,
        j=j,
        delta_ii=delta_ii,
        delta_1=cat.compose(q, eta_inv),
        delta_2=cat.compose(eta_inv, j),
    )
    return res


# -- independent oracle ------------------------------------------------------


def element_chase(inp: SnakeInput, c, cat: PreabelianCategory = VECTPAIR) -> tuple[list[Fraction], bool]:
    """Chase a vector of Ker gamma (in its own coordinates) to Coker alpha.

    Lift along phi, push by beta, pull back along psi2, project by coker alpha.
    Uses only matrix solves, not the corner or two-square constructions.
    Returns the coordinates and whether a second lift was tried.
    """
    _, kc = cat.kernel(inp.gamma)
    _, ca = cat.cokernel(inp.alpha)
    cvec = Matrix([[x] for x in c], 1) if c else Matrix.zeros(kc.src.dim, 1)
    target = kc.mat @ cvec
    try:
        b = ratmat.solve_matrix(inp.phi.mat, target)
    except NoSolution as exc:
        raise ChaseFailed("element has no preimage under phi") from exc

    def finish(bvec: Matrix) -> Matrix:
        try:
            a2 = ratmat.solve_matrix(inp.psi2.mat, inp.beta.mat @ bvec)
        except NoSolution as exc:
            raise ChaseFailed("beta(b) is not in the image of psi2") from exc
        return ca.mat @ a2

    out = finish(b)
    tried_second = False
    null = ratmat.kernel_basis(inp.phi.mat)
    if null.ncols:
        tried_second = True
        shift = Matrix([[sum(null[i, k] for k in range(null.ncols))] for i in range(null.nrows)], 1)
        if finish(b + shift) != out:
            raise ChaseFailed("chase depends on the chosen lift")
    return [out[i, 0] for i in range(out.nrows)], tried_second


def chase_agreement(res: SnakeResult, cat: PreabelianCategory = VECTPAIR) -> CheckReport:
    inp = res.input
    dim = res.delta_i.src.dim
    rep = CheckReport("element_chase")
    second = 0
    for k in range(dim):
        e = [Fraction(int(i == k)) for i in range(dim)]
        got, tried = element_chase(inp, e, cat)
        expected = [res.delta_i.mat[i, k] for i in range(res.delta_i.dst.dim)]
        rep.clauses[f"basis_{k}"] = got == expected
        second += tried
    rep.details["basis_vectors"] = dim
    rep.details["second_lifts"] = second
    return rep


def six_term_report(res: SnakeResult, cat: PreabelianCategory = VECTPAIR) -> dict[str, bool]:
    """Exactness of Ker a -> Ker b -> Ker c -> Coker a -> Coker b -> Coker c.

    Empirical only: in general no exactness is claimed.
    """
    d = res.delta_ii
    return {
        "at_ker_beta": cat.is_exact_at(res.epsilon, res.zeta),
        "at_ker_gamma": cat.is_exact_at(res.zeta, d),
        "at_coker_alpha": cat.is_exact_at(d, res.tau_c),
        "at_coker_beta": cat.is_exact_at(res.tau_c, res.theta_c),
    }


def run_snake_checks(inp: SnakeInput, cat: PreabelianCategory = VECTPAIR) -> tuple[SnakeResult, dict[str, Any]]:
    """Build everything and evaluate every snake-level identity."""
    res = build_snake(inp, cat)
    flags = assumptions_a_check(res.corners, cat)
    out: dict[str, Any] = {
        "assumptions_a": flags,
        "delta_i_identity": cat.comp(res.corners.t, res.delta_i, res.corners.s)
        == cat.comp(res.corners.v, inp.beta, res.corners.u),
        "sign_check": sign_check(res.delta_i, res.delta_ii, cat),
        "intermediates": proof_intermediates_check(res, cat),
        "chase": chase_agreement(res, cat),
        "six_term": six_term_report(res, cat),
        "zero_compositions": cat.is_zero(cat.compose(res.zeta, res.epsilon))
        and cat.is_zero(cat.compose(res.theta_c, res.tau_c)),
    }
    if flags["A_star"]:
        out["a_star_agrees"] = delta_andre_maclane_dual(inp, res.corners, cat) == res.delta_i
    return res, out
