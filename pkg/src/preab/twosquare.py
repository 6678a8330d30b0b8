"""Two-Square Lemma: the comparison maps between the pushout and pullback corners.

Given a commutative diagram with exact rows::

    A --psi--> B --phi--> C
    |alpha     |beta      |gamma
    v          v          v
    A' -psi2-> B' -phi2-> C'

``Q`` is the pushout of ``(psi, alpha)`` with legs ``tau: B -> Q`` and
``tau2: A' -> Q``; ``Q2`` is the pullback of ``(gamma, phi2)`` with legs
``sigma: Q2 -> C`` and ``sigma2: Q2 -> B'``.  The lemma produces
``theta: Q -> B'``, ``rho: B -> Q2`` and ``eta: Q -> Q2``.

Throughout, a trailing ``2`` on a name stands for a prime.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from . import ratmat
from .catcore import CheckReport, PreabelianCategory, Pullback, Pushout, SquareData
from .errors import (
    DiagramError,
    HypothesisFailed,
    MediationFailed,
    NoSolution,
    NotExact,
    NotPullback,
    PreconditionFailed,
)
from .ratmat import Matrix
from .vectpair import VECTPAIR


@dataclass(frozen=True)
class TwoSquareInput:
    psi: Any
    phi: Any
    psi2: Any
    phi2: Any
    alpha: Any
    beta: Any
    gamma: Any

    def failed_preconditions(self, cat: PreabelianCategory = VECTPAIR) -> list[str]:
        out = []
        try:
            if cat.compose(self.psi2, self.alpha) != cat.compose(self.beta, self.psi):
                out.append("left square does not commute")
            if cat.compose(self.phi2, self.beta) != cat.compose(self.gamma, self.phi):
                out.append("right square does not commute")
        except DiagramError as exc:
            return [f"ill-typed diagram: {exc}"]
        if not cat.is_exact_at(self.psi, self.phi):
            out.append("top row not exact")
        if not cat.is_exact_at(self.psi2, self.phi2):
            out.append("bottom row not exact")
        return out

    def validate(self, cat: PreabelianCategory = VECTPAIR) -> None:
        bad = self.failed_preconditions(cat)
        if bad:
            raise PreconditionFailed("; ".join(bad))


@dataclass(frozen=True)
class TwoSquareResult:
    input: TwoSquareInput
    pushout: Pushout
    pullback: Pullback
    theta: Any
    rho: Any
    eta: Any
    j0: Any  # A' -> Q2 with sigma . j0 = 0, sigma2 . j0 = psi2

    @property
    def Q(self):
        return self.pushout.obj

    @property
    def tau(self):
        return self.pushout.ib

    @property
    def tau2(self):
        return self.pushout.ic

    @property
    def Q2(self):
        return self.pullback.obj

    @property
    def sigma(self):
        return self.pullback.pa

    @property
    def sigma2(self):
        return self.pullback.pb


def build_two_square(inp: TwoSquareInput, cat: PreabelianCategory = VECTPAIR, check: bool = True):
    if check:
        inp.validate(cat)
    po = cat.pushout(inp.psi, inp.alpha)
    pb = cat.pullback(inp.gamma, inp.phi2)
    try:
        theta = cat.mediate_pushout(po, inp.beta, inp.psi2)
        rho = cat.mediate_pullback(pb, inp.phi, inp.beta)
        j0 = cat.mediate_pullback(pb, cat.zero_morphism(inp.psi2.src, inp.phi.dst), inp.psi2)
        eta = cat.mediate_pushout(po, rho, j0)
    except DiagramError as exc:
        raise MediationFailed(str(exc)) from exc
    result = TwoSquareResult(inp, po, pb, theta, rho, eta, j0)
    rep = verify_defining_equations(result, cat)
    if not rep.passed:
        failed = [k for k, v in rep.clauses.items() if not v]
        raise MediationFailed(f"defining equations failed: {failed}")
    return result


def verify_defining_equations(result: TwoSquareResult, cat: PreabelianCategory = VECTPAIR) -> CheckReport:
    inp = result.input
    c = cat.comp
    rep = CheckReport("two_square_equations")
    eqs = {
        "gamma_sigma_eq_phi2_sigma2": (c(inp.gamma, result.sigma), c(inp.phi2, result.sigma2)),
        "tau_psi_eq_tau2_alpha": (c(result.tau, inp.psi), c(result.tau2, inp.alpha)),
        "theta_tau_eq_beta": (c(result.theta, result.tau), inp.beta),
        "theta_tau2_eq_psi2": (c(result.theta, result.tau2), inp.psi2),
        "sigma_rho_eq_phi": (c(result.sigma, result.rho), inp.phi),
        "sigma2_rho_eq_beta": (c(result.sigma2, result.rho), inp.beta),
        "eta_tau_eq_rho": (c(result.eta, result.tau), result.rho),
        "sigma2_eta_eq_theta": (c(result.sigma2, result.eta), result.theta),
        "sigma_eta_tau2_zero": (
            c(result.sigma, result.eta, result.tau2),
            cat.zero_morphism(inp.psi2.src, inp.phi.dst),
        ),
    }
    for name, (lhs, rhs) in eqs.items():
        try:
            rep.clauses[name] = lhs == rhs
        except DiagramError:
            rep.clauses[name] = False
    return rep


def uniqueness_check(result: TwoSquareResult) -> CheckReport:
    """Re-solve the defining equations of theta, rho, eta as plain linear systems.

    Each system must have a one-point solution set equal to the constructed
    matrix.  Works on the vector-pair backend (matrices).
    """
    inp = result.input
    tau, tau2 = result.tau.mat, result.tau2.mat
    sigma, sigma2 = result.sigma.mat, result.sigma2.mat
    rep = CheckReport("two_square_uniqueness")

    def one(name, target, equations):
        ident_l = Matrix.identity(target.mat.nrows)
        ident_r = Matrix.identity(target.mat.ncols)
        eqs = []
        for left, right, rhs in equations:
            eqs.append((left if left is not None else ident_l, right if right is not None else ident_r, rhs))
        try:
            x, null = ratmat.solve_linear_system(target.mat.shape, eqs)
        except NoSolution:
            rep.clauses[name] = False
            return
        rep.clauses[name] = null.ncols == 0 and x == target.mat

    one("theta_unique", result.theta, [(None, tau, inp.beta.mat), (None, tau2, inp.psi2.mat)])
    one("rho_unique", result.rho, [(sigma, None, inp.phi.mat), (sigma2, None, inp.beta.mat)])
    zero = Matrix.zeros(inp.phi.dst.dim, inp.psi2.src.dim)
    one(
        "eta_unique",
        result.eta,
        [(None, tau, result.rho.mat), (sigma2, None, result.theta.mat), (sigma, tau2, zero)],
    )
    return rep


# -- classification of eta ----------------------------------------------------


@dataclass
class Implication:
    name: str
    hypothesis_met: bool
    conclusion_held: bool
    exploratory: bool = False

    @property
    def violated(self) -> bool:
        return self.hypothesis_met and not self.conclusion_held

    def as_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "hypothesis_met": self.hypothesis_met,
            "conclusion_held": self.conclusion_held,
            "violated": self.violated,
            "exploratory": self.exploratory,
        }


@dataclass
class EtaReport:
    hypotheses: dict[str, bool] = field(default_factory=dict)
    conclusions: dict[str, bool] = field(default_factory=dict)
    implications: list[Implication] = field(default_factory=list)
    probe_disagreements: list[str] = field(default_factory=list)

    @property
    def violated(self) -> bool:
        return any(i.violated for i in self.implications if not i.exploratory)

    def as_dict(self) -> dict[str, Any]:
        return {
            "hypotheses": dict(self.hypotheses),
            "conclusions": dict(self.conclusions),
            "implications": [i.as_dict() for i in self.implications],
            "probe_disagreements": list(self.probe_disagreements),
            "violated": self.violated,
        }


def _semistable(cat, f, kind: str, seed: int, trials: int, disagreements: list, label: str) -> bool:
    if kind == "kernel":
        theory = cat.is_semistable_kernel(f)
        is_base = cat.classify_morphism(f).is_kernel
        probe = cat.semistable_kernel_probe
    else:
        theory = cat.is_semistable_cokernel(f)
        is_base = cat.classify_morphism(f).is_cokernel
        probe = cat.semistable_cokernel_probe
    if theory is None:
        return False
    if trials and is_base:
        probed = probe(f, trials, seed).passed
        # a probe can only refute semi-stability, never prove it
        if theory and not probed:
            disagreements.append(label)
    return bool(theory)


def classify_eta(
    inp: TwoSquareInput,
    result: TwoSquareResult,
    cat: PreabelianCategory = VECTPAIR,
    probe_trials: int = 2,
    seed: int = 0,
) -> EtaReport:
    rep = EtaReport()
    h = rep.hypotheses
    dis = rep.probe_disagreements
    cls_psi2 = cat.classify_morphism(inp.psi2)
    cls_phi = cat.classify_morphism(inp.phi)
    dec_phi = cat.canonical_decomposition(inp.phi)
    dec_psi2 = cat.canonical_decomposition(inp.psi2)

    h["psi2_kernel"] = cls_psi2.is_kernel
    h["psi2_semistable_kernel"] = _semistable(cat, inp.psi2, "kernel", seed, probe_trials, dis, "psi2")
    h["psi2_monic"] = cls_psi2.monic
    h["psi2_strict"] = cls_psi2.strict
    h["phi_cokernel"] = cls_phi.is_cokernel
    h["phi_semistable_cokernel"] = _semistable(cat, inp.phi, "cokernel", seed + 1, probe_trials, dis, "phi")
    h["phi_epic"] = cls_phi.epic
    h["phi_strict"] = cls_phi.strict
    h["phi_bar_monic"] = cat.is_monic(dec_phi.mid)
    h["psi2_bar_epic"] = cat.is_epic(dec_psi2.mid)
    h["im_phi_semistable_kernel"] = _semistable(cat, dec_phi.im, "kernel", seed + 2, probe_trials, dis, "im_phi")
    h["coim_psi2_semistable_cokernel"] = _semistable(
        cat, dec_psi2.coim, "cokernel", seed + 3, probe_trials, dis, "coim_psi2"
    )

    cls_eta = cat.classify_morphism(result.eta)
    c = rep.conclusions
    c["eta_monic"] = cls_eta.monic
    c["eta_epic"] = cls_eta.epic
    c["eta_kernel"] = cls_eta.is_kernel
    c["eta_cokernel"] = cls_eta.is_cokernel
    c["eta_iso"] = cls_eta.is_iso
    c["eta_semistable_kernel"] = bool(cls_eta.is_kernel and cat.is_semistable_kernel(result.eta))
    c["eta_semistable_cokernel"] = bool(cls_eta.is_cokernel and cat.is_semistable_cokernel(result.eta))

    imp = rep.implications
    imp.append(Implication("semistable_rows_monic", h["psi2_semistable_kernel"] and h["phi_bar_monic"], c["eta_monic"]))
    imp.append(Implication("semistable_rows_epic", h["phi_semistable_cokernel"] and h["psi2_bar_epic"], c["eta_epic"]))
    imp.append(
        Implication(
            "semistable_rows_kernel",
            h["psi2_semistable_kernel"] and h["im_phi_semistable_kernel"] and h["phi_strict"],
            c["eta_semistable_kernel"],
        )
    )
    imp.append(
        Implication(
            "semistable_rows_cokernel",
            h["phi_semistable_cokernel"] and h["coim_psi2_semistable_cokernel"] and h["psi2_strict"],
            c["eta_semistable_cokernel"],
        )
    )
    imp.append(Implication("semistable_rows_iso", h["psi2_semistable_kernel"] and h["phi_semistable_cokernel"], c["eta_iso"]))
    if cat.p_semi_abelian:
        imp.append(Implication("kernel_row_monic", h["psi2_kernel"], c["eta_monic"]))
        imp.append(Implication("cokernel_row_epic", h["phi_cokernel"], c["eta_epic"]))
        imp.append(
            Implication(
                "mixed_rows_iso",
                (h["psi2_semistable_kernel"] and h["phi_cokernel"])
                or (h["psi2_kernel"] and h["phi_semistable_cokernel"]),
                c["eta_iso"],
            )
        )
    # abelian-case claims; not asserted in general
    imp.append(Implication("abelian_monic", h["psi2_monic"], c["eta_monic"], exploratory=True))
    imp.append(Implication("abelian_epic", h["phi_epic"], c["eta_epic"], exploratory=True))
    return rep


# -- rows induced through a pullback -------------------------------------------


def induce_row_map(beta, gamma, psi2, phi2, phi, cat: PreabelianCategory = VECTPAIR):
    """The unique ``psi: A' -> B`` with ``beta . psi = psi2`` and ``phi . psi = 0``.

    Requires the square ``phi2 . beta = gamma . phi`` to be a pullback and the
    row ``psi2, phi2`` to be exact.  When ``psi2``'s middle morphism is epic the
    induced row ``psi, phi`` is checked for exactness as well.
    """
    sq = SquareData(top=phi, left=beta, right=gamma, bottom=phi2, kind="pullback")
    pb, comparison = cat.square_comparison(sq)
    try:
        back = cat.invert(comparison)
    except DiagramError as exc:
        raise NotPullback("square is commutative but not a pullback") from exc
    if not cat.is_exact_at(psi2, phi2):
        raise NotExact("bottom row is not exact")
    m = cat.mediate_pullback(pb, cat.zero_morphism(psi2.src, gamma.src), psi2)
    psi = cat.compose(back, m)
    report: dict[str, Any] = {
        "beta_psi_eq_psi2": cat.compose(beta, psi) == psi2,
        "phi_psi_zero": cat.is_zero(cat.compose(phi, psi)),
    }
    bar_epic = cat.is_epic(cat.canonical_decomposition(psi2).mid)
    report["psi2_bar_epic"] = bar_epic
    if bar_epic:
        report["top_row_exact"] = cat.is_exact_at(psi, phi)
    return psi, report


# -- ladders --------------------------------------------------------------------


@dataclass(frozen=True)
class LadderData:
    """``r . p1 = p2`` and ``q2 . r = q1``::

        A -p1-> B1 -q1-> C
        |       |r       |
        A -p2-> B2 -q2-> C
    """

    p1: Any
    q1: Any
    p2: Any
    q2: Any
    r: Any


@dataclass(frozen=True)
class LadderCertificate:
    coim_q1: Any  # B1 -> K1
    coim_q2: Any  # B2 -> K2
    q1_bar: Any  # K1 -> C
    q2_bar: Any  # K2 -> C
    w: Any  # K1 -> K2
    F: Any  # pushout of (p1, p2)
    u1: Any  # B2 -> F
    u2: Any  # B1 -> F
    s: Any  # K1 -> F
    S: Any  # pushout of (w, s)
    s2: Any  # K2 -> S
    w2: Any  # F -> S
    mu: Any  # B2 -> S
    identities: dict
    verdict: dict


def ladder_hypotheses(d: LadderData, mode: str = "semistable", cat: PreabelianCategory = VECTPAIR) -> list[str]:
    """Names of the failed hypotheses (empty when the ladder qualifies)."""
    if mode not in ("monic", "semistable"):
        raise ValueError(f"unknown ladder mode {mode!r}")
    failed = []
    if cat.compose(d.r, d.p1) != d.p2:
        failed.append("r p1 = p2")
    if cat.compose(d.q2, d.r) != d.q1:
        failed.append("q2 r = q1")
    if not cat.same_subobject(d.p1, cat.kernel(d.q1)[1]):
        failed.append("p1 = ker q1")
    if mode == "monic":
        if not cat.is_zero(cat.compose(d.q2, d.p2)):
            failed.append("q2 p2 = 0")
        if not cat.is_monic(d.p2):
            failed.append("p2 monic")
        return failed
    if not cat.same_subobject(d.p2, cat.kernel(d.q2)[1]):
        failed.append("p2 = ker q2")
    if not cat.is_semistable_kernel(d.p2):
        failed.append("p2 semi-stable kernel")
    dec1 = cat.canonical_decomposition(d.q1)
    if not cat.is_semistable_kernel(dec1.im):
        failed.append("im q1 semi-stable kernel")
    if not dec1.strict:
        failed.append("q1 strict")
    return failed


def ladder_certificate(d: LadderData, mode: str = "semistable", cat: PreabelianCategory = VECTPAIR):
    """Verdict on ``r`` and, in semi-stable mode, the full certificate.

    Returns ``(certificate, verdict)``; the certificate is None in monic mode.
    """
    failed = ladder_hypotheses(d, mode, cat)
    if failed:
        raise HypothesisFailed(failed[0])
    if mode == "monic":
        return None, {"r_monic": cat.is_monic(d.r), "r_monic_closed_form": _closed_form(cat, d.r, "monic")}

    dec1 = cat.canonical_decomposition(d.q1)
    dec2 = cat.canonical_decomposition(d.q2)

    _, k1 = cat.kernel(d.q1)
    _, k2 = cat.kernel(d.q2)
    coim1, coim2 = dec1.coim, dec2.coim
    q1_bar = cat.compose(dec1.im, dec1.mid)
    q2_bar = cat.compose(dec2.im, dec2.mid)
    w = cat.factor_through_cokernel(coim1, k1, cat.compose(coim2, d.r))
    F = cat.pushout(d.p1, d.p2)
    u2, u1 = F.ib, F.ic
    diff = cat.sub(cat.compose(u1, d.r), u2)
    s = cat.factor_through_cokernel(coim1, k1, diff)
    S = cat.pushout(w, s)
    s2, w2 = S.ib, S.ic
    mu = cat.sub(cat.compose(w2, u1), cat.compose(s2, coim2))

    ident = {
        "w_coim_q1_eq_coim_q2_r": cat.compose(w, coim1) == cat.compose(coim2, d.r),
        "q1_bar_eq_q2_bar_w": q1_bar == cat.compose(q2_bar, w),
        "s_coim_q1_eq_u1_r_minus_u2": cat.compose(s, coim1) == diff,
        "mu_r_eq_w2_u2": cat.compose(mu, d.r) == cat.compose(w2, u2),
    }
    verdict = {
        "w_kernel": cat.classify_morphism(w).is_kernel,
        "u2_kernel": cat.classify_morphism(u2).is_kernel,
        "w2_kernel": cat.classify_morphism(w2).is_kernel,
        "mu_r_kernel": cat.classify_morphism(cat.compose(mu, d.r)).is_kernel,
        "r_kernel": cat.classify_morphism(d.r).is_kernel,
        "r_semistable_kernel": bool(cat.is_semistable_kernel(d.r)),
        "r_kernel_closed_form": _closed_form(cat, d.r, "is_kernel"),
    }
    cert = LadderCertificate(
        coim1, coim2, q1_bar, q2_bar, w, F.obj, u1, u2, s, S.obj, s2, w2, mu, ident, verdict
    )
    return cert, verdict


def _closed_form(cat, f, flag: str):
    oracle = getattr(cat, "closed_form_classify", None)
    if oracle is None:
        return None
    return getattr(oracle(f), flag)
