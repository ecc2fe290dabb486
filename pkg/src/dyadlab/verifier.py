"""Theorem-by-theorem verification suites on the finite dyadic model.

Each suite evaluates the inequalities that are actually proved for the
generalized maximal operator, on sampled inputs and on the extremal testing
functions, and returns a :class:`VerificationReport`.  A check passes when
lhs <= rhs * (1 + tol) in float mode, or lhs <= rhs exactly in exact mode.
Checks marked ``informative`` record a measured quantity (for instance a stated
equality that the proof does not deliver) and never fail a suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .dyadic_model import DyadicModel
from .exact import PowerProduct
from .exponents import ExponentSequence, conjugate_product, regularity_constants
from .function_vectors import (
    FunctionVector,
    WeightVector,
    head_values_product,
    product_norm,
    weighted_lp_norm,
)
from .norm_search import (
    STRONG,
    WEAK,
    NormSpec,
    SearchBudget,
    estimate_norm,
    rayleigh_ratio,
    testing_family_best,
    testing_vector,
)
from .operators import level_products, maximal, product_maximal
from .sampling import (
    make_rng,
    random_carleson,
    random_function,
    random_function_vector,
    random_weight,
    to_float_weights,
)
from .weight_constants import (
    CarlesonFamily,
    a_star_from_weights,
    ap_product_constant,
    carleson_constant,
    classical_ap,
    nu_sigma,
    rh_constant,
    sp_testing_constant,
)

DEFAULT_TOL = 1e-9


@dataclass
class Check:
    description: str
    lhs: float
    rhs: float
    margin: float
    passed: bool
    informative: bool = False
    samples: int = 1
    failures: int = 0

    def to_dict(self) -> dict:
        return {"description": self.description, "lhs": self.lhs, "rhs": self.rhs,
                "margin": self.margin, "pass": self.passed, "informative": self.informative,
                "samples": self.samples, "failures": self.failures}


@dataclass
class VerificationReport:
    suite: str
    checks: list[Check] = field(default_factory=list)
    witnesses: dict = field(default_factory=dict)
    seed: int = 0
    tolerances: dict = field(default_factory=dict)
    constants: dict = field(default_factory=dict)
    skipped: str | None = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if not c.informative)

    def check(self, description: str) -> Check:
        for c in self.checks:
            if c.description == description:
                return c
        raise KeyError(description)

    def failing(self) -> list[Check]:
        return [c for c in self.checks if not c.informative and not c.passed]

    def to_dict(self) -> dict:
        return {"suite": self.suite, "pass": self.passed, "seed": self.seed,
                "tolerances": self.tolerances, "skipped": self.skipped,
                "constants": self.constants,
                "checks": [c.to_dict() for c in self.checks],
                "witnesses": self.witnesses}


def holds(lhs, rhs, tol: float) -> bool:
    if isinstance(lhs, (PowerProduct, Fraction)) and isinstance(rhs, (PowerProduct, Fraction)):
        return lhs <= rhs
    return float(lhs) <= float(rhs) * (1 + tol)


class SampledCheck:
    """Accumulates one inequality over many samples, keeping the worst case."""

    def __init__(self, description: str, tol: float, informative: bool = False):
        self.description = description
        self.tol = tol
        self.informative = informative
        self.samples = 0
        self.failures = 0
        self.worst: tuple[float, float] | None = None
        self.worst_score = -math.inf
        self.worst_witness = None

    def add(self, lhs, rhs, witness=None) -> bool:
        ok = holds(lhs, rhs, self.tol)
        self.samples += 1
        self.failures += not ok
        lf, rf = float(lhs), float(rhs)
        if rf > 0:
            score = lf / rf
        else:
            score = math.inf if lf > 0 else 0.0
        if self.worst is None or score > self.worst_score:
            self.worst, self.worst_score, self.worst_witness = (lf, rf), score, witness
        return ok

    def result(self) -> Check:
        lhs, rhs = self.worst if self.worst is not None else (0.0, 0.0)
        return Check(self.description, lhs, rhs, rhs * (1 + self.tol) - lhs, self.failures == 0,
                     self.informative, self.samples, self.failures)


def single_check(description: str, lhs, rhs, tol: float, informative: bool = False) -> Check:
    ok = holds(lhs, rhs, tol)
    return Check(description, float(lhs), float(rhs), float(rhs) * (1 + tol) - float(lhs), ok, informative)


def equality_check(description: str, a, b, tol: float, informative: bool = False) -> Check:
    """|a - b| <= tol * max(|a|, |b|) in float mode, exact equality otherwise."""
    if isinstance(a, (PowerProduct, Fraction)) and isinstance(b, (PowerProduct, Fraction)):
        ok = PowerProduct.of(a) == PowerProduct.of(b)
    else:
        fa, fb = float(a), float(b)
        ok = abs(fa - fb) <= tol * max(abs(fa), abs(fb))
    fa, fb = float(a), float(b)
    return Check(description, fa, fb, tol * max(abs(fa), abs(fb)) - abs(fa - fb), ok, informative)


def _conj_upper(seq: ExponentSequence) -> float:
    est = conjugate_product(seq)
    return est.value + est.remainder_bound


def _witness(F: FunctionVector, **extra) -> dict:
    out = F.to_dict()
    out.update(extra)
    return out


# ---------------------------------------------------------------------------
# generalized Hoelder and the maximal chain


def tail_maximal_norm_product(model: DyadicModel, F: FunctionVector) -> float:
    """prod_{i>N} ||M_d chi_E||_{L^{p_i}} for the tail template E.

    M_d chi_E equals 1 exactly on E and some q < 1 elsewhere, so the i-th
    factor is (|E| + r_i)^{1/p_i} with r_i = integral over the complement of
    (M_d chi_E)^{p_i}, which decays like q^{p_i}; terms are summed until the
    remainder is below double precision.
    """
    if not F.has_tail:
        return 1.0
    seq = F.seq
    mask = F.tail_mask(model.leaf_count)
    E = mask.mean()
    if E == 0:
        return 0.0
    g = maximal(model, mask.astype(np.float64))
    outside = g[~mask]
    log_total = float(seq.tail_harmonic) * math.log(E)
    if outside.size:
        lm = model.leaf_measure()
        i = seq.N + 1
        while True:
            p_i = float(seq.exponent(i))
            r = float(np.sum(outside**p_i)) * lm
            log_total += math.log1p(r / E) / p_i
            if r / E < 1e-18 or i > seq.N + 4000:
                break
            i += 1
    return math.exp(log_total)


def holder_chain(model: DyadicModel, F: FunctionVector) -> tuple[float, float, float, float]:
    """The four terms ||M F||_p <= ||prod M f_i||_p <= prod ||M f_i||_{p_i} <= (prod p_i') prod ||f_i||_{p_i}."""
    seq = F.seq
    p = float(seq.p)
    a = float(np.mean(product_maximal(model, F) ** p)) ** (1 / p)
    maxes = [maximal(model, f) for f in F.head]
    tail = F.tail_mask(model.leaf_count) if F.has_tail else None
    if maxes:
        pointwise = np.prod(maxes, axis=0)
        if tail is not None:
            pointwise = np.where(tail, pointwise, 0.0)
    else:
        pointwise = tail.astype(np.float64)
    b = float(np.mean(pointwise**p)) ** (1 / p)
    c = tail_maximal_norm_product(model, F)
    for g, q in zip(maxes, seq.head):
        c *= float(weighted_lp_norm(model, g, q))
    d = _conj_upper(seq) * float(product_norm(model, F))
    return a, b, c, d


def verify_holder(model: DyadicModel, seq: ExponentSequence, samples: int = 1000, seed: int = 0,
                  tol: float = DEFAULT_TOL, chain_samples: int | None = None) -> VerificationReport:
    """||prod f_i||_p <= prod ||f_i||_{p_i} on random F, plus the maximal chain."""
    rng = make_rng(seed, 1)
    rep = VerificationReport("holder", seed=seed, tolerances={"rel": tol})
    hold = SampledCheck("||prod f_i||_p <= prod ||f_i||_{p_i}", tol)
    p = float(seq.p)
    for _ in range(samples):
        F = random_function_vector(rng, model, seq)
        lhs = float(np.mean(head_values_product(F, model.leaf_count) ** p)) ** (1 / p)
        hold.add(lhs, float(product_norm(model, F)), F)
    rep.checks.append(hold.result())
    # equality for constant coordinates and full tail
    consts = rng.uniform(0.5, 2.0, size=seq.N)
    Fc = FunctionVector(tuple(np.full(model.leaf_count, c) for c in consts), seq, None)
    lhs = float(np.mean(head_values_product(Fc, model.leaf_count) ** p)) ** (1 / p)
    rep.checks.append(equality_check("equality for constant coordinates", lhs, float(product_norm(model, Fc)), tol))

    links = [SampledCheck("||M F||_p <= ||prod M_d f_i||_p", tol),
             SampledCheck("||prod M_d f_i||_p <= prod ||M_d f_i||_{p_i}", tol),
             SampledCheck("prod ||M_d f_i||_{p_i} <= (prod p_i') prod ||f_i||_{p_i}", tol)]
    for _ in range(samples if chain_samples is None else chain_samples):
        F = random_function_vector(rng, model, seq)
        a, b, c, d = holder_chain(model, F)
        for chk, (lhs, rhs) in zip(links, ((a, b), (b, c), (c, d))):
            chk.add(lhs, rhs, F)
    rep.checks.extend(chk.result() for chk in links)
    worst = max([hold, *links], key=lambda s: s.worst_score)
    if worst.worst_witness is not None:
        rep.witnesses["worst"] = _witness(worst.worst_witness, check=worst.description)
    return rep


# ---------------------------------------------------------------------------
# A_p-vector theorem: four constants coincide


def cube_inequality_ratios(model: DyadicModel, W: WeightVector, F: FunctionVector) -> tuple[np.ndarray, np.ndarray]:
    """Flattened (lhs, rhs/C) over all cubes for v(B)^{1/p} prod avg_B f_i <= C prod ||f_i chi_B||."""
    seq = W.seq
    inv_p = float(seq.inv_p)
    prods = level_products(model, F)
    v_int = model.integrals(W.v)
    norm_pows = [model.integrals(f ** float(q) * w) for f, q, w in zip(F.head, seq.head, W.omega)]
    counts = model.counts(F.tail_mask(model.leaf_count)) if F.has_tail else None
    lhs, rhs = [], []
    for k in range(model.K + 1):
        left = v_int[k] ** inv_p * prods[k]
        right = np.ones(model.level_shape(k))
        for npow, q in zip(norm_pows, seq.head):
            right = right * npow[k] ** (1 / float(q))
        if counts is not None:
            right = right * (counts[k] * model.leaf_measure()) ** float(seq.tail_harmonic)
        lhs.append(left.reshape(-1))
        rhs.append(right.reshape(-1))
    return np.concatenate(lhs), np.concatenate(rhs)


def lambda_grid(values: np.ndarray, size: int) -> np.ndarray:
    """Geometric grid between the min and max positive values, plus every value itself."""
    pos = values[values > 0]
    if pos.size == 0:
        return np.array([])
    lo, hi = float(pos.min()), float(pos.max())
    grid = np.geomspace(lo, hi, size) if hi > lo else np.array([lo])
    return np.unique(np.concatenate([grid, pos, [lo * 0.5, hi * 0.999999]]))


def weak_profile(model: DyadicModel, values: np.ndarray, v: np.ndarray, lams: np.ndarray, strict: bool) -> np.ndarray:
    """v({values >= lam}) (or > lam) for each lam."""
    order = np.argsort(values, kind="stable")
    sv = values[order]
    tail_mass = np.concatenate([np.cumsum(v[order][::-1])[::-1], [0.0]]) * model.leaf_measure()
    idx = np.searchsorted(sv, lams, side="right" if strict else "left")
    return tail_mass[idx]


def verify_theorem_ap(model: DyadicModel, W: WeightVector, samples: int = 500, grid: int = 32,
                      seed: int = 0, tol: float = DEFAULT_TOL) -> VerificationReport:
    rep = VerificationReport("theorem_ap", seed=seed, tolerances={"rel": tol})
    C1 = ap_product_constant(model, W)
    Wf = to_float_weights(W)
    seq = W.seq
    inv_p = float(seq.inv_p)
    c1 = float(C1.value)
    rep.constants["A_p_vector"] = C1.to_dict()
    rng = make_rng(seed, 2)

    cube_chk = SampledCheck("v(B)^{1/p} prod avg_B f_i <= [v,w]_A prod ||f_i chi_B||", tol)
    weak_ge = SampledCheck("lam v({M F >= lam})^{1/p} <= [v,w]_A prod ||f_i||", tol)
    weak_gt = SampledCheck("lam v({M F > lam})^{1/p} <= [v,w]_A prod ||f_i||", tol)
    for _ in range(samples):
        F = random_function_vector(rng, model, seq, Wf)
        lhs, rhs = cube_inequality_ratios(model, Wf, F)
        j = int(np.argmax(lhs - c1 * rhs * (1 + tol)))
        cube_chk.add(lhs[j], c1 * rhs[j], F)
        denom = float(product_norm(model, F, Wf))
        values = product_maximal(model, F)
        lams = lambda_grid(values, grid)
        if lams.size == 0:
            continue
        for strict, chk in ((False, weak_ge), (True, weak_gt)):
            prof = lams * weak_profile(model, values, Wf.v, lams, strict) ** inv_p
            j = int(np.argmax(prof))
            chk.add(prof[j], c1 * denom, _witness(F, lam=float(lams[j])))
    for chk in (cube_chk, weak_ge, weak_gt):
        rep.checks.append(chk.result())
        if chk.failures:
            rep.witnesses[chk.description] = chk.worst_witness if isinstance(chk.worst_witness, dict) \
                else _witness(chk.worst_witness)

    # extremal choice f_i = sigma_i chi_B: weak lower bound equals the A_p constant
    spec = NormSpec(WEAK, W)
    best, best_F, best_cube = testing_family_best(model, spec)
    rep.checks.append(equality_check("testing-family weak norm == [v,w]_A", best, C1.value, tol))
    F_att = testing_vector(model, W, C1.attaining_cube)
    att = rayleigh_ratio(model, spec, F_att)
    rep.checks.append(equality_check("sigma chi_B at the attaining cube attains [v,w]_A", att, C1.value, tol))
    rep.constants["weak_norm_lower_bound"] = float(best)
    rep.constants["testing_cube"] = str(best_cube)
    return rep


# ---------------------------------------------------------------------------
# classical dyadic A_p theorem


def verify_classical(model: DyadicModel, omega: np.ndarray, p, samples: int = 200, seed: int = 0,
                     tol: float = DEFAULT_TOL, budget: SearchBudget | None = None) -> VerificationReport:
    rep = VerificationReport("classical", seed=seed, tolerances={"rel": tol})
    p = Fraction(p)
    pf = float(p)
    pc = pf / (pf - 1)
    Ap = classical_ap(model, omega, p)
    a = float(Ap.value)
    upper = a ** (pc / pf) * pf ** (pc / pf) * pc
    rep.constants.update({"A_p": Ap.to_dict(), "upper_bound": upper})
    rng = make_rng(seed, 3)
    w = np.asarray(omega, dtype=np.float64)
    spec = NormSpec.classical(model, w, p, STRONG)

    strong = SampledCheck("||M_d f||_{L^p(w)} <= [w]^{p'/p} p^{p'/p} p' ||f||_{L^p(w)}", tol)
    universal = SampledCheck("||M_d^mu f||_{L^p(mu)} <= p' ||f||_{L^p(mu)}", tol)
    for _ in range(samples):
        f = random_function(rng, model)
        F = FunctionVector((f,), spec.seq, None)
        strong.add(float(rayleigh_ratio(model, spec, F)), upper, F)
        mu = random_weight(rng, model)
        g = random_function(rng, model)
        lhs = float(weighted_lp_norm(model, maximal(model, g, mu), p, mu))
        universal.add(lhs, pc * float(weighted_lp_norm(model, g, p, mu)))
    rep.checks.extend([strong.result(), universal.result()])

    cert = estimate_norm(model, spec, budget or SearchBudget(restarts=4, sweeps=20), seed)
    lower = float(cert.lower_bound)
    rep.constants["norm_lower_bound"] = lower
    rep.checks.append(single_check("[w]_{A_p}^{1/p} <= ||M_d|| (lower bound)", a ** (1 / pf), lower, tol))
    rep.checks.append(single_check("||M_d|| lower bound <= proved upper bound", lower, upper, tol))
    rep.checks.append(single_check("stated equality [w]_{A_p} = ||M_d|| (measured lower bound)",
                                   a, lower, tol, informative=True))
    return rep


def verify_universal(model: DyadicModel, samples: int = 1000, seed: int = 0,
                     tol: float = DEFAULT_TOL, exponents=(Fraction(3, 2), Fraction(2), Fraction(3))) -> VerificationReport:
    """||M_d^mu f||_{L^p(mu)} <= p' ||f||_{L^p(mu)} over random (mu, f, p)."""
    rep = VerificationReport("universal_weighted_maximal", seed=seed, tolerances={"rel": tol})
    rng = make_rng(seed, 4)
    chk = SampledCheck("||M_d^mu f||_{L^p(mu)} <= p' ||f||_{L^p(mu)}", tol)
    for _ in range(samples):
        p = exponents[int(rng.integers(0, len(exponents)))]
        mu = random_weight(rng, model)
        f = random_function(rng, model)
        lhs = float(weighted_lp_norm(model, maximal(model, f, mu), p, mu))
        pc = float(p / (p - 1))
        chk.add(lhs, pc * float(weighted_lp_norm(model, f, p, mu)))
    rep.checks.append(chk.result())
    return rep


# ---------------------------------------------------------------------------
# Carleson embedding


def carleson_sides(model: DyadicModel, a: CarlesonFamily, W: WeightVector, F: FunctionVector,
                   A: float, conj: float) -> tuple[float, float, float]:
    seq = W.seq
    p = float(seq.p)
    prods = level_products(model, F, W.sigma)
    total = sum(float(np.sum(a.levels[k] * prods[k] ** p)) for k in range(model.K + 1))
    lhs = total ** (1 / p)
    nu = nu_sigma(W)
    values = product_maximal(model, F, W.sigma)
    mid = A ** (1 / p) * float(np.sum(values**p * nu) * model.leaf_measure()) ** (1 / p)
    norms = 1.0
    for f, q, s in zip(F.head, seq.head, W.sigma):
        norms *= float(weighted_lp_norm(model, f, q, s))
    if F.has_tail and F.tail_support is not None:
        norms *= float(F.tail_support.mean()) ** float(seq.tail_harmonic)
    rhs = A ** (1 / p) * conj * norms
    return lhs, mid, rhs


def verify_carleson(model: DyadicModel, W: WeightVector, samples: int = 500, seed: int = 0,
                    tol: float = DEFAULT_TOL, a: CarlesonFamily | None = None) -> VerificationReport:
    """Both links of the Carleson embedding; a fresh random family per sample unless ``a`` is given."""
    rep = VerificationReport("carleson", seed=seed, tolerances={"rel": tol})
    W = to_float_weights(W)
    rng = make_rng(seed, 5)
    nu = nu_sigma(W)
    conj = _conj_upper(W.seq)
    first = SampledCheck("(sum a_B avg^sigma(F)^p)^{1/p} <= A^{1/p} ||M^sigma F||_{L^p(nu)}", tol)
    second = SampledCheck("A^{1/p} ||M^sigma F||_{L^p(nu)} <= A^{1/p} prod p_i' prod ||f_i||_{L^{p_i}(sigma_i)}", tol)
    skipped = 0
    for _ in range(samples):
        fam = a if a is not None else random_carleson(rng, model)
        A = float(carleson_constant(model, fam, nu).value)
        F = random_function_vector(rng, model, W.seq)
        if not math.isfinite(A):
            skipped += 1
            continue
        lhs, mid, rhs = carleson_sides(model, fam, W, F, A, conj)
        first.add(lhs, mid, F)
        second.add(mid, rhs, F)
    rep.checks.extend([first.result(), second.result()])
    if skipped:
        rep.constants["skipped_infinite_A"] = skipped
    return rep


# ---------------------------------------------------------------------------
# S_p-vector testing theorem


def testing_ratio_max(model: DyadicModel, W: WeightVector) -> float:
    """max_B (int_B (M sigma chi_B)^p v)^{1/p} / prod ||sigma_i chi_B||, from the operator itself."""
    p = float(W.seq.p)
    best = 0.0
    for cube in model.cubes():
        F = testing_vector(model, W, cube)
        mask = model.cube_mask(cube)
        values = product_maximal(model, F)
        num = float(np.sum(values[mask] ** p * W.v[mask]) * model.leaf_measure()) ** (1 / p)
        best = max(best, num / float(product_norm(model, F, W)))
    return best


def verify_sp(model: DyadicModel, W: WeightVector, samples: int = 500, seed: int = 0,
              tol: float = DEFAULT_TOL, budget: SearchBudget | None = None) -> VerificationReport:
    rep = VerificationReport("sp", seed=seed, tolerances={"rel": tol})
    Wf = to_float_weights(W)
    seq = W.seq
    S = sp_testing_constant(model, Wf)
    RH = rh_constant(model, Wf)
    conj = _conj_upper(seq)
    s, rh = float(S.value), float(RH.value)
    upper = s * rh ** float(seq.inv_p) * conj
    rep.constants.update({"S_p_vector": S.to_dict(), "RH_p_vector": RH.to_dict(),
                          "conjugate_product": conj, "upper_bound": upper})
    spec = NormSpec(STRONG, Wf)
    rng = make_rng(seed, 6)

    chk = SampledCheck("||M F||_{L^p(v)} <= [S] [RH]^{1/p} prod p_i' prod ||f_i||", tol)
    for _ in range(samples):
        F = random_function_vector(rng, model, seq, Wf)
        chk.add(float(rayleigh_ratio(model, spec, F)), upper, F)
    rep.checks.append(chk.result())

    best, best_F, best_cube = testing_family_best(model, spec)
    cert = estimate_norm(model, spec, budget or SearchBudget(restarts=2, sweeps=10), seed)
    lower = float(cert.lower_bound)
    rep.constants["norm_lower_bound"] = lower
    rep.checks.append(single_check("[v,w]_S <= ||M|| (lower bound)", s, lower, tol))
    rep.checks.append(single_check("||M|| lower bound <= [S] [RH]^{1/p} prod p_i'", lower, upper, tol))
    rep.checks.append(equality_check("testing functions sigma chi_B reproduce [v,w]_S",
                                     testing_ratio_max(model, Wf), s, tol))
    rep.checks.append(single_check("[v,w]_S <= best full-space ratio of sigma chi_B", s, float(best), tol))
    rep.checks.append(single_check("theorem statement bound [S] [RH]^{1/p} (no prod p_i')", lower,
                                   s * rh ** float(seq.inv_p), tol, informative=True))
    return rep


# ---------------------------------------------------------------------------
# A*-vector corollary


def corollary_v(W: WeightVector, convention: str) -> np.ndarray:
    """v = prod omega_i^{p/p_i} ("p/p_i") or prod omega_i^{1/p_i} ("1/p_i")."""
    seq = W.seq
    out = np.ones(W.v.shape[0])
    for w, q in zip(W.omega, seq.head):
        e = seq.p / q if convention == "p/p_i" else 1 / q
        out = out * np.asarray(w, dtype=np.float64) ** float(e)
    return out


def verify_corollary_astar(model: DyadicModel, W: WeightVector, samples: int = 200, seed: int = 0,
                           tol: float = DEFAULT_TOL, convention: str = "p/p_i") -> VerificationReport:
    rep = VerificationReport("corollary_astar", seed=seed, tolerances={"rel": tol})
    seq = W.seq
    reg = regularity_constants(seq)
    if not reg.log_sum.is_finite:
        rep.skipped = "sum ln(p_i)/p_i diverges"
        return rep
    Wf = to_float_weights(W)
    a_star, reports = a_star_from_weights(model, Wf)
    weight_part = 1.0
    for r, q in zip(reports, seq.head):
        qf = float(q)
        weight_part *= float(r.value) ** (1 / (qf - 1))
    C = weight_part * (reg.grafakos_product + reg.remainder_bound)
    rep.constants.update({"A_star": float(a_star), "log_sum": reg.log_sum.value,
                          "grafakos_product": reg.grafakos_product, "C": C})
    rng = make_rng(seed, 7)
    for conv in ("p/p_i", "1/p_i"):
        v = corollary_v(Wf, conv)
        Wv = WeightVector(Wf.omega, v, seq)
        spec = NormSpec(STRONG, Wv)
        chk = SampledCheck(f"||M F||_{{L^p(v)}} <= C prod ||f_i||, v = prod w_i^({conv})", tol,
                           informative=conv != convention)
        for _ in range(samples):
            F = random_function_vector(rng, model, seq, Wv)
            chk.add(float(rayleigh_ratio(model, spec, F)), C, F)
        rep.checks.append(chk.result())
    return rep
