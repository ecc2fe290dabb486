"""Certified lower bounds on operator norms by search over test functions.

Any function vector F gives ratio(F) <= ||operator||, so the best ratio found
is a lower bound by construction.  The search always starts with the testing
family f_i = sigma_i chi_B over every cube B (which attains the weak-type
norm), then runs randomized restarts with monotone multiplicative ascent.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .dyadic_model import EXACT, CubeId, DyadicModel, is_exact, mode_of
from .exact import PowerProduct
from .exponents import ExponentSequence
from .function_vectors import FunctionVector, WeightVector, make_weight_vector, product_norm
from .operators import product_maximal
from .weight_constants import exact_leaf_power

WEAK = "weak"
STRONG = "strong"
RATIO_RTOL = 1e-12


@dataclass(frozen=True)
class NormSpec:
    """Which norm: the product maximal operator from prod L^{p_i}(omega_i) to L^p(v) (strong) or L^{p,inf}(v) (weak)."""

    kind: str
    W: WeightVector

    def __post_init__(self):
        if self.kind not in (WEAK, STRONG):
            raise ValueError(f"norm kind must be 'weak' or 'strong', not {self.kind!r}")

    @property
    def seq(self) -> ExponentSequence:
        return self.W.seq

    @classmethod
    def classical(cls, model: DyadicModel, omega: np.ndarray, p, kind: str = STRONG) -> "NormSpec":
        """M_d on L^p(omega) as the one-coordinate case with v = omega."""
        seq = ExponentSequence((Fraction(p),))
        return cls(kind, make_weight_vector(model, [omega], omega, seq, mode_of(omega)))

    def describe(self) -> dict:
        return {"kind": self.kind, "operator": "product_maximal", **self.W.to_dict()}


@dataclass(frozen=True)
class SearchBudget:
    restarts: int = 64
    sweeps: int = 100
    step: float = 0.5


@dataclass
class NormCertificate:
    spec: NormSpec
    lower_bound: object
    witness: FunctionVector
    strategy: str
    iterations: int
    seed: int
    extras: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {"spec": self.spec.describe(),
               "lower_bound": float(self.lower_bound),
               "witness": self.witness.to_dict(),
               "strategy": self.strategy,
               "iterations": self.iterations,
               "seed": self.seed}
        if isinstance(self.lower_bound, PowerProduct):
            out["lower_bound_exact"] = repr(self.lower_bound)
        if self.extras:
            out.update(self.extras)
        return out


def weak_sup(model: DyadicModel, values: np.ndarray, v: np.ndarray, inv_p):
    """sup_{lam > 0} lam * v({values >= lam})^{1/p}, attained at a leaf value."""
    if is_exact(values):
        best = PowerProduct.of(0)
        lm = model.leaf_measure(EXACT)
        pairs = sorted(((x, w) for x, w in zip(values, v) if x > 0), key=lambda t: t[0], reverse=True)
        mass = Fraction(0)
        for j, (lam, w) in enumerate(pairs):
            mass += w
            if j + 1 < len(pairs) and pairs[j + 1][0] == lam:
                continue
            cand = PowerProduct.of(lam) * PowerProduct.of(mass * lm) ** inv_p
            if cand > best:
                best = cand
        return best
    order = np.argsort(-values, kind="stable")
    sorted_vals = values[order]
    mass = np.cumsum(v[order]) * model.leaf_measure()
    # v({values >= lam}) for lam = sorted_vals[j] is the mass through the last tie
    last_of_tie = np.r_[sorted_vals[1:] != sorted_vals[:-1], True]
    lam = sorted_vals[last_of_tie]
    m = mass[last_of_tie]
    keep = lam > 0
    if not np.any(keep):
        return 0.0
    return float(np.max(lam[keep] * m[keep] ** float(inv_p)))


def strong_norm(model: DyadicModel, values: np.ndarray, v: np.ndarray, p):
    total = (exact_leaf_power(values, p) * v).sum() * model.leaf_measure(mode_of(values))
    if is_exact(values):
        return PowerProduct.of(total) ** (1 / Fraction(p))
    return float(total) ** (1.0 / float(p))


def rayleigh_ratio(model: DyadicModel, spec: NormSpec, F: FunctionVector):
    """||M F|| / prod ||f_i||_{L^{p_i}(omega_i)}; 0 when the denominator vanishes."""
    denom = product_norm(model, F, spec.W)
    if not denom > 0:
        return PowerProduct.of(0) if F.mode == EXACT else 0.0
    values = product_maximal(model, F)
    if spec.kind == WEAK:
        num = weak_sup(model, values, spec.W.v, spec.seq.inv_p)
    else:
        num = strong_norm(model, values, spec.W.v, spec.seq.p)
    return num / denom


def testing_vector(model: DyadicModel, W: WeightVector, cube: CubeId) -> FunctionVector:
    """sigma chi_B: head sigma_i chi_B and tail template chi_B."""
    mask = model.cube_mask(cube)
    head = tuple(np.where(mask, s, 0 * s) for s in W.sigma)
    support = None if mask.all() else mask
    return FunctionVector(head, W.seq, support)


def testing_family_best(model: DyadicModel, spec: NormSpec):
    """Best ratio over sigma chi_B for every cube B (first maximizer in cube order)."""
    best, best_F, best_cube = None, None, None
    for cube in model.cubes():
        F = testing_vector(model, spec.W, cube)
        r = rayleigh_ratio(model, spec, F)
        if best is None or r > best:
            best, best_F, best_cube = r, F, cube
    return best, best_F, best_cube


def _random_start(model: DyadicModel, W: WeightVector, rng: np.random.Generator, scale: float) -> FunctionVector:
    level = int(rng.integers(0, model.K + 1))
    idx = tuple(int(i) for i in rng.integers(0, 1 << level, size=model.n))
    mask = model.cube_mask(CubeId(level, idx))
    head = []
    for s in W.sigma:
        noise = np.exp(scale * rng.standard_normal(model.leaf_count))
        head.append(np.where(mask, s.astype(np.float64) * noise, 0.0))
    support = None
    if W.seq.tail is not None and rng.random() < 0.5 and not mask.all():
        support = mask
    return FunctionVector(tuple(head), W.seq, support)


def _ascend(model: DyadicModel, spec: NormSpec, F: FunctionVector, ratio: float,
            rng: np.random.Generator, budget: SearchBudget) -> tuple[FunctionVector, float, int]:
    """Coordinate-wise multiplicative ascent; a step is kept only if the ratio does not drop."""
    evals = 0
    head = [f.copy() for f in F.head]
    for _ in range(budget.sweeps):
        for i in range(len(head)):
            level = int(rng.integers(0, model.K + 1))
            idx = tuple(int(t) for t in rng.integers(0, 1 << level, size=model.n))
            mask = model.cube_mask(CubeId(level, idx))
            factor = np.exp(budget.step * rng.standard_normal())
            trial = list(head)
            trial[i] = np.where(mask, head[i] * factor, head[i])
            cand = FunctionVector(tuple(trial), F.seq, F.tail_support)
            r = float(rayleigh_ratio(model, spec, cand))
            evals += 1
            if r >= ratio:
                head, ratio = trial, r
    return FunctionVector(tuple(head), F.seq, F.tail_support), ratio, evals


def estimate_norm(model: DyadicModel, spec: NormSpec, budget: SearchBudget | None = None,
                  seed: int = 0) -> NormCertificate:
    """Lower bound on the operator norm with a replayable witness.

    Ties are broken by strategy order (testing family, then restarts in seed
    order), so the certificate is deterministic for a given seed.
    """
    budget = budget or SearchBudget()
    best, best_F, cube = testing_family_best(model, spec)
    iterations = model.cube_count
    strategy = "testing"
    extras = {"testing_cube": str(cube)}
    if spec.W.mode == EXACT or budget.restarts == 0 or not spec.W.sigma:
        return NormCertificate(spec, best, best_F, strategy, iterations, seed, extras)
    rng = np.random.Generator(np.random.Philox(seed))
    best = float(best)
    for r in range(budget.restarts):
        start = best_F if r == 0 else _random_start(model, spec.W, rng, scale=1.0)
        start_ratio = float(rayleigh_ratio(model, spec, start))
        iterations += 1
        F, ratio, evals = _ascend(model, spec, start, start_ratio, rng, budget)
        iterations += evals
        # earlier strategies win unless the gain exceeds rounding noise
        if ratio > best * (1 + RATIO_RTOL):
            best, best_F, strategy = ratio, F, f"ascent:{r}"
    return NormCertificate(spec, best, best_F, strategy, iterations, seed, extras)


def replay(model: DyadicModel, cert: NormCertificate):
    return rayleigh_ratio(model, cert.spec, cert.witness)
