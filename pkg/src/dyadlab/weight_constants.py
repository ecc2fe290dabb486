"""Weight constants as exact maxima over every cube of the model.

Each constant is evaluated on all cubes at once from per-level aggregate
arrays; the reported value is the maximum and the attaining cube is the first
maximizer in cube order (lowest level, then lexicographic index).  In exact
mode the per-cube values are :class:`~dyadlab.exact.PowerProduct` numbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .dyadic_model import EXACT, FLOAT, CubeId, DyadicModel, is_exact, mode_of
from .exact import PowerProduct
from .exponents import ExponentSequence
from .function_vectors import WeightVector, dual_weight

_to_power_product = np.frompyfunc(PowerProduct.of, 1, 1)


@dataclass
class ConstantReport:
    name: str
    value: object
    attaining_cube: CubeId | None = None
    per_cube_values: list[np.ndarray] | None = field(default=None, repr=False)
    mode: str = FLOAT
    extras: dict = field(default_factory=dict, repr=False)

    def __float__(self) -> float:
        return float(self.value)

    def to_dict(self) -> dict:
        out = {"name": self.name,
               "value": float(self.value),
               "attaining_cube": None if self.attaining_cube is None else str(self.attaining_cube),
               "mode": self.mode}
        if self.mode == EXACT:
            out["exact"] = repr(self.value) if isinstance(self.value, PowerProduct) else str(self.value)
        return out


def lift(arr: np.ndarray) -> np.ndarray:
    """Float arrays pass through; exact arrays become PowerProduct arrays."""
    if is_exact(arr):
        return _to_power_product(arr).astype(object)
    return arr


def rpow(arr: np.ndarray, e):
    """arr ** e, exact when arr holds PowerProducts."""
    if is_exact(arr):
        return arr ** Fraction(e)
    return np.power(arr, float(e))


def exact_leaf_power(arr: np.ndarray, e) -> np.ndarray:
    """Leafwise arr ** e kept rational in exact mode (raises if irrational)."""
    if not is_exact(arr):
        return np.power(arr, float(e))
    out = np.empty(arr.shape, dtype=object)
    flat_in, flat_out = arr.reshape(-1), out.reshape(-1)
    e = Fraction(e)
    for j, x in enumerate(flat_in):
        q = (PowerProduct.of(x) ** e).rational()
        if q is None:
            raise ValueError(f"exact mode: a leaf value to the power {e} is irrational")
        flat_out[j] = q
    return out


def argmax_levels(levels: Sequence[np.ndarray]) -> tuple[object, CubeId]:
    """First maximum over all cubes in enumeration order."""
    best, best_cube = None, None
    for k, arr in enumerate(levels):
        if arr.dtype != object:
            j = int(np.argmax(arr.reshape(-1)))
            cand = arr.reshape(-1)[j]
        else:
            flat = arr.reshape(-1)
            j, cand = 0, flat[0]
            for t in range(1, flat.shape[0]):
                if flat[t] > cand:
                    j, cand = t, flat[t]
        if best is None or cand > best:
            best = cand
            best_cube = CubeId(k, tuple(int(i) for i in np.unravel_index(j, arr.shape)))
    return best, best_cube


def _report(name: str, levels: list[np.ndarray], mode: str, **extras) -> ConstantReport:
    value, cube = argmax_levels(levels)
    if mode == FLOAT:
        value = float(value)
    return ConstantReport(name, value, cube, levels, mode, dict(extras))


def ap_product_constant(model: DyadicModel, W: WeightVector, seq: ExponentSequence | None = None) -> ConstantReport:
    """[v, omega]_{A_p}: max_B (avg v)^{1/p} prod_i (avg sigma_i)^{1/p_i'}."""
    seq = seq or W.seq
    mode = W.mode
    v_avg = model.averages(W.v)
    s_avg = [model.averages(s) for s in W.sigma]
    levels = []
    for k in range(model.K + 1):
        val = rpow(lift(v_avg[k]), seq.inv_p)
        for i, avgs in enumerate(s_avg):
            val = val * rpow(lift(avgs[k]), 1 - 1 / seq.head[i])
        levels.append(val)
    return _report("A_p_vector", levels, mode)


def classical_ap(model: DyadicModel, omega: np.ndarray, p) -> ConstantReport:
    """[omega]_{A_p}: max_B (avg omega)(avg sigma)^{p-1}, sigma = omega^{-1/(p-1)}."""
    p = Fraction(p)
    if p <= 1:
        raise ValueError("exponent must exceed 1")
    mode = mode_of(omega)
    sigma = dual_weight(omega, p)
    w_avg = model.averages(omega)
    s_avg = model.averages(sigma)
    levels = [lift(w_avg[k]) * rpow(lift(s_avg[k]), p - 1) for k in range(model.K + 1)]
    return _report("A_p", levels, mode)


def a_star_constant(pairs: Sequence[tuple[object, object]]):
    """prod_i [omega_i]_{A_{p_i}}^{1/p_i} over the head (tail weights give 1)."""
    out = 1.0
    exact = all(isinstance(c, (PowerProduct, Fraction, int)) for c, _ in pairs)
    if exact:
        out = PowerProduct.of(1)
        for c, p in pairs:
            out = out * PowerProduct.of(c) ** (1 / Fraction(p))
        return out
    for c, p in pairs:
        out *= float(c) ** (1.0 / float(p))
    return out


def a_star_from_weights(model: DyadicModel, W: WeightVector):
    reports = [classical_ap(model, w, q) for w, q in zip(W.omega, W.seq.head)]
    return a_star_constant([(r.value, q) for r, q in zip(reports, W.seq.head)]), reports


def nu_sigma(W: WeightVector, seq: ExponentSequence | None = None) -> np.ndarray:
    """nu = prod_i sigma_i^{p/p_i} (tail sigma_i = 1)."""
    seq = seq or W.seq
    out = None
    for s, q in zip(W.sigma, seq.head):
        term = exact_leaf_power(s, seq.p / q)
        out = term if out is None else out * term
    if out is None:
        out = np.ones_like(W.v)
    return out


def rh_constant(model: DyadicModel, W: WeightVector, seq: ExponentSequence | None = None) -> ConstantReport:
    """[omega]_{RH_p}: max_B prod_i (avg sigma_i)^{p/p_i} / avg nu."""
    seq = seq or W.seq
    nu = nu_sigma(W, seq)
    nu_avg = model.averages(nu)
    s_avg = [model.averages(s) for s in W.sigma]
    levels = []
    for k in range(model.K + 1):
        val = 1 / lift(nu_avg[k])
        for i, avgs in enumerate(s_avg):
            val = val * rpow(lift(avgs[k]), seq.p / seq.head[i])
        levels.append(val)
    return _report("RH_p_vector", levels, W.mode, nu=nu)


def _ones_exact(shape) -> np.ndarray:
    out = np.empty(shape, dtype=object)
    out.reshape(-1)[:] = [Fraction(1)] * int(np.prod(shape))
    return out


def testing_integrals(model: DyadicModel, W: WeightVector, seq: ExponentSequence | None = None) -> list[np.ndarray]:
    """For every cube B: integral_B M(sigma chi_B)^p v.

    On B the maximal function of sigma chi_B only sees subcubes of B: strict
    ancestors B' give prod sigma_i(B)/|B'| < prod avg_B sigma_i, and with a
    tail they give 0.  So M(sigma chi_B)(x) is the maximum of the product of
    averages over the cubes between x's leaf and B, a bottom-up suffix maximum.
    """
    seq = seq or W.seq
    mode = W.mode
    prods = []
    s_avg = [model.averages(s) for s in W.sigma]
    for k in range(model.K + 1):
        if s_avg:
            val = s_avg[0][k]
            for avgs in s_avg[1:]:
                val = val * avgs[k]
        else:
            val = np.ones(model.level_shape(k)) if mode == FLOAT else _ones_exact(model.level_shape(k))
        prods.append(val)
    out = [None] * (model.K + 1)
    m = None
    for k in range(model.K, -1, -1):
        leaf_vals = model.to_leaves(prods[k], k)
        m = leaf_vals if m is None else np.maximum(m, leaf_vals)
        integrand = exact_leaf_power(m, seq.p) * W.v
        out[k] = _block_integrals(model, integrand, k)
    return out


def _block_integrals(model: DyadicModel, leaf_values: np.ndarray, k: int) -> np.ndarray:
    """Level-k array of integrals of a leaf function, by one reshape-sum."""
    shape = []
    for _ in range(model.n):
        shape += [1 << k, 1 << (model.K - k)]
    grid = model.leaf_grid(leaf_values).reshape(shape)
    sums = grid.sum(axis=tuple(range(1, 2 * model.n, 2)))
    return sums * model.leaf_measure(mode_of(leaf_values))


def sp_testing_constant(model: DyadicModel, W: WeightVector, seq: ExponentSequence | None = None) -> ConstantReport:
    """[v, omega]_{S_p}: max_B (integral_B M(sigma chi_B)^p v)^{1/p} / prod_i sigma_i(B)^{1/p_i}.

    Tail coordinates contribute sigma_i(B) = |B| each, i.e. |B|^{s_N} overall.
    """
    seq = seq or W.seq
    mode = W.mode
    T = testing_integrals(model, W, seq)
    s_int = [model.integrals(s) for s in W.sigma]
    s_N = seq.tail_harmonic
    levels = []
    for k in range(model.K + 1):
        val = rpow(lift(T[k]), seq.inv_p)
        for i, ints in enumerate(s_int):
            val = val / rpow(lift(ints[k]), 1 / seq.head[i])
        if s_N:
            size = model.cube_measure(k, mode)
            val = val / (PowerProduct.of(size) ** s_N if mode == EXACT else size ** float(s_N))
        levels.append(val)
    return _report("S_p_vector", levels, mode)


class CarlesonFamily:
    """Nonnegative numbers a_B on the cubes of a model (missing cubes are 0)."""

    def __init__(self, model: DyadicModel, levels: Sequence[np.ndarray]):
        if len(levels) != model.K + 1:
            raise ValueError("need one array per level")
        self.model = model
        self.levels = [np.asarray(a).reshape(model.level_shape(k)) for k, a in enumerate(levels)]
        for a in self.levels:
            if not all(x >= 0 for x in a.reshape(-1)):
                raise ValueError("Carleson coefficients must be nonnegative")

    @classmethod
    def zeros(cls, model: DyadicModel, mode: str = FLOAT) -> "CarlesonFamily":
        if mode == EXACT:
            return cls(model, [_zeros_exact(model.level_shape(k)) for k in range(model.K + 1)])
        return cls(model, [np.zeros(model.level_shape(k)) for k in range(model.K + 1)])

    @classmethod
    def from_mapping(cls, model: DyadicModel, values: Mapping, mode: str = FLOAT) -> "CarlesonFamily":
        fam = cls.zeros(model, mode)
        for key, a in values.items():
            cube = key if isinstance(key, CubeId) else CubeId.parse(key)
            model.check_cube(cube)
            fam.levels[cube.level][cube.index] = Fraction(a) if mode == EXACT else float(a)
        return cls(model, fam.levels)

    def __getitem__(self, cube: CubeId):
        return self.levels[cube.level][cube.index]

    def items(self):
        for cube in self.model.cubes():
            yield cube, self[cube]

    def to_dict(self) -> dict:
        return {str(c): float(a) for c, a in self.items() if a != 0}


def _zeros_exact(shape) -> np.ndarray:
    out = np.empty(shape, dtype=object)
    out.reshape(-1)[:] = [Fraction(0)] * int(np.prod(shape))
    return out


def subtree_sums(model: DyadicModel, a: CarlesonFamily) -> list[np.ndarray]:
    """sum_{B subset G} a_B for every G (inclusive), bottom-up."""
    out = [None] * (model.K + 1)
    out[model.K] = a.levels[model.K]
    for k in range(model.K - 1, -1, -1):
        out[k] = a.levels[k] + model.coarsen(out[k + 1])
    return out


def carleson_constant(model: DyadicModel, a: CarlesonFamily, nu: np.ndarray) -> ConstantReport:
    """Smallest A with sum_{B subset G} a_B <= A nu(G) for all G; +inf when impossible."""
    mode = mode_of(nu)
    sums = subtree_sums(model, a)
    masses = model.integrals(nu)
    levels = []
    for S, m in zip(sums, masses):
        if mode == FLOAT:
            with np.errstate(divide="ignore", invalid="ignore"):
                levels.append(np.where(m > 0, S / np.where(m > 0, m, 1.0), np.where(S > 0, math.inf, 0.0)))
            continue
        ratio = np.empty(S.shape, dtype=object if mode == EXACT else np.float64)
        flat_r, flat_s, flat_m = ratio.reshape(-1), S.reshape(-1), m.reshape(-1)
        for j in range(flat_s.shape[0]):
            s, mass = flat_s[j], flat_m[j]
            if mass > 0:
                flat_r[j] = s / mass
            else:
                flat_r[j] = math.inf if s > 0 else (Fraction(0) if mode == EXACT else 0.0)
        levels.append(ratio)
    value, cube = argmax_levels(levels)
    if mode == FLOAT:
        value = float(value)
    return ConstantReport("carleson", value, cube, levels, mode)
