"""Infinite function vectors with a finite head and an indicator tail.

A :class:`FunctionVector` stands for (f_1, f_2, ...) where f_1..f_N are
explicit leaf functions and every later coordinate equals one indicator
``chi_E``.  Averages of chi_E lie in [0, 1], and an infinite product of a
constant t in [0, 1] is 1 when t = 1 and 0 otherwise, which is what makes
such vectors exactly computable.  Tail weights are fixed to 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .dyadic_model import EXACT, FLOAT, CubeId, DyadicModel, as_leaf_function, is_exact, mode_of
from .exact import PowerProduct
from .exponents import ExponentSequence


class TailDivergence(ValueError):
    """An infinite power of a factor above 1."""


def infinite_pointwise_product(factors: Sequence, tail_factor=1):
    """prod(factors) * lim_{m->inf} tail_factor**m for tail_factor in [0, 1]."""
    if tail_factor > 1:
        raise TailDivergence(f"tail factor {tail_factor} > 1 diverges")
    if tail_factor < 0:
        raise ValueError("tail factor must be nonnegative")
    out = 1
    for x in factors:
        if x < 0:
            raise ValueError("factors must be nonnegative")
        out = out * x
    return out if tail_factor == 1 else out * 0


def pointwise_product(head: Sequence[np.ndarray], tail_full: np.ndarray | None):
    """Elementwise infinite product: head factors times the 0/1 tail limit.

    ``tail_full`` is a boolean array marking where the tail factor equals 1
    (None means there is no tail, or it is 1 everywhere).
    """
    out = None
    for x in head:
        out = x if out is None else out * x
    if out is None:
        if tail_full is None:
            raise ValueError("empty product needs a tail shape")
        out = np.ones(tail_full.shape, dtype=np.float64)
    if tail_full is not None:
        out = np.where(tail_full, out, 0 * out)
    return out


@dataclass(frozen=True)
class FunctionVector:
    head: tuple[np.ndarray, ...]
    seq: ExponentSequence
    tail_support: np.ndarray | None = None  # boolean leaf mask; None means the whole cube

    @property
    def N(self) -> int:
        return len(self.head)

    @property
    def has_tail(self) -> bool:
        return self.seq.tail is not None

    @property
    def mode(self) -> str:
        return mode_of(self.head[0]) if self.head else FLOAT

    def tail_mask(self, leaf_count: int) -> np.ndarray:
        if self.tail_support is None:
            return np.ones(leaf_count, dtype=bool)
        return self.tail_support

    def scaled(self, j: int, c) -> "FunctionVector":
        head = list(self.head)
        head[j] = head[j] * c
        return FunctionVector(tuple(head), self.seq, self.tail_support)

    def to_dict(self) -> dict:
        support = None if self.tail_support is None else np.flatnonzero(self.tail_support).tolist()
        return {"head": [[_jsonable(x) for x in f] for f in self.head],
                "tail_support": support,
                "exponents": self.seq.to_dict()}


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else int(x)
    return float(x)


def make_function_vector(model: DyadicModel, head: Sequence, tail_template=None,
                         seq: ExponentSequence | None = None, mode: str = FLOAT) -> FunctionVector:
    """Validate a head and a 0/1 tail template into a FunctionVector.

    ``tail_template`` may be None (chi of the whole cube), a length-leaf_count
    array of 0/1 values, or a CubeId (its indicator).
    """
    if seq is None:
        raise ValueError("an exponent sequence is required")
    if len(head) != seq.N:
        raise ValueError(f"head has {len(head)} functions but the exponents have N = {seq.N}")
    funcs = tuple(as_leaf_function(model, f, mode, name=f"f_{i + 1}") for i, f in enumerate(head))
    support = None
    if isinstance(tail_template, CubeId):
        support = model.cube_mask(tail_template)
    elif tail_template is not None:
        t = np.asarray(tail_template, dtype=object if mode == EXACT else np.float64).reshape(-1)
        if t.shape[0] != model.leaf_count:
            raise ValueError("tail template length does not match the model")
        if any(x > 1 for x in t):
            raise TailDivergence("tail diverges: template exceeds 1, so its infinite power is unbounded")
        if any(x != 0 and x != 1 for x in t):
            raise ValueError("tail template must be an indicator (values 0 or 1)")
        support = np.array([x == 1 for x in t], dtype=bool)
    if support is not None and support.all():
        support = None
    return FunctionVector(funcs, seq, support)


def dual_weight(omega: np.ndarray, p_i) -> np.ndarray:
    """sigma = omega ** (-1/(p_i - 1))."""
    e = Fraction(p_i)
    expo = -1 / (e - 1)
    if is_exact(omega):
        out = np.empty(omega.shape[0], dtype=object)
        for j, w in enumerate(omega):
            q = (PowerProduct.of(w) ** expo).rational()
            if q is None:
                raise ValueError(f"exact mode needs rational dual weights; omega^({expo}) is irrational")
            out[j] = q
        return out
    return np.power(omega, float(expo))


@dataclass(frozen=True)
class WeightVector:
    """Head weights omega_1..omega_N (tail weights are 1) and the weight v."""

    omega: tuple[np.ndarray, ...]
    v: np.ndarray
    seq: ExponentSequence
    sigma: tuple[np.ndarray, ...] = field(init=False)

    def __post_init__(self):
        if len(self.omega) != self.seq.N:
            raise ValueError(f"{len(self.omega)} head weights but the exponents have N = {self.seq.N}")
        object.__setattr__(self, "sigma", tuple(dual_weight(w, q) for w, q in zip(self.omega, self.seq.head)))

    @property
    def mode(self) -> str:
        return mode_of(self.v)

    def to_dict(self) -> dict:
        return {"omega": [[_jsonable(x) for x in w] for w in self.omega],
                "v": [_jsonable(x) for x in self.v],
                "exponents": self.seq.to_dict()}


def make_weight_vector(model: DyadicModel, omega: Sequence, v, seq: ExponentSequence,
                       mode: str = FLOAT) -> WeightVector:
    ws = tuple(as_leaf_function(model, w, mode, positive=True, name=f"omega_{i + 1}") for i, w in enumerate(omega))
    return WeightVector(ws, as_leaf_function(model, v, mode, positive=True, name="v"), seq)


def trivial_weights(model: DyadicModel, seq: ExponentSequence, mode: str = FLOAT) -> WeightVector:
    one = [1] * model.leaf_count
    return make_weight_vector(model, [one] * seq.N, one, seq, mode)


def weighted_power_integral(model: DyadicModel, f: np.ndarray, p, weight: np.ndarray | None = None):
    """integral f^p * weight (weight None means Lebesgue)."""
    if is_exact(f):
        powered = np.empty(f.shape[0], dtype=object)
        e = Fraction(p)
        for j, x in enumerate(f):
            q = (PowerProduct.of(x) ** e).rational()
            if q is None:
                raise ValueError("exact mode: f^p is irrational on some leaf")
            powered[j] = q
    else:
        powered = np.power(f, float(p))
    if weight is not None:
        powered = powered * weight
    return powered.sum() * model.leaf_measure(mode_of(f))


def weighted_lp_norm(model: DyadicModel, f: np.ndarray, p, weight: np.ndarray | None = None):
    total = weighted_power_integral(model, f, p, weight)
    if is_exact(f):
        return PowerProduct.of(total) ** (1 / Fraction(p))
    return float(total) ** (1.0 / float(p))


def tail_norm_factor(model: DyadicModel, F: FunctionVector):
    """prod_{i>N} ||chi_E||_{L^{p_i}} = |E|^{s_N} in closed form."""
    if not F.has_tail:
        return 1 if F.mode == EXACT else 1.0
    s = F.seq.tail_harmonic
    if F.tail_support is None:
        measure = 1
    else:
        measure = Fraction(int(F.tail_support.sum()), model.leaf_count)
    if F.mode == EXACT:
        return PowerProduct.of(measure) ** s
    return float(measure) ** float(s)


def product_norm(model: DyadicModel, F: FunctionVector, W: WeightVector | None = None):
    """prod_i ||f_i||_{L^{p_i}(omega_i)} including the closed-form tail factor."""
    out = tail_norm_factor(model, F)
    for i, f in enumerate(F.head):
        w = None if W is None else W.omega[i]
        out = out * weighted_lp_norm(model, f, F.seq.head[i], w)
    return out


def head_values_product(F: FunctionVector, leaf_count: int):
    """Pointwise prod_i f_i(x) including the infinite tail: chi_E times the head."""
    tail = F.tail_mask(leaf_count) if F.has_tail else None
    if not F.head and tail is None:
        return np.ones(leaf_count)
    return pointwise_product(F.head, tail)
