"""Dyadic maximal operators on the finite model.

The supremum over dyadic cubes containing x is a maximum over the K+1
ancestors of the leaf containing x, computed by a single top-down running
maximum over per-level arrays (O(#cubes)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .dyadic_model import CubeId, DyadicModel, is_exact, mode_of
from .function_vectors import FunctionVector


def weighted_averages(model: DyadicModel, f: np.ndarray, mu: np.ndarray | None = None) -> list[np.ndarray]:
    """Per-level mu-averages (integral_B f mu)/(integral_B mu); Lebesgue when mu is None."""
    if mu is None:
        return model.averages(f)
    num = model.integrals(f * mu)
    den = model.integrals(mu)
    return [a / b for a, b in zip(num, den)]


def running_max(model: DyadicModel, levels: Sequence[np.ndarray], floor: int = 0) -> np.ndarray:
    """Leaf array of max over ancestor levels >= floor."""
    if not 0 <= floor <= model.K:
        raise ValueError(f"level floor {floor} outside [0, {model.K}]")
    cur = levels[floor]
    for k in range(floor + 1, model.K + 1):
        cur = np.maximum(model.refine(cur), levels[k])
    return cur.reshape(-1)


def maximal(model: DyadicModel, f: np.ndarray, mu: np.ndarray | None = None) -> np.ndarray:
    """M_d f, or the weighted M_d^mu f when mu is given."""
    return running_max(model, weighted_averages(model, f, mu))


def tail_full_levels(model: DyadicModel, F: FunctionVector) -> list[np.ndarray] | None:
    """Per-level boolean arrays: cube lies inside the tail support (tail average 1)."""
    if not F.has_tail:
        return None
    if F.tail_support is None:
        return [np.ones(model.level_shape(k), dtype=bool) for k in range(model.K + 1)]
    counts = model.counts(F.tail_support)
    return [c == model.leaves_per_cube(k) for k, c in enumerate(counts)]


def level_products(model: DyadicModel, F: FunctionVector,
                   measures: Sequence[np.ndarray] | None = None) -> list[np.ndarray]:
    """For every cube B: prod_i avg_B f_i, tail included as its 0/1 limit.

    ``measures`` gives per-coordinate weights sigma_i for the head, turning the
    averages into (1/sigma_i(B)) integral_B f_i sigma_i; tail measures are 1.
    """
    if measures is not None and len(measures) != F.N:
        raise ValueError("need one measure per head coordinate")
    per_coord = [weighted_averages(model, f, None if measures is None else measures[i])
                 for i, f in enumerate(F.head)]
    full = tail_full_levels(model, F)
    out = []
    for k in range(model.K + 1):
        if per_coord:
            prod = per_coord[0][k]
            for avgs in per_coord[1:]:
                prod = prod * avgs[k]
        else:
            prod = np.ones(model.level_shape(k))
        if full is not None:
            prod = np.where(full[k], prod, 0 * prod)
        out.append(prod)
    return out


def product_maximal(model: DyadicModel, F: FunctionVector,
                    measures: Sequence[np.ndarray] | None = None,
                    max_level_floor: int | None = None) -> np.ndarray:
    """The generalized maximal function sup_{x in B} prod_i avg_B f_i.

    With ``measures`` this is the weighted variant; ``max_level_floor`` keeps
    only cubes at that level or finer (side length at most 2^-floor).
    """
    return running_max(model, level_products(model, F, measures), max_level_floor or 0)


def superlevel_maximal_cubes(model: DyadicModel, F: FunctionVector, lam, strict: bool = True,
                             measures: Sequence[np.ndarray] | None = None) -> list[CubeId]:
    """Maximal cubes with prod avg > lam (>= lam when not strict), in cube order."""
    if not lam > 0:
        raise ValueError("lambda must be positive")
    prods = level_products(model, F, measures)
    out: list[CubeId] = []
    covered = None
    for k, P in enumerate(prods):
        mark = (P > lam) if strict else (P >= lam)
        mark = np.asarray(mark, dtype=bool)
        new = mark if covered is None else mark & ~covered
        for idx in zip(*np.nonzero(new)):
            out.append(CubeId(k, tuple(int(i) for i in idx)))
        covered = mark if covered is None else covered | mark
        if k < model.K:
            covered = model.refine(covered)
    return out


def cubes_union_mask(model: DyadicModel, cubes: Sequence[CubeId]) -> np.ndarray:
    mask = np.zeros(model.leaf_count, dtype=bool)
    for c in cubes:
        mask |= model.cube_mask(c)
    return mask


@dataclass
class StoppingDecomposition:
    alpha: object
    bands: dict[int, np.ndarray] = field(default_factory=dict)
    selected: dict[int, list[CubeId]] = field(default_factory=dict)
    pieces: dict[int, list[np.ndarray]] = field(default_factory=dict)


def band_index(value, alpha) -> int:
    """The integer k with alpha^k < value <= alpha^{k+1}."""
    if not value > 0:
        raise ValueError("band index needs a positive value")
    if isinstance(value, Fraction) or isinstance(alpha, Fraction):
        guess = math.ceil(math.log(float(value)) / math.log(float(alpha))) - 1
        a = Fraction(alpha)
        k = guess
        while not a**k < value:
            k -= 1
        while not value <= a ** (k + 1):
            k += 1
        return k
    k = math.ceil(math.log(value) / math.log(alpha)) - 1
    while not alpha**k < value:
        k -= 1
    while not value <= alpha ** (k + 1):
        k += 1
    return k


def stopping_decomposition(model: DyadicModel, F: FunctionVector, alpha) -> StoppingDecomposition:
    """Bands S_k = {alpha^k < M F <= alpha^{k+1}} split along maximal cubes.

    Within band k the cubes B_{k,j} are the maximal cubes with product average
    above alpha^k, in cube order, and E_{k,j} = (B_{k,j} minus earlier B_{k,s})
    intersected with S_k.
    """
    if not alpha > 1:
        raise ValueError("alpha must exceed 1")
    values = product_maximal(model, F)
    exact = is_exact(values)
    a = Fraction(alpha) if exact else float(alpha)
    dec = StoppingDecomposition(a)
    band_of = {}
    for leaf, m in enumerate(values):
        if m > 0:
            band_of[leaf] = band_index(m, a)
    for k in sorted(set(band_of.values())):
        S = np.zeros(model.leaf_count, dtype=bool)
        S[[leaf for leaf, b in band_of.items() if b == k]] = True
        dec.bands[k] = S
        cubes = superlevel_maximal_cubes(model, F, a**k, strict=True)
        dec.selected[k] = cubes
        seen = np.zeros(model.leaf_count, dtype=bool)
        pieces = []
        for c in cubes:
            cm = model.cube_mask(c)
            pieces.append(cm & ~seen & S)
            seen |= cm
        dec.pieces[k] = pieces
    return dec


def superlevel_measure(model: DyadicModel, values: np.ndarray, lam, weight: np.ndarray, strict: bool = False):
    """weight({values >= lam}) (or > lam)."""
    mask = values > lam if strict else values >= lam
    mask = np.asarray(mask, dtype=bool)
    return weight[mask].sum() * model.leaf_measure(mode_of(weight))
