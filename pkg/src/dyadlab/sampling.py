"""Deterministic random instances: weights, function vectors, Carleson families.

All randomness comes from counter-based Philox generators keyed by a 64-bit
seed plus a path of integers, so every stream is reproducible on its own and
independent of how work is scheduled.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .dyadic_model import EXACT, FLOAT, CubeId, DyadicModel
from .exponents import ExponentSequence, Geometric
from .function_vectors import FunctionVector, WeightVector, make_weight_vector
from .weight_constants import CarlesonFamily

# exponents p with 1/(p-1) an integer keep sigma rational in exact mode
EXACT_FRIENDLY = (Fraction(2), Fraction(3, 2), Fraction(4, 3))
FLOAT_CHOICES = (Fraction(3, 2), Fraction(2), Fraction(5, 2), Fraction(3), Fraction(4), Fraction(6))


def make_rng(seed: int, *path: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed) & (2**64 - 1), *path])))


def random_cube(rng: np.random.Generator, model: DyadicModel) -> CubeId:
    level = int(rng.integers(0, model.K + 1))
    return CubeId(level, tuple(int(i) for i in rng.integers(0, 1 << level, size=model.n)))


def random_weight(rng: np.random.Generator, model: DyadicModel, L: float = 2.0) -> np.ndarray:
    """exp(U[-L, L]) per leaf."""
    return np.exp(rng.uniform(-L, L, size=model.leaf_count))


def random_rational_weight(rng: np.random.Generator, model: DyadicModel, top: int = 6) -> np.ndarray:
    out = np.empty(model.leaf_count, dtype=object)
    nums = rng.integers(1, top + 1, size=model.leaf_count)
    dens = rng.integers(1, top + 1, size=model.leaf_count)
    out[:] = [Fraction(int(a), int(b)) for a, b in zip(nums, dens)]
    return out


def random_function(rng: np.random.Generator, model: DyadicModel) -> np.ndarray:
    """A nonnegative leaf function from a mix of shapes (smooth, sparse, cube, spike)."""
    kind = int(rng.integers(0, 4))
    if kind == 0:
        return np.exp(1.5 * rng.standard_normal(model.leaf_count))
    if kind == 1:
        keep = rng.random(model.leaf_count) < 0.3
        return np.where(keep, np.exp(rng.standard_normal(model.leaf_count)), 0.0)
    if kind == 2:
        mask = model.cube_mask(random_cube(rng, model))
        return np.where(mask, float(np.exp(rng.standard_normal())), 0.0)
    out = np.zeros(model.leaf_count)
    out[int(rng.integers(0, model.leaf_count))] = float(np.exp(rng.standard_normal()))
    return out


def random_tail(rng: np.random.Generator, model: DyadicModel, seq: ExponentSequence) -> np.ndarray | None:
    if seq.tail is None:
        return None
    u = rng.random()
    if u < 0.5:
        return None
    if u < 0.85:
        mask = model.cube_mask(random_cube(rng, model))
    else:
        mask = rng.random(model.leaf_count) < 0.6
        if not mask.any():
            mask[int(rng.integers(0, model.leaf_count))] = True
    return None if mask.all() else mask


def random_function_vector(rng: np.random.Generator, model: DyadicModel, seq: ExponentSequence,
                           W: WeightVector | None = None) -> FunctionVector:
    """Random F; with W given, one draw in four is a perturbed testing vector sigma chi_B."""
    if W is not None and W.sigma and rng.random() < 0.25:
        cube = random_cube(rng, model)
        mask = model.cube_mask(cube)
        head = tuple(np.where(mask, np.asarray(s, dtype=np.float64) * np.exp(0.3 * rng.standard_normal(model.leaf_count)), 0.0)
                     for s in W.sigma)
        support = mask if seq.tail is not None and not mask.all() and rng.random() < 0.5 else None
        return FunctionVector(head, seq, support)
    head = tuple(random_function(rng, model) for _ in range(seq.N))
    return FunctionVector(head, seq, random_tail(rng, model, seq))


def random_exponents(rng: np.random.Generator, head_size: int, with_tail: bool = False,
                     exact: bool = False) -> ExponentSequence:
    choices = EXACT_FRIENDLY if exact else FLOAT_CHOICES
    head = tuple(choices[int(i)] for i in rng.integers(0, len(choices), size=head_size))
    tail = None
    if with_tail:
        # start the geometric tail above 1 at index N+1
        tail = Geometric(2, 1)
    return ExponentSequence(head, tail)


def random_weight_vector(rng: np.random.Generator, model: DyadicModel, seq: ExponentSequence,
                         mode: str = FLOAT, L: float = 2.0) -> WeightVector:
    if mode == EXACT:
        omega = [random_rational_weight(rng, model) for _ in range(seq.N)]
        v = random_rational_weight(rng, model)
    else:
        omega = [random_weight(rng, model, L) for _ in range(seq.N)]
        v = random_weight(rng, model, L)
    return make_weight_vector(model, omega, v, seq, mode)


def random_carleson(rng: np.random.Generator, model: DyadicModel, density: float = 0.4) -> CarlesonFamily:
    levels = []
    for k in range(model.K + 1):
        shape = model.level_shape(k)
        keep = rng.random(shape) < density
        levels.append(np.where(keep, rng.exponential(1.0, size=shape) * model.cube_measure(k), 0.0))
    return CarlesonFamily(model, levels)


def to_float_weights(W: WeightVector) -> WeightVector:
    if W.mode == FLOAT:
        return W
    return WeightVector(tuple(np.asarray(w, dtype=np.float64) for w in W.omega),
                        np.asarray(W.v, dtype=np.float64), W.seq)
