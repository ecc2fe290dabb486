"""Finite dyadic model: the complete 2^n-ary tree of cubes over [0,1)^n.

Leaf functions are 1-D arrays of length 2^{nK} in row-major order of the
(2^K)^n leaf grid.  Per-level data is kept as n-dimensional arrays of shape
(2^k,)*n, so the flattened level-k array lists cubes in lexicographic index
order.  Cube enumeration is by level, then lexicographic index.

Two arithmetic modes share one code path: float64 arrays, or object arrays of
:class:`fractions.Fraction` ("exact").  Every reduction is the same fixed
pairwise block sum in both modes.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterator

import numpy as np

from .exact import to_exact

FLOAT = "float"
EXACT = "exact"
MODES = (FLOAT, EXACT)

DEFAULT_MAX_LEAVES = 1 << 22

_CUBE_RE = re.compile(r"^\s*(\d+)\s*:\s*(\d+(?:\s*,\s*\d+)*)\s*$")


def is_exact(arr: np.ndarray) -> bool:
    return arr.dtype == object


def mode_of(arr: np.ndarray) -> str:
    return EXACT if is_exact(arr) else FLOAT


@dataclass(frozen=True, order=True)
class CubeId:
    level: int
    index: tuple[int, ...]

    def __str__(self) -> str:
        return f"{self.level}:" + ",".join(map(str, self.index))

    @classmethod
    def parse(cls, text: str) -> "CubeId":
        m = _CUBE_RE.match(text)
        if not m:
            raise ValueError(f"bad cube id {text!r}; expected 'k:i0[,i1...]'")
        level = int(m.group(1))
        index = tuple(int(s) for s in m.group(2).split(","))
        if any(i >= 1 << level for i in index):
            raise ValueError(f"cube index out of range in {text!r}")
        return cls(level, index)

    def parent(self) -> "CubeId":
        if self.level == 0:
            raise ValueError("the root cube has no parent")
        return CubeId(self.level - 1, tuple(i >> 1 for i in self.index))

    def children(self) -> list["CubeId"]:
        n = len(self.index)
        out = []
        for bits in np.ndindex(*(2,) * n):
            out.append(CubeId(self.level + 1, tuple(2 * i + b for i, b in zip(self.index, bits))))
        return out

    def contains(self, other: "CubeId") -> bool:
        """True when other is a (non-strict) subcube of self."""
        if other.level < self.level:
            return False
        shift = other.level - self.level
        return all((j >> shift) == i for i, j in zip(self.index, other.index))

    def measure(self) -> Fraction:
        return Fraction(1, 1 << (len(self.index) * self.level))


@dataclass(frozen=True)
class DyadicModel:
    n: int
    K: int
    max_leaves: int = DEFAULT_MAX_LEAVES

    def __post_init__(self):
        if self.n < 1 or self.K < 0:
            raise ValueError("dyadic model needs n >= 1 and K >= 0")
        if self.leaf_count > self.max_leaves:
            raise MemoryError(f"2^{self.n * self.K} leaves exceed the budget of {self.max_leaves}")

    @property
    def leaf_count(self) -> int:
        return 1 << (self.n * self.K)

    @property
    def cube_count(self) -> int:
        return sum(1 << (self.n * k) for k in range(self.K + 1))

    def level_size(self, k: int) -> int:
        return 1 << (self.n * k)

    def level_shape(self, k: int) -> tuple[int, ...]:
        return (1 << k,) * self.n

    def leaf_measure(self, mode: str = FLOAT):
        return self.cube_measure(self.K, mode)

    def cube_measure(self, k: int, mode: str = FLOAT):
        if mode == EXACT:
            return Fraction(1, self.level_size(k))
        return 2.0 ** (-self.n * k)

    def level_offset(self, k: int) -> int:
        return sum(1 << (self.n * j) for j in range(k))

    # enumeration -----------------------------------------------------
    def cubes(self) -> Iterator[CubeId]:
        for k in range(self.K + 1):
            for idx in np.ndindex(*self.level_shape(k)):
                yield CubeId(k, tuple(int(i) for i in idx))

    def cube_at(self, flat: int) -> CubeId:
        """Cube with global enumeration position ``flat``."""
        for k in range(self.K + 1):
            size = self.level_size(k)
            if flat < size:
                idx = np.unravel_index(flat, self.level_shape(k))
                return CubeId(k, tuple(int(i) for i in idx))
            flat -= size
        raise IndexError("cube position out of range")

    def position(self, cube: CubeId) -> int:
        self.check_cube(cube)
        return self.level_offset(cube.level) + int(np.ravel_multi_index(cube.index, self.level_shape(cube.level)))

    def check_cube(self, cube: CubeId) -> None:
        if len(cube.index) != self.n or not 0 <= cube.level <= self.K:
            raise ValueError(f"cube {cube} is not in the model (n={self.n}, K={self.K})")
        if any(not 0 <= i < (1 << cube.level) for i in cube.index):
            raise ValueError(f"cube {cube} has an index out of range")

    @cached_property
    def leaf_coords(self) -> np.ndarray:
        """(leaf_count, n) integer multi-indices of the leaves in leaf order."""
        grid = np.indices(self.level_shape(self.K)).reshape(self.n, -1).T
        return np.ascontiguousarray(grid)

    def cube_mask(self, cube: CubeId) -> np.ndarray:
        self.check_cube(cube)
        shift = self.K - cube.level
        return np.all((self.leaf_coords >> shift) == np.array(cube.index), axis=1)

    # level transforms --------------------------------------------------
    def coarsen(self, arr: np.ndarray) -> np.ndarray:
        """Sum 2^n child blocks: a level-k array becomes a level-(k-1) array."""
        half = arr.shape[0] // 2
        shape = []
        for _ in range(self.n):
            shape += [half, 2]
        return arr.reshape(shape).sum(axis=tuple(range(1, 2 * self.n, 2)))

    def refine(self, arr: np.ndarray, levels: int = 1) -> np.ndarray:
        """Repeat each cube value onto its descendants ``levels`` below."""
        reps = 1 << levels
        for axis in range(self.n):
            arr = np.repeat(arr, reps, axis=axis)
        return arr

    def to_leaves(self, arr: np.ndarray, k: int) -> np.ndarray:
        """Flattened leaf function that is constant on level-k cubes."""
        return self.refine(arr, self.K - k).reshape(-1)

    def leaf_grid(self, f: np.ndarray) -> np.ndarray:
        return np.asarray(f).reshape(self.level_shape(self.K))

    def integrals(self, f: np.ndarray) -> list[np.ndarray]:
        """Per-level arrays of integral_B f, bottom-up in one pass."""
        levels = [None] * (self.K + 1)
        levels[self.K] = self.leaf_grid(f) * self.leaf_measure(mode_of(f))
        for k in range(self.K, 0, -1):
            levels[k - 1] = self.coarsen(levels[k])
        return levels

    def averages(self, f: np.ndarray) -> list[np.ndarray]:
        mode = mode_of(f)
        return [I / self.cube_measure(k, mode) for k, I in enumerate(self.integrals(f))]

    def counts(self, mask: np.ndarray) -> list[np.ndarray]:
        """Per-level integer leaf counts of a boolean leaf mask."""
        levels = [None] * (self.K + 1)
        levels[self.K] = self.leaf_grid(mask.astype(np.int64))
        for k in range(self.K, 0, -1):
            levels[k - 1] = self.coarsen(levels[k])
        return levels

    def leaves_per_cube(self, k: int) -> int:
        return 1 << (self.n * (self.K - k))


@dataclass(frozen=True)
class CubeTable:
    """Integral and average of one leaf function on every cube."""

    model: DyadicModel
    integral: list[np.ndarray]
    average: list[np.ndarray]

    def __getitem__(self, cube: CubeId):
        self.model.check_cube(cube)
        return self.integral[cube.level][cube.index], self.average[cube.level][cube.index]

    def items(self) -> Iterator[tuple[CubeId, tuple]]:
        for cube in self.model.cubes():
            yield cube, self[cube]

    def __len__(self) -> int:
        return self.model.cube_count


def build_model(n: int, K: int, max_leaves: int = DEFAULT_MAX_LEAVES) -> DyadicModel:
    return DyadicModel(n, K, max_leaves)


def as_leaf_function(model: DyadicModel, values, mode: str = FLOAT, positive: bool = False,
                     name: str = "leaf function") -> np.ndarray:
    """Validate and convert leaf values to the array type of ``mode``."""
    if mode not in MODES:
        raise ValueError(f"unknown arithmetic mode {mode!r}")
    raw = np.asarray(values, dtype=object if mode == EXACT else None).reshape(-1)
    if raw.shape[0] != model.leaf_count:
        raise ValueError(f"{name} has {raw.shape[0]} values, model has {model.leaf_count} leaves")
    if mode == EXACT:
        arr = np.empty(raw.shape[0], dtype=object)
        arr[:] = [to_exact(x) for x in raw]
    else:
        arr = np.array(raw, dtype=np.float64)
        if not np.all(np.isfinite(arr)):
            raise ValueError(f"{name} must be finite")
    if mode == FLOAT:
        ok = bool(np.all(arr > 0)) if positive else bool(np.all(arr >= 0))
    else:
        ok = all(x > 0 for x in arr) if positive else all(x >= 0 for x in arr)
    if not ok:
        raise ValueError(f"{name} must be {'strictly positive' if positive else 'nonnegative'}")
    return arr


def aggregate(model: DyadicModel, f: np.ndarray) -> CubeTable:
    integ = model.integrals(f)
    mode = mode_of(f)
    avg = [I / model.cube_measure(k, mode) for k, I in enumerate(integ)]
    return CubeTable(model, integ, avg)


def cond_expectation(model: DyadicModel, f: np.ndarray, k: int) -> np.ndarray:
    """E_k f: replace f by its averages on the level-k cubes."""
    if not 0 <= k <= model.K:
        raise ValueError(f"level {k} outside [0, {model.K}]")
    return model.to_leaves(model.averages(f)[k], k)


def weighted_measure(model: DyadicModel, mu: np.ndarray, cube: CubeId):
    """mu(B) = integral of mu over B."""
    model.check_cube(cube)
    return model.integrals(mu)[cube.level][cube.index]
