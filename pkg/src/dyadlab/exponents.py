"""Exponent sequences p_1, p_2, ... with 1/p = sum 1/p_i.

A sequence is a finite head plus an optional geometric tail ``p_i = scale *
base**i`` for every index i past the head.  The geometric tail admits closed
forms for all the remainders we need, so every infinite sum or product below
comes back as a value together with a rigorous bound on what was left out.

Indices are 1-based throughout, matching the usual ``p_1, p_2, ...``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, NamedTuple

from .exact import to_exact

DEFAULT_TOL = 1e-12
MAX_TERMS = 1_000_000

FINITE = "finite"
PLUS_INF = "+inf"
MINUS_INF = "-inf"
UNDEFINED = "undefined"


@dataclass(frozen=True)
class Geometric:
    """Tail rule ``p_i = scale * base**i``."""

    base: Fraction
    scale: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "base", to_exact(self.base))
        object.__setattr__(self, "scale", to_exact(self.scale))
        if self.base <= 1:
            raise ValueError("geometric tail needs base > 1")
        if self.scale <= 0:
            raise ValueError("geometric tail needs scale > 0")

    def exponent(self, i: int) -> Fraction:
        return self.scale * self.base**i

    def harmonic_remainder(self, m: int) -> Fraction:
        """sum_{i > m} 1/p_i in closed form."""
        return 1 / (self.scale * self.base**m * (self.base - 1))


@dataclass(frozen=True)
class ExponentSequence:
    head: tuple[Fraction, ...]
    tail: Geometric | None = None
    _inv_p: Fraction = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        head = tuple(to_exact(x) for x in self.head)
        object.__setattr__(self, "head", head)
        for i, p_i in enumerate(head, start=1):
            if p_i <= 1:
                raise ValueError(f"exponent must exceed 1 (p_{i} = {p_i})")
        if self.tail is not None and self.tail.exponent(len(head) + 1) <= 1:
            raise ValueError("exponent must exceed 1 (first tail term)")
        if not head and self.tail is None:
            raise ValueError("exponent sequence is empty")
        inv = sum((1 / q for q in head), Fraction(0)) + self.tail_harmonic
        object.__setattr__(self, "_inv_p", inv)

    @property
    def N(self) -> int:
        return len(self.head)

    @property
    def p(self) -> Fraction:
        return 1 / self._inv_p

    @property
    def inv_p(self) -> Fraction:
        return self._inv_p

    @property
    def tail_harmonic(self) -> Fraction:
        """s_N = sum_{i > N} 1/p_i (zero without a tail)."""
        if self.tail is None:
            return Fraction(0)
        return self.tail.harmonic_remainder(self.N)

    def exponent(self, i: int) -> Fraction:
        if i < 1:
            raise IndexError("exponent indices start at 1")
        if i <= self.N:
            return self.head[i - 1]
        if self.tail is None:
            raise IndexError(f"sequence has only {self.N} exponents")
        return self.tail.exponent(i)

    def conjugate(self, i: int) -> Fraction:
        p_i = self.exponent(i)
        return p_i / (p_i - 1)

    def head_conjugates(self) -> tuple[Fraction, ...]:
        return tuple(q / (q - 1) for q in self.head)

    def iter_exponents(self, limit: int | None = None) -> Iterator[Fraction]:
        i = 1
        while limit is None or i <= limit:
            if i > self.N and self.tail is None:
                return
            yield self.exponent(i)
            i += 1

    def to_dict(self) -> dict:
        out: dict = {"head": [str(q) for q in self.head]}
        if self.tail is not None:
            out["tail"] = {"kind": "geometric", "base": str(self.tail.base),
                           "scale": str(self.tail.scale)}
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "ExponentSequence":
        tail = d.get("tail")
        if tail is not None:
            if tail.get("kind", "geometric") != "geometric":
                raise ValueError(f"unknown tail kind {tail.get('kind')!r}")
            tail = Geometric(tail["base"], tail.get("scale", 1))
        return cls(tuple(d.get("head", ())), tail)


class HarmonicSum(NamedTuple):
    p: Fraction
    tail_bound: Fraction


class ProductEstimate(NamedTuple):
    value: float
    remainder_bound: float


def harmonic_sum(seq: ExponentSequence) -> HarmonicSum:
    """Return p with 1/p = sum 1/p_i and the geometric remainder past the head.

    |sum_{i <= M} 1/p_i - 1/p| <= tail_bound for every truncation M >= N.
    """
    return HarmonicSum(seq.p, seq.tail_harmonic)


def _log_conjugate(p_i: float) -> float:
    return -math.log1p(-1.0 / p_i)


def conjugate_partial_products(seq: ExponentSequence, m: int) -> list[float]:
    """Partial products prod_{i<=M} p'_i for M = 1..m (fewer without a tail)."""
    out = []
    acc = 0.0
    for q in seq.iter_exponents(m):
        acc += _log_conjugate(float(q))
        out.append(math.exp(acc))
    return out


def _tail_products(seq: ExponentSequence, tol: float, log_term, log_remainder) -> ProductEstimate:
    # head factors are exact; tail terms accumulate in log space until the
    # closed-form remainder bound falls below tol
    logs = [log_term(float(q)) for q in seq.head]
    if seq.tail is None:
        value = math.exp(math.fsum(logs))
        return ProductEstimate(value, value * len(logs) * 4 * 2**-52 if logs else 0.0)
    i = seq.N
    while True:
        try:
            partial = math.exp(math.fsum(logs))
            rem = log_remainder(i)
            bound = partial * math.expm1(rem) + partial * (len(logs) + 4) * 2**-52
        except OverflowError:
            raise ValueError(f"tolerance {tol} unreachable: the partial products overflow") from None
        # absolute for products below 1, relative above (rounding alone is ~ partial * eps)
        if bound <= tol * max(1.0, partial):
            return ProductEstimate(partial, bound)
        i += 1
        if i - seq.N > MAX_TERMS:
            raise ValueError(f"tolerance {tol} unreachable within {MAX_TERMS} tail terms")
        logs.append(log_term(float(seq.exponent(i))))


def conjugate_product(seq: ExponentSequence, tol: float = DEFAULT_TOL) -> ProductEstimate:
    """prod p'_i as a monotone partial product plus a rigorous remainder.

    Uses log p'_i <= 1/(p_i - 1) and 1/(p_j - 1) <= (1/p_j)/(1 - 1/p_{i+1})
    for j > i, so the omitted log-mass is at most the harmonic remainder scaled
    by that constant.  The true product lies in [value, value + remainder_bound],
    with remainder_bound <= tol * max(1, value).
    """
    if seq.tail is None:
        exact = math.prod(seq.head_conjugates())
        return ProductEstimate(float(exact), 0.0)

    def log_remainder(i: int) -> float:
        c = 1.0 / (1.0 - 1.0 / float(seq.exponent(i + 1)))
        return c * float(seq.tail.harmonic_remainder(i))

    return _tail_products(seq, tol, _log_conjugate, log_remainder)


@dataclass(frozen=True)
class SeriesClassification:
    value: float
    status: str

    @property
    def is_finite(self) -> bool:
        return self.status == FINITE


@dataclass(frozen=True)
class RegularityConstants:
    log_sum: SeriesClassification
    grafakos_product: float
    remainder_bound: float


def _geometric_moments(x: float, m: int) -> tuple[float, float]:
    """(sum_{i>=m} x^i, sum_{i>=m} i x^i) for 0 < x < 1."""
    xm = x**m
    return xm / (1 - x), xm * (m - (m - 1) * x) / (1 - x) ** 2


def _log_over_p_tail(tail: Geometric, m: int) -> float:
    # sum_{i>=m} ln(s r^i)/(s r^i) = (ln s * G0 + ln r * G1)/s with x = 1/r
    s, r = float(tail.scale), float(tail.base)
    g0, g1 = _geometric_moments(1 / r, m)
    return (math.log(s) * g0 + math.log(r) * g1) / s


def regularity_constants(seq: ExponentSequence, tol: float = DEFAULT_TOL) -> RegularityConstants:
    """sum ln(p_i)/p_i and, when finite, prod p_i^{p_i'/p_i} p_i'.

    The product is read per index (each factor uses its own p_i and p_i').
    """
    head_log_sum = math.fsum(math.log(float(q)) / float(q) for q in seq.head)
    if seq.tail is None:
        log_sum = head_log_sum
    else:
        log_sum = head_log_sum + _log_over_p_tail(seq.tail, seq.N + 1)
    classification = SeriesClassification(log_sum, FINITE)

    def log_term(q: float) -> float:
        return math.log(q) / (q - 1) + _log_conjugate(q)

    def log_remainder(i: int) -> float:
        # ln p_j/(p_j-1) + ln p_j' <= c (ln p_j + 1)/p_j for j > i
        c = 1.0 / (1.0 - 1.0 / float(seq.exponent(i + 1)))
        return c * (_log_over_p_tail(seq.tail, i + 1) + float(seq.tail.harmonic_remainder(i)))

    est = _tail_products(seq, tol, log_term, log_remainder)
    if seq.tail is None:
        exact_head = math.prod(float(q) ** (1 / (float(q) - 1)) * float(q / (q - 1)) for q in seq.head)
        est = ProductEstimate(exact_head, est.remainder_bound)
    return RegularityConstants(classification, est.value, est.remainder_bound)


# ---------------------------------------------------------------------------
# series as integrals on (N, 2^N, lambda)


@dataclass(frozen=True)
class PowerGeometric:
    """Closed-form tail term ``coef * i**power * ratio**i``."""

    coef: float
    power: int = 0
    ratio: float = 1.0

    def __post_init__(self):
        if self.power < 0 or int(self.power) != self.power:
            raise ValueError("power must be a nonnegative integer")

    def term(self, i: int) -> float:
        return self.coef * i**self.power * self.ratio**i


@dataclass(frozen=True)
class RealSequence:
    """Explicit head values b_1..b_H followed by a PowerGeometric tail (or zeros)."""

    head: tuple[float, ...] = ()
    tail: PowerGeometric | None = None

    def term(self, i: int) -> float:
        if i <= len(self.head):
            return float(self.head[i - 1])
        return 0.0 if self.tail is None else self.tail.term(i)


def _polylog_neg(k: int, x: float) -> float:
    """sum_{i>=1} i^k x^i for |x| < 1, via Eulerian numbers."""
    if k == 0:
        return x / (1 - x)
    eulerian = [sum((-1) ** j * math.comb(k + 1, j) * (m + 1 - j) ** k for j in range(m + 1))
                for m in range(k)]
    return x * sum(a * x**m for m, a in enumerate(eulerian)) / (1 - x) ** (k + 1)


def _power_geometric_from(k: int, x: float, m: int) -> float:
    """sum_{i>=m} i^k x^i for |x| < 1."""
    return _polylog_neg(k, x) - math.fsum(i**k * x**i for i in range(1, m))


def weighted_series_sum(lam: RealSequence, b: RealSequence, atol: float = 1e-12) -> SeriesClassification:
    """Classify sum lambda_i b_i as an integral of b against the probability lambda.

    A = sum lambda_i b_i^+ and B = sum lambda_i b_i^- are computed separately:
    both finite gives A - B; exactly one infinite gives +inf or -inf; both
    infinite leaves the sum undefined.
    """
    if lam.tail is not None and (lam.tail.power != 0 or not 0 < lam.tail.ratio < 1):
        raise ValueError("lambda tail must be geometric with ratio in (0, 1)")
    H = max(len(lam.head), len(b.head))
    lam_head = [lam.term(i) for i in range(1, H + 1)]
    lam_total = math.fsum(lam_head)
    if lam.tail is not None:
        lam_total += lam.tail.coef * _power_geometric_from(0, lam.tail.ratio, H + 1)
        tail_lam_ok = lam.tail.coef * lam.tail.ratio ** (H + 1) > 0
    else:
        tail_lam_ok = True
    if any(not 0 < x < 1 for x in lam_head) or not tail_lam_ok or abs(lam_total - 1) > atol:
        raise ValueError("lambda must satisfy lambda_i in (0,1) and sum lambda_i = 1")

    pos = [lam_head[i - 1] * max(b.term(i), 0.0) for i in range(1, H + 1)]
    neg = [lam_head[i - 1] * max(-b.term(i), 0.0) for i in range(1, H + 1)]
    A, B = math.fsum(pos), math.fsum(neg)

    if lam.tail is not None and b.tail is not None and b.tail.coef != 0:
        coef = lam.tail.coef * b.tail.coef
        k = b.tail.power
        x = lam.tail.ratio * b.tail.ratio
        m = H + 1
        if abs(x) >= 1:
            if x > 0:
                return SeriesClassification(math.inf if coef > 0 else -math.inf,
                                            PLUS_INF if coef > 0 else MINUS_INF)
            return SeriesClassification(math.nan, UNDEFINED)
        if x >= 0:
            t = abs(coef) * _power_geometric_from(k, x, m)
            if coef > 0:
                A += t
            else:
                B += t
        else:
            y = -x
            even = (_power_geometric_from(k, y, m) + _power_geometric_from(k, -y, m)) / 2
            odd = (_power_geometric_from(k, y, m) - _power_geometric_from(k, -y, m)) / 2
            # sign of coef * (-1)^i
            pos_part, neg_part = (even, odd) if coef > 0 else (odd, even)
            A += abs(coef) * pos_part
            B += abs(coef) * neg_part
    return SeriesClassification(A - B, FINITE)
