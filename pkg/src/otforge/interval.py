"""Closed intervals with rational endpoints and certified elementary functions.

Endpoints are Fractions. To keep denominators from exploding, results can
be rounded outward to dyadic rationals with ``Interval.rounded(bits)``;
outward rounding only ever enlarges an enclosure.

Logarithm scheme (argument reduction)::

    x = 2**k * m,  m in [1, 2)
    log x = k * log 2 + 2 * atanh((m - 1) / (m + 1))
    log 2 = 2 * atanh(1/3)

``atanh(z) = sum z**(2i+1) / (2i+1)``; for 0 <= z <= 1/3 the tail after
the K-th term is bounded by ``z**(2K+3) / ((2K+3) * (1 - z*z))``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor, ceil

from .errors import DomainError, UndeterminedError


def _floor_dyadic(x: Fraction, bits: int) -> Fraction:
    return Fraction(floor(x * (1 << bits)), 1 << bits)


def _ceil_dyadic(x: Fraction, bits: int) -> Fraction:
    return Fraction(ceil(x * (1 << bits)), 1 << bits)


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = Fraction(self.lo), Fraction(self.hi)
        if lo > hi:
            raise DomainError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, x) -> Interval:
        return cls(Fraction(x), Fraction(x))

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def sign(self) -> int | None:
        """+1 / -1 when the interval excludes zero, 0 for [0, 0], else None."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.lo == 0 == self.hi:
            return 0
        return None

    def intersects(self, other: Interval) -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def subset_of(self, other: Interval) -> bool:
        return other.lo <= self.lo and self.hi <= other.hi

    def rounded(self, bits: int) -> Interval:
        return Interval(_floor_dyadic(self.lo, bits), _ceil_dyadic(self.hi, bits))

    def _coerce(self, other) -> Interval:
        if isinstance(other, Interval):
            return other
        return Interval.point(other)

    def __add__(self, other):
        o = self._coerce(other)
        return Interval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other):
        o = self._coerce(other)
        return Interval(self.lo - o.hi, self.hi - o.lo)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        ps = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Interval(min(ps), max(ps))

    __rmul__ = __mul__

    def reciprocal(self) -> Interval:
        if self.contains_zero():
            raise UndeterminedError("division by an interval containing zero")
        return Interval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other):
        return self * self._coerce(other).reciprocal()

    def __abs__(self):
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Interval(Fraction(0), max(-self.lo, self.hi))

    def to_json(self) -> list:
        return [str(self.lo), str(self.hi)]

    @classmethod
    def from_json(cls, pair) -> Interval:
        return cls(Fraction(pair[0]), Fraction(pair[1]))

    def __repr__(self):
        return f"Interval({float(self.lo):.6g}, {float(self.hi):.6g})"


def _atanh_bounds_exact(z: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    # Fixed-point summation at w bits. Rounding every step down (resp. up)
    # gives a lower (resp. upper) bound because all terms are positive and
    # each update is monotone in its inputs. Requires 0 <= z <= 1/3.
    if z == 0:
        return Fraction(0), Fraction(0)
    w = bits + 16
    one = 1 << w
    zlo = floor(z * one)
    zhi = ceil(z * one)
    # lower bound: truncated series, floor rounding
    z2 = (zlo * zlo) >> w
    p, s, k = zlo, 0, 0
    while p:
        s += p // (2 * k + 1)
        p = (p * z2) >> w
        k += 1
    lo = Fraction(s, one)
    # upper bound: ceil rounding, plus tail <= p / ((2k+1) * (1 - z^2)), 1 - z^2 >= 8/9
    z2 = -((-zhi * zhi) >> w)
    p, s, k = zhi, 0, 0
    while p > 1:
        s += -(-p // (2 * k + 1))
        p = -((-p * z2) >> w)
        k += 1
    s += -(-9 * p // (8 * (2 * k + 1)))
    hi = Fraction(s, one)
    return lo, hi


def _log2_bounds(bits: int) -> tuple[Fraction, Fraction]:
    lo, hi = _atanh_bounds_exact(Fraction(1, 3), bits + 2)
    return _floor_dyadic(2 * lo, bits + 4), _ceil_dyadic(2 * hi, bits + 4)


def _log_point_bounds(x: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    if x <= 0:
        raise DomainError("log of a non-positive number")
    if x == 1:
        return Fraction(0), Fraction(0)
    k = x.numerator.bit_length() - x.denominator.bit_length()
    m = x / Fraction(2) ** k
    if m >= 2:
        m /= 2
        k += 1
    elif m < 1:
        m *= 2
        k -= 1
    # enough precision for k * log 2 to stay within budget
    extra = max(abs(k), 1).bit_length()
    l2lo, l2hi = _log2_bounds(bits + extra + 2)
    # round m to a modest dyadic to keep the series cheap, then bound the slack
    z = (m - 1) / (m + 1)
    zl = _floor_dyadic(z, bits + 8)
    zh = _ceil_dyadic(z, bits + 8)
    alo, _ = _atanh_bounds_exact(zl, bits + 4)
    _, ahi = _atanh_bounds_exact(zh, bits + 4)
    log_m = (2 * alo, 2 * ahi)
    if k >= 0:
        lo, hi = k * l2lo + log_m[0], k * l2hi + log_m[1]
    else:
        lo, hi = k * l2hi + log_m[0], k * l2lo + log_m[1]
    return _floor_dyadic(lo, bits + 2), _ceil_dyadic(hi, bits + 2)


def log_interval(x: Interval, bits: int = 64) -> Interval:
    """Certified enclosure of log over a positive interval.

    The added slack is below 2**-bits on each side.
    """
    if x.lo <= 0:
        raise DomainError("log of an interval touching zero or negative values")
    lo, _ = _log_point_bounds(x.lo, bits)
    if x.hi == x.lo:
        _, hi = _log_point_bounds(x.lo, bits)
    else:
        _, hi = _log_point_bounds(x.hi, bits)
    return Interval(lo, hi)


# -- interval linear algebra ------------------------------------------------

def certified_rank(rows: list[list[Interval]]) -> int:
    """Lower bound for the rank of every real matrix inside an interval matrix.

    Gaussian elimination with complete pivoting on the largest-magnitude
    pivot whose enclosure excludes zero. Stops when no such pivot exists.
    """
    m = [list(r) for r in rows]
    if not m:
        return 0
    nrows, ncols = len(m), len(m[0])
    used_rows, used_cols = set(), set()
    r = 0
    while r < min(nrows, ncols):
        best = None
        for i in range(nrows):
            if i in used_rows:
                continue
            for j in range(ncols):
                if j in used_cols or m[i][j].contains_zero():
                    continue
                mag = min(abs(m[i][j].lo), abs(m[i][j].hi))
                if best is None or mag > best[0]:
                    best = (mag, i, j)
        if best is None:
            break
        _, pi, pj = best
        used_rows.add(pi)
        used_cols.add(pj)
        piv = m[pi][pj]
        for i in range(nrows):
            if i in used_rows:
                continue
            f = m[i][pj] / piv
            m[i] = [x - f * y for x, y in zip(m[i], m[pi])]
        r += 1
    return r


def determinant(rows: list[list[Interval]]) -> Interval:
    """Enclosure of the determinant of a square interval matrix.

    Uses elimination when every pivot can be certified nonzero, otherwise
    falls back to cofactor expansion (exact enclosure semantics, any size
    but exponential cost, so only used for small singular-looking matrices).
    """
    n = len(rows)
    if n == 0:
        return Interval.point(1)
    if n <= 4:
        return _cofactor_det(rows)
    m = [list(r) for r in rows]
    acc = Interval.point(1)
    for k in range(n):
        piv_row = None
        best = None
        for i in range(k, n):
            x = m[i][k]
            if not x.contains_zero():
                mag = min(abs(x.lo), abs(x.hi))
                if best is None or mag > best:
                    best, piv_row = mag, i
        if piv_row is None:
            return _cofactor_det(rows)
        if piv_row != k:
            m[k], m[piv_row] = m[piv_row], m[k]
            acc = -acc
        piv = m[k][k]
        acc = acc * piv
        for i in range(k + 1, n):
            f = m[i][k] / piv
            m[i] = m[i][:k] + [x - f * y for x, y in zip(m[i][k:], m[k][k:])]
    return acc


def _cofactor_det(rows):
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = Interval.point(0)
    for j in range(n):
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = rows[0][j] * _cofactor_det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total
