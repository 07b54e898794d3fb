"""Sturm-certified real root counting, isolation and sign evaluation.

All root bookkeeping happens on squarefree parts. An isolating interval
(lo, hi) never has a root of its defining polynomial at an endpoint, so a
simple root is detected by a sign change of the defining polynomial.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm, gcd as igcd

from .errors import DomainError
from .interval import Interval, log_interval
from .polyring import IntPoly, RatPoly, gcd, squarefree_decomposition, squarefree_part


def _positive_int_multiple(r: RatPoly) -> IntPoly:
    """Integer polynomial c*r with c > 0 (signs preserved), primitive."""
    den = 1
    for c in r.coeffs:
        den = lcm(den, c.denominator)
    ints = [int(c * den) for c in r.coeffs]
    g = 0
    for x in ints:
        g = igcd(g, x)
    return IntPoly(x // g for x in ints) if g else IntPoly()


@lru_cache(maxsize=1024)
def _sturm_chain(coeffs: tuple) -> tuple:
    p = IntPoly(coeffs)
    chain = [p, p.derivative()]
    while chain[-1].degree > 0:
        rem = RatPoly(chain[-2].coeffs) % RatPoly(chain[-1].coeffs)
        if rem.is_zero():
            break
        chain.append(_positive_int_multiple(-rem))
    return tuple(c for c in chain if not c.is_zero())


def sturm_chain(p: IntPoly) -> tuple:
    return _sturm_chain(p.coeffs)


def sign_at_rational(p: IntPoly, x: Fraction) -> int:
    """Exact sign of p(x) without building a Fraction for every Horner step."""
    x = Fraction(x)
    a, b = x.numerator, x.denominator
    acc = 0
    bp = 1
    # acc = sum c_i a^i b^(d-i) = b^d p(x), same sign as p(x) since b > 0
    for c in reversed(p.coeffs):
        acc = acc * a + c * bp
        bp *= b
    return (acc > 0) - (acc < 0)


def _sign_at_inf(p: IntPoly, positive: bool) -> int:
    s = 1 if p.lc > 0 else -1
    if not positive and p.degree % 2:
        s = -s
    return s


def _variations(signs) -> int:
    v = 0
    last = 0
    for s in signs:
        if s == 0:
            continue
        if last and s != last:
            v += 1
        last = s
    return v


def _var_at(chain, x) -> int:
    if x == "+inf":
        return _variations(_sign_at_inf(p, True) for p in chain)
    if x == "-inf":
        return _variations(_sign_at_inf(p, False) for p in chain)
    return _variations(sign_at_rational(p, x) for p in chain)


def count_in(p: IntPoly, lo, hi) -> int:
    """Distinct real roots of p in (lo, hi]; lo/hi may be '-inf'/'+inf'."""
    sq = squarefree_part(p)
    if sq.degree < 1:
        return 0
    chain = sturm_chain(sq)
    return _var_at(chain, lo) - _var_at(chain, hi)


def count_real_roots(p: IntPoly) -> int:
    """Number of distinct real roots."""
    if p.is_zero():
        raise DomainError("zero polynomial has infinitely many roots")
    return count_in(p, "-inf", "+inf")


@dataclass(frozen=True)
class RootCounts:
    distinct_real: int
    distinct_imaginary: int
    real_with_multiplicity: int
    imaginary_with_multiplicity: int


def root_counts(p: IntPoly) -> RootCounts:
    if p.is_zero():
        raise DomainError("zero polynomial")
    dr = di = mr = mi = 0
    for f, mult in squarefree_decomposition(p):
        r = count_real_roots(f)
        dr += r
        di += f.degree - r
        mr += mult * r
        mi += mult * (f.degree - r)
    return RootCounts(dr, di, mr, mi)


def root_bound(p: IntPoly) -> Fraction:
    """Power of two strictly above every |root| (Cauchy bound)."""
    m = max(abs(c) for c in p.coeffs[:-1]) if p.degree > 0 else 0
    bound = 1 + Fraction(m, abs(p.lc))
    k = 0
    while (1 << k) <= bound:
        k += 1
    return Fraction(1 << k)


@dataclass(frozen=True)
class RealAlgebraic:
    """Real root of a squarefree integer polynomial isolated in (lo, hi)."""

    defpoly: IntPoly
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if not self.lo < self.hi:
            raise DomainError("isolating interval must have lo < hi")

    @property
    def interval(self) -> Interval:
        return Interval(self.lo, self.hi)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def check(self) -> bool:
        """Re-verify the invariants with a fresh Sturm count."""
        from .polyring import is_squarefree

        return (
            is_squarefree(self.defpoly)
            and sign_at_rational(self.defpoly, self.lo) != 0
            and sign_at_rational(self.defpoly, self.hi) != 0
            and count_in(self.defpoly, self.lo, self.hi) == 1
        )

    def bisect(self) -> RealAlgebraic:
        p = self.defpoly
        lo, hi = self.lo, self.hi
        slo = sign_at_rational(p, lo)
        mid = (lo + hi) / 2
        sm = sign_at_rational(p, mid)
        if sm == 0:
            q = (hi - lo) / 4
            return RealAlgebraic(p, mid - q, mid + q)
        if sm == slo:
            return RealAlgebraic(p, mid, hi)
        return RealAlgebraic(p, lo, mid)

    def refine(self, width) -> RealAlgebraic:
        """Bisect until the isolating interval is no wider than ``width``."""
        x = self
        width = Fraction(width)
        while x.width > width:
            x = x.bisect()
        return x

    def to_mpf(self, prec: int = 53):
        import mpmath

        x = self.refine(Fraction(1, 1 << (prec + 8)))
        m = x.lo + x.width / 2
        with mpmath.workprec(prec + 16):
            return mpmath.mpf(m.numerator) / m.denominator

    def __float__(self):
        x = self.refine(Fraction(1, 1 << 60))
        return float((x.lo + x.hi) / 2)

    def to_json(self) -> dict:
        return {"defpoly": self.defpoly.to_json(), "interval": [str(self.lo), str(self.hi)]}

    @classmethod
    def from_json(cls, d) -> RealAlgebraic:
        return cls(IntPoly.from_json(d["defpoly"]), Fraction(d["interval"][0]), Fraction(d["interval"][1]))


def _split_point(p: IntPoly, lo: Fraction, hi: Fraction) -> Fraction:
    mid = (lo + hi) / 2
    step = (hi - lo) / 8
    while sign_at_rational(p, mid) == 0:
        mid += step
        step /= 2
    return mid


def isolate_real_roots(p: IntPoly) -> list[RealAlgebraic]:
    """Isolating intervals for the distinct real roots, ascending."""
    if p.is_zero():
        raise DomainError("zero polynomial")
    sq = squarefree_part(p)
    if sq.degree < 1:
        return []
    chain = sturm_chain(sq)
    b = root_bound(sq)
    out = []
    stack = [(-b, b, _var_at(chain, -b) - _var_at(chain, b))]
    while stack:
        lo, hi, n = stack.pop()
        if n == 0:
            continue
        if n == 1:
            out.append(RealAlgebraic(sq, lo, hi))
            continue
        mid = _split_point(sq, lo, hi)
        vm = _var_at(chain, mid)
        stack.append((lo, mid, _var_at(chain, lo) - vm))
        stack.append((mid, hi, vm - _var_at(chain, hi)))
    out.sort(key=lambda x: x.lo)
    return out


# -- evaluation at real algebraic numbers -------------------------------------

def interval_eval(q: IntPoly, x: Interval) -> Interval:
    """Enclosure of q over x: Horner form around the midpoint (mean value form)."""
    if q.degree <= 0:
        return Interval.point(q[0])
    c = x.mid
    r = max(x.hi - c, c - x.lo)
    val = _eval_fraction(q, c)
    dq = q.derivative()
    # |q(y) - q(c)| <= r * max |q'| on x, bounded by Horner on |coeffs|
    bound = Fraction(0)
    mag = max(abs(x.lo), abs(x.hi))
    for co in reversed(dq.coeffs):
        bound = bound * mag + abs(co)
    return Interval(val - r * bound, val + r * bound)


def _eval_fraction(q: IntPoly, x: Fraction) -> Fraction:
    a, b = x.numerator, x.denominator
    acc = 0
    bp = 1
    for co in reversed(q.coeffs):
        acc = acc * a + co * bp
        bp *= b
    return Fraction(acc, bp // b) if q.coeffs else Fraction(0)


def _shares_root(x: RealAlgebraic, q: IntPoly) -> bool:
    g = gcd(x.defpoly, q)
    if g.degree <= 0:
        return False
    gi = g.to_int()
    return count_in(gi, x.lo, x.hi) > 0


def sign_at(x: RealAlgebraic, q: IntPoly) -> int:
    """Certified sign of q(x) in {-1, 0, +1}."""
    if q.is_zero():
        return 0
    if q.degree == 0:
        return 1 if q.lc > 0 else -1
    if _shares_root(x, q):
        return 0
    y = x
    while True:
        s = interval_eval(q, y.interval).sign()
        if s is not None and s != 0:
            return s
        y = y.bisect()


def eval_enclosure(x: RealAlgebraic, q: IntPoly, width) -> Interval:
    """Interval of width <= ``width`` containing q(x)."""
    width = Fraction(width)
    if q.degree <= 0:
        return Interval.point(q[0])
    y = x
    while True:
        iv = interval_eval(q, y.interval)
        if iv.width <= width:
            return iv
        y = y.bisect()


def log_abs_enclosure(x: RealAlgebraic, q: IntPoly, precision) -> Interval:
    """Interval of width <= precision containing log|q(x)|."""
    precision = Fraction(precision)
    if precision <= 0:
        raise DomainError("precision must be positive")
    if sign_at(x, q) == 0:
        raise DomainError("q vanishes at x; log|q(x)| is undefined")
    if q.degree <= 0:
        return log_interval(Interval.point(abs(q[0])), _bits_for(precision / 4))
    bits = _bits_for(precision / 4)
    rel = precision / 4
    y = x
    while True:
        iv = abs(interval_eval(q, y.interval))
        if iv.lo > 0 and iv.width <= iv.lo * rel:
            iv = iv.rounded(bits + 8 + max(0, -iv.lo.numerator.bit_length() + iv.lo.denominator.bit_length()))
            if iv.lo > 0:
                out = log_interval(iv, bits)
                if out.width <= precision:
                    return out
        y = y.bisect()


def _bits_for(eps: Fraction) -> int:
    bits = 0
    while Fraction(1, 1 << bits) > eps:
        bits += 1
    return bits
