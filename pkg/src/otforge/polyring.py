"""Dense univariate polynomials over Z and Q.

Coefficients are stored constant term first. The zero polynomial has an
empty coefficient tuple and degree -1.

Resultant convention, used everywhere in the package::

    Res(a, b) = lc(a)**deg(b) * prod(b(g) for g a root of a)

which is the determinant of the Sylvester matrix with the rows of ``a``
on top. For monic ``a`` this is the norm of ``b(t)`` in Q[t]/(a), so
``|Res(a, b)| == 1`` is exactly "b is a unit modulo a".
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

from . import intmat
from .errors import CertificateError, DomainError


class _Poly:
    __slots__ = ("coeffs",)
    _coerce = staticmethod(lambda x: x)

    def __init__(self, coeffs: Iterable = ()):
        cs = [self._coerce(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("polynomials are immutable")

    @classmethod
    def constant(cls, c):
        return cls([c])

    @classmethod
    def monomial(cls, deg: int, c=1):
        return cls([0] * deg + [c])

    @classmethod
    def t(cls):
        return cls([0, 1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def is_monic(self) -> bool:
        return self.lc == 1

    def __bool__(self):
        return bool(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __eq__(self, other):
        if isinstance(other, _Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == ((other,) if other else ())
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def _wrap(self, other):
        if isinstance(other, _Poly):
            if isinstance(other, RatPoly) or isinstance(self, RatPoly):
                return RatPoly, other.coeffs
            return type(self), other.coeffs
        if isinstance(other, Fraction) and not isinstance(self, RatPoly):
            return RatPoly, (other,)
        if isinstance(other, (int, Fraction)):
            return type(self), (other,)
        return None, None

    def __add__(self, other):
        cls, oc = self._wrap(other)
        if cls is None:
            return NotImplemented
        n = max(len(self.coeffs), len(oc))
        return cls([self[i] + (oc[i] if i < len(oc) else 0) for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return type(self)([-c for c in self.coeffs])

    def __sub__(self, other):
        cls, oc = self._wrap(other)
        if cls is None:
            return NotImplemented
        n = max(len(self.coeffs), len(oc))
        return cls([self[i] - (oc[i] if i < len(oc) else 0) for i in range(n)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        cls, oc = self._wrap(other)
        if cls is None:
            return NotImplemented
        if not self.coeffs or not oc:
            return cls()
        out = [0] * (len(self.coeffs) + len(oc) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(oc):
                    out[i + j] += a * b
        return cls(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise DomainError("negative polynomial power")
        result = type(self)([1])
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __call__(self, x):
        """Horner evaluation; works for any ring element supporting + and *."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self):
        return type(self)([i * c for i, c in enumerate(self.coeffs)][1:])

    def compose(self, other):
        acc = type(other)()
        for c in reversed(self.coeffs):
            acc = acc * other + c
        return acc

    def __repr__(self):
        return f"{type(self).__name__}({list(self.coeffs)!r})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            if mono and c == 1:
                s = mono
            elif mono and c == -1:
                s = "-" + mono
            else:
                s = f"{c}{'*' if mono else ''}{mono}"
            terms.append(s)
        return " + ".join(terms).replace("+ -", "- ")

    def to_json(self) -> list:
        return [str(c) for c in self.coeffs]


class IntPoly(_Poly):
    """Polynomial with arbitrary-precision integer coefficients."""

    __slots__ = ()

    @staticmethod
    def _coerce(c):
        if isinstance(c, bool):
            return int(c)
        if isinstance(c, int):
            return c
        if isinstance(c, Fraction) and c.denominator == 1:
            return c.numerator
        raise DomainError(f"non-integer coefficient {c!r}")

    @classmethod
    def from_json(cls, data) -> IntPoly:
        if not isinstance(data, list):
            raise DomainError("a polynomial must be a JSON array of decimal strings")
        try:
            return cls(int(x) for x in data)
        except (TypeError, ValueError) as exc:
            raise DomainError(f"malformed polynomial: {exc}") from exc

    def to_rat(self) -> RatPoly:
        return RatPoly(self.coeffs)

    def content(self) -> int:
        from math import gcd

        return reduce(gcd, self.coeffs, 0)

    def primitive_part(self) -> IntPoly:
        c = self.content()
        if c == 0:
            return self
        if self.lc < 0:
            c = -c
        return IntPoly(x // c for x in self.coeffs)

    def divmod(self, other: IntPoly) -> tuple[IntPoly, IntPoly]:
        """Division by a divisor with leading coefficient +-1 (stays in Z[t])."""
        if other.is_zero():
            raise DomainError("division by the zero polynomial")
        if other.lc not in (1, -1):
            q, r = self.to_rat().divmod(other.to_rat())
            if any(c.denominator != 1 for c in q.coeffs + r.coeffs):
                raise DomainError("division leaves Z[t]; use RatPoly")
            return IntPoly(q.coeffs), IntPoly(r.coeffs)
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return IntPoly(), self
        quot = [0] * (dq + 1)
        lc = other.lc
        for k in range(dq, -1, -1):
            c = rem[k + other.degree] * lc
            quot[k] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= c * b
        return IntPoly(quot), IntPoly(rem[: other.degree])

    def __mod__(self, other):
        return self.divmod(other)[1]

    def __floordiv__(self, other):
        return self.divmod(other)[0]


class RatPoly(_Poly):
    """Polynomial with rational coefficients (fractions in lowest terms)."""

    __slots__ = ()
    _coerce = staticmethod(Fraction)

    def divmod(self, other) -> tuple[RatPoly, RatPoly]:
        other = other if isinstance(other, RatPoly) else RatPoly(other.coeffs)
        if other.is_zero():
            raise DomainError("division by the zero polynomial")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return RatPoly(), self
        quot = [Fraction(0)] * (dq + 1)
        inv = 1 / other.lc
        for k in range(dq, -1, -1):
            c = rem[k + other.degree] * inv
            quot[k] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= c * b
        return RatPoly(quot), RatPoly(rem[: other.degree])

    def __mod__(self, other):
        return self.divmod(other)[1]

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def monic(self) -> RatPoly:
        if self.is_zero():
            return self
        inv = 1 / self.lc
        return RatPoly(c * inv for c in self.coeffs)

    def to_int(self) -> IntPoly:
        """Scale to a primitive integer polynomial with positive leading coefficient."""
        from math import lcm

        if self.is_zero():
            return IntPoly()
        den = reduce(lcm, (c.denominator for c in self.coeffs), 1)
        return IntPoly(int(c * den) for c in self.coeffs).primitive_part()

    def to_json(self) -> list:
        return [str(c) for c in self.coeffs]


def as_intpoly(p) -> IntPoly:
    if isinstance(p, IntPoly):
        return p
    if isinstance(p, RatPoly):
        return IntPoly(p.coeffs)
    return IntPoly(p)


T = IntPoly.t()


# -- gcd and squarefree machinery over Q --------------------------------------

def gcd(a, b) -> RatPoly:
    """Monic gcd over Q[t]; gcd(0, 0) = 0."""
    a = RatPoly(a.coeffs)
    b = RatPoly(b.coeffs)
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def xgcd(a, b) -> tuple[RatPoly, RatPoly, RatPoly]:
    """Return (g, s, t) with s*a + t*b = g monic over Q."""
    r0, r1 = RatPoly(a.coeffs), RatPoly(b.coeffs)
    s0, s1 = RatPoly([1]), RatPoly()
    t0, t1 = RatPoly(), RatPoly([1])
    while not r1.is_zero():
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    inv = 1 / r0.lc
    return r0.monic(), s0 * inv, t0 * inv


def lcm(a, b) -> RatPoly:
    a = RatPoly(a.coeffs)
    b = RatPoly(b.coeffs)
    if a.is_zero() or b.is_zero():
        return RatPoly()
    return ((a * b) // gcd(a, b)).monic()


def is_squarefree(p) -> bool:
    if p.is_zero():
        raise DomainError("zero polynomial")
    return gcd(p, p.derivative()).degree == 0


def squarefree_part(p: IntPoly) -> IntPoly:
    """p / gcd(p, p'), as a primitive integer polynomial with positive lc."""
    if p.is_zero():
        raise DomainError("zero polynomial")
    g = gcd(p, p.derivative())
    return (RatPoly(p.coeffs) // g).to_int()


def squarefree_decomposition(p: IntPoly) -> list[tuple[IntPoly, int]]:
    """Yun's algorithm: [(f_i, i)] with p = c * prod f_i**i, each f_i squarefree.

    Factors of degree zero are omitted; f_i are primitive with positive lc.
    """
    if p.is_zero():
        raise DomainError("zero polynomial")
    if p.degree == 0:
        return []
    f = RatPoly(p.coeffs)
    fp = f.derivative()
    a0 = gcd(f, fp)
    b = f // a0
    c = fp // a0
    d = c - b.derivative()
    out = []
    i = 1
    while b.degree > 0:
        a = gcd(b, d)
        if a.degree > 0:
            out.append((a.to_int(), i))
        b = b // a
        c = d // a
        d = c - b.derivative()
        i += 1
    return out


# -- resultants ---------------------------------------------------------------

def sylvester_matrix(a: IntPoly, b: IntPoly) -> intmat.Matrix:
    m, n = a.degree, b.degree
    size = m + n
    rows = []
    ra = tuple(reversed(a.coeffs))
    rb = tuple(reversed(b.coeffs))
    for i in range(n):
        rows.append((0,) * i + ra + (0,) * (size - m - 1 - i))
    for i in range(m):
        rows.append((0,) * i + rb + (0,) * (size - n - 1 - i))
    return tuple(rows)


def _check_nonzero(a, b):
    if a.is_zero() or b.is_zero():
        raise DomainError("resultant of the zero polynomial is undefined here")


def resultant_sylvester(a: IntPoly, b: IntPoly) -> int:
    _check_nonzero(a, b)
    if a.degree == 0 and b.degree == 0:
        return 1
    return intmat.det(sylvester_matrix(a, b))


def prem(a: IntPoly, b: IntPoly) -> IntPoly:
    """Pseudo-remainder of lc(b)**(deg a - deg b + 1) * a by b."""
    delta = a.degree - b.degree
    if delta < 0:
        return a
    rem = list(a.coeffs)
    lc = b.lc
    db = b.degree
    for k in range(delta, -1, -1):
        c = rem[k + db]
        rem = [x * lc for x in rem]
        if c:
            for j, y in enumerate(b.coeffs):
                rem[k + j] -= c * y
        rem.pop()
    return IntPoly(rem)


def resultant_subresultant(a: IntPoly, b: IntPoly) -> int:
    """Resultant through the subresultant pseudo-remainder sequence."""
    _check_nonzero(a, b)
    da, db = a.degree, b.degree
    if db == 0:
        return b.lc**da
    if da == 0:
        return a.lc**db
    ca, cb = abs(a.content()), abs(b.content())
    a = IntPoly(x // ca for x in a.coeffs)
    b = IntPoly(x // cb for x in b.coeffs)
    scale_factor = ca**db * cb**da
    sign = 1
    if da < db:
        a, b = b, a
        if da % 2 and db % 2:
            sign = -1
    g = h = 1
    while b.degree > 0:
        delta = a.degree - b.degree
        if a.degree % 2 and b.degree % 2:
            sign = -sign
        r = prem(a, b)
        a = b
        if r.is_zero():
            return 0
        div = g * h**delta
        b = IntPoly(x // div for x in r.coeffs)
        g = a.lc
        if delta == 0:
            h = h  # h**(1-0) * g**0
        else:
            h = g**delta // h ** (delta - 1)
    da = a.degree
    if da == 0:
        return sign * scale_factor * h
    h = b.lc**da // h ** (da - 1)
    return sign * scale_factor * h


def resultant(a: IntPoly, b: IntPoly) -> int:
    """Res(a, b) under the module convention (see module docstring)."""
    return resultant_subresultant(as_intpoly(a), as_intpoly(b))


# -- Bezout certificates and CRT ----------------------------------------------

@dataclass(frozen=True)
class BezoutCertificate:
    u: IntPoly
    v: IntPoly
    a: IntPoly
    b: IntPoly

    def check(self) -> bool:
        return self.u * self.a + self.v * self.b == IntPoly([1])

    def to_json(self) -> dict:
        return {k: getattr(self, k).to_json() for k in ("u", "v", "a", "b")}

    @classmethod
    def from_json(cls, d) -> BezoutCertificate:
        return cls(*(IntPoly.from_json(d[k]) for k in ("u", "v", "a", "b")))


def strongly_coprime(a: IntPoly, b: IntPoly) -> BezoutCertificate | None:
    """Integer Bezout identity u*a + v*b = 1, or None if (a) + (b) != Z[t].

    The coefficients come from solving the transposed Sylvester system; when
    |Res(a, b)| = 1 Cramer's rule makes the solution integral.
    """
    _check_nonzero(a, b)
    m, n = a.degree, b.degree
    if m == 0 or n == 0:
        c = a.lc if m == 0 else b.lc
        if c not in (1, -1):
            return None
        if m == 0:
            cert = BezoutCertificate(IntPoly([c]), IntPoly(), a, b)
        else:
            cert = BezoutCertificate(IntPoly(), IntPoly([c]), a, b)
        assert cert.check()
        return cert
    res = resultant(a, b)
    if abs(res) != 1:
        return None
    # unknowns: u_0..u_{n-1}, v_0..v_{m-1}; equations: coefficient of t^k, k < m+n
    size = m + n
    rows = []
    for k in range(size):
        row = [a[k - i] if 0 <= k - i <= m else 0 for i in range(n)]
        row += [b[k - j] if 0 <= k - j <= n else 0 for j in range(m)]
        rows.append(tuple(row))
    rhs = [1] + [0] * (size - 1)
    sol = intmat.solve(tuple(rows), rhs)
    if any(x.denominator != 1 for x in sol):
        raise CertificateError("Sylvester solve produced a non-integral Bezout pair")
    u = IntPoly(int(x) for x in sol[:n])
    v = IntPoly(int(x) for x in sol[n:])
    cert = BezoutCertificate(u, v, a, b)
    if not cert.check():
        raise CertificateError("Bezout identity failed to re-expand to 1")
    return cert


def crt_lift(pairs: Sequence[tuple[IntPoly, IntPoly]]) -> IntPoly:
    """Unique D with deg D < sum(deg m_i) and D = r_i mod m_i for monic m_i."""
    if not pairs:
        raise DomainError("crt_lift needs at least one congruence")
    for i, (mod, _) in enumerate(pairs):
        if not mod.is_monic() or mod.degree < 0:
            raise DomainError(f"modulus #{i} is not monic")
    certs = {}
    for i in range(len(pairs)):
        for j in range(i + 1, len(pairs)):
            c = strongly_coprime(pairs[i][0], pairs[j][0])
            if c is None:
                raise CertificateError(
                    f"moduli #{i} ({pairs[i][0]}) and #{j} ({pairs[j][0]}) are not strongly coprime"
                )
            certs[i, j] = c
    modulus, value = pairs[0][0], pairs[0][1] % pairs[0][0]
    for i in range(1, len(pairs)):
        mod_i, res_i = pairs[i]
        cert = strongly_coprime(modulus, mod_i)
        if cert is None:  # implied by pairwise coprimality via multiplicativity
            raise CertificateError(f"accumulated modulus not coprime to #{i}")
        # u*modulus + v*mod_i = 1
        value = value * cert.v * mod_i + (res_i % mod_i) * cert.u * modulus
        modulus = modulus * mod_i
        value = value % modulus
    for i, (mod, res) in enumerate(pairs):
        if value % mod != res % mod:
            raise CertificateError(f"lifted value fails the congruence modulo #{i}")
    return value


# -- evaluation and companion matrices ----------------------------------------

def eval_int(p: IntPoly, x: int) -> int:
    acc = 0
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc


def companion(p: IntPoly) -> intmat.Matrix:
    """C_P: ones on the subdiagonal, last column -p_0, ..., -p_{d-1}."""
    if p.degree < 1 or not p.is_monic():
        raise DomainError("companion matrix needs a monic polynomial of degree >= 1")
    d = p.degree
    rows = []
    for i in range(d):
        row = [1 if j == i - 1 else 0 for j in range(d)]
        row[d - 1] = -p.coeffs[i]
        rows.append(tuple(row))
    return tuple(rows)


def companion_transpose(p: IntPoly) -> intmat.Matrix:
    """B_P = C_P transposed."""
    return intmat.transpose(companion(p))


def poly_at_matrix(p, m: intmat.Matrix) -> intmat.Matrix:
    return intmat.poly_at(p.coeffs, m)
