"""Type hierarchy J0 / J / J1 for integer matrices and their characteristic polynomials.

Factorizations are supplied by the caller and verified, never searched for.
Irreducibility is certified by one of three witnesses; when none applies
the verdict is "unknown", which blocks a type-J verdict.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import floor
from typing import Optional, Sequence

from . import intmat
from ._parallel import pmap
from .errors import CertificateError, DomainError
from .polyring import (
    IntPoly,
    eval_int,
    gcd,
    strongly_coprime,
)
from .primes import is_prime, primes_up_to
from .realroots import count_real_roots, isolate_real_roots, root_counts


# -- characteristic polynomial -------------------------------------------------

def char_poly(m) -> IntPoly:
    """det(t*I - m) by Berkowitz's division-free algorithm."""
    m = intmat.as_matrix(m)
    n = intmat.require_square(m)
    if n == 0:
        return IntPoly([1])
    vect = [1, -m[0][0]]  # coefficients, highest degree first
    for r in range(1, n):
        row = m[r][:r]
        col_s = [m[i][r] for i in range(r)]
        sub = [m[i][:r] for i in range(r)]
        toeplitz = [1, -m[r][r]]
        x = col_s
        for _ in range(r):
            toeplitz.append(-sum(a * b for a, b in zip(row, x)))
            x = [sum(a * b for a, b in zip(sr, x)) for sr in sub]
        vect = [
            sum(toeplitz[i - j] * vect[j] for j in range(len(vect)) if 0 <= i - j < len(toeplitz))
            for i in range(r + 2)
        ]
    return IntPoly(reversed(vect))


# -- irreducibility witnesses --------------------------------------------------

FG_MAX_DEGREE = 30
MOD_PRIME_BOUND = 97


@dataclass(frozen=True)
class IrreducibilityWitness:
    kind: str  # "linear" | "filaseta-gross" | "mod-prime" | "low-degree"
    data: dict = field(default_factory=dict)

    def verify(self, p: IntPoly) -> bool:
        if not p.is_monic() or p.degree < 1:
            return False
        if self.kind == "linear":
            return p.degree == 1
        if self.kind == "filaseta-gross":
            return _filaseta_gross_applies(p)
        if self.kind == "mod-prime":
            return _irreducible_mod(p, int(self.data["prime"]))
        if self.kind == "low-degree":
            return p.degree <= 3 and not _has_integer_root(p)
        return False

    def to_json(self) -> dict:
        return {"kind": self.kind, **{k: str(v) for k, v in self.data.items()}}

    @classmethod
    def from_json(cls, d) -> IrreducibilityWitness:
        data = {k: v for k, v in d.items() if k != "kind"}
        return cls(d["kind"], data)


def _filaseta_gross_applies(p: IntPoly) -> bool:
    # nonnegative coefficients, degree <= 30, p(10) prime
    if p.degree > FG_MAX_DEGREE or any(c < 0 for c in p.coeffs):
        return False
    return is_prime(eval_int(p, 10))


def _has_integer_root(p: IntPoly) -> bool:
    # for monic p every rational root is an integer inside some isolating interval
    for r in isolate_real_roots(p):
        r = r.refine(Fraction(1, 2))
        for n in range(floor(r.lo), floor(r.hi) + 1):
            if eval_int(p, n) == 0:
                return True
    return False


def _gf_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _gf_mod(a, f, p):
    a = [x % p for x in a]
    _gf_trim(a)
    df = len(f) - 1
    inv = pow(f[-1], -1, p)
    while len(a) - 1 >= df:
        c = a[-1] * inv % p
        shift = len(a) - 1 - df
        for i, y in enumerate(f):
            a[shift + i] = (a[shift + i] - c * y) % p
        _gf_trim(a)
    return a


def _gf_mulmod(a, b, f, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _gf_mod(out, f, p)


def _gf_powmod(a, e, f, p):
    result = [1]
    base = _gf_mod(list(a), f, p)
    while e:
        if e & 1:
            result = _gf_mulmod(result, base, f, p)
        base = _gf_mulmod(base, base, f, p)
        e >>= 1
    return result


def _gf_gcd(a, b, p):
    a = _gf_trim([x % p for x in a])
    b = _gf_trim([x % p for x in b])
    while b:
        a, b = b, _gf_mod(a, b, p)
    return a


def _prime_factors(n: int):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _irreducible_mod(poly: IntPoly, p: int) -> bool:
    """Rabin's test for the reduction of a monic polynomial modulo p."""
    f = [c % p for c in poly.coeffs]
    d = poly.degree
    if d < 1 or f[-1] == 0:
        return False
    x = [0, 1]
    # x^(p^d) == x mod f
    y = x
    for _ in range(d):
        y = _gf_powmod(y, p, f, p)
    if _gf_trim([(a - b) % p for a, b in _zip_pad(y, x)]):
        return False
    for r in _prime_factors(d):
        y = x
        for _ in range(d // r):
            y = _gf_powmod(y, p, f, p)
        diff = _gf_trim([(a - b) % p for a, b in _zip_pad(y, x)])
        g = _gf_gcd(f, diff, p)
        if len(g) != 1:
            return False
    return True


def _zip_pad(a, b):
    n = max(len(a), len(b))
    return zip(list(a) + [0] * (n - len(a)), list(b) + [0] * (n - len(b)))


def irreducibility_witness(p: IntPoly) -> Optional[IrreducibilityWitness]:
    """First applicable witness, or None ("unknown")."""
    if p.degree < 1 or not p.is_monic():
        raise DomainError("irreducibility witnesses need a monic polynomial of degree >= 1")
    if p.degree == 1:
        return IrreducibilityWitness("linear")
    if _filaseta_gross_applies(p):
        return IrreducibilityWitness("filaseta-gross", {"value_at_10": eval_int(p, 10)})
    for prime in primes_up_to(MOD_PRIME_BOUND):
        if _irreducible_mod(p, prime):
            return IrreducibilityWitness("mod-prime", {"prime": prime})
    if p.degree <= 3 and not _has_integer_root(p):
        return IrreducibilityWitness("low-degree")
    return None


# -- factorizations and certificates -------------------------------------------

@dataclass(frozen=True)
class FactoredCharPoly:
    b0: IntPoly
    factors: tuple  # B_1, ..., B_k

    def __init__(self, b0, factors: Sequence):
        object.__setattr__(self, "b0", b0 if isinstance(b0, IntPoly) else IntPoly(b0))
        object.__setattr__(
            self, "factors", tuple(f if isinstance(f, IntPoly) else IntPoly(f) for f in factors)
        )

    def all_parts(self) -> tuple:
        return (self.b0,) + self.factors

    def product(self) -> IntPoly:
        out = self.b0
        for f in self.factors:
            out = out * f
        return out

    def to_json(self) -> dict:
        return {"b0": self.b0.to_json(), "factors": [f.to_json() for f in self.factors]}

    @classmethod
    def from_json(cls, d) -> FactoredCharPoly:
        if not isinstance(d, dict) or "b0" not in d or "factors" not in d:
            raise DomainError("factorization must be an object {b0, factors}")
        return cls(IntPoly.from_json(d["b0"]), [IntPoly.from_json(f) for f in d["factors"]])


@dataclass
class FactorEvidence:
    poly: IntPoly
    real_roots: int
    imaginary_roots: int
    witness: Optional[IrreducibilityWitness]

    def to_json(self) -> dict:
        return {
            "poly": self.poly.to_json(),
            "real_roots": self.real_roots,
            "imaginary_roots": self.imaginary_roots,
            "witness": self.witness.to_json() if self.witness else "unknown",
        }


@dataclass
class TypeCertificate:
    """Verdicts are True / False / None (None: undecided, e.g. unknown irreducibility)."""

    charpoly: IntPoly
    j0: bool
    j: Optional[bool] = None
    j1: Optional[bool] = None
    s: int = 0
    n: int = 0
    scope: str = "J0"  # "J0" for polynomial-only checks, "J" for factored matrices
    factorization: Optional[FactoredCharPoly] = None
    b0_real_roots: Optional[int] = None
    factor_evidence: list = field(default_factory=list)
    coprimality: list = field(default_factory=list)  # (i, j, BezoutCertificate | None)
    determinant: Optional[int] = None
    failures: list = field(default_factory=list)

    def hierarchy_ok(self) -> bool:
        if self.j1 and not self.j:
            return False
        if self.j and not self.j0:
            return False
        return True

    def to_json(self) -> dict:
        out = {
            "charpoly": self.charpoly.to_json(),
            "scope": self.scope,
            "verdicts": {"J0": self.j0, "J": _tri(self.j), "J1": _tri(self.j1)},
            "s": self.s,
            "n": self.n,
            "failures": list(self.failures),
        }
        if self.factorization is not None:
            out["factorization"] = self.factorization.to_json()
            out["b0_real_roots"] = self.b0_real_roots
            out["factors"] = [e.to_json() for e in self.factor_evidence]
            out["coprimality"] = [
                {"pair": [i, j], "certificate": c.to_json() if c else None}
                for i, j, c in self.coprimality
            ]
        if self.determinant is not None:
            out["determinant"] = str(self.determinant)
        return out


def _tri(v):
    return "unknown" if v is None else v


def check_type_j0(p: IntPoly) -> TypeCertificate:
    """>= 1 real root, >= 1 imaginary root, every real root simple."""
    if p.is_zero():
        raise DomainError("zero polynomial")
    rc = root_counts(p)
    failures = []
    if rc.distinct_real < 1:
        failures.append("no real root")
    if rc.distinct_imaginary < 1:
        failures.append("no imaginary root")
    g = gcd(p, p.derivative())
    repeated_real = g.degree > 0 and count_real_roots(g.to_int()) > 0
    if repeated_real:
        failures.append("a real root is not simple")
    ok = not failures
    s = rc.real_with_multiplicity if ok else 0
    n = (p.degree - s) // 2 if ok else 0
    return TypeCertificate(charpoly=p, j0=ok, s=s, n=n, failures=failures)


def _pair_check(args):
    i, j, a, b = args
    return i, j, strongly_coprime(a, b)


def check_type_j(m, f: FactoredCharPoly) -> TypeCertificate:
    """Certify conditions J1-J3 for a matrix against a supplied factorization."""
    m = intmat.as_matrix(m)
    intmat.require_square(m)
    c = char_poly(m)
    if f.product() != c:
        raise CertificateError(
            f"factorization does not multiply out to the characteristic polynomial {c}"
        )
    for idx, part in enumerate(f.all_parts()):
        if not part.is_monic():
            raise CertificateError(f"factor #{idx} ({part}) is not monic")
    base = check_type_j0(c)
    cert = TypeCertificate(charpoly=c, j0=base.j0, scope="J", factorization=f)
    cert.determinant = intmat.det(m)
    failures = []
    unknown = False
    if cert.determinant != 1:
        failures.append(f"matrix is not in SL (det = {cert.determinant})")
    # J1: B0 has no real roots
    cert.b0_real_roots = count_real_roots(f.b0) if f.b0.degree > 0 else 0
    if cert.b0_real_roots:
        failures.append("B0 has a real root")
    if not f.factors:
        failures.append("no factor B_j with real roots (k = 0)")
    # J2: each B_j irreducible with real and imaginary roots
    s = 0
    for idx, bj in enumerate(f.factors, start=1):
        if bj.degree < 1:
            failures.append(f"B{idx} is constant")
            cert.factor_evidence.append(FactorEvidence(bj, 0, 0, None))
            continue
        w = irreducibility_witness(bj)
        r = count_real_roots(bj)
        im = bj.degree - r
        cert.factor_evidence.append(FactorEvidence(bj, r, im, w))
        if w is None:
            unknown = True
        if r < 1:
            failures.append(f"B{idx} has no real root")
        if im < 1:
            failures.append(f"B{idx} has no imaginary root")
        s += r
    # J3: pairwise strong coprimality, B0 included
    parts = f.all_parts()
    jobs = [
        (i, j, parts[i], parts[j]) for i in range(len(parts)) for j in range(i + 1, len(parts))
    ]
    for i, j, bez in pmap(_pair_check, jobs):
        cert.coprimality.append((i, j, bez))
        if bez is None:
            failures.append(f"B{i} and B{j} are not strongly coprime")
    cert.failures = failures
    if failures:
        cert.j = False
    elif unknown:
        cert.j = None
        cert.failures = ["irreducibility witness inconclusive"]
    else:
        cert.j = True
    cert.j1 = None if cert.j is None else bool(cert.j and len(f.factors) == 1)
    if cert.j:
        cert.s = s
        cert.n = (c.degree - s) // 2
    else:
        cert.s, cert.n = base.s, base.n
    if not cert.hierarchy_ok():
        raise CertificateError("internal inconsistency: J verdict without J0")
    return cert


def verify_type_certificate(cert: TypeCertificate) -> bool:
    """Re-check a J certificate from its recorded evidence (no witness search)."""
    if cert.scope != "J" or cert.factorization is None:
        return check_type_j0(cert.charpoly).j0 == cert.j0
    f = cert.factorization
    if f.product() != cert.charpoly:
        return False
    if not cert.j:
        return True
    if cert.determinant != 1:
        return False
    if f.b0.degree > 0 and count_real_roots(f.b0) != 0:
        return False
    for ev, bj in zip(cert.factor_evidence, f.factors):
        if ev.poly != bj or ev.witness is None or not ev.witness.verify(bj):
            return False
        if count_real_roots(bj) != ev.real_roots or ev.real_roots < 1 or ev.imaginary_roots < 1:
            return False
    pairs = {(i, j) for i, j, _ in cert.coprimality}
    n = len(f.all_parts())
    if pairs != {(i, j) for i in range(n) for j in range(i + 1, n)}:
        return False
    parts = f.all_parts()
    for i, j, bez in cert.coprimality:
        if bez is None or bez.a != parts[i] or bez.b != parts[j] or not bez.check():
            return False
    return cert.s + 2 * cert.n == cert.charpoly.degree
