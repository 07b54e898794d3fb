"""OT action data X(K, O, U) for O = Z[xi] and its identity with T(B_P, D).

Here B_P is the transpose of the companion matrix C_P, so the monodromy
D_i(B_P^T) of T(B_P, D) is D_i(C_P), the matrix of multiplication by
D_i(xi) in the power basis 1, xi, ..., xi^(d-1).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from . import intmat
from .classify import irreducibility_witness
from .errors import DomainError
from .interval import determinant
from .polyring import IntPoly, companion, companion_transpose, poly_at_matrix, resultant
from .realroots import count_real_roots, isolate_real_roots, log_abs_enclosure, sign_at
from .units import OrderElement, real_eigenvalues, verify_dirichlet


def multiplication_matrix(p: IntPoly, d: IntPoly) -> intmat.Matrix:
    """Matrix of x -> d*x on Z[t]/(p) in the power basis (columns are images of t^r)."""
    deg = p.degree
    cols = []
    for r in range(deg):
        img = (d * IntPoly.monomial(r)) % p
        cols.append([img[i] for i in range(deg)])
    return intmat.transpose(intmat.as_matrix(cols))


@dataclass
class OTActionData:
    p: IntPoly
    s: int
    n: int
    unit_polys: list
    translation_lattice: list  # OrderElements xi^0 .. xi^(d-1)
    multiplication_matrices: list
    real_embeddings: list
    log_det_bits: int = 0

    def to_json(self) -> dict:
        return {
            "p": self.p.to_json(),
            "s": self.s,
            "n": self.n,
            "unit_polys": [u.to_json() for u in self.unit_polys],
            "translation_lattice": [e.rep.to_json() for e in self.translation_lattice],
            "multiplication_matrices": [intmat.to_json(a) for a in self.multiplication_matrices],
            "real_embeddings": [x.to_json() for x in self.real_embeddings],
        }


def build_ot_action(p: IntPoly, unit_polys: Sequence[IntPoly], precision_budget: int = 256,
                    check_log_basis: bool = True) -> OTActionData:
    if not p.is_monic() or p.degree < 2:
        raise DomainError("p must be monic of degree >= 2")
    if irreducibility_witness(p) is None:
        raise DomainError(f"no irreducibility witness for {p}")
    s = count_real_roots(p)
    n = (p.degree - s) // 2
    if s < 1 or n < 1:
        raise DomainError(f"need s >= 1 and n >= 1, got s = {s}, n = {n}")
    units = [u if isinstance(u, IntPoly) else IntPoly(u) for u in unit_polys]
    if len(units) != s:
        raise DomainError(f"need {s} unit polynomials, got {len(units)}")
    emb = isolate_real_roots(p)
    for i, d in enumerate(units, start=1):
        if (d % p).is_zero() or abs(resultant(p, d % p)) != 1:
            raise DomainError(f"D_{i}(xi) is not a unit of Z[xi]")
        for j, a in enumerate(emb, start=1):
            if sign_at(a, d) <= 0:
                raise DomainError(
                    f"D_{i}(xi) is not positive at real embedding {j}; replace it by its square"
                )
    bits = 32
    while check_log_basis:
        rows = [[log_abs_enclosure(a, d, Fraction(1, 1 << bits)) for a in emb] for d in units]
        if not determinant(rows).contains_zero():
            break
        if bits >= precision_budget:
            raise DomainError("units do not form a certified log-basis")
        bits = min(2 * bits, precision_budget)
    lattice = [OrderElement(p, IntPoly.monomial(r)) for r in range(p.degree)]
    mults = [multiplication_matrix(p, d) for d in units]
    return OTActionData(p, s, n, units, lattice, mults, emb, bits)


@dataclass
class IdentityCertificate:
    status: str  # "identity" | "mismatch"
    checks: list = field(default_factory=list)  # (name, ok)
    mismatch: Optional[dict] = None

    @property
    def ok(self) -> bool:
        return self.status == "identity"

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "checks": [{"check": name, "ok": ok} for name, ok in self.checks],
            "mismatch": self.mismatch,
        }


def _first_diff(a, b):
    for i, (ra, rb) in enumerate(zip(a, b)):
        for j, (x, y) in enumerate(zip(ra, rb)):
            if x != y:
                return i, j, x, y
    return None


def compare_with_tm(p: IntPoly, unit_polys: Sequence[IntPoly], precision_budget: int = 256,
                    check_log_basis: bool = True) -> IdentityCertificate:
    """Exact comparison of the OT action data with the data of T(B_P, D).

    With check_log_basis=False only the exact matrix and embedding identities
    are checked, which also covers degenerate families such as D_i = 1.
    """
    ot = build_ot_action(p, unit_polys, precision_budget, check_log_basis)
    cert = IdentityCertificate("identity")
    cp = companion(p)
    bp = companion_transpose(p)
    bpt = intmat.transpose(bp)

    def fail(name, i, diff):
        r, c, x, y = diff
        cert.status = "mismatch"
        cert.checks.append((name, False))
        cert.mismatch = {"check": name, "index": i, "row": r, "col": c, "lhs": str(x), "rhs": str(y)}
        return cert

    for i, (d, mult) in enumerate(zip(ot.unit_polys, ot.multiplication_matrices), start=1):
        dc = poly_at_matrix(d, cp)
        diff = _first_diff(mult, dc)
        name = f"mult(D_{i}(xi)) == D_{i}(C_P)"
        if diff:
            return fail(name, i, diff)
        cert.checks.append((name, True))
        mono = poly_at_matrix(d, bpt)
        diff = _first_diff(mono, mult)
        name = f"D_{i}(B_P^T) == mult(D_{i}(xi))"
        if diff:
            return fail(name, i, diff)
        cert.checks.append((name, True))
    eigs = real_eigenvalues(bp)
    same = len(eigs) == len(ot.real_embeddings) and all(
        a.defpoly == b.defpoly and a.lo == b.lo and a.hi == b.hi for a, b in zip(eigs, ot.real_embeddings)
    )
    cert.checks.append(("scale tuples use identical real algebraic data", same))
    if not same:
        cert.status = "mismatch"
        cert.mismatch = {"check": "real embeddings vs real eigenvalues of B_P"}
        return cert
    if not check_log_basis:
        return cert
    dcheck = verify_dirichlet(bp, ot.unit_polys, precision_budget)
    cert.checks.append(("D is a Dirichlet family for B_P", dcheck.accepted))
    if not dcheck.accepted:
        cert.status = "mismatch"
        cert.mismatch = {"check": "Dirichlet axioms for B_P", "axiom": dcheck.failed_axiom, "detail": dcheck.detail}
    return cert
