"""Units of orders Z[t]/(B), log-bases, and Dirichlet families.

A family D_1..D_s for an integer matrix M is accepted when

    (1) det D_i(M) = 1,
    (2) D_i(a_j) > 0 at every real eigenvalue a_j,
    (3) the s x s matrix log D_i(a_j) is nonsingular,

checked in that order. Real eigenvalues are numbered by increasing value.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Optional, Sequence

import mpmath

from . import intmat
from ._parallel import chunked, pmap, thread_count
from .classify import FactoredCharPoly, char_poly, check_type_j
from .errors import CertificateError, DomainError, SearchExhausted, UndeterminedError
from .interval import Interval, certified_rank, determinant
from .polyring import IntPoly, T, crt_lift, poly_at_matrix, resultant
from .realroots import RealAlgebraic, isolate_real_roots, log_abs_enclosure, sign_at

DEFAULT_BITS = 32
DEFAULT_BUDGET_BITS = 256
TORSION_BITS = 64


def _eps(bits: int) -> Fraction:
    return Fraction(1, 1 << bits)


@lru_cache(maxsize=256)
def _real_roots(coeffs: tuple) -> tuple:
    return tuple(isolate_real_roots(IntPoly(coeffs)))


def real_roots(p: IntPoly) -> tuple[RealAlgebraic, ...]:
    return _real_roots(p.coeffs)


@dataclass(frozen=True)
class OrderElement:
    modulus: IntPoly
    rep: IntPoly

    def __post_init__(self):
        if not self.modulus.is_monic() or self.modulus.degree < 1:
            raise DomainError("order modulus must be monic of positive degree")
        object.__setattr__(self, "rep", self.rep % self.modulus)

    def __mul__(self, other: OrderElement) -> OrderElement:
        if other.modulus != self.modulus:
            raise DomainError("elements of different orders")
        return OrderElement(self.modulus, self.rep * other.rep)

    def norm(self) -> int:
        return resultant(self.modulus, self.rep) if not self.rep.is_zero() else 0

    def key(self) -> tuple:
        d = self.modulus.degree
        return tuple(self.rep[i] for i in range(d))


def is_unit(e: OrderElement) -> bool:
    """|Res(modulus, rep)| = 1, i.e. the norm is +-1."""
    if e.rep.is_zero():
        return False
    return abs(resultant(e.modulus, e.rep)) == 1


def projected_logs(e: OrderElement, bits: int) -> tuple[Interval, ...]:
    """log|e| at each real embedding, each enclosure of width <= 2**-bits."""
    return tuple(log_abs_enclosure(r, e.rep, _eps(bits)) for r in real_roots(e.modulus))


@dataclass(frozen=True)
class UnitWithLogs:
    elem: OrderElement
    projected_logs: tuple
    positivity: bool
    bits: int = DEFAULT_BITS

    def logs_at(self, bits: int) -> tuple:
        if bits <= self.bits:
            return self.projected_logs
        return projected_logs(self.elem, bits)

    def signs(self) -> tuple:
        return tuple(sign_at(r, self.elem.rep) for r in real_roots(self.elem.modulus))

    def to_json(self) -> dict:
        return {
            "rep": self.elem.rep.to_json(),
            "modulus": self.elem.modulus.to_json(),
            "positive": self.positivity,
            "projected_logs": [iv.to_json() for iv in self.projected_logs],
        }


def with_logs(e: OrderElement, bits: int = DEFAULT_BITS) -> UnitWithLogs:
    signs = tuple(sign_at(r, e.rep) for r in real_roots(e.modulus))
    return UnitWithLogs(e, projected_logs(e, bits), all(s > 0 for s in signs), bits)


@dataclass
class UnitSearch:
    units: list
    torsion: list  # elements whose projected logs all straddle 0 at TORSION_BITS
    bound: int


def _scan(args):
    modulus, vectors = args
    out = []
    for v in vectors:
        rep = IntPoly(v)
        if rep.coeffs in ((1,), (-1,)) or rep.is_zero():
            continue
        if abs(resultant(modulus, rep)) == 1:
            out.append(v)
    return out


def search_units(b: IntPoly, coeff_bound: int, bits: int = DEFAULT_BITS) -> UnitSearch:
    if not b.is_monic() or b.degree < 1:
        raise DomainError("modulus must be monic of positive degree")
    if coeff_bound < 0:
        raise DomainError("coeff_bound must be nonnegative")
    d = b.degree
    vectors = list(product(range(-coeff_bound, coeff_bound + 1), repeat=d))
    parts = chunked(vectors, 4 * thread_count())
    hits = [v for chunk in pmap(_scan, [(b, c) for c in parts]) for v in chunk]
    hits.sort()
    units, torsion = [], []
    for v in hits:
        e = OrderElement(b, IntPoly(v))
        logs = projected_logs(e, TORSION_BITS)
        if all(iv.contains_zero() for iv in logs):
            torsion.append(e)
            continue
        signs = tuple(sign_at(r, e.rep) for r in real_roots(b))
        trimmed = tuple(log_abs_enclosure(r, e.rep, _eps(bits)) for r in real_roots(b))
        units.append(UnitWithLogs(e, trimmed, all(s > 0 for s in signs), bits))
    return UnitSearch(units, torsion, coeff_bound)


def find_units(b: IntPoly, coeff_bound: int, bits: int = DEFAULT_BITS) -> list[UnitWithLogs]:
    """Units with coefficients in [-bound, bound], minus +-1 and torsion, in lex order."""
    return search_units(b, coeff_bound, bits).units


def make_positive(u: UnitWithLogs) -> UnitWithLogs:
    """u itself if positive at every real root, else u**2 reduced."""
    if u.positivity or all(s > 0 for s in u.signs()):
        if not u.positivity:
            return UnitWithLogs(u.elem, u.projected_logs, True, u.bits)
        return u
    sq = u.elem * u.elem
    logs = tuple(iv * 2 for iv in u.projected_logs)
    return UnitWithLogs(sq, logs, True, u.bits)


def _float_rank(rows) -> int:
    # midpoint matrix rank with a generous relative threshold; only used to skip
    # candidates that are dependent for all practical purposes
    if not rows:
        return 0
    with mpmath.workprec(80):
        m = mpmath.matrix([[mpmath.mpf(iv.mid.numerator) / iv.mid.denominator for iv in r] for r in rows])
        sv = mpmath.svd_r(m, compute_uv=False)
        top = max(abs(x) for x in sv)
        if top == 0:
            return 0
        return sum(1 for x in sv if abs(x) > top * mpmath.mpf(10) ** -12)


def _certify_rank(cands: Sequence[UnitWithLogs], budget_bits: int) -> Optional[bool]:
    """True if the projected log vectors are certified independent, None if undecided."""
    k = len(cands)
    bits = min(DEFAULT_BITS, budget_bits)
    while True:
        rows = [list(u.logs_at(bits)) for u in cands]
        if certified_rank(rows) == k:
            return True
        if bits >= budget_bits:
            return None
        bits = min(2 * bits, budget_bits)


def select_log_basis(units: Sequence[UnitWithLogs], l: int, precision_budget: int = DEFAULT_BUDGET_BITS):
    """Greedily pick l positive units whose projected logs form a certified basis."""
    if l < 1:
        raise DomainError("need l >= 1")
    for u in units:
        if len(u.projected_logs) != l:
            raise DomainError("each unit must carry exactly l projected logs")
    chosen: list[UnitWithLogs] = []
    undetermined = False
    for u in units:
        if len(chosen) == l:
            break
        p = make_positive(u)
        trial = chosen + [p]
        if _float_rank([list(x.projected_logs) for x in trial]) < len(trial):
            continue
        ok = _certify_rank(trial, precision_budget)
        if ok:
            chosen = trial
        else:
            undetermined = True
    if len(chosen) < l:
        if undetermined:
            raise UndeterminedError(
                "log-basis determinant could not be separated from 0 within the precision budget"
            )
        raise SearchExhausted(
            f"only {len(chosen)} independent units among {len(units)} candidates; raise coeff_bound"
        )
    return chosen


def log_determinant(units: Sequence[UnitWithLogs], bits: int) -> Interval:
    return determinant([list(u.logs_at(bits)) for u in units])


# -- Dirichlet families ---------------------------------------------------------

@dataclass
class DirichletCheck:
    status: str  # "accepted" | "violated" | "undetermined"
    failed_axiom: Optional[str] = None
    detail: str = ""
    dets: list = field(default_factory=list)
    signs: list = field(default_factory=list)  # signs[i][j] = sign D_i(a_j)
    log_matrix: list = field(default_factory=list)  # intervals, rows i, columns j
    log_det: Optional[Interval] = None
    precision_bits: int = 0
    real_eigs: list = field(default_factory=list)

    @property
    def accepted(self) -> bool:
        return self.status == "accepted"

    def to_json(self) -> dict:
        out = {
            "status": self.status,
            "failed_axiom": self.failed_axiom,
            "detail": self.detail,
            "dets": [str(d) for d in self.dets],
            "signs": self.signs,
            "log_matrix": [[iv.to_json() for iv in row] for row in self.log_matrix],
            "log_det": self.log_det.to_json() if self.log_det else None,
            "precision_bits": self.precision_bits,
        }
        return out


def real_eigenvalues(m) -> list[RealAlgebraic]:
    return list(real_roots(char_poly(m)))


def _exactly_one_abs(x: RealAlgebraic, d: IntPoly) -> bool:
    return sign_at(x, d - 1) == 0 or sign_at(x, d + 1) == 0


def _exactly_singular(polys, eigs) -> bool:
    # rows that are exactly zero, or two rows that coincide exactly
    for d in polys:
        if all(_exactly_one_abs(a, d) for a in eigs):
            return True
    for i in range(len(polys)):
        for k in range(i + 1, len(polys)):
            if all(sign_at(a, polys[i] - polys[k]) == 0 for a in eigs):
                return True
    return False


def verify_dirichlet(m, polys: Sequence[IntPoly], precision_budget: int = DEFAULT_BUDGET_BITS) -> DirichletCheck:
    """Independent checker for the three Dirichlet axioms."""
    m = intmat.as_matrix(m)
    polys = [p if isinstance(p, IntPoly) else IntPoly(p) for p in polys]
    check = DirichletCheck(status="accepted")
    for i, d in enumerate(polys):
        dm = poly_at_matrix(d, m)
        det = intmat.det(dm)
        check.dets.append(det)
        if det != 1:
            check.status, check.failed_axiom = "violated", "D1"
            check.detail = f"det D_{i + 1}(M) = {det}"
            return check
    eigs = real_eigenvalues(m)
    check.real_eigs = eigs
    for i, d in enumerate(polys):
        row = [sign_at(a, d) for a in eigs]
        check.signs.append(row)
    for i, row in enumerate(check.signs):
        for j, sg in enumerate(row):
            if sg != 1:
                check.status, check.failed_axiom = "violated", "D2"
                check.detail = f"D_{i + 1}(alpha_{j + 1}) has sign {sg}"
                return check
    s = len(eigs)
    if len(polys) != s:
        check.status, check.failed_axiom = "violated", "D3"
        check.detail = f"{len(polys)} polynomials for {s} real eigenvalues"
        return check
    bits = min(DEFAULT_BITS, precision_budget)
    while True:
        rows = [[log_abs_enclosure(a, d, _eps(bits)) for a in eigs] for d in polys]
        det = determinant(rows)
        check.log_matrix, check.log_det, check.precision_bits = rows, det, bits
        if not det.contains_zero():
            return check
        if bits >= precision_budget:
            break
        bits = min(2 * bits, precision_budget)
    if _exactly_singular(polys, eigs):
        check.status, check.failed_axiom = "violated", "D3"
        check.detail = "log matrix is exactly singular"
    else:
        check.status, check.failed_axiom = "undetermined", "D3"
        check.detail = "log determinant enclosure contains 0 at the precision budget"
    return check


@dataclass
class DirichletFamily:
    polys: list
    index: list  # (j, i) pairs: factor j, unit i
    mode: str  # "primary" | "custom"
    check: DirichletCheck
    e_polys: list = field(default_factory=list)
    unit_polys: list = field(default_factory=list)  # P_{j,i} before lifting

    @property
    def primary(self) -> bool:
        return self.mode == "primary"

    def to_json(self) -> dict:
        return {
            "polys": [p.to_json() for p in self.polys],
            "index": [list(x) for x in self.index],
            "mode": self.mode,
            "primary": self.primary,
            "e_polys": [p.to_json() for p in self.e_polys],
            "unit_polys": [p.to_json() for p in self.unit_polys],
            "certificate": self.check.to_json(),
        }


def _basis_for_factor(bj: IntPoly, l: int, coeff_bound: int, budget: int) -> list[UnitWithLogs]:
    last_error: Exception = SearchExhausted("coeff_bound must be >= 1")
    for bound in range(1, coeff_bound + 1):
        units = find_units(bj, bound)
        if len(units) < l:
            last_error = SearchExhausted(
                f"only {len(units)} units of Z[t]/({bj}) with coefficients <= {bound}; raise coeff_bound"
            )
            continue
        try:
            return select_log_basis(units, l, budget)
        except (SearchExhausted, UndeterminedError) as exc:
            last_error = exc
    raise last_error


def build_dirichlet_family(
    m,
    f: FactoredCharPoly,
    mode: str = "primary",
    e_polys: Optional[Sequence[IntPoly]] = None,
    coeff_bound: int = 8,
    precision_budget: int = DEFAULT_BUDGET_BITS,
) -> DirichletFamily:
    """Unit search, log-basis selection and CRT lifting for a type-J matrix."""
    m = intmat.as_matrix(m)
    cert = check_type_j(m, f)
    if not cert.j:
        raise CertificateError(f"matrix is not certified type J: {'; '.join(cert.failures)}")
    b0 = f.b0
    counts = [ev.real_roots for ev in cert.factor_evidence]
    s = sum(counts)
    index = [(j, i) for j, c in enumerate(counts, start=1) for i in range(1, c + 1)]
    if mode == "primary":
        es = [T] * s
    elif mode == "custom":
        if not e_polys:
            raise DomainError("custom mode needs E polynomials")
        es = list(e_polys) * s if len(e_polys) == 1 else list(e_polys)
        if len(es) != s:
            raise DomainError(f"need 1 or {s} E polynomials, got {len(e_polys)}")
    else:
        raise DomainError(f"unknown mode {mode!r}")
    if b0.degree > 0:
        for k, e in enumerate(es):
            if e.is_zero() or abs(resultant(b0, e)) != 1:
                what = "t" if mode == "primary" else f"E #{k + 1} ({e})"
                raise DomainError(f"{what} is not invertible modulo B0 = {b0}")
    bases = {}
    for j, bj in enumerate(f.factors, start=1):
        bases[j] = _basis_for_factor(bj, counts[j - 1], coeff_bound, precision_budget)
    polys, unit_polys = [], []
    for k, (j, i) in enumerate(index):
        p_ji = bases[j][i - 1].elem.rep
        unit_polys.append(p_ji)
        pairs = []
        if b0.degree > 0:
            pairs.append((b0, es[k] % b0))
        for mu, bmu in enumerate(f.factors, start=1):
            pairs.append((bmu, p_ji if mu == j else IntPoly([1])))
        polys.append(crt_lift(pairs))
    check = verify_dirichlet(m, polys, precision_budget)
    if not check.accepted:
        raise CertificateError(
            f"constructed family failed axiom {check.failed_axiom}: {check.detail}"
        )
    return DirichletFamily(polys, index, mode, check, list(es), unit_polys)
