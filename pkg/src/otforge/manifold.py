"""Eigenstructure, lattice invariance and the manifold data T(M, D).

Conventions. The rows of Q are the real eigenvectors a_1..a_s of M (ordered
by increasing eigenvalue) followed by Re b_j, Im b_j for a basis b_1..b_n of
W, the sum of generalized eigenspaces of M for eigenvalues with positive
imaginary part. The columns of Q are the lattice vectors v_i. With
M B = B R on W, every row relation reads

    U^T Q = Q M^T,   U^T = diag(alpha) + realify(R^T)

where realify replaces an entry c by the block [[Re c, -Im c], [Im c, Re c]].
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import mpmath

from . import intmat
from .classify import FactoredCharPoly, check_type_j
from .errors import CertificateError, DomainError, UndeterminedError
from .interval import Interval, determinant, log_interval
from .polyring import IntPoly, RatPoly, poly_at_matrix, squarefree_decomposition, xgcd
from .realroots import RealAlgebraic, eval_enclosure, isolate_real_roots, log_abs_enclosure
from .units import DirichletFamily, verify_dirichlet

DOUBLE = 53
QUAD = 113


# -- exact kernel over Q[t]/(B) ---------------------------------------------------

class _Field:
    """Arithmetic in Q[t]/(b) for irreducible b."""

    def __init__(self, b: IntPoly):
        self.b = RatPoly(b.coeffs)

    def red(self, x: RatPoly) -> RatPoly:
        return x % self.b

    def inv(self, x: RatPoly) -> RatPoly:
        g, u, _ = xgcd(x, self.b)
        if g.degree != 0:
            raise DomainError("element is not invertible; modulus is not irreducible")
        return self.red(u)


def field_kernel_vector(m, b: IntPoly) -> list[RatPoly]:
    """Nonzero v with M v = t v over Q[t]/(b), first nonzero entry 1.

    Requires the eigenspace to be one-dimensional (b a simple factor).
    """
    m = intmat.as_matrix(m)
    n = len(m)
    k = _Field(b)
    t = RatPoly([0, 1])
    a = [[k.red(RatPoly([m[i][j]]) - (t if i == j else RatPoly())) for j in range(n)] for i in range(n)]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, n) if not a[i][c].is_zero()), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = k.inv(a[r][c])
        a[r] = [k.red(x * inv) for x in a[r]]
        for i in range(n):
            if i != r and not a[i][c].is_zero():
                f = a[i][c]
                a[i] = [k.red(x - f * y) for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    if len(free) != 1:
        raise DomainError(f"eigenspace over Q[t]/({b}) has dimension {len(free)}, expected 1")
    f = free[0]
    v = [RatPoly() for _ in range(n)]
    v[f] = RatPoly([1])
    for i, pc in enumerate(pivots):
        v[pc] = -a[i][f]
    lead = next(x for x in v if not x.is_zero())
    li = k.inv(lead)
    return [k.red(x * li) for x in v]


def _eval_ratpoly(p: RatPoly, x):
    acc = mpmath.mpf(0)
    for c in reversed(p.coeffs):
        acc = acc * x + mpmath.mpf(c.numerator) / c.denominator
    return acc


# -- numeric eigenstructure -------------------------------------------------------

@dataclass
class EigenData:
    m: tuple
    s: int
    n: int
    prec: int
    real_eigs: list  # RealAlgebraic, ascending
    real_vectors: list  # exact, list of RatPoly per eigenvalue
    imag_roots: list  # (beta, multiplicity), Im beta > 0
    W: object  # mp complex matrix (s+2n) x n
    R: object  # mp complex n x n
    Q: object  # mp real matrix
    Ut: object  # mp real matrix, U^T in real coordinates
    det_Q: object
    hadamard_ratio: object  # |det Q| / prod of row norms
    eigen_residual: object

    def to_json(self) -> dict:
        digits = _digits(self.prec)
        return {
            "float_precision_bits": self.prec,
            "Q": _mat_json(self.Q, digits),
            "U_transpose": _mat_json(self.Ut, digits),
            "abs_det_Q": mpmath.nstr(abs(self.det_Q), digits),
            "hadamard_ratio": mpmath.nstr(self.hadamard_ratio, digits),
            "eigen_residual": mpmath.nstr(self.eigen_residual, 5),
        }


def _digits(prec: int) -> int:
    return int(prec * 0.30103) + 1


def _mat_json(a, digits: int) -> list:
    return [[mpmath.nstr(a[i, j], digits) for j in range(a.cols)] for i in range(a.rows)]


def _mp_int_matrix(m):
    return mpmath.matrix([[mpmath.mpf(x) for x in row] for row in m])


def _realify(c: mpmath.matrix) -> mpmath.matrix:
    n = c.rows
    out = mpmath.zeros(2 * n, 2 * n)
    for i in range(n):
        for j in range(n):
            z = c[i, j]
            re, im = mpmath.re(z), mpmath.im(z)
            out[2 * i, 2 * j] = re
            out[2 * i, 2 * j + 1] = -im
            out[2 * i + 1, 2 * j] = im
            out[2 * i + 1, 2 * j + 1] = re
    return out


def _imaginary_roots(f: FactoredCharPoly, prec: int) -> list:
    """Distinct roots with Im > 0 and their multiplicities, sorted by (Re, Im)."""
    out = []
    parts = [(f.b0, None)] + [(b, 1) for b in f.factors]
    for poly, mult in parts:
        if poly.degree < 1:
            continue
        pieces = squarefree_decomposition(poly) if mult is None else [(poly, 1)]
        for q, e in pieces:
            if q.degree < 1:
                continue
            roots = mpmath.polyroots(list(reversed(q.coeffs)), maxsteps=200, extraprec=2 * prec)
            for z in roots:
                if mpmath.im(z) > mpmath.mpf(2) ** (-prec // 2):
                    out.append((mpmath.mpc(z), e))
    out.sort(key=lambda x: (float(mpmath.re(x[0])), float(mpmath.im(x[0]))))
    return out


def eigenstructure(m, f: FactoredCharPoly, float_precision: int = DOUBLE, rank_tol=None) -> EigenData:
    """Real eigenvectors exactly, W and R numerically, assembled into Q and U^T.

    ``rank_tol`` is the relative singular-value threshold used to read off
    generalized eigenspaces; the default is 2**(-prec/2).
    """
    m = intmat.as_matrix(m)
    cert = check_type_j(m, f)
    if not cert.j:
        raise CertificateError("eigenstructure needs a certified type J matrix")
    N = len(m)
    prec = int(float_precision)
    with mpmath.workprec(prec):
        tol = mpmath.mpf(rank_tol) if rank_tol is not None else mpmath.mpf(2) ** (-(prec // 2))
        real = []
        for b in f.factors:
            vec = field_kernel_vector(m, b)
            for x in isolate_real_roots(b):
                real.append((x, vec))
        real.sort(key=lambda p: p[0].lo)
        s = len(real)
        imag = _imaginary_roots(f, prec)
        n = (N - s) // 2
        if sum(e for _, e in imag) != n:
            raise CertificateError("imaginary root count does not match the dimension")
        M = _mp_int_matrix(m)
        cols = []
        for beta, e in imag:
            A = M - beta * mpmath.eye(N)
            A = A ** e
            _, S, V = mpmath.svd_c(A)
            svals = sorted((abs(S[i]) for i in range(N)), reverse=True)
            top = svals[0] if svals[0] else mpmath.mpf(1)
            small = [i for i in range(N) if abs(S[i]) <= tol * top]
            if len(small) != e:
                raise UndeterminedError(
                    f"generalized eigenspace for {mpmath.nstr(beta, 8)} has numeric dimension "
                    f"{len(small)}, expected {e}; adjust rank_tol or raise precision"
                )
            for i in small:
                v = mpmath.matrix([mpmath.conj(V[i, j]) for j in range(N)])
                if e == 1:
                    lead = next(v[j] for j in range(N) if abs(v[j]) > tol)
                    v = v / lead
                cols.append(v)
        W = mpmath.zeros(N, n)
        for j, v in enumerate(cols):
            for i in range(N):
                W[i, j] = v[i]
        WH = W.H
        R = mpmath.inverse(WH * W) * (WH * (M * W)) if n else mpmath.zeros(0, 0)
        Q = mpmath.zeros(N, N)
        alphas = []
        for r, (x, vec) in enumerate(real):
            a = x.to_mpf(prec)
            alphas.append(a)
            for j in range(N):
                Q[r, j] = _eval_ratpoly(vec[j], a)
        for j in range(n):
            for i in range(N):
                Q[s + 2 * j, i] = mpmath.re(W[i, j])
                Q[s + 2 * j + 1, i] = mpmath.im(W[i, j])
        Ut = mpmath.zeros(N, N)
        for r, a in enumerate(alphas):
            Ut[r, r] = a
        if n:
            blk = _realify(R.T)
            for i in range(2 * n):
                for j in range(2 * n):
                    Ut[s + i, s + j] = blk[i, j]
        detq = mpmath.det(Q)
        norms = mpmath.mpf(1)
        for i in range(N):
            norms *= mpmath.norm(Q[i, :], 2)
        ratio = abs(detq) / norms
        eig_res = _max_entry(M * W - W * R) if n else mpmath.mpf(0)
    if ratio <= mpmath.mpf(2) ** (-(prec // 2)):
        raise CertificateError(
            f"basis matrix Q is numerically singular (Hadamard ratio {mpmath.nstr(ratio, 5)})"
        )
    return EigenData(
        m, s, n, prec, [x for x, _ in real], [v for _, v in real], imag, W, R, Q, Ut, detq, ratio, eig_res
    )


# -- lattice invariance ------------------------------------------------------------

@dataclass
class ResidualReport:
    ok: bool
    tolerance: float
    main_residual: object
    family_residuals: list = field(default_factory=list)  # relative residuals, one per D_i
    exact_dets: list = field(default_factory=list)
    worst: Optional[tuple] = None  # (which, row, col, value)
    detail: str = ""

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "tolerance": self.tolerance,
            "main_residual": mpmath.nstr(self.main_residual, 6),
            "family_residuals": [mpmath.nstr(r, 6) for r in self.family_residuals],
            "exact_dets": [str(d) for d in self.exact_dets],
            "worst": None if self.worst is None else [self.worst[0], self.worst[1], self.worst[2], mpmath.nstr(self.worst[3], 6)],
            "detail": self.detail,
        }


def _max_entry(a):
    return _worst_entry(a)[2]


def _worst_entry(a):
    best = (0, 0, mpmath.mpf(0))
    for i in range(a.rows):
        for j in range(a.cols):
            v = abs(a[i, j])
            if v > best[2]:
                best = (i, j, v)
    return best


def _poly_at_mp(p: IntPoly, a):
    n = a.rows
    acc = mpmath.zeros(n, n)
    for c in reversed(p.coeffs):
        acc = acc * a + mpmath.mpf(c) * mpmath.eye(n)
    return acc


def _family_polys(family) -> list[IntPoly]:
    if isinstance(family, DirichletFamily):
        return list(family.polys)
    return [p if isinstance(p, IntPoly) else IntPoly(p) for p in family]


def verify_lattice_invariance(m, family, eig: EigenData, tolerance: float = 1e-8) -> ResidualReport:
    """U^T Q = Q M^T and D_i(U^T) Q = D_i(M^T) relations, plus exact det D_i(M^T) = 1.

    The first residual is the absolute max-entry norm. The D_i residuals are
    divided by ||D_i(U^T)|| * ||Q|| since D_i(U^T) can have large entries.
    """
    m = intmat.as_matrix(m)
    polys = _family_polys(family)
    mt = intmat.transpose(m)
    rep = ResidualReport(ok=True, tolerance=tolerance, main_residual=mpmath.mpf(0))
    with mpmath.workprec(eig.prec):
        Q = eig.Q
        diff = eig.Ut * Q - Q * _mp_int_matrix(mt)
        i, j, v = _worst_entry(diff)
        rep.main_residual = v
        if v > tolerance:
            rep.ok = False
            rep.worst = ("U^T Q - Q M^T", i, j, v)
            rep.detail = f"lattice residual {mpmath.nstr(v, 5)} exceeds {tolerance}"
        qn = _max_entry(Q)
        for k, d in enumerate(polys):
            dm = poly_at_matrix(d, mt)
            det = intmat.det(dm)
            rep.exact_dets.append(det)
            du = _poly_at_mp(d, eig.Ut)
            diff = du * Q - Q * _mp_int_matrix(dm)
            i, j, v = _worst_entry(diff)
            scale = max(_max_entry(du), mpmath.mpf(1)) * qn
            rel = v / scale
            rep.family_residuals.append(rel)
            if rep.ok and det != 1:
                rep.ok = False
                rep.detail = f"det D_{k + 1}(M^T) = {det}"
            if rep.ok and rel > tolerance:
                rep.ok = False
                rep.worst = (f"D_{k + 1}(U^T) Q - Q D_{k + 1}(M^T)", i, j, v)
                rep.detail = f"relative residual {mpmath.nstr(rel, 5)} for D_{k + 1} exceeds {tolerance}"
    return rep


# -- twisted diagonal action and manifold data -------------------------------------

@dataclass
class TwistedDiagonalAction:
    s: int
    k: int
    scale_vectors: list  # s vectors of s positive Interval enclosures
    lattice_matrices: list  # s integer k x k matrices
    sources: Optional[tuple] = None  # (polys, real_eigs) to refine enclosures

    def __post_init__(self):
        for mu in self.lattice_matrices:
            if abs(intmat.det(mu)) != 1:
                raise DomainError("lattice matrices must lie in GL(k, Z)")

    def log_rows(self, bits: int) -> list:
        if self.sources is not None and bits > 0:
            polys, eigs = self.sources
            eps = Fraction(1, 1 << bits)
            return [[log_abs_enclosure(a, d, eps) for a in eigs] for d in polys]
        rows = []
        for vec in self.scale_vectors:
            row = []
            for iv in vec:
                if iv.lo <= 0:
                    raise UndeterminedError("scale enclosure is not certified positive")
                row.append(log_interval(iv, 64))
            rows.append(row)
        return rows


def check_nondegenerate(action: TwistedDiagonalAction, budget: int = 256) -> str:
    """'certified' when the log matrix determinant excludes 0, else 'undetermined'."""
    if action.s < 1 or len(action.scale_vectors) != action.s:
        return "undetermined"
    bits = 32
    while True:
        try:
            rows = action.log_rows(bits if action.sources else 0)
        except UndeterminedError:
            return "undetermined"
        if not determinant(rows).contains_zero():
            return "certified"
        if action.sources is None or bits >= budget:
            return "undetermined"
        bits = min(2 * bits, budget)


def group_presentation(monodromies: Sequence) -> dict:
    """Z^s semidirect Z^k with g_i e_a g_i^-1 = prod_b e_b^(mu_i)[b][a]."""
    s = len(monodromies)
    k = len(monodromies[0]) if s else 0
    gens = [f"g{i + 1}" for i in range(s)] + [f"e{a + 1}" for a in range(k)]
    rels = []
    for i in range(s):
        for j in range(i + 1, s):
            rels.append(f"[g{i + 1},g{j + 1}]")
    for a in range(k):
        for b in range(a + 1, k):
            rels.append(f"[e{a + 1},e{b + 1}]")
    for i, mu in enumerate(monodromies):
        for a in range(k):
            word = "*".join(f"e{b + 1}^{mu[b][a]}" for b in range(k) if mu[b][a] != 0) or "1"
            rels.append(f"g{i + 1}*e{a + 1}*g{i + 1}^-1 = {word}")
    return {"name": f"Z^{s} x| Z^{k}", "generators": gens, "relations": rels}


@dataclass
class ManifoldData:
    s: int
    n: int
    polys: list
    monodromies: list
    real_eigs: list
    scale_values: list  # scale_values[i][j] encloses D_i(alpha_j)
    eig: EigenData
    residuals: ResidualReport
    action: TwistedDiagonalAction
    nondegenerate: str
    primary: bool
    certificates: dict = field(default_factory=dict)

    @property
    def complex_dimension(self) -> int:
        return self.s + self.n

    @property
    def numeric_eigenbasis(self):
        return self.eig.Q

    @property
    def numeric_U(self):
        return self.eig.Ut.T

    def action_description(self) -> list[str]:
        out = []
        for i in range(self.s):
            scal = ", ".join(f"D{i + 1}(alpha{j + 1})*w{j + 1}" for j in range(self.s))
            out.append(f"g{i + 1}: (w, z) -> ({scal}, D{i + 1}(R^T) z)")
        out.append("e_r: (w, z) -> (w + Re-part of v_r, z + W-part of v_r)")
        return out

    def to_json(self) -> dict:
        return {
            "s": self.s,
            "n": self.n,
            "complex_dimension": self.complex_dimension,
            "primary": self.primary,
            "family": [p.to_json() for p in self.polys],
            "monodromies": [intmat.to_json(mu) for mu in self.monodromies],
            "real_eigs": [x.to_json() for x in self.real_eigs],
            "scale_values": [[iv.to_json() for iv in row] for row in self.scale_values],
            "numeric": self.eig.to_json(),
            "residuals": self.residuals.to_json(),
            "action": self.action_description(),
            "nondegenerate": self.nondegenerate,
            "cross_section": True,
            "group": group_presentation(self.monodromies),
            "certificates": self.certificates,
        }


def build_manifold(
    m,
    f: FactoredCharPoly,
    family,
    float_precision: int = DOUBLE,
    tolerance: float = 1e-8,
    precision_budget: int = 256,
) -> ManifoldData:
    m = intmat.as_matrix(m)
    polys = _family_polys(family)
    primary = isinstance(family, DirichletFamily) and family.primary
    check = verify_dirichlet(m, polys, precision_budget)
    if not check.accepted:
        raise CertificateError(
            f"family is not a certified Dirichlet family ({check.status} at {check.failed_axiom}: {check.detail})"
        )
    eig = eigenstructure(m, f, float_precision)
    rep = verify_lattice_invariance(m, polys, eig, tolerance)
    if not rep.ok:
        raise CertificateError(f"lattice invariance failed: {rep.detail}")
    mt = intmat.transpose(m)
    monos = [poly_at_matrix(d, mt) for d in polys]
    eps = Fraction(1, 1 << 64)
    scale = [[eval_enclosure(a, d, eps) for a in eig.real_eigs] for d in polys]
    action = TwistedDiagonalAction(eig.s, len(m), scale, monos, (tuple(polys), tuple(eig.real_eigs)))
    nondeg = check_nondegenerate(action, precision_budget)
    if nondeg != "certified":
        raise CertificateError("twisted diagonal action is not certified non-degenerate")
    certs = {
        "type_J": True,
        "dirichlet": check.to_json(),
        "monodromy_det_one": all(intmat.det(mu) == 1 for mu in monos),
        "lattice_invariance": rep.ok,
        "basis_nonsingular": True,
        "log_basis": nondeg,
    }
    return ManifoldData(eig.s, eig.n, polys, monos, eig.real_eigs, scale, eig, rep, action, nondeg, primary, certs)
