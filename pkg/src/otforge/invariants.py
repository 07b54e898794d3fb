"""Specialness, b1, diagonalizability and the obstruction verdicts."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Optional, Sequence

from . import intmat
from ._parallel import chunked, pmap, thread_count
from .errors import DomainError
from .interval import Interval
from .polyring import IntPoly, RatPoly, is_squarefree, lcm, poly_at_matrix
from .realroots import log_abs_enclosure
from .units import DirichletFamily, real_eigenvalues, verify_dirichlet


def _krylov_minpoly(a, e) -> RatPoly:
    # smallest monic q with q(A) e = 0: first linear dependency in e, Ae, A^2 e, ...
    vecs = [tuple(Fraction(x) for x in e)]
    n = len(a)
    while True:
        nxt = intmat.matvec(a, vecs[-1])
        cols = vecs  # solve sum c_k vecs[k] = nxt
        mat = intmat.transpose(intmat.as_matrix(cols)) if cols else ()
        sol = _solve_ls(mat, nxt, len(cols))
        if sol is not None:
            return RatPoly([-c for c in sol] + [1])
        vecs.append(tuple(nxt))
        if len(vecs) > n + 1:
            raise AssertionError("Krylov sequence failed to terminate")


def _solve_ls(mat, rhs, k):
    """Exact solution of mat x = rhs (mat is n x k, full column rank), or None."""
    n = len(rhs)
    aug = [[Fraction(mat[i][j]) for j in range(k)] + [Fraction(rhs[i])] for i in range(n)]
    row = 0
    piv_cols = []
    for c in range(k):
        p = next((i for i in range(row, n) if aug[i][c] != 0), None)
        if p is None:
            return None
        aug[row], aug[p] = aug[p], aug[row]
        inv = 1 / aug[row][c]
        aug[row] = [x * inv for x in aug[row]]
        for i in range(n):
            if i != row and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[row])]
        piv_cols.append(c)
        row += 1
    if any(aug[i][k] != 0 for i in range(row, n)):
        return None
    return [aug[i][k] for i in range(k)]


def minimal_polynomial(a) -> RatPoly:
    """Monic minimal polynomial: lcm of the Krylov annihilators of e_1..e_n."""
    a = intmat.as_matrix(a)
    n = intmat.require_square(a)
    if n == 0:
        raise DomainError("empty matrix")
    out = RatPoly([1])
    for i in range(n):
        e = [0] * n
        e[i] = 1
        out = lcm(out, _krylov_minpoly(a, e))
    out = out.monic()
    if any(x != 0 for r in poly_at_matrix(out, a) for x in r):
        raise AssertionError("minimal polynomial does not annihilate the matrix")
    return out


def is_diagonalizable(a) -> bool:
    """Over C, for a rational matrix: the minimal polynomial is squarefree."""
    return is_squarefree(minimal_polynomial(a))


# -- specialness -------------------------------------------------------------------

@dataclass(frozen=True)
class SpecialnessWitness:
    exponents: tuple
    matrix: tuple
    det_n_minus_i: int

    def check(self, monodromies: Sequence) -> bool:
        n = _product_matrix(monodromies, self.exponents)
        if n != self.matrix:
            return False
        d = intmat.det(intmat.sub(n, intmat.identity(len(n))))
        return d == self.det_n_minus_i and d != 0

    def to_json(self) -> dict:
        return {
            "exponents": list(self.exponents),
            "matrix": intmat.to_json(self.matrix),
            "det_N_minus_I": str(self.det_n_minus_i),
        }


def _product_matrix(monodromies, exps):
    k = len(monodromies[0])
    out = intmat.identity(k)
    for mu, e in zip(monodromies, exps):
        if e:
            out = intmat.matmul(out, intmat.power(mu, e))
    return out


def graded_exponents(s: int, bound: int):
    """Nonzero vectors with |n_i| <= bound, by sum |n_i| then descending lex.

    Descending lex puts positive exponents first: (1, 0), (0, 1), (0, -1), (-1, 0).
    """
    vecs = [v for v in product(range(-bound, bound + 1), repeat=s) if any(v)]
    vecs.sort(key=lambda v: (sum(abs(x) for x in v), tuple(-x for x in v)))
    return vecs


def _family_polys(family) -> list[IntPoly]:
    if isinstance(family, DirichletFamily):
        return list(family.polys)
    return [p if isinstance(p, IntPoly) else IntPoly(p) for p in family]


def _screen(rows, v) -> bool:
    # keep v unless some eigenvalue row sum_i n_i log D_i(alpha_j) is certainly 0;
    # the enclosure test can only reject when every term is exactly 0
    for j in range(len(rows[0]) if rows else 0):
        acc = Interval.point(0)
        for i, n in enumerate(v):
            acc = acc + rows[i][j] * n
        if acc.lo == 0 == acc.hi:
            return False
    return True


def _try(args):
    monos, v = args
    n = _product_matrix(monos, v)
    d = intmat.det(intmat.sub(n, intmat.identity(len(n))))
    return (v, n, d) if d != 0 else None


def find_specialness_witness(m, family, search_bound: int = 3) -> Optional[SpecialnessWitness]:
    """First N = prod D_i(M^T)^{n_i} in graded-lex order with det(N - I) != 0."""
    if search_bound < 1:
        raise DomainError("search_bound must be positive")
    m = intmat.as_matrix(m)
    polys = _family_polys(family)
    mt = intmat.transpose(m)
    monos = [poly_at_matrix(d, mt) for d in polys]
    eigs = real_eigenvalues(m)
    eps = Fraction(1, 1 << 32)
    rows = [[log_abs_enclosure(a, d, eps) for a in eigs] for d in polys]
    cands = [v for v in graded_exponents(len(polys), search_bound) if _screen(rows, v)]
    batch = max(1, 4 * thread_count())
    for chunk in chunked(cands, max(1, len(cands) // batch)):
        for res in pmap(_try, [(monos, v) for v in chunk]):
            if res is not None:
                return SpecialnessWitness(*res)
    return None


def betti1(m, family, witness: Optional[SpecialnessWitness]):
    """s when a valid specialness witness exists, otherwise None (unknown)."""
    if witness is None:
        return None
    polys = _family_polys(family)
    mt = intmat.transpose(intmat.as_matrix(m))
    monos = [poly_at_matrix(d, mt) for d in polys]
    if not witness.check(monos):
        return None
    return len(polys)


# -- obstruction report --------------------------------------------------------------

NO_LCK = "no-LCK"
NOT_OT = "not-OT-homeomorphic"
INCONCLUSIVE = "inconclusive"


@dataclass
class ObstructionReport:
    special: Optional[SpecialnessWitness]
    b1: Optional[int]
    nondiag_indices: list
    verdict_lck: str
    verdict_ot: str
    primary_flag: bool
    justification: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "special": self.special.to_json() if self.special else None,
            "b1": "unknown" if self.b1 is None else self.b1,
            "nondiag_indices": list(self.nondiag_indices),
            "verdict_lck": self.verdict_lck,
            "verdict_ot": self.verdict_ot,
            "primary": self.primary_flag,
            "justification": list(self.justification),
        }


def obstruction_report(m, family, search_bound: int = 3, precision_budget: int = 256,
                       primary: Optional[bool] = None) -> ObstructionReport:
    m = intmat.as_matrix(m)
    polys = _family_polys(family)
    if primary is None:
        primary = isinstance(family, DirichletFamily) and family.primary
    why = []
    check = verify_dirichlet(m, polys, precision_budget)
    if not check.accepted:
        why.append(f"family not certified ({check.status} at {check.failed_axiom}); no verdict possible")
        return ObstructionReport(None, None, [], INCONCLUSIVE, INCONCLUSIVE, primary, why)
    why.append("Dirichlet axioms D1-D3 certified")
    nondiag = [i + 1 for i, d in enumerate(polys) if not is_diagonalizable(poly_at_matrix(d, m))]
    if nondiag:
        why.append(f"D_i(M) has a non-squarefree minimal polynomial for i in {nondiag}")
    else:
        why.append("every D_i(M) is diagonalizable over C")
    w = find_specialness_witness(m, polys, search_bound)
    b1 = betti1(m, polys, w)
    if w is not None:
        why.append(
            f"special: N = prod D_i(M^T)^n_i with n = {list(w.exponents)} has det(N - I) = {w.det_n_minus_i}"
        )
        why.append(f"b1 = s = {b1} from specialness")
    else:
        why.append(f"no specialness witness with |n_i| <= {search_bound}; b1 unknown")
    if primary and nondiag:
        lck = NO_LCK
        why.append("no-LCK: primary family and a non-diagonalizable D_i(M)")
    else:
        lck = INCONCLUSIVE
        why.append("LCK: hypotheses (primary family, non-diagonalizable D_i(M)) not both met")
    if w is not None and nondiag:
        ot = NOT_OT
        why.append("not-OT: special family (so b1 = s) and a non-diagonalizable D_i(M)")
    else:
        ot = INCONCLUSIVE
        why.append("OT: hypotheses (special family, non-diagonalizable D_i(M)) not both met")
    return ObstructionReport(w, b1, nondiag, lck, ot, primary, why)
