"""Acceptance criteria 1-10, one test each.

Each test records a PASS/FAIL line; the lines are printed in the terminal
summary (see conftest.pytest_terminal_summary) and on stdout when run with -s.
Run directly with `python tests/test_acceptance.py`.
"""
import random
import sys
import time
from fractions import Fraction

import pytest

from otforge import intmat
from otforge._parallel import pmap
from otforge.classify import FactoredCharPoly, check_type_j, irreducibility_witness
from otforge.invariants import (
    INCONCLUSIVE,
    NO_LCK,
    NOT_OT,
    betti1,
    find_specialness_witness,
    is_diagonalizable,
    obstruction_report,
)
from otforge.manifold import DOUBLE, QUAD, eigenstructure, verify_lattice_invariance
from otforge.otbridge import compare_with_tm, multiplication_matrix
from otforge.polyring import (
    IntPoly,
    companion,
    companion_transpose,
    crt_lift,
    eval_int,
    poly_at_matrix,
    resultant,
    squarefree_part,
    strongly_coprime,
)
from otforge.primes import is_prime_deterministic
from otforge.realroots import count_real_roots, isolate_real_roots, sign_at
from otforge.units import build_dirichlet_family, find_units, real_eigenvalues, select_log_basis

import conftest
from conftest import B1, B2, B12, C2, jordan_block_matrix
from oracles import grid_sign_changes, resultant as res_oracle


def record(k, what, fn, limit=None):
    t0 = time.perf_counter()
    try:
        detail = fn()
        dt = time.perf_counter() - t0
        if limit is not None:
            assert dt < limit, f"took {dt:.2f}s, limit {limit}s"
    except Exception as exc:
        dt = time.perf_counter() - t0
        line = f"FAIL criterion {k:>2}: {what} ({dt:.2f}s) -- {exc}"
        conftest.ACCEPTANCE[k] = line
        print(line)
        raise
    line = f"PASS criterion {k:>2}: {what} ({dt:.2f}s){' -- ' + detail if detail else ''}"
    conftest.ACCEPTANCE[k] = line
    print(line)


def test_criterion_01_resultants():
    def run():
        assert resultant(B1, C2) == 1
        assert resultant(B2, B1) == 1
        assert resultant(B2, C2) == 1
        return "Res(B1,t^2+1) = Res(B2,B1) = Res(B2,t^2+1) = 1"

    record(1, "resultant facts", run, limit=1.0)


def test_criterion_02_root_counts():
    def run():
        for p in (B1, B2):
            roots = isolate_real_roots(p)
            assert len(roots) == 2 == count_real_roots(p)
            assert all(r.hi <= 0 for r in roots) and p(0) != 0
        assert count_real_roots(C2) == 0
        return "B1, B2: 2 negative real roots; t^2+1: 0"

    record(2, "real root counts", run, limit=1.0)


def test_criterion_03_degree_12():
    def run():
        assert eval_int(B12, -1) == -3
        v = eval_int(B12, 10)
        assert v == 1001021080001 and is_prime_deterministic(v)
        w = irreducibility_witness(B12)
        assert w.kind == "filaseta-gross" and w.verify(B12)
        return f"B(10) = {v} prime, Filaseta-Gross witness"

    record(3, "degree-12 example", run, limit=1.0)


def test_criterion_04_classification():
    from otforge.cli import main

    def run():
        c1 = check_type_j(companion(C2 * B1), FactoredCharPoly(C2, [B1]))
        assert c1.j1 is True
        c2 = check_type_j(companion(C2 * B1 * B2), FactoredCharPoly(C2, [B1, B2]))
        assert c2.j is True and c2.j1 is False
        data = conftest_data()
        import io
        import contextlib

        with contextlib.redirect_stdout(io.StringIO()):
            assert main(["classify", str(data / "j1_matrix.json"), str(data / "j1_factorization.json")]) == 0
            assert main(["classify", str(data / "j_matrix.json"), str(data / "j_factorization.json")]) == 0
        return "(t^2+1)B1 is J1; (t^2+1)B1B2 is J, not J1; exit 0"

    record(4, "classification", run, limit=5.0)


def conftest_data():
    from pathlib import Path

    return Path(__file__).resolve().parent.parent / "data"


_FAMILY = {}


def _j1_family():
    if "fam" not in _FAMILY:
        m = companion(C2 * B1)
        f = FactoredCharPoly(C2, [B1])
        _FAMILY["fam"] = (m, f, build_dirichlet_family(m, f, coeff_bound=10))
    return _FAMILY["fam"]


def test_criterion_05_dirichlet_family():
    def run():
        _FAMILY.clear()
        m, _, fam = _j1_family()
        assert len(fam.polys) == 2
        assert all(intmat.det(poly_at_matrix(d, m)) == 1 for d in fam.polys)
        eigs = real_eigenvalues(m)
        assert all(sign_at(a, d) == 1 for d in fam.polys for a in eigs)
        assert not fam.check.log_det.contains_zero()
        lo, hi = fam.check.log_det.lo, fam.check.log_det.hi
        return f"s = 2, log det in [{float(lo):.6f}, {float(hi):.6f}]"

    record(5, "primary Dirichlet family for companion((t^2+1)B1)", run, limit=60.0)


def test_criterion_06_lattice_residual():
    def run():
        m, f, fam = _j1_family()
        r53 = verify_lattice_invariance(m, fam, eigenstructure(m, f, DOUBLE))
        r113 = verify_lattice_invariance(m, fam, eigenstructure(m, f, QUAD))
        assert r53.ok and r113.ok
        assert r53.main_residual < 1e-8
        assert r113.main_residual < 1e-2 * r53.main_residual
        return f"double {float(r53.main_residual):.2e}, quad {float(r113.main_residual):.2e}"

    record(6, "lattice-invariance residual", run)


def test_criterion_07_specialness():
    def run():
        m, _, fam = _j1_family()
        w = find_specialness_witness(m, fam, 3)
        assert w is not None and w.det_n_minus_i != 0
        b1 = betti1(m, fam, w)
        assert b1 == 2
        return f"witness n = {list(w.exponents)}, det(N - I) = {w.det_n_minus_i}, b1 = {b1}"

    record(7, "specialness witness and b1", run)


def test_criterion_08_verdicts():
    def run():
        m8 = jordan_block_matrix()
        f8 = FactoredCharPoly(C2 * C2, [B1])
        fam8 = build_dirichlet_family(m8, f8)
        assert not is_diagonalizable(m8)
        rep = obstruction_report(m8, fam8, 3)
        assert rep.verdict_lck == NO_LCK and rep.verdict_ot == NOT_OT
        m, _, fam = _j1_family()
        rep6 = obstruction_report(m, fam, 3)
        assert rep6.verdict_lck == INCONCLUSIVE and rep6.verdict_ot == INCONCLUSIVE
        return "8x8 Jordan case: no-LCK, not-OT; 6x6: inconclusive"

    record(8, "non-diagonalizable verdicts", run)


def test_criterion_09_ot_bridge():
    def run():
        p = IntPoly([1, -3, -7, -3, 1])  # minimal polynomial of t^2 in Z[t]/B1
        xi = intmat.matmul(companion(B1), companion(B1))
        assert all(x == 0 for r in poly_at_matrix(p, xi) for x in r)
        units = [u.elem.rep for u in select_log_basis(find_units(p, 1), 2)]
        for d in units:
            mult = multiplication_matrix(p, d)
            assert mult == poly_at_matrix(d, companion(p))
            assert mult == poly_at_matrix(d, intmat.transpose(companion_transpose(p)))
        cert = compare_with_tm(p, units)
        assert cert.ok
        return f"units {[str(u) for u in units]}, {len(cert.checks)} exact checks"

    record(9, "OT bridge exactness", run, limit=10.0)


def _prop_resultant(rng):
    for _ in range(40):
        a, b, c = (IntPoly([rng.randint(-5, 5) for _ in range(rng.randint(2, 5))] + [rng.choice([-2, -1, 1, 2])]) for _ in range(3))
        assert resultant(a, b * c) == resultant(a, b) * resultant(a, c)
        assert resultant(a, b) == res_oracle(list(a.coeffs), list(b.coeffs))


def _prop_bezout(rng):
    for _ in range(40):
        a = IntPoly([rng.randint(-5, 5) for _ in range(rng.randint(1, 5))] + [1])
        b = a * IntPoly([rng.randint(-3, 3) for _ in range(rng.randint(1, 3))]) + 1
        cert = strongly_coprime(a, b)
        assert cert.u * a + cert.v * b == IntPoly([1])


def _prop_crt(rng):
    mods = [C2, B1, IntPoly([1, 1, 1])]
    for _ in range(40):
        pairs = [(m, IntPoly([rng.randint(-9, 9) for _ in range(m.degree)])) for m in mods]
        d = crt_lift(pairs)
        assert all(d % m == r % m for m, r in pairs)


def _prop_sturm(rng):
    for _ in range(40):
        roots = rng.sample(range(-10, 11), rng.randint(0, 4))
        p = IntPoly([rng.randint(1, 4), 0, 1])
        for r in roots:
            p = p * IntPoly([-r, 1])
        p = p ** rng.randint(1, 2)
        assert count_real_roots(p) == len(roots)
        sq = squarefree_part(p)
        assert grid_sign_changes(list(sq.coeffs), Fraction(-41, 4), Fraction(41, 4), 82) == len(roots)


def _prop_lemma_positivity(rng):
    mats = [companion(C2 * B1), companion(C2 * B2), jordan_block_matrix()]
    count = 0
    for m in mats:
        eigs = real_eigenvalues(m)
        for _ in range(40):
            p = IntPoly([rng.randint(-4, 4) for _ in range(rng.randint(1, 4))])
            if all(sign_at(a, p) >= 0 for a in eigs):
                count += 1
                assert intmat.det(poly_at_matrix(p, m)) >= 0
    assert count > 10


def _prop_jordan(rng):
    def jordan(lam, k):
        return tuple(tuple(lam if i == j else (1 if j == i + 1 else 0) for j in range(k)) for i in range(k))

    for _ in range(30):
        blocks = [(rng.randint(-2, 2), rng.randint(1, 3)) for _ in range(rng.randint(1, 3))]
        a = intmat.block_diag(*(jordan(l, k) for l, k in blocks))
        n = len(a)
        u = intmat.identity(n)
        for _ in range(2 * n if n > 1 else 0):
            i, j = rng.sample(range(n), 2)
            e = [list(r) for r in intmat.identity(n)]
            e[i][j] = rng.choice([-1, 1])
            u = intmat.matmul(u, intmat.as_matrix(e))
        conj = intmat.matmul(intmat.matmul(u, a), intmat.inverse_integer(u))
        assert is_diagonalizable(conj) == all(k == 1 for _, k in blocks)


def _prop_threads(monkeypatch):
    outs = []
    for n in ("1", "4"):
        monkeypatch.setenv("OTFORGE_THREADS", n)
        m = companion(C2 * B1 * B2)
        fam = build_dirichlet_family(m, FactoredCharPoly(C2, [B1, B2]))
        outs.append((fam.to_json(), pmap(lambda x: x * 3, range(20))))
    assert outs[0] == outs[1]


def test_criterion_10_property_suites(monkeypatch):
    def run():
        rng = random.Random(20240501)
        _prop_resultant(rng)
        _prop_bezout(rng)
        _prop_crt(rng)
        _prop_sturm(rng)
        _prop_lemma_positivity(rng)
        _prop_jordan(rng)
        _prop_threads(monkeypatch)
        return "resultant, Bezout, CRT, Sturm, det positivity, Jordan, threads"

    record(10, "seeded property suites", run)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
