from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from otforge.errors import DomainError
from otforge.polyring import IntPoly, squarefree_part
from otforge.realroots import (
    RealAlgebraic,
    count_in,
    count_real_roots,
    eval_enclosure,
    isolate_real_roots,
    log_abs_enclosure,
    root_counts,
    sign_at,
    sign_at_rational,
)

from conftest import B1, B2, B12, C2, T
from oracles import grid_sign_changes, real_root_count_numeric


def test_reference_root_counts():
    assert count_real_roots(B1) == 2
    assert count_real_roots(B2) == 2
    assert count_real_roots(C2) == 0
    assert count_real_roots(B12) == 2
    for p in (B1, B2):
        # endpoints are never roots, so hi <= 0 with p(0) != 0 means the root is negative
        assert all(x.hi <= 0 for x in isolate_real_roots(p)) and p(0) != 0


def test_isolating_intervals():
    roots = isolate_real_roots(B1)
    assert [(x.lo, x.hi) for x in roots] == [(-4, -2), (-2, 0)]
    assert all(x.check() for x in roots)
    assert float(roots[0]) == pytest.approx(-2.153721375541771)
    assert float(roots[1]) == pytest.approx(-0.4643126132081268)


def test_root_counts_with_multiplicity():
    rc = root_counts(C2 * C2 * B1)
    assert (rc.distinct_real, rc.distinct_imaginary) == (2, 4)
    assert (rc.real_with_multiplicity, rc.imaginary_with_multiplicity) == (2, 6)


def test_zero_polynomial_rejected():
    with pytest.raises(DomainError):
        count_real_roots(IntPoly())


def test_endpoint_roots_are_avoided():
    p = T * (T - 1) * (T + 1)  # roots at 0 and +-1, where bisection points land
    roots = isolate_real_roots(p)
    assert len(roots) == 3
    for x in roots:
        assert sign_at_rational(p, x.lo) != 0 and sign_at_rational(p, x.hi) != 0


@st.composite
def split_polys(draw):
    rs = draw(st.lists(st.integers(-12, 12), min_size=0, max_size=5, unique=True))
    halves = draw(st.lists(st.integers(-9, 9), min_size=0, max_size=2, unique=True))
    p = IntPoly([1])
    for r in rs:
        p = p * IntPoly([-r, 1])
    for h in halves:
        p = p * IntPoly([-(2 * h + 1), 2])  # roots at odd halves, distinct from integers
    c = draw(st.integers(1, 5))
    p = p * IntPoly([c, 0, 1])  # no real roots
    mult = draw(st.integers(1, 2))
    return p**mult, len(rs) + len(halves)


@given(split_polys())
def test_sturm_count_matches_constructed_roots(case):
    p, n = case
    assert count_real_roots(p) == n
    # grid-sign oracle on the squarefree part: grid of step 1/4 sees every root
    sq = squarefree_part(p)
    assert grid_sign_changes(list(sq.coeffs), Fraction(-51, 4), Fraction(51, 4), 102) == n


@given(st.lists(st.integers(-20, 20), min_size=2, max_size=7).filter(lambda c: c[-1] != 0))
def test_sturm_count_matches_numeric_roots(cs):
    p = IntPoly(cs)
    if p.degree < 1:
        return
    sq = squarefree_part(p)
    assert count_real_roots(p) == real_root_count_numeric(list(sq.coeffs))


@given(st.lists(st.integers(-20, 20), min_size=2, max_size=6).filter(lambda c: c[-1] != 0))
def test_count_in_partitions_the_line(cs):
    p = IntPoly(cs)
    total = count_in(p, "-inf", "+inf")
    assert count_in(p, "-inf", Fraction(1, 3)) + count_in(p, Fraction(1, 3), "+inf") == total
    assert len(isolate_real_roots(p)) == total


def test_sign_at_algebraic():
    a1, a2 = isolate_real_roots(B1)
    assert sign_at(a1, T) == -1
    assert sign_at(a1, B1) == 0
    assert sign_at(a1, B1 * T + 1) == 1  # value 1 at the root
    assert sign_at(a2, T + 1) == 1
    assert sign_at(a1, T + 2) == -1


def test_sign_at_shared_factor():
    x = isolate_real_roots(IntPoly([-2, 0, 1]))[1]  # sqrt 2
    assert sign_at(x, IntPoly([-2, 0, 1]) * IntPoly([5, 1])) == 0
    assert sign_at(x, IntPoly([-2, 1])) == -1


def test_enclosures_contain_true_values():
    with mpmath.workdps(50):
        for x in isolate_real_roots(B2):
            val = x.to_mpf(160)
            q = IntPoly([1, 2, 0, 5])
            iv = eval_enclosure(x, q, Fraction(1, 1 << 40))
            qv = 1 + 2 * val + 5 * val**3
            assert iv.width <= Fraction(1, 1 << 40)
            assert mpmath.mpf(iv.lo.numerator) / iv.lo.denominator <= qv
            assert qv <= mpmath.mpf(iv.hi.numerator) / iv.hi.denominator
            lg = log_abs_enclosure(x, q, Fraction(1, 1 << 50))
            true = mpmath.log(abs(qv))
            assert mpmath.mpf(lg.lo.numerator) / lg.lo.denominator <= true
            assert true <= mpmath.mpf(lg.hi.numerator) / lg.hi.denominator
            assert lg.width <= Fraction(1, 1 << 50)


def test_log_abs_of_vanishing_value():
    x = isolate_real_roots(B1)[0]
    with pytest.raises(DomainError):
        log_abs_enclosure(x, B1, Fraction(1, 100))


def test_real_algebraic_json():
    x = isolate_real_roots(B1)[0].refine(Fraction(1, 1000))
    y = RealAlgebraic.from_json(x.to_json())
    assert y == x and y.check()
    with pytest.raises(DomainError):
        RealAlgebraic(B1, Fraction(1), Fraction(1))
