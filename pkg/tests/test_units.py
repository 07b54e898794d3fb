import random
from fractions import Fraction

import pytest

from otforge import intmat
from otforge.classify import FactoredCharPoly
from otforge.errors import CertificateError, DomainError, SearchExhausted
from otforge.interval import Interval
from otforge.polyring import IntPoly, companion, poly_at_matrix
from otforge.realroots import sign_at
from otforge.units import (
    OrderElement,
    build_dirichlet_family,
    find_units,
    is_unit,
    log_determinant,
    make_positive,
    real_eigenvalues,
    search_units,
    select_log_basis,
    verify_dirichlet,
    with_logs,
)

from conftest import B1, B2, C2, T


def test_is_unit():
    assert is_unit(OrderElement(B1, T))
    assert is_unit(OrderElement(B1, T + 1))
    assert is_unit(OrderElement(B1, T + 2))  # B1(-2) = -1
    assert not is_unit(OrderElement(B1, T + 3))  # B1(-3) = 19
    assert not is_unit(OrderElement(B1, IntPoly()))
    assert OrderElement(B1, B1 * T + 3).rep == IntPoly([3])


def test_find_units_order_and_content():
    units = find_units(B1, 1)
    reps = [u.elem.rep for u in units]
    assert T in reps
    assert IntPoly([1]) not in reps and IntPoly([-1]) not in reps
    keys = [u.elem.key() for u in units]
    assert keys == sorted(keys)
    for u in units:
        assert is_unit(u.elem)
        assert len(u.projected_logs) == 2


def test_torsion_reported_separately():
    q = IntPoly([1, 1, 1])  # t^2 + t + 1: t is a root of unity
    res = search_units(q, 1)
    assert res.units == []
    assert T in [e.rep for e in res.torsion]


def test_make_positive_squares_when_needed():
    u = with_logs(OrderElement(B1, T))  # both real roots negative
    assert not u.positivity
    p = make_positive(u)
    assert p.positivity and p.elem.rep == (T * T) % B1
    for a, b in zip(u.projected_logs, p.projected_logs):
        assert b == a * 2
    assert make_positive(p) is p


def test_select_log_basis_b1():
    basis = select_log_basis(find_units(B1, 1), 2)
    assert len(basis) == 2
    assert all(u.positivity for u in basis)
    assert not log_determinant(basis, 64).contains_zero()


def test_duplicate_units_never_certified():
    u = make_positive(with_logs(OrderElement(B1, T)))
    for bits in (32, 64, 128, 256):
        assert log_determinant([u, u], bits).contains_zero()
    with pytest.raises(SearchExhausted):
        select_log_basis([u, u], 2)


def test_select_log_basis_checks_shape():
    with pytest.raises(DomainError):
        select_log_basis(find_units(B1, 1), 3)


def test_primary_family(j1_family, j1_case):
    m, _ = j1_case
    fam = j1_family
    assert len(fam.polys) == 2 and fam.primary
    assert fam.index == [(1, 1), (1, 2)]
    for d in fam.polys:
        assert intmat.det(poly_at_matrix(d, m)) == 1
        assert d % C2 == T
    for d, p in zip(fam.polys, fam.unit_polys):
        assert d % B1 == p % B1
    assert fam.check.accepted and not fam.check.log_det.contains_zero()
    assert all(s == 1 for row in fam.check.signs for s in row)


def test_two_factor_family(j_case):
    m, f = j_case
    fam = build_dirichlet_family(m, f)
    assert len(fam.polys) == 4 and fam.check.accepted
    for (j, i), d in zip(fam.index, fam.polys):
        other = B2 if j == 1 else B1
        assert d % other == IntPoly([1])


def test_custom_family(j1_case):
    m, f = j1_case
    fam = build_dirichlet_family(m, f, "custom", [IntPoly([0, -1])])
    assert fam.mode == "custom" and not fam.primary
    assert all(d % C2 == IntPoly([0, -1]) for d in fam.polys)
    with pytest.raises(DomainError):
        build_dirichlet_family(m, f, "custom", [IntPoly([1, 1])])  # Res(t^2+1, t+1) = 2


def test_primary_needs_unit_constant_term():
    b0 = IntPoly([2, 1, 1])  # t^2 + t + 2: |B0(0)| = 2
    m = companion(b0 * B1)
    with pytest.raises((DomainError, CertificateError)):
        build_dirichlet_family(m, FactoredCharPoly(b0, [B1]))


def test_verify_dirichlet_axiom_order(j1_case, j1_family):
    m, _ = j1_case
    one = IntPoly([1])
    chk = verify_dirichlet(m, [one, one])
    assert chk.status == "violated" and chk.failed_axiom == "D3"
    chk = verify_dirichlet(m, [T + 2, one])
    assert chk.failed_axiom == "D1"
    chk = verify_dirichlet(m, [T, j1_family.polys[1]])  # t is negative at both real roots
    assert chk.failed_axiom == "D2"
    d = j1_family.polys[0]
    chk = verify_dirichlet(m, [d, d])
    assert chk.status == "violated" and chk.failed_axiom == "D3"
    assert verify_dirichlet(m, j1_family.polys).accepted


def test_lemma_det_positive_where_p_nonnegative():
    # det P(M) = prod P(lambda); complex pairs contribute |P(beta)|^2
    rng = random.Random(11)
    mats = [companion(C2 * B1), companion(C2 * B2), companion(IntPoly([-1, -1, 0, 1]))]
    for _ in range(12):
        n = rng.randint(2, 4)
        mats.append(tuple(tuple(rng.randint(-3, 3) for _ in range(n)) for _ in range(n)))
    checked = 0
    for m in mats:
        eigs = real_eigenvalues(m)
        for _ in range(25):
            p = IntPoly([rng.randint(-4, 4) for _ in range(rng.randint(1, 4))])
            if all(sign_at(a, p) >= 0 for a in eigs):
                checked += 1
                assert intmat.det(poly_at_matrix(p, m)) >= 0
    assert checked > 50


def test_dirichlet_json(j1_family):
    d = j1_family.to_json()
    assert d["mode"] == "primary" and d["certificate"]["status"] == "accepted"
    lo, hi = (Fraction(x) for x in d["certificate"]["log_det"])
    assert Interval(lo, hi) == j1_family.check.log_det
