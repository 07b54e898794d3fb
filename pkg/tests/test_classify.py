import random

import pytest

from otforge import intmat
from otforge.classify import (
    FactoredCharPoly,
    IrreducibilityWitness,
    char_poly,
    check_type_j,
    check_type_j0,
    irreducibility_witness,
    verify_type_certificate,
)
from otforge.errors import CertificateError
from otforge.polyring import IntPoly, companion, eval_int
from otforge.primes import is_prime, is_prime_deterministic

from conftest import B1, B2, B12, C2, T
from oracles import charpoly_faddeev


def test_degree_12_facts():
    assert eval_int(B12, -1) == -3
    assert eval_int(B12, 10) == 1001021080001
    assert is_prime_deterministic(1001021080001)
    w = irreducibility_witness(B12)
    assert w.kind == "filaseta-gross" and w.verify(B12)


def test_primality():
    assert [n for n in range(60) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
    assert is_prime(13331) and is_prime(14341)
    assert not is_prime(3215031751)  # strong pseudoprime to bases 2, 3, 5, 7
    assert is_prime(2**61 - 1)
    assert not is_prime((2**31 - 1) * (2**61 - 1))
    with pytest.raises(ValueError):
        is_prime_deterministic(2**64 + 13)


def test_irreducibility_witnesses():
    assert irreducibility_witness(T + 5).kind == "linear"
    for p in (C2, B1, B2):
        assert irreducibility_witness(p).kind == "filaseta-gross"
    w = irreducibility_witness(IntPoly([-2, 0, 1]))
    assert w.kind == "mod-prime" and w.verify(IntPoly([-2, 0, 1]))
    assert irreducibility_witness(IntPoly([1, 1, 1, 1])) is None  # (t+1)(t^2+1)
    assert irreducibility_witness((T - 3) * (T + 4)) is None
    w = IrreducibilityWitness.from_json(irreducibility_witness(B1).to_json())
    assert w.verify(B1) and not w.verify(B1 * T + 2)


def test_char_poly_matches_faddeev_oracle():
    rng = random.Random(7)
    for _ in range(25):
        n = rng.randint(1, 6)
        m = tuple(tuple(rng.randint(-4, 4) for _ in range(n)) for _ in range(n))
        assert list(char_poly(m).coeffs) == charpoly_faddeev(m)
    assert char_poly(companion(C2 * B1)) == C2 * B1


def test_type_j0():
    assert check_type_j0(C2 * B1).j0
    c = check_type_j0(IntPoly([-2, 0, 1]) ** 2 * C2)
    assert not c.j0 and "a real root is not simple" in c.failures
    assert not check_type_j0(C2).j0
    assert not check_type_j0(B1 * 0 + IntPoly([-1, 0, 1])).j0


def test_type_j1_example(j1_case):
    m, f = j1_case
    cert = check_type_j(m, f)
    assert (cert.j0, cert.j, cert.j1) == (True, True, True)
    assert (cert.s, cert.n) == (2, 2)
    assert verify_type_certificate(cert)
    assert all(c is not None and c.check() for _, _, c in cert.coprimality)


def test_type_j_not_j1(j_case):
    m, f = j_case
    cert = check_type_j(m, f)
    assert cert.j and not cert.j1
    assert (cert.s, cert.n) == (4, 3)
    assert verify_type_certificate(cert)
    assert cert.to_json()["verdicts"] == {"J0": True, "J": True, "J1": False}


def test_type_j_with_repeated_b0(jordan_case):
    m, f = jordan_case
    cert = check_type_j(m, f)
    assert cert.j1 and (cert.s, cert.n) == (2, 3)


def test_type_j_failures():
    m = companion(C2)
    cert = check_type_j(m, FactoredCharPoly(C2, []))
    assert cert.j is False
    q = IntPoly([-2, 0, 1])
    cert = check_type_j(companion(C2 * q), FactoredCharPoly(C2, [q]))
    assert cert.j is False  # no imaginary root in q, and det != 1
    with pytest.raises(CertificateError):
        check_type_j(companion(C2 * B1), FactoredCharPoly(C2, [B2]))
    with pytest.raises(CertificateError):
        check_type_j(companion(C2 * B1), FactoredCharPoly(C2 * -1, [B1 * -1]))


def test_unknown_irreducibility_is_not_a_failure(monkeypatch, j1_case):
    import otforge.classify as cl

    monkeypatch.setattr(cl, "irreducibility_witness", lambda p: None)
    m, f = j1_case
    cert = cl.check_type_j(m, f)
    assert cert.j is None and cert.j1 is None
    assert cert.to_json()["verdicts"]["J"] == "unknown"


def test_block_diagonal_input():
    m = intmat.block_diag(companion(C2), companion(B1))
    assert check_type_j(m, FactoredCharPoly(C2, [B1])).j


def test_det_requirement():
    q = IntPoly([-1, 3, 3, 3, 1])  # det of companion(C2 * q) is -1
    cert = check_type_j(companion(C2 * q), FactoredCharPoly(C2, [q]))
    assert cert.j is False
    assert any("det = -1" in x for x in cert.failures)
