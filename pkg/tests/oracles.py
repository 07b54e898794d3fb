"""Independent reference computations used only by the tests.

These deliberately avoid the package's own algorithms: determinants by
Fraction elimination, characteristic polynomials by Faddeev-LeVerrier,
root counts by mpmath root finding.
"""
from fractions import Fraction

import mpmath


def det_fraction(rows):
    m = [[Fraction(x) for x in r] for r in rows]
    n = len(m)
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            d = -d
        d *= m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return d


def sylvester(a, b):
    """Coefficient lists constant-first; rows of a on top."""
    da, db = len(a) - 1, len(b) - 1
    n = da + db
    rows = []
    ra = list(reversed(a))
    rb = list(reversed(b))
    for i in range(db):
        rows.append([0] * i + ra + [0] * (n - i - len(ra)))
    for i in range(da):
        rows.append([0] * i + rb + [0] * (n - i - len(rb)))
    return rows


def resultant(a, b):
    return int(det_fraction(sylvester(a, b)))


def charpoly_faddeev(a):
    """Coefficients of det(tI - A), constant-first."""
    n = len(a)
    A = [[Fraction(x) for x in r] for r in a]

    def mul(x, y):
        return [[sum(x[i][k] * y[k][j] for k in range(n)) for j in range(n)] for i in range(n)]

    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    mk = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        am = mul(A, mk)
        c_prev = coeffs[n - k + 1]
        mk = [[am[i][j] + (c_prev if i == j else 0) for j in range(n)] for i in range(n)]
        amk = mul(A, mk)
        coeffs[n - k] = -sum(amk[i][i] for i in range(n)) / k
    return [int(c) for c in coeffs]


def real_root_count_numeric(coeffs, dps=60):
    """Distinct real roots via mpmath, for squarefree input."""
    with mpmath.workdps(dps):
        roots = mpmath.polyroots(list(reversed(coeffs)), maxsteps=400, extraprec=4 * dps)
        return sum(1 for z in roots if abs(mpmath.im(z)) < mpmath.mpf(10) ** (-dps // 2))


def poly_value(coeffs, x):
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def grid_sign_changes(coeffs, lo, hi, steps):
    xs = [Fraction(lo) + (Fraction(hi) - Fraction(lo)) * k / steps for k in range(steps + 1)]
    signs = [poly_value(coeffs, x) for x in xs]
    signs = [(v > 0) - (v < 0) for v in signs]
    changes, last = 0, 0
    for s in signs:
        if s == 0:
            continue
        if last and s != last:
            changes += 1
        last = s
    return changes
