"""Exact integer / rational matrices stored as tuples of tuples.

Sizes in this package stay below ~40, so plain Python lists beat any
array library once the entries outgrow 64 bits.
"""
from fractions import Fraction
from typing import Sequence

from .errors import DomainError

Matrix = tuple  # tuple[tuple[int, ...], ...]


def as_matrix(rows: Sequence[Sequence]) -> Matrix:
    m = tuple(tuple(r) for r in rows)
    if m and any(len(r) != len(m[0]) for r in m):
        raise DomainError("ragged matrix")
    return m


def shape(a: Matrix) -> tuple[int, int]:
    return (len(a), len(a[0]) if a else 0)


def is_square(a: Matrix) -> bool:
    r, c = shape(a)
    return r == c


def require_square(a: Matrix) -> int:
    r, c = shape(a)
    if r != c:
        raise DomainError(f"expected a square matrix, got {r}x{c}")
    return r


def identity(n: int, one=1) -> Matrix:
    zero = one - one
    return tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))


def zeros(r: int, c: int) -> Matrix:
    return tuple((0,) * c for _ in range(r))


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a)) if a else ()


def add(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def sub(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def scale(a: Matrix, k) -> Matrix:
    return tuple(tuple(k * x for x in r) for r in a)


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(ra, cb)) for cb in bt) for ra in a)


def matvec(a: Matrix, v: Sequence) -> tuple:
    return tuple(sum(x * y for x, y in zip(r, v)) for r in a)


def block_diag(*blocks: Matrix) -> Matrix:
    n = sum(len(b) for b in blocks)
    rows = []
    off = 0
    for b in blocks:
        k = len(b)
        for r in b:
            rows.append((0,) * off + tuple(r) + (0,) * (n - off - k))
        off += k
    return tuple(rows)


def poly_at(coeffs: Sequence[int], a: Matrix) -> Matrix:
    """Evaluate sum(coeffs[i] * a**i) by Horner's rule."""
    n = require_square(a)
    acc = zeros(n, n)
    for c in reversed(tuple(coeffs)):
        acc = matmul(acc, a)
        acc = tuple(
            tuple(x + (c if i == j else 0) for j, x in enumerate(r)) for i, r in enumerate(acc)
        )
    return acc


def det(a: Matrix) -> int:
    """Bareiss fraction-free determinant; exact for integer entries."""
    n = require_square(a)
    if n == 0:
        return 1
    m = [list(r) for r in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * pivot - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]


def rank(a: Matrix) -> int:
    m = [[Fraction(x) for x in r] for r in a]
    rows, cols = shape(a)
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c] / m[r][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        r += 1
        if r == rows:
            break
    return r


def solve(a: Matrix, b: Sequence) -> tuple:
    """Solve a x = b exactly over Q for square nonsingular a."""
    n = require_square(a)
    m = [[Fraction(x) for x in r] + [Fraction(y)] for r, y in zip(a, b)]
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            raise DomainError("singular system")
        m[c], m[piv] = m[piv], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for i in range(n):
            if i != c and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return tuple(r[n] for r in m)


def inverse_rational(a: Matrix) -> Matrix:
    n = require_square(a)
    cols = [solve(a, [1 if i == j else 0 for i in range(n)]) for j in range(n)]
    return transpose(tuple(cols))


def inverse_integer(a: Matrix) -> Matrix:
    """Integer inverse of a unimodular matrix; DomainError if det != +-1."""
    d = det(a)
    if d not in (1, -1):
        raise DomainError(f"matrix is not unimodular (det = {d})")
    inv = inverse_rational(a)
    out = tuple(tuple(int(x) for x in r) for r in inv)
    assert all(x.denominator == 1 for r in inv for x in r)
    return out


def power(a: Matrix, e: int) -> Matrix:
    n = require_square(a)
    if e < 0:
        a = inverse_integer(a)
        e = -e
    result = identity(n)
    base = a
    while e:
        if e & 1:
            result = matmul(result, base)
        base = matmul(base, base)
        e >>= 1
    return result


def is_identity(a: Matrix) -> bool:
    return all(x == (1 if i == j else 0) for i, r in enumerate(a) for j, x in enumerate(r))


def kernel_rational(a: Matrix) -> list[tuple]:
    """Basis of the right null space over Q (reduced row echelon form)."""
    rows, cols = shape(a)
    m = [[Fraction(x) for x in r] for r in a]
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][f]
        basis.append(tuple(v))
    return basis


def max_abs_entry(a: Matrix) -> int:
    return max((abs(x) for r in a for x in r), default=0)


def to_json(a: Matrix) -> list:
    return [[str(x) for x in r] for r in a]


def from_json(rows) -> Matrix:
    try:
        return as_matrix([[int(x) for x in r] for r in rows])
    except (TypeError, ValueError) as exc:
        raise DomainError(f"malformed integer matrix: {exc}") from exc
