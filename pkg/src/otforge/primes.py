"""Miller-Rabin primality testing.

Below 2**64 the first twelve primes as bases give a deterministic answer.
Above that the same bases plus the primes up to 97 are used; a composite
passing all of them has not been observed but is not ruled out.
"""

DETERMINISTIC_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
EXTRA_BASES = (41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97)
DETERMINISTIC_LIMIT = 1 << 64

SMALL_PRIMES = tuple(
    p for p in range(2, 1000) if all(p % d for d in range(2, int(p**0.5) + 1))
)


def _strong_probable_prime(n: int, a: int) -> bool:
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(r - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in SMALL_PRIMES:
        if n == p:
            return True
        if n % p == 0:
            return False
    bases = DETERMINISTIC_BASES
    if n >= DETERMINISTIC_LIMIT:
        bases = DETERMINISTIC_BASES + EXTRA_BASES
    return all(_strong_probable_prime(n, a) for a in bases)


def is_prime_deterministic(n: int) -> bool:
    """Like is_prime, but refuses inputs where the answer would be probabilistic."""
    if n >= DETERMINISTIC_LIMIT:
        raise ValueError("n is too large for the deterministic witness set")
    return is_prime(n)


def primes_up_to(bound: int) -> tuple:
    return tuple(p for p in SMALL_PRIMES if p <= bound)
