"""Small integer-arithmetic helpers used across modules."""

from __future__ import annotations

from .errors import AdmissibilityError

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for all n < 3.3e24."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for base in _MR_BASES:
        x = pow(base, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def validate_affine_pair(a: int, p: int) -> None:
    """Check that (a, p) generates the degree-p(p-1) affine family.

    Requires a and p distinct primes, p odd, and p^2 not dividing
    a^(p-1) - 1 (which makes Z[a^(1/p)] maximal at p).
    """
    if not is_prime(a):
        raise AdmissibilityError(f"a must be prime, got {a}")
    if not is_prime(p) or p < 3:
        raise AdmissibilityError(f"p must be an odd prime >= 3, got {p}")
    if a == p:
        raise AdmissibilityError("a and p must be distinct primes")
    if pow(a, p - 1, p * p) == 1:
        raise AdmissibilityError(
            f"a^(p-1) = 1 mod p^2 for (a, p) = ({a}, {p}); "
            "the affine family needs p^2 not dividing a^(p-1) - 1"
        )


def multiplicative_order(c: int, p: int) -> int:
    """Order of c in (Z/pZ)^* for prime p and c not divisible by p."""
    c %= p
    if c == 0:
        raise ValueError(f"{c} is not invertible mod {p}")
    order, x = 1, c
    while x != 1:
        x = x * c % p
        order += 1
    return order


def smallest_primitive_root(p: int) -> int:
    """Smallest generator of (Z/pZ)^* for prime p >= 3."""
    group_order = p - 1
    prime_factors = _prime_factors(group_order)
    for g in range(2, p):
        if all(pow(g, group_order // q, p) != 1 for q in prime_factors):
            return g
    raise ValueError(f"no primitive root found mod {p}; is it prime?")


def _prime_factors(n: int) -> list[int]:
    factors = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            factors.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        factors.append(n)
    return factors
