"""Gaussian moments and centered-square moment constants.

``mu(2n)`` is the double factorial (2n-1)!!, the 2n-th moment of a standard
Gaussian.  ``H_s = E[(Z^2-1)^s]`` for standard Gaussian Z equals the number
of fixed-point-free involutions pi on {1..s} x {1,2} with pi(j,1) != (j,2)
for every j; three independent routes compute it (binomial formula,
two-term recurrence, explicit enumeration of matchings).

All values are exact Python integers; H_200 has several hundred digits.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

from .errors import BruteForceTooLargeError

BRUTE_FORCE_MAX_S = 8


def mu(r: int) -> int:
    """r-th moment of the standard Gaussian: 0 for odd r, (r-1)!! for even r."""
    if r < 0:
        raise ValueError(f"moment order must be >= 0, got {r}")
    if r % 2 == 1:
        return 0
    out = 1
    for k in range(r - 1, 1, -2):
        out *= k
    return out


def h_formula(s: int) -> int:
    """H_s via the alternating binomial sum over even Gaussian moments."""
    if s < 0:
        raise ValueError(f"s must be >= 0, got {s}")
    return sum((-1) ** (s - j) * comb(s, j) * mu(2 * j) for j in range(s + 1))


def h_recurrence(s: int) -> int:
    """H_s via H_{s+2} = 2(s+1)(H_{s+1} + H_s), seeded H_0 = 1, H_1 = 0."""
    if s < 0:
        raise ValueError(f"s must be >= 0, got {s}")
    if s == 0:
        return 1
    prev, cur = 1, 0  # H_0, H_1
    for k in range(s - 1):
        prev, cur = cur, 2 * (k + 1) * (cur + prev)
    return cur


def _matchings_without_straight_pairs(points: list[int], s: int) -> int:
    # Pair the smallest unmatched point with every legal partner; points are
    # encoded as 2*j + (k-1) for (j, k) in {0..s-1} x {1, 2}, so the forbidden
    # partner of an even point is the next odd one.
    if not points:
        return 1
    first, rest = points[0], points[1:]
    total = 0
    for i, partner in enumerate(rest):
        if partner == first + 1 and first % 2 == 0:
            continue  # would pair (j,1) with (j,2)
        total += _matchings_without_straight_pairs(rest[:i] + rest[i + 1 :], s)
    return total


def h_bruteforce(s: int) -> int:
    """H_s by enumerating fixed-point-free involutions on 2s labeled points."""
    if s < 0:
        raise ValueError(f"s must be >= 0, got {s}")
    if s > BRUTE_FORCE_MAX_S:
        raise BruteForceTooLargeError(
            f"brute force enumerates (2s-1)!! matchings; s={s} exceeds the "
            f"limit {BRUTE_FORCE_MAX_S}"
        )
    return _matchings_without_straight_pairs(list(range(2 * s)), s)


def h_asymptotic_ratio(s: int) -> float:
    """H_s / mu_{2s} as a float; tends to exp(-1/2) for large s."""
    if s < 1:
        raise ValueError(f"s must be >= 1, got {s}")
    return float(Fraction(h_recurrence(s), mu(2 * s)))
