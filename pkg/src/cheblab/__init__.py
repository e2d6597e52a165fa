"""Numerical laboratory for prime-splitting moments of an affine Galois family.

The package sieves primes, assigns each its splitting class in the degree
p(p-1) affine family generated by a p-th root of a prime, and evaluates
smoothed prime-power sums, their class-averaged moments, exact character
and conductor data, and a Monte-Carlo model of the limiting statistics.
"""

__version__ = "0.1.0"

from . import combinat, conductor, frobgroup, limit_model, psi_moments, sampler, weights

__all__ = [
    "__version__",
    "combinat",
    "conductor",
    "frobgroup",
    "limit_model",
    "psi_moments",
    "sampler",
    "weights",
]
