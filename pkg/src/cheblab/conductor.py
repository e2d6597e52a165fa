"""Conductor and discriminant arithmetic for the affine family.

For distinct primes a, p with p odd and p^2 not dividing a^(p-1) - 1:

* the degree-p subfield generated by a p-th root of a is monogenic, so the
  Artin conductor of the degree-(p-1) character equals |disc(X^p - a)| =
  p^p * a^(p-1);
* the nontrivial degree-one characters factor through the cyclotomic field
  and have conductor p;
* the conductor-discriminant product then gives the splitting-field
  discriminant d_L = p^(p-2) * (p^p * a^(p-1))^(p-1) and the root
  discriminant rd_L = d_L^(1/(p(p-1))).

The two numeric checks at the bottom verify that the conductor of the big
character sits inside its predicted bracket around degree * log(rd_L) and
above the (d-1) * log(rd_L) lower bound.  All integer quantities are exact;
logarithms of big integers go through math.log, which accepts arbitrary
precision ints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arith import validate_affine_pair
from .errors import PreconditionError, ZeroClassFunctionError
from .frobgroup import AffineGroup, ConjClass, as_class_values

RD_LOG_FACTOR = 3.0  # explicit constant for the log(rd_L) <= C log(ap) check


@dataclass(frozen=True)
class BracketCheck:
    """Two-sided test of log(conductor) / (degree * log rd_L)."""

    lower: float
    value: float
    upper: float
    passed: bool
    slack_floor_ok: bool  # d*e >= sqrt(|G|) - 1/2 with e = 1


@dataclass(frozen=True)
class ConductorProfile:
    """Exact conductor data for one (a, p) pair."""

    a: int
    p: int
    conductor: int  # Artin conductor of the degree-(p-1) character
    field_discriminant: int
    root_discriminant: float
    log_conductor: float
    log_root_discriminant: float
    rd_log_bounded: bool  # log rd_L <= RD_LOG_FACTOR * log(a*p)


def conductor_profile(a: int, p: int) -> ConductorProfile:
    """Exact conductors, discriminant and root discriminant for (a, p)."""
    validate_affine_pair(a, p)
    conductor = p**p * a ** (p - 1)
    d_l = p ** (p - 2) * conductor ** (p - 1)
    degree = p * (p - 1)
    log_conductor = math.log(conductor)
    log_rd = math.log(d_l) / degree
    return ConductorProfile(
        a=a,
        p=p,
        conductor=conductor,
        field_discriminant=d_l,
        root_discriminant=math.exp(log_rd),
        log_conductor=log_conductor,
        log_root_discriminant=log_rd,
        rd_log_bounded=log_rd <= RD_LOG_FACTOR * math.log(a * p),
    )


def lambda_j(table: AffineGroup, j: int) -> int:
    """Sum of j-th powers of the character degrees."""
    if j < 1:
        raise ValueError(f"need j >= 1, got {j}")
    return sum(chi.degree**j for chi in table.characters)


def lambda_11(table: AffineGroup, conj_class: ConjClass | int) -> float:
    """sum_chi chi(1) |chi(C)| for one conjugacy class."""
    cid = conj_class.id if isinstance(conj_class, ConjClass) else int(conj_class)
    return float(
        sum(chi.degree * abs(chi(cid)) for chi in table.characters)
    )


def lambda_12(table: AffineGroup, t) -> float:
    """sum_chi chi(1) |t_hat(chi)|^2 for a class function t."""
    values = as_class_values(t, table.p)
    return float(
        sum(chi.degree * abs(table.t_hat(values, chi)) ** 2 for chi in table.characters)
    )


def s_t(table: AffineGroup, t) -> float:
    """max over classes a != 1 of |sum_chi |t_hat(chi)|^2 chi(a)|, normalized.

    The normalizer is :func:`lambda_12`; the trivial class function raises.
    """
    values = as_class_values(t, table.p)
    if not np.any(np.abs(values) > 0):
        raise ZeroClassFunctionError("class function is identically zero")
    weights = [abs(table.t_hat(values, chi)) ** 2 for chi in table.characters]
    best = 0.0
    for cid in range(1, table.p):
        total = sum(w * chi(cid) for w, chi in zip(weights, table.characters))
        best = max(best, abs(total))
    return best / lambda_12(table, values)


def s_nonabelian_exact(table: AffineGroup) -> Fraction:
    """:func:`s_t` of the nonabelian character in exact rational arithmetic.

    All the character coefficients of the nonabelian character are exact
    integers divided by |G| (its values and the values of every character on
    the two classes where it is nonzero are integers), so the whole
    computation stays in Fractions.  Equals 1/d.
    """
    p, d, order = table.p, table.d, table.order
    theta = [int(table.nonabelian.values[cid].real) for cid in range(p)]
    sizes = [c.size for c in table.classes]

    def int_value(chi, cid: int) -> int:
        # exact only on the identity and translation classes
        return int(round(chi.values[cid].real))

    weights = []
    for chi in table.characters:
        acc = 0
        for cid in (0, 1):  # theta vanishes elsewhere
            acc += sizes[cid] * theta[cid] * int_value(chi, cid)
        weights.append(Fraction(acc, order) ** 2)

    normalizer = sum(w * chi.degree for w, chi in zip(weights, table.characters))
    best = Fraction(0)
    for cid in range(1, p):
        total = Fraction(0)
        for w, chi in zip(weights, table.characters):
            if w == 0:
                continue
            if not chi.is_nonabelian and cid >= 2:
                raise ArithmeticError("nonzero abelian coefficient; exact path invalid")
            total += w * int_value(chi, cid)
        best = max(best, abs(total))
    return best / normalizer


def check_conductor_bracket(profile: ConductorProfile) -> BracketCheck:
    """Two-sided bracket on log(conductor)/(degree * log rd_L).

    Uses the gap f = |G| - degree^2 = p - 1, which requires f <= |G|/4,
    i.e. p >= 5.
    """
    p = profile.p
    d = p - 1
    order = p * d
    f = float(order - d * d)  # = d
    if f > order / 4:
        raise PreconditionError(
            f"bracket needs the degree gap f = {int(f)} <= |G|/4 = {order / 4}; p={p} is too small"
        )
    half = math.sqrt(f / order)
    slack = half + 2.0 * half**3
    value = profile.log_conductor / (d * profile.log_root_discriminant)
    slack_floor_ok = f >= d * 1 >= math.sqrt(order) - 0.5
    return BracketCheck(
        lower=1.0 - slack,
        value=value,
        upper=1.0 + slack,
        passed=(1.0 - slack) <= value <= (1.0 + slack),
        slack_floor_ok=slack_floor_ok,
    )


def check_conductor_lower_bound(profile: ConductorProfile) -> bool:
    """log(conductor) >= (d - 1) * log(rd_L) with d = p - 1."""
    return profile.log_conductor >= (profile.p - 2) * profile.log_root_discriminant
