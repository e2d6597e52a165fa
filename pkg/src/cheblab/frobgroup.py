"""Conjugacy classes and characters of the affine group of the line over F_p.

The group of maps x -> c*x + d on F_p (c invertible) has order p(p-1) and
exactly p conjugacy classes:

* id 0 -- the identity map, size 1;
* id 1 -- the translation class (all x -> x + d with d != 0), size p - 1;
* id c, 2 <= c <= p-1 -- all maps with multiplier c, size p.

Its irreducible characters are the p-1 degree-one characters lifted from the
multiplier quotient (indexed by a power j of the smallest primitive root) and
a single nonabelian character of degree p-1 supported on the identity and
translation classes.  The table is exact enough for everything downstream:
nonabelian values are integers, abelian values are roots of unity stored as
complex doubles together with their exact exponents.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence, Union

import numpy as np

from .arith import is_prime, smallest_primitive_root
from .errors import MixedTablesError, NotPrimeError, TooSmallError

NONABELIAN = "nonabelian"

IDENTITY_ID = 0
KERNEL_ID = 1


@dataclass(frozen=True)
class ConjClass:
    """One conjugacy class; ``representative`` is an affine map (c, d0)."""

    id: int
    size: int
    representative: tuple[int, int]


@dataclass(frozen=True, eq=False)
class Character:
    """A row of the character table, one value per class id.

    ``kind`` is the abelian index j in {0..p-2} or the string "nonabelian".
    For abelian characters ``exponents[c]`` holds the exact integer e with
    value = exp(2*pi*i*e/(p-1)) on class c, so products of abelian values
    can be tracked without rounding.
    """

    p: int
    kind: Union[int, str]
    degree: int
    values: np.ndarray
    exponents: tuple[int, ...] | None = None

    @property
    def is_nonabelian(self) -> bool:
        return self.kind == NONABELIAN

    def __call__(self, class_id: int) -> complex:
        return complex(self.values[class_id])


@dataclass(frozen=True, eq=False)
class AffineGroup:
    """Class data and full character table for the affine group over F_p."""

    p: int
    d: int
    order: int
    primitive_root: int
    classes: tuple[ConjClass, ...]
    characters: tuple[Character, ...]
    dlog: tuple[int, ...] = field(repr=False)  # dlog[c] for c in 1..p-1, index 0 unused

    @property
    def nonabelian(self) -> Character:
        """The unique character of degree p-1."""
        return self.characters[-1]

    def abelian(self, j: int) -> Character:
        """Degree-one character with index j mod (p-1)."""
        return self.characters[j % (self.p - 1)]

    @property
    def class_sizes(self) -> np.ndarray:
        return np.array([c.size for c in self.classes], dtype=np.int64)

    def class_power(self, class_id: int, m: int) -> int:
        """Class id of g^m for any g in the given class."""
        return class_power(self.p, class_id, m)

    def conjugate_index(self, i: int) -> int:
        """Index of the complex-conjugate character of characters[i]."""
        if i == self.p - 1:
            return i  # the nonabelian character is real
        return (-i) % (self.p - 1)

    def t_class(self, class_id: int) -> np.ndarray:
        """The normalized indicator (|G|/|C|) 1_C as a class-function vector."""
        t = np.zeros(self.p)
        t[class_id] = self.order / self.classes[class_id].size
        return t

    def t_hat(self, t: Sequence[complex] | np.ndarray, chi: Character) -> complex:
        """Character coefficient (1/|G|) sum_C |C| t(C) conj(chi(C))."""
        if chi.p != self.p:
            raise MixedTablesError(f"character from p={chi.p} used with table p={self.p}")
        t = np.asarray(t)
        if t.shape != (self.p,):
            raise ValueError(f"class function must have {self.p} values, got shape {t.shape}")
        return complex(np.sum(self.class_sizes * t * np.conj(chi.values)) / self.order)

    def class_sum(self, chis: Iterable[Character]) -> tuple[complex, int]:
        """(brute-force sum, closed-form prediction) of sum_C |C| prod chi_i(C).

        The brute force is the literal class sum: exact integer arithmetic
        whenever some factor is the nonabelian character (all surviving
        values are integers), complex double arithmetic otherwise.  The
        closed form is |G| when the abelian product is trivial and no factor
        is nonabelian, 0 when it is nontrivial, and d^k + (-1)^k d when k >= 1
        factors are nonabelian.
        """
        chis = list(chis)
        if not chis:
            raise ValueError("need at least one character")
        for chi in chis:
            if chi.p != self.p:
                raise MixedTablesError(
                    f"character from p={chi.p} used with table p={self.p}"
                )
        k = sum(1 for chi in chis if chi.is_nonabelian)
        closed = _closed_form(self, chis, k)
        if k > 0:
            # Literal class sum in exact integers: every complement class has
            # a zero factor, and the stored values on the identity and
            # translation classes are integers for all characters.
            identity_term = 1
            kernel_term = 1
            for chi in chis:
                identity_term *= int(chi.values[IDENTITY_ID].real)
                kernel_term *= int(chi.values[KERNEL_ID].real)
            brute = (
                self.classes[IDENTITY_ID].size * identity_term
                + self.classes[KERNEL_ID].size * kernel_term
            )
            return complex(brute), closed
        sizes = self.class_sizes
        prod = np.ones(self.p, dtype=complex)
        for chi in chis:
            prod *= chi.values
        return complex(np.sum(sizes * prod)), closed


def _closed_form(table: AffineGroup, chis: list[Character], k: int) -> int:
    if k > 0:
        return table.d**k + (-1) ** k * table.d
    return table.order if sum(chi.kind for chi in chis) % (table.p - 1) == 0 else 0


def class_power(p: int, class_id: int, m: int) -> int:
    """Class id of g^m: translations have order p, a multiplier-c map powers
    to a multiplier-c^m map whose class is the identity when c^m = 1."""
    if m < 1:
        raise ValueError(f"power must be >= 1, got {m}")
    if class_id == IDENTITY_ID:
        return IDENTITY_ID
    if class_id == KERNEL_ID:
        return IDENTITY_ID if m % p == 0 else KERNEL_ID
    cm = pow(class_id, m, p)
    return IDENTITY_ID if cm == 1 else cm


def build_group(p: int) -> AffineGroup:
    """Construct class data and the exact character table for F_p, p >= 3 prime."""
    if p < 3:
        raise TooSmallError(f"need p >= 3, got {p}")
    if not is_prime(p):
        raise NotPrimeError(f"p must be prime, got {p}")

    d = p - 1
    order = p * d
    g = smallest_primitive_root(p)

    dlog = [0] * p  # dlog[g^k mod p] = k; index 0 unused
    x = 1
    for k in range(d):
        dlog[x] = k
        x = x * g % p

    classes = [ConjClass(0, 1, (1, 0)), ConjClass(1, p - 1, (1, 1))]
    classes += [ConjClass(c, p, (c, 0)) for c in range(2, p)]

    characters = []
    omega = 2.0 * np.pi / d
    for j in range(d):
        values = np.ones(p, dtype=complex)
        exponents = [0, 0] + [(j * dlog[c]) % d for c in range(2, p)]
        for c in range(2, p):
            values[c] = cmath.exp(1j * omega * exponents[c])
        characters.append(Character(p, j, 1, values, tuple(exponents)))

    theta_values = np.zeros(p, dtype=complex)
    theta_values[IDENTITY_ID] = d
    theta_values[KERNEL_ID] = -1
    characters.append(Character(p, NONABELIAN, d, theta_values))

    for chi in characters:
        chi.values.setflags(write=False)

    return AffineGroup(
        p=p,
        d=d,
        order=order,
        primitive_root=g,
        classes=tuple(classes),
        characters=tuple(characters),
        dlog=tuple(dlog),
    )


@lru_cache(maxsize=None)
def group_table(p: int) -> AffineGroup:
    """Cached :func:`build_group`; tables are immutable and safe to share."""
    return build_group(p)


def as_class_values(t, p: int) -> np.ndarray:
    """Coerce a Character or a length-p sequence into a class-value vector."""
    if isinstance(t, Character):
        if t.p != p:
            raise MixedTablesError(f"character from p={t.p} used where p={p} expected")
        return t.values
    arr = np.asarray(t)
    if arr.shape != (p,):
        raise ValueError(f"class function must have {p} values, got shape {arr.shape}")
    return arr
