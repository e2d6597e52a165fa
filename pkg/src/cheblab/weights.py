"""Gaussian test weights and averaging kernels with closed-form transforms.

The smoothing weight is eta(t) = exp(-a t^2) with Fourier transform
eta_hat(xi) = sqrt(pi/a) exp(-pi^2 xi^2 / a) under the convention
eta_hat(xi) = int exp(-2 pi i xi t) eta(t) dt.  Everything the prime-sum
pipeline needs is available in closed form:

* the exponential-moment value  int exp(t/2) eta(t) dt = sqrt(pi/a) exp(1/(16a)),
* the transform mass at the origin  eta_hat(0) = sqrt(pi/a),
* the L^2 mass  int eta_hat^2 = int eta^2 = sqrt(pi/(2a))  (Plancherel).

The averaging kernel phi(u) = exp(-b u^2) is even, nonnegative and has
nonnegative transform, with one-sided mass int_0^inf phi = sqrt(pi/b)/2.

Other weight families can be plugged in anywhere a weight is accepted; the
required surface is the :class:`WeightLike` protocol below.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Protocol, runtime_checkable

import numpy as np

from .errors import NonPositiveShapeError


@runtime_checkable
class WeightLike(Protocol):
    """Duck-typed weight interface used by the prime-sum evaluators."""

    def eta(self, t): ...

    def eta_hat(self, xi): ...

    def l_half(self) -> float: ...

    def alpha_l2(self) -> float: ...

    def truncation_width(self, tol: float) -> float: ...


@dataclass(frozen=True)
class GaussianWeight:
    """Even weight eta(t) = exp(-a t^2), a > 0."""

    a: float = 1.0

    def __post_init__(self) -> None:
        if not self.a > 0:
            raise NonPositiveShapeError(f"shape parameter a must be > 0, got {self.a}")

    def eta(self, t):
        """Weight value exp(-a t^2); accepts scalars or arrays."""
        return np.exp(-self.a * np.square(t))

    def eta_hat(self, xi):
        """Fourier transform sqrt(pi/a) exp(-pi^2 xi^2 / a); nonnegative."""
        return math.sqrt(math.pi / self.a) * np.exp(-(math.pi**2) * np.square(xi) / self.a)

    def eta_hat0(self) -> float:
        """eta_hat(0) = int eta = sqrt(pi/a)."""
        return math.sqrt(math.pi / self.a)

    def l_half(self) -> float:
        """int exp(t/2) eta(t) dt = sqrt(pi/a) exp(1/(16a)); even in the exponent."""
        return math.sqrt(math.pi / self.a) * math.exp(1.0 / (16.0 * self.a))

    def alpha_l2(self) -> float:
        """int eta_hat^2 = int eta^2 = sqrt(pi/(2a))."""
        return math.sqrt(math.pi / (2.0 * self.a))

    def truncation_width(self, tol: float) -> float:
        """Half-width W with eta negligible (< tol with slack) beyond |t| > W.

        W = sqrt(ln(1/tol)/a) + 2; the +2 absorbs the exp(t/2) growth of the
        prime-power density against the Gaussian tail.
        """
        if not 0 < tol < 1:
            raise ValueError(f"tol must be in (0, 1), got {tol}")
        return math.sqrt(math.log(1.0 / tol) / self.a) + 2.0


@dataclass(frozen=True)
class GaussianKernel:
    """Averaging kernel phi(u) = exp(-b u^2), b > 0; phi and phi_hat >= 0."""

    b: float = 1.0

    def __post_init__(self) -> None:
        if not self.b > 0:
            raise NonPositiveShapeError(f"shape parameter b must be > 0, got {self.b}")

    def phi(self, u):
        return np.exp(-self.b * np.square(u))

    def phi_hat(self, xi):
        return math.sqrt(math.pi / self.b) * np.exp(-(math.pi**2) * np.square(xi) / self.b)

    def phi_mass(self) -> float:
        """One-sided mass int_0^inf phi = sqrt(pi/b)/2."""
        return 0.5 * math.sqrt(math.pi / self.b)

    def support_cut(self, tol: float) -> float:
        """Smallest u0 with phi(u) < tol for all u > u0."""
        if not 0 < tol < 1:
            raise ValueError(f"tol must be in (0, 1), got {tol}")
        return math.sqrt(math.log(1.0 / tol) / self.b)
