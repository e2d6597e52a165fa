"""Monte-Carlo model of the conjectural limiting behaviour of the moments.

Two experiments, both driven by a counter-based PRNG (Philox) with explicit
block-indexed substreams so results are bit-identical for any worker count:

* ``mc_centered_moments`` samples Z ~ N(0, 1) and estimates E[(Z^2 - 1)^s],
  which must reproduce the exact integers H_s from :mod:`cheblab.combinat`;
* ``mc_frobenius_moment`` draws one Gaussian amplitude per sample, assigns
  each conjugacy class of the affine group the error -theta(C) * X (theta
  the degree-d character), and averages the class-weighted 2m-th power.
  The exact answer is mu_{2m} * v^m * (d^(2m-1) + 1) / (d + 1).

The single-amplitude model keeps only the dominant character; the optional
``include_abelian`` flag adds independent Gaussian amplitudes for the
nontrivial degree-one characters for exploration (no exact target is
asserted for that variant).
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .combinat import h_recurrence, mu
from .frobgroup import group_table


@dataclass(frozen=True)
class LimitModelConfig:
    """d = complement order (d+1 must be prime), v = variance scale."""

    d: int
    v: float = 1.0
    n_samples: int = 1_000_000
    seed: int = 0
    block_size: int = 1 << 16
    include_abelian: bool = False

    def __post_init__(self) -> None:
        if self.d < 2:
            raise ValueError(f"need d >= 2, got {self.d}")
        if not self.v > 0:
            raise ValueError(f"need v > 0, got {self.v}")
        if self.n_samples < 1000:
            raise ValueError(f"need at least 1000 samples, got {self.n_samples}")
        if self.block_size < 1024:
            raise ValueError(f"block_size must be >= 1024, got {self.block_size}")


@dataclass(frozen=True)
class MomentEstimate:
    order: int
    estimate: float
    std_error: float
    n_samples: int
    target: float | None = None

    @property
    def deviation_in_se(self) -> float:
        """|estimate - target| in units of the standard error."""
        if self.target is None:
            raise ValueError("no target recorded")
        if self.std_error == 0:
            return 0.0 if self.estimate == self.target else math.inf
        return abs(self.estimate - self.target) / self.std_error


def _block_rng(cfg: LimitModelConfig, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=cfg.seed).jumped(block))


def _block_plan(cfg: LimitModelConfig) -> list[tuple[int, int]]:
    """(block index, block length) pairs covering n_samples."""
    plan = []
    remaining = cfg.n_samples
    block = 0
    while remaining > 0:
        size = min(cfg.block_size, remaining)
        plan.append((block, size))
        remaining -= size
        block += 1
    return plan


def _centered_block(args: tuple[LimitModelConfig, int, int, int]) -> np.ndarray:
    cfg, block, size, s_max = args
    rng = _block_rng(cfg, block)
    x = math.sqrt(cfg.v) * rng.standard_normal(size)
    y = (np.square(x) - cfg.v) / cfg.v
    out = np.empty((s_max, 2))
    power = np.ones_like(y)
    for s in range(1, s_max + 1):
        power = power * y
        out[s - 1, 0] = np.sum(power)
        out[s - 1, 1] = np.sum(np.square(power))
    return out


def mc_centered_moments(
    cfg: LimitModelConfig, s_max: int, workers: int = 1
) -> list[MomentEstimate]:
    """Estimates of E[(X^2 - v)^s] / v^s for s = 1..s_max, X ~ N(0, v).

    Identical in law to the centered square of a standard normal; the
    targets are the exact integers H_s.
    """
    if not 1 <= s_max <= 8:
        raise ValueError(f"need 1 <= s_max <= 8, got {s_max}")
    tasks = [(cfg, block, size, s_max) for block, size in _block_plan(cfg)]
    if workers <= 1:
        parts = [_centered_block(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_centered_block, tasks, chunksize=4))

    n = cfg.n_samples
    estimates = []
    for s in range(1, s_max + 1):
        total = math.fsum(part[s - 1, 0] for part in parts)
        total_sq = math.fsum(part[s - 1, 1] for part in parts)
        mean = total / n
        variance = max(total_sq / n - mean * mean, 0.0)
        estimates.append(
            MomentEstimate(
                order=s,
                estimate=mean,
                std_error=math.sqrt(variance / n),
                n_samples=n,
                target=float(h_recurrence(s)),
            )
        )
    return estimates


def frobenius_moment_coefficient(d: int, m: int) -> Fraction:
    """Exact class-average coefficient (d^(2m-1) + 1)/(d + 1) as a Fraction."""
    return Fraction(d ** (2 * m - 1) + 1, d + 1)


def frobenius_moment_target(d: int, m: int, v: float = 1.0) -> float:
    """mu_{2m} * v^m * (d^(2m-1) + 1)/(d + 1)."""
    return float(mu(2 * m) * frobenius_moment_coefficient(d, m)) * v**m


def _frobenius_block(args: tuple[LimitModelConfig, int, int, int]) -> tuple[float, float]:
    cfg, block, size, m = args
    table = group_table(cfg.d + 1)
    sizes = table.class_sizes.astype(float)
    theta = table.nonabelian.values.real.copy()
    rng = _block_rng(cfg, block)
    scale = math.sqrt(cfg.v)
    x = scale * rng.standard_normal(size)
    err = -np.outer(x, theta)
    if cfg.include_abelian:
        y = scale * rng.standard_normal((size, cfg.d - 1))
        abelian_real = np.array(
            [chi.values.real for chi in table.characters[1 : cfg.d]]
        )
        err -= y @ abelian_real
    vals = (err ** (2 * m)) @ sizes / table.order
    return float(np.sum(vals)), float(np.sum(np.square(vals)))


def mc_frobenius_moment(cfg: LimitModelConfig, m: int, workers: int = 1) -> MomentEstimate:
    """Class-averaged 2m-th moment of the single-amplitude error model.

    Requires d + 1 prime so the class data of the affine group exists.
    """
    if not 1 <= m <= 4:
        raise ValueError(f"need 1 <= m <= 4, got {m}")
    group_table(cfg.d + 1)  # raises if d + 1 is not an odd prime

    tasks = [(cfg, block, size, m) for block, size in _block_plan(cfg)]
    if workers <= 1:
        parts = [_frobenius_block(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_frobenius_block, tasks, chunksize=4))

    n = cfg.n_samples
    total = math.fsum(part[0] for part in parts)
    total_sq = math.fsum(part[1] for part in parts)
    mean = total / n
    variance = max(total_sq / n - mean * mean, 0.0)
    target = None if cfg.include_abelian else frobenius_moment_target(cfg.d, m, cfg.v)
    return MomentEstimate(
        order=2 * m,
        estimate=mean,
        std_error=math.sqrt(variance / n),
        n_samples=n,
        target=target,
    )
