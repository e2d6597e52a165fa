"""Smoothed prime-power sums, per-class error terms, and their moments.

The basic quantity is the weighted prime-power sum

    psi_eta(dataset, t, u) = sum over primes q and powers m >= 1 of
        t(class(q)^m) * log(q) * q^(-m/2) * eta(m*log q - u),

truncated to the window |m*log q - u| <= W where the Gaussian weight is
negligible.  The lower window edge is clamped to log 2 (there are no prime
powers below 2, so the clamp is exact); the upper edge must stay within the
sieved range or :class:`InsufficientSieveDepthError` is raised.

Everything else reduces to the per-class aggregates A_D (the smoothed mass
landing in class D): psi_eta of any class function is a dot product with A,
the per-class error terms feed the class-averaged moments M_n(u), and the
same moments re-derived through the character table (``moment_n_chars``)
must agree with the direct route to high relative accuracy; that agreement
is the package's finite orthogonality check.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from . import _sum
from .errors import CombinatorialBlowupError, InsufficientSieveDepthError
from .frobgroup import AffineGroup, ConjClass, as_class_values, class_power, group_table
from .sampler import FrobeniusDataset
from .weights import GaussianKernel, GaussianWeight

LOG2 = math.log(2.0)
DEFAULT_STEP = 0.05
DEFAULT_TUPLE_BUDGET = 10_000_000

FLAG_WINDOW_BELOW_RANGE = "window_below_range"
FLAG_DEPTH_TRUNCATED = "depth_truncated"
FLAG_M2_WINDOW_CLAMPED = "m2_window_clamped"


@dataclass(frozen=True)
class ErrorTermConfig:
    """Weight, optional central-point multiplicities, truncation tolerance.

    ``z_values`` has one real entry per character (abelian indices first,
    the nonabelian character last) and defaults to all zeros; entries for
    conjugate characters must be equal so class values stay real.
    """

    weight: GaussianWeight = GaussianWeight(1.0)
    z_values: tuple[float, ...] | None = None
    tol: float = 1e-12


def window(dataset: FrobeniusDataset, u: float, cfg: ErrorTermConfig) -> tuple[float, float, bool]:
    """Truncation window (lo, hi, clamped_below) in the m*log q variable."""
    width = cfg.weight.truncation_width(cfg.tol)
    log_x_max = math.log(dataset.config.x_max)
    hi = u + width
    if hi > log_x_max * (1 + 1e-12):
        raise InsufficientSieveDepthError(
            f"window top u + W = {hi:.3f} exceeds log(x_max) = {log_x_max:.3f}; "
            "sieve deeper or loosen the truncation tolerance"
        )
    lo = u - width
    clamped = lo < LOG2
    return max(lo, LOG2), hi, clamped


def max_valid_u(dataset: FrobeniusDataset, cfg: ErrorTermConfig) -> float:
    """Largest u whose truncation window fits inside the sieved range."""
    return math.log(dataset.config.x_max) - cfg.weight.truncation_width(cfg.tol)


def class_aggregates(dataset: FrobeniusDataset, u: float, cfg: ErrorTermConfig) -> np.ndarray:
    """Smoothed prime-power mass landing in each class id (length-p vector)."""
    p = dataset.config.p
    lo, hi, _ = window(dataset, u, cfg)
    log_primes = dataset.log_primes
    sums = np.zeros(p)
    comps = np.zeros(p)
    m_max = int(hi / LOG2)
    power_map_cache: dict[int, np.ndarray] = {}
    for m in range(1, m_max + 1):
        i0 = np.searchsorted(log_primes, lo / m, side="left")
        i1 = np.searchsorted(log_primes, hi / m, side="right")
        if i0 >= i1:
            continue
        lq = log_primes[i0:i1]
        x = m * lq
        wts = lq * np.exp(-0.5 * x) * cfg.weight.eta(x - u)
        ids = dataset.classes[i0:i1]
        if m > 1:
            pm = power_map_cache.get(m)
            if pm is None:
                pm = np.array([class_power(p, cid, m) for cid in range(p)], dtype=np.uint8)
                power_map_cache[m] = pm
            ids = pm[ids]
        _sum.class_sums(wts, ids, p, sums, comps)
    return sums + comps


def psi_eta(dataset: FrobeniusDataset, t, u: float, cfg: ErrorTermConfig):
    """Weighted prime-power sum of the class function t; float for real t."""
    p = dataset.config.p
    values = as_class_values(t, p)
    result = np.dot(values, class_aggregates(dataset, u, cfg))
    if np.iscomplexobj(values):
        return complex(result)
    return float(result)


def _z_vector(table: AffineGroup, cfg: ErrorTermConfig) -> np.ndarray:
    """Per-character multiplicities as an array, validated for realness."""
    p = table.p
    if cfg.z_values is None:
        return np.zeros(p)
    z = np.asarray(cfg.z_values, dtype=float)
    if z.shape != (p,):
        raise ValueError(f"z_values must have {p} entries, got shape {z.shape}")
    for i in range(p):
        j = table.conjugate_index(i)
        if z[i] != z[j]:
            raise ValueError(
                "z_values must agree on conjugate characters "
                f"(indices {i} and {j} differ)"
            )
    return z


def _z_class_values(table: AffineGroup, cfg: ErrorTermConfig) -> np.ndarray:
    """z paired against each class: sum_chi conj(chi(C)) z(chi), real."""
    z = _z_vector(table, cfg)
    if not z.any():
        return np.zeros(table.p)
    out = np.zeros(table.p, dtype=complex)
    for zi, chi in zip(z, table.characters):
        out += zi * np.conj(chi.values)
    return out.real  # conjugation symmetry of z makes the imaginary part vanish


def error_terms(
    dataset: FrobeniusDataset,
    u: float,
    cfg: ErrorTermConfig,
    aggregates: np.ndarray | None = None,
) -> np.ndarray:
    """Normalized per-class deviations from the smooth main term, all classes.

    Entry C is (|G|/|C|) psi_eta(1_C) - e^(u/2) L(1/2) - eta_hat(0) z_C.
    """
    table = group_table(dataset.config.p)
    if aggregates is None:
        aggregates = class_aggregates(dataset, u, cfg)
    main = math.exp(0.5 * u) * cfg.weight.l_half()
    zc = _z_class_values(table, cfg)
    scale = table.order / table.class_sizes
    return scale * aggregates - main - cfg.weight.eta_hat0() * zc


def error_term(
    dataset: FrobeniusDataset,
    conj_class: ConjClass | int,
    u: float,
    cfg: ErrorTermConfig,
) -> float:
    """Error term of one conjugacy class (accepts a ConjClass or its id)."""
    cid = conj_class.id if isinstance(conj_class, ConjClass) else int(conj_class)
    return float(error_terms(dataset, u, cfg)[cid])


def moment_n(
    dataset: FrobeniusDataset,
    u: float,
    n: int,
    cfg: ErrorTermConfig,
    aggregates: np.ndarray | None = None,
) -> float:
    """Class-averaged n-th moment (1/|G|) sum_C |C| err_C^n."""
    if n < 1:
        raise ValueError(f"moment order must be >= 1, got {n}")
    table = group_table(dataset.config.p)
    err = error_terms(dataset, u, cfg, aggregates)
    terms = table.class_sizes * err**n
    return math.fsum(terms.tolist()) / table.order


def moment_n_chars(
    dataset: FrobeniusDataset,
    u: float,
    n: int,
    cfg: ErrorTermConfig,
    aggregates: np.ndarray | None = None,
    max_tuples: int = DEFAULT_TUPLE_BUDGET,
) -> float:
    """The same moment assembled from character sums instead of classes.

    Expands err_C over the character table, so M_n becomes a sum over
    n-tuples of characters of prod_j psi*(chi_j) times the closed-form class
    sum of the conjugated tuple.  Must match :func:`moment_n` to high
    relative accuracy; the agreement is a finite orthogonality identity, not
    a numerical coincidence.
    """
    if n < 1:
        raise ValueError(f"moment order must be >= 1, got {n}")
    table = group_table(dataset.config.p)
    p = table.p
    if p**n > max_tuples:
        raise CombinatorialBlowupError(
            f"{p}^{n} character tuples exceed the budget of {max_tuples}"
        )
    if aggregates is None:
        aggregates = class_aggregates(dataset, u, cfg)

    z = _z_vector(table, cfg)
    main = math.exp(0.5 * u) * cfg.weight.l_half()
    eta0 = cfg.weight.eta_hat0()
    psi_star = np.empty(p, dtype=complex)
    for i, chi in enumerate(table.characters):
        psi_star[i] = np.dot(chi.values, aggregates) - eta0 * z[i]
    psi_star[0] -= main  # characters[0] is the trivial character

    d = table.d
    abelian_count = p - 1
    kinds = [chi.kind for chi in table.characters[:-1]]
    total = 0.0 + 0.0j
    for tup in product(range(p), repeat=n):
        k = 0
        j_sum = 0
        prod_val = 1.0 + 0.0j
        for i in tup:
            prod_val *= psi_star[i]
            if i == abelian_count:
                k += 1
            else:
                j_sum += kinds[i]
        if k > 0:
            cs = d**k + (-1) ** k * d
        elif j_sum % abelian_count == 0:
            cs = table.order
        else:
            continue
        total += prod_val * cs
    result = total / table.order
    if abs(result.imag) > 1e-6 * (1.0 + abs(result.real)):
        raise AssertionError(f"moment should be real, got imaginary part {result.imag}")
    return float(result.real)


def _simpson_grid(lo: float, hi: float, step: float) -> np.ndarray:
    if hi <= lo:
        raise ValueError(f"empty integration range [{lo}, {hi}]")
    if step <= 0:
        raise ValueError(f"grid step must be > 0, got {step}")
    intervals = max(2, math.ceil((hi - lo) / step))
    if intervals % 2:
        intervals += 1
    return np.linspace(lo, hi, intervals + 1)


def _simpson_integral(values: np.ndarray, h: float) -> float:
    acc = values[0] + values[-1] + 4.0 * np.sum(values[1:-1:2]) + 2.0 * np.sum(values[2:-1:2])
    return float(acc * h / 3.0)


_GRID_STATE: tuple[FrobeniusDataset, ErrorTermConfig, tuple[int, ...]] | None = None


def _grid_point(u: float) -> tuple[float, ...]:
    dataset, cfg, ns = _GRID_STATE
    aggregates = class_aggregates(dataset, u, cfg)
    return tuple(moment_n(dataset, u, n, cfg, aggregates) for n in ns)


def moment_grid(
    dataset: FrobeniusDataset,
    us: np.ndarray,
    ns: Sequence[int],
    cfg: ErrorTermConfig,
    workers: int = 1,
) -> dict[int, np.ndarray]:
    """M_n(u) for every n in ``ns`` over the grid ``us``, one pass per u.

    Grid points are independent; with workers > 1 they are evaluated in a
    process pool and reassembled in grid order, so the output does not
    depend on the worker count.
    """
    global _GRID_STATE
    ns = tuple(ns)
    _GRID_STATE = (dataset, cfg, ns)
    try:
        if workers <= 1:
            rows = [_grid_point(float(u)) for u in us]
        else:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                rows = list(pool.map(_grid_point, [float(u) for u in us], chunksize=8))
    finally:
        _GRID_STATE = None
    out = {}
    for col, n in enumerate(ns):
        out[n] = np.array([row[col] for row in rows])
    return out


def m2_estimate(
    dataset: FrobeniusDataset,
    U: float,
    cfg: ErrorTermConfig,
    step: float = DEFAULT_STEP,
    workers: int = 1,
) -> float:
    """Mean of M_2 over [2, U] by composite Simpson (window must fit)."""
    if U < 4:
        raise ValueError(f"need U >= 4, got {U}")
    us = _simpson_grid(2.0, U, step)
    m2 = moment_grid(dataset, us, (2,), cfg, workers=workers)[2]
    h = us[1] - us[0]
    return _simpson_integral(m2, h) / (U - 2.0)


def _integration_top(
    dataset: FrobeniusDataset, U: float, kernel: GaussianKernel, cfg: ErrorTermConfig
) -> tuple[float, set[str]]:
    flags: set[str] = set()
    top_kernel = U * kernel.support_cut(cfg.tol)
    top_depth = max_valid_u(dataset, cfg)
    if top_depth < top_kernel:
        flags.add(FLAG_DEPTH_TRUNCATED)
    top = min(top_kernel, top_depth)
    if top <= 0.5:
        raise InsufficientSieveDepthError(
            f"usable integration range [0, {top:.3f}] is empty; sieve deeper"
        )
    flags.add(FLAG_WINDOW_BELOW_RANGE)  # small-u windows are always clamped at log 2
    return top, flags


def variance_moment(
    dataset: FrobeniusDataset,
    U: float,
    s: int,
    kernel: GaussianKernel,
    cfg: ErrorTermConfig,
    step: float = DEFAULT_STEP,
    m2: float | None = None,
    workers: int = 1,
) -> float:
    """Kernel-averaged s-th centered moment of M_2 at scale U.

    The u-integral is truncated where the kernel drops below tol and at the
    largest u the sieve supports.  ``m2`` defaults to the Simpson mean of
    M_2 over [2, min(U, top)].
    """
    if s < 1:
        raise ValueError(f"need s >= 1, got {s}")
    top, _ = _integration_top(dataset, U, kernel, cfg)
    us = _simpson_grid(0.0, top, step)
    m2_vals = moment_grid(dataset, us, (2,), cfg, workers=workers)[2]
    if m2 is None:
        m2 = m2_estimate(dataset, min(U, top), cfg, step=step, workers=workers)
    integrand = kernel.phi(us / U) * (m2_vals - m2) ** s
    h = us[1] - us[0]
    return _simpson_integral(integrand, h) / (U * kernel.phi_mass())


def averaged_moment(
    dataset: FrobeniusDataset,
    U: float,
    n: int,
    kernel: GaussianKernel,
    cfg: ErrorTermConfig,
    step: float = DEFAULT_STEP,
    workers: int = 1,
) -> float:
    """Kernel-averaged M_n at scale U, truncated like :func:`variance_moment`."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    top, _ = _integration_top(dataset, U, kernel, cfg)
    us = _simpson_grid(0.0, top, step)
    mn_vals = moment_grid(dataset, us, (n,), cfg, workers=workers)[n]
    integrand = kernel.phi(us / U) * mn_vals
    h = us[1] - us[0]
    return _simpson_integral(integrand, h) / (U * kernel.phi_mass())


@dataclass
class MomentReport:
    """Everything one moments run produces, ready for JSON serialization."""

    a: int
    p: int
    x_max: int
    weight_a: float
    kernel_b: float
    tol: float
    step: float
    U: float
    u_grid: np.ndarray
    moments: dict[int, np.ndarray]
    m2: float
    variance_moments: dict[int, float]
    averaged_moments: dict[int, float]
    ratios: dict[int, float]
    flags: list[str]

    def to_json_dict(self) -> dict:
        return {
            "config": {
                "a": self.a,
                "p": self.p,
                "xmax": self.x_max,
                "weight_a": self.weight_a,
                "kernel_b": self.kernel_b,
                "tol": self.tol,
                "step": self.step,
                "U": self.U,
            },
            "u_grid": [float(u) for u in self.u_grid],
            "M": {str(n): [float(v) for v in vals] for n, vals in self.moments.items()},
            "m2": self.m2,
            "V": {str(s): float(v) for s, v in self.variance_moments.items()},
            "M1": {str(n): float(v) for n, v in self.averaged_moments.items()},
            "ratios": {str(n): float(v) for n, v in self.ratios.items()},
            "flags": sorted(self.flags),
        }


def compute_report(
    dataset: FrobeniusDataset,
    U: float,
    n_list: Iterable[int],
    s_list: Iterable[int],
    cfg: ErrorTermConfig,
    kernel: GaussianKernel,
    step: float = DEFAULT_STEP,
    workers: int = 1,
) -> MomentReport:
    """One full moments pass: pointwise M_n plus the averaged functionals.

    Per-class aggregates are computed once per grid point and shared by all
    requested moment orders.
    """
    n_list = sorted(set(int(n) for n in n_list))
    s_list = sorted(set(int(s) for s in s_list))
    if any(n < 1 for n in n_list) or any(s < 1 for s in s_list):
        raise ValueError("moment orders must be >= 1")
    ns = sorted(set(n_list) | {2})

    top, flags = _integration_top(dataset, U, kernel, cfg)
    us = _simpson_grid(0.0, top, step)
    h = us[1] - us[0]
    grid = moment_grid(dataset, us, ns, cfg, workers=workers)

    # m2 over [2, min(U, top)], reusing grid values via a sub-Simpson pass
    m2_top = min(U, top)
    if m2_top < 4:
        raise InsufficientSieveDepthError(f"cannot estimate m2 on [2, {m2_top:.2f}]")
    if m2_top < U:
        flags.add(FLAG_M2_WINDOW_CLAMPED)
    m2 = m2_estimate(dataset, m2_top, cfg, step=step, workers=workers)

    phi_scale = U * kernel.phi_mass()
    phi_vals = kernel.phi(us / U)
    variance_moments = {
        s: _simpson_integral(phi_vals * (grid[2] - m2) ** s, h) / phi_scale for s in s_list
    }
    averaged = {n: _simpson_integral(phi_vals * grid[n], h) / phi_scale for n in n_list}

    ratios = {}
    base = averaged.get(2)
    if base:
        for n in n_list:
            if n >= 4 and n % 2 == 0:
                ratios[n] = averaged[n] / base ** (n // 2)

    return MomentReport(
        a=dataset.config.a,
        p=dataset.config.p,
        x_max=dataset.config.x_max,
        weight_a=cfg.weight.a,
        kernel_b=kernel.b,
        tol=cfg.tol,
        step=step,
        U=U,
        u_grid=us,
        moments={n: grid[n] for n in n_list},
        m2=m2,
        variance_moments=variance_moments,
        averaged_moments=averaged,
        ratios=ratios,
        flags=sorted(flags),
    )
