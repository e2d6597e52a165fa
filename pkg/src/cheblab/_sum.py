"""Deterministic compensated reductions for the prime sums.

Values are consumed in fixed chunks; chunk partials are combined with a
vectorized Neumaier update, so results do not depend on how the surrounding
work is distributed across workers and survive the 1e-8-relative identity
tests downstream.
"""

from __future__ import annotations

import numpy as np

DEFAULT_CHUNK = 1 << 16


def _neumaier_step(sums: np.ndarray, comps: np.ndarray, part: np.ndarray) -> None:
    total = sums + part
    swap = np.abs(sums) >= np.abs(part)
    comps += np.where(swap, (sums - total) + part, (part - total) + sums)
    sums[:] = total


def class_sums(
    weights: np.ndarray,
    class_ids: np.ndarray,
    n_classes: int,
    sums: np.ndarray | None = None,
    comps: np.ndarray | None = None,
    chunk: int = DEFAULT_CHUNK,
) -> tuple[np.ndarray, np.ndarray]:
    """Accumulate per-class sums of ``weights`` grouped by ``class_ids``.

    Pass the returned (sums, comps) pair back in to continue accumulating;
    read the result as ``sums + comps``.
    """
    if sums is None:
        sums = np.zeros(n_classes)
    if comps is None:
        comps = np.zeros(n_classes)
    for start in range(0, len(weights), chunk):
        stop = start + chunk
        part = np.bincount(
            class_ids[start:stop], weights=weights[start:stop], minlength=n_classes
        )
        _neumaier_step(sums, comps, part)
    return sums, comps


def compensated_total(values: np.ndarray, chunk: int = DEFAULT_CHUNK) -> float:
    """Neumaier-compensated sum of a 1-d array in fixed chunk order."""
    total = 0.0
    comp = 0.0
    for start in range(0, len(values), chunk):
        part = float(np.sum(values[start : start + chunk]))
        t = total + part
        if abs(total) >= abs(part):
            comp += (total - t) + part
        else:
            comp += (part - t) + total
        total = t
    return total + comp
