"""Bifurcation and phase-portrait data for the three chaotic maps."""

from __future__ import annotations

import csv
import io
import warnings

import numpy as np

from .chaos import (
    ChaosError,
    HenonParams,
    HybridParams,
    QuantumLogisticParams,
    henon_sequence,
    hybrid_sequence,
    quantum_logistic_sequence,
)

MAPS = ("henon", "hybrid", "qlogistic")


class InvalidRangeError(ValueError):
    pass


def parameter_grid(lo: float, hi: float, steps: int) -> np.ndarray:
    if not (np.isfinite(lo) and np.isfinite(hi)) or hi <= lo:
        raise InvalidRangeError(f"empty parameter range [{lo}, {hi}]")
    if steps < 2:
        raise InvalidRangeError(f"need at least 2 sweep steps, got {steps}")
    return np.linspace(lo, hi, steps)


def bifurcation(
    map_name: str,
    lo: float,
    hi: float,
    steps: int = 400,
    keep: int = 100,
    burn_in: int = 500,
    seed: tuple[float, ...] | None = None,
    beta: float = 0.3,
) -> np.ndarray:
    """Sweep the map's control parameter and collect post-transient iterates.

    Returns an ``(m, 2)`` array of ``(parameter, x)`` rows.  Parameter values
    whose orbit diverges are skipped with a warning.  The swept parameter is
    alpha for Henon (beta fixed), r for the hybrid map and eta for the
    quantum logistic map.
    """
    grid = parameter_grid(lo, hi, steps)
    rows = []
    skipped = 0
    for p in grid:
        try:
            if map_name == "henon":
                x0, y0 = seed or (0.1, 0.1)
                xs = henon_sequence(HenonParams(x0, y0, float(p), beta, burn_in), keep)[:, 0]
            elif map_name == "hybrid":
                (x0,) = seed or (0.37,)
                xs = hybrid_sequence(HybridParams(x0, float(p), burn_in), keep)
            elif map_name == "qlogistic":
                x0, y0, z0 = seed or (0.5, 0.05, 0.02)
                q = QuantumLogisticParams(x0, y0, z0, float(p), 6.0, burn_in)
                xs = quantum_logistic_sequence(q, keep)[:, 0]
            else:
                raise ValueError(f"unknown map {map_name!r}; choose from {MAPS}")
        except ChaosError:
            skipped += 1
            continue
        except ValueError as exc:
            if map_name not in MAPS:
                raise
            raise InvalidRangeError(f"parameter {p} outside the map's valid range: {exc}") from None
        rows.append(np.column_stack([np.full(keep, p), xs]))
    if skipped:
        warnings.warn(f"{skipped} of {len(grid)} parameter values diverged and were skipped", RuntimeWarning, stacklevel=2)
    if not rows:
        return np.empty((0, 2))
    return np.vstack(rows)


def qlogistic_phase(params: QuantumLogisticParams | None = None, n: int = 5000) -> np.ndarray:
    """``(n, 3)`` array of ``(x, y, z)`` states for a phase portrait."""
    if params is None:
        params = QuantumLogisticParams(0.5, 0.05, 0.02)
    return quantum_logistic_sequence(params, n)


def to_csv(rows: np.ndarray, header: list[str]) -> str:
    """Comma-separated text with a header row and 17 significant digits."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in np.asarray(rows):
        writer.writerow([format(float(v), ".17g") for v in row])
    return buf.getvalue()
