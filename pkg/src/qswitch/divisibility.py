"""Divisibility diagnostics.

A positive, trace-preserving family can only shrink the trace distance of
two evolved states, so any increase along a trajectory witnesses that the
family is not positive-divisible. ``scan_monotonicity`` searches all
ordered index pairs, not just neighbours, so slow revivals are not hidden
by coarse grids. Complete-positive divisibility of switched dynamics is
certified through the Kraus commutation residual from :mod:`qswitch.cqs`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cqs import ChannelFamily, CommutativityReport, commutativity_defect

WITNESS_TOL_ANALYTIC = 1e-6
WITNESS_TOL_OPTIMIZED = 1e-4
DEFAULT_GRID_POINTS = 500


@dataclass
class Trajectory:
    """Trace-distance series over an increasing time grid."""

    times: np.ndarray
    distances: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        d = np.asarray(self.distances, dtype=float)
        if t.shape != d.shape or t.ndim != 1:
            raise ValueError("times and distances must be 1-d arrays of equal length")
        if np.any(np.diff(t) < 0):
            raise ValueError("times must be increasing")
        if not np.all(np.isfinite(d)):
            raise ValueError("distances must be finite")
        self.times = t
        self.distances = d


@dataclass
class WitnessReport:
    violated: bool
    t_pair: tuple | None
    increase: float | None
    tolerance: float

    def csv_comment(self, label: str = "") -> str:
        head = f"# witness {label}".rstrip()
        if not self.violated:
            return f"{head} violated=false tolerance={self.tolerance:.6g}"
        return (f"{head} violated=true t_a={self.t_pair[0]:.15g} "
                f"t_b={self.t_pair[1]:.15g} increase={self.increase:.15g} "
                f"tolerance={self.tolerance:.6g}")


def scan_monotonicity(traj: Trajectory, tol: float) -> WitnessReport:
    """Largest increase distances[b] - distances[a] over all pairs b > a.

    Ties resolve to the earliest t_a, then the earliest t_b. Violation is
    declared when the maximum increase exceeds ``tol``.
    """
    if tol <= 0.0:
        raise ValueError("tolerance must be positive")
    d = traj.distances
    if d.size < 2:
        raise ValueError("need at least two samples to scan monotonicity")
    best = -np.inf
    best_pair = None
    min_val = d[0]
    min_idx = 0
    for b in range(1, d.size):
        inc = d[b] - min_val
        if inc > best:
            best = inc
            best_pair = (min_idx, b)
        if d[b] < min_val:
            min_val = d[b]
            min_idx = b
    violated = best > tol
    if violated:
        a, b = best_pair
        return WitnessReport(violated=True,
                             t_pair=(float(traj.times[a]), float(traj.times[b])),
                             increase=float(best), tolerance=tol)
    return WitnessReport(violated=False, t_pair=None, increase=None, tolerance=tol)


def certify_cp_divisibility(fam1: ChannelFamily, fam2: ChannelFamily,
                            grid, tol: float = 1e-12):
    """(verdict, report): verdict true iff the commutation residual stays below tol."""
    report = commutativity_defect(fam1, fam2, grid)
    return report.max_defect <= tol, report
