"""Precision Measure of a reconstruction and cross-run statistics."""

from dataclasses import dataclass

import numpy as np
import scipy.linalg as la

from .errors import DegenerateReconstruction, LengthMismatch

__all__ = ["PrecisionReport", "RunStatistics", "precision_measure", "run_statistics"]


@dataclass(frozen=True)
class PrecisionReport:
    """``pm = n - numerator / denominator``.

    ``numerator`` is ``||grecons - g||`` and ``denominator`` is
    ``||grecons - mean(g)||`` (note: the mean of the *input*, not of the
    reconstruction).
    """

    n: int
    pm: float
    numerator: float
    denominator: float

    @property
    def ratio(self):
        return self.n - self.pm


@dataclass(frozen=True)
class RunStatistics:
    count: int
    mean: float
    std: float
    min: float
    max: float

    @property
    def relative_std(self):
        return self.std / abs(self.mean) if self.mean != 0 else float("inf")


def precision_measure(g, grecons):
    """Precision Measure of ``grecons`` against the input ``g``.

    The maximum is ``len(g)`` (perfect reconstruction); the metric falls by
    the ratio of the error norm to the norm of ``grecons - mean(g)``.

    Raises
    ------
    LengthMismatch
    DegenerateReconstruction
        If ``grecons`` equals ``mean(g)`` everywhere.
    """
    g = np.asarray(g, dtype=float)
    grecons = np.asarray(grecons, dtype=float)
    if g.ndim != 1 or g.shape != grecons.shape or g.shape[0] < 1:
        raise LengthMismatch(f"precision measure needs equal non-empty lengths, got {g.shape} and {grecons.shape}")
    n = g.shape[0]
    err = grecons - g
    dev = grecons - g.mean()
    # nrm2 is overflow-safe up to REALMAX; saturated reconstructions can exceed that
    num = float(la.norm(err))
    den = float(la.norm(dev))
    if den == 0:
        raise DegenerateReconstruction("reconstruction is identically the input mean; precision measure undefined")
    if np.isfinite(num) and np.isfinite(den):
        ratio = num / den
    else:
        s = max(np.max(np.abs(err)), np.max(np.abs(dev)))
        ratio = float(la.norm(err / s) / la.norm(dev / s))
    return PrecisionReport(n=n, pm=n - ratio, numerator=num, denominator=den)


def run_statistics(pms):
    pms = np.asarray(pms, dtype=float)
    if pms.shape[0] < 1:
        raise ValueError("no precision values")
    # deviations from the first value make identical inputs give exactly zero
    std = float(np.std(pms - pms[0], ddof=1)) if pms.shape[0] > 1 else 0.0
    # clip guards the min <= mean <= max invariant against rounding in the mean
    lo, hi = float(pms.min()), float(pms.max())
    mean = min(max(float(pms.mean()), lo), hi)
    return RunStatistics(count=int(pms.shape[0]), mean=mean, std=std, min=lo, max=hi)
