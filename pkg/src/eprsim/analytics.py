"""Statistical reduction of coincidence data.

Correlation from channel counts, least-squares fringe-visibility fitting,
the CHSH combination, offset-to-peak ratios and flat-floor accidental
subtraction. Everything here is pure arithmetic on counts or curves.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

import numpy as np

if TYPE_CHECKING:
    from .experiments import Curve
    from .mc_engine import CoincidenceCounts

__all__ = [
    "CorrelationEstimate",
    "VisibilityFit",
    "chsh",
    "correlation_from_counts",
    "fit_visibility",
    "offset_peak_ratio",
    "subtract_accidentals",
]


@dataclass(frozen=True)
class CorrelationEstimate:
    """A correlation value with its binomial-style standard error."""

    value: float
    std_err: float
    n: float

    def __post_init__(self):
        if not -1.0 <= self.value <= 1.0:
            raise ValueError(f"correlation {self.value!r} outside [-1, 1]")
        if self.std_err < 0.0:
            raise ValueError("standard error must be non-negative")


@dataclass(frozen=True)
class VisibilityFit:
    """Least-squares fringe visibility; reported unclamped."""

    v: float
    rms_residual: float


def correlation_from_counts(c: "CoincidenceCounts") -> CorrelationEstimate:
    """Correlation E = P(++) - P(+-) - P(-+) + P(--) from channel counts.

    Probabilities are normalized by the total number of detected
    coincidences, matching how counting experiments report them. The
    standard error is sqrt((1 - E^2)/N).
    """
    total = c.n_pp + c.n_pm + c.n_mp + c.n_mm
    if total <= 0:
        raise ValueError("cannot estimate a correlation from zero detected coincidences")
    value = (c.n_pp - c.n_pm - c.n_mp + c.n_mm) / total
    std_err = float(np.sqrt(max(0.0, 1.0 - value * value) / total))
    return CorrelationEstimate(value=float(value), std_err=std_err, n=float(total))


def fit_visibility(angles: Sequence[float], correlations: Sequence[float]) -> VisibilityFit:
    """Fit V in the fringe model E(theta) = -V cos 2*theta by least squares.

    The closed form is V = -sum(E_i c_i) / sum(c_i^2) with c_i = cos 2
    theta_i. A single data point determines V as long as its cos 2 theta is
    nonzero; an all-zero design is degenerate and rejected.
    """
    angles = np.asarray(angles, dtype=float)
    correlations = np.asarray(correlations, dtype=float)
    if angles.shape != correlations.shape or angles.size == 0:
        raise ValueError("angles and correlations must be equal-length, non-empty")
    design = np.cos(2.0 * angles)
    if not np.any(np.abs(design) > 1e-9):
        raise ValueError("degenerate fit: every cos 2*theta is zero")
    denom = float(np.sum(design * design))
    v = -float(np.sum(correlations * design)) / denom
    residuals = correlations + v * design
    return VisibilityFit(v=v, rms_residual=float(np.sqrt(np.mean(residuals**2))))


def chsh(e_ab: float, e_abp: float, e_apb: float, e_apbp: float) -> float:
    """The CHSH combination S = E(a,b) - E(a,b') + E(a',b) + E(a',b')."""
    for value in (e_ab, e_abp, e_apb, e_apbp):
        if not -1.0 <= value <= 1.0:
            raise ValueError(f"correlation {value!r} outside [-1, 1]")
    return e_ab - e_abp + e_apb + e_apbp


def offset_peak_ratio(curve: "Curve") -> float:
    """Ratio min(y)/max(y) of a curve: the offset relative to the peak."""
    ys = [p.y for p in curve.points]
    if not ys:
        raise ValueError("empty curve")
    peak = max(ys)
    if peak <= 0.0:
        raise ValueError(f"curve peak must be positive, got {peak!r}")
    return min(ys) / peak


def subtract_accidentals(c: "CoincidenceCounts", floor_per_channel: float) -> "CoincidenceCounts":
    """Remove a flat accidental floor from each of the four channels.

    Renormalization happens downstream in ``correlation_from_counts``, so a
    positive floor strictly increases the magnitude of a nonzero
    correlation without ever flipping its sign. The floor may be fractional
    and must not exceed any channel count.
    """
    from .mc_engine import CoincidenceCounts

    if floor_per_channel < 0.0:
        raise ValueError("accidental floor must be non-negative")
    least = min(c.n_pp, c.n_pm, c.n_mp, c.n_mm)
    if floor_per_channel > least:
        raise ValueError(
            f"accidental floor {floor_per_channel!r} exceeds the smallest channel count {least!r}"
        )
    return CoincidenceCounts(
        n_pp=c.n_pp - floor_per_channel,
        n_pm=c.n_pm - floor_per_channel,
        n_mp=c.n_mp - floor_per_channel,
        n_mm=c.n_mm - floor_per_channel,
        n_trials=c.n_trials,
        n_accidental=c.n_accidental,
    )
