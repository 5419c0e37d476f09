"""The two rival photon-pair source models.

``EntangledPair`` emits one of the four Bell states and follows Born-rule
joint statistics with full fringe visibility (V = 1). ``DisentangledEnsemble``
replaces the pair by a statistical mixture of product states: each emission
carries a shared random quantization axis plus an independent random phase
per photon, which preserves the classical angular-momentum correlation but
halves the fringe visibility (V = 1/2).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .qcore import ATOL_ALGEBRAIC, BellKind, DensityOperator, PureState, bell_state, projector

__all__ = [
    "AxisDistribution",
    "AxisSample",
    "DisentangledEnsemble",
    "EntangledPair",
    "PairSample",
    "SourceModel",
    "correlation_analytic",
    "entangled_pair_density",
    "pair_from_axis",
    "sample_disentangled_pair",
    "visibility_of",
]


class AxisDistribution(enum.Enum):
    """Distribution of the shared quantization axis over emissions."""

    UNIFORM = "uniform"


@dataclass(frozen=True)
class EntangledPair:
    """A source emitting a fixed Bell state every trial."""

    kind: BellKind = BellKind.PSI_MINUS


@dataclass(frozen=True)
class DisentangledEnsemble:
    """A source emitting product-state pairs with a random shared axis.

    With ``anticorrelated=True`` (the default) the second photon is
    polarized along the axis orthogonal to the first, mirroring the
    angular-momentum correlation of the singlet.
    """

    axis_distribution: AxisDistribution = AxisDistribution.UNIFORM
    anticorrelated: bool = True


SourceModel = EntangledPair | DisentangledEnsemble


@dataclass(frozen=True)
class AxisSample:
    """One ensemble draw: axis angle ``theta`` and per-photon phases.

    ``theta`` is the linear polarization axis of photon 2 in ``[0, pi)``
    (axes are pi-periodic); ``phi2`` and ``phi3`` are the photons' phase
    angles in ``[0, 2pi)``. The phase difference ``phi3 - phi2`` is what a
    phase-matching window tests.
    """

    theta: float
    phi2: float
    phi3: float

    def __post_init__(self):
        if not 0.0 <= self.theta < np.pi:
            raise ValueError(f"theta must lie in [0, pi), got {self.theta!r}")
        for name in ("phi2", "phi3"):
            value = getattr(self, name)
            if not 0.0 <= value < 2.0 * np.pi:
                raise ValueError(f"{name} must lie in [0, 2pi), got {value!r}")


@dataclass(frozen=True)
class PairSample:
    """Two product single-photon states drawn from the ensemble."""

    state2: PureState
    state3: PureState
    axis: AxisSample


def pair_from_axis(axis: AxisSample, anticorrelated: bool = True) -> PairSample:
    """Construct the product pair for a given axis draw.

    Photon 2 is ``cos(theta)|+> + e^{i phi2} sin(theta)|->``. With
    anticorrelation, photon 3 lies on the orthogonal axis,
    ``sin(theta)|+> - e^{i phi3} cos(theta)|->``, so that equal phases give
    exactly orthogonal polarizations; otherwise photon 3 shares the axis of
    photon 2 with its own phase.
    """
    c, s = np.cos(axis.theta), np.sin(axis.theta)
    state2 = PureState([c, np.exp(1j * axis.phi2) * s])
    if anticorrelated:
        state3 = PureState([s, -np.exp(1j * axis.phi3) * c])
    else:
        state3 = PureState([c, np.exp(1j * axis.phi3) * s])
    return PairSample(state2=state2, state3=state3, axis=axis)


def sample_disentangled_pair(
    rng: np.random.Generator, model: DisentangledEnsemble = DisentangledEnsemble()
) -> PairSample:
    """Draw one product pair: theta ~ U[0, pi), phi2, phi3 ~ U[0, 2pi)."""
    axis = AxisSample(
        theta=rng.random() * np.pi,
        phi2=rng.random() * 2.0 * np.pi,
        phi3=rng.random() * 2.0 * np.pi,
    )
    return pair_from_axis(axis, anticorrelated=model.anticorrelated)


def entangled_pair_density(kind: BellKind) -> DensityOperator:
    """Density operator of the Bell pair, ``|bell><bell|`` on the 4-dim space."""
    return projector(bell_state(kind))


def visibility_of(model: SourceModel) -> float:
    """Fringe visibility of the polarization correlation: 1 or 1/2."""
    if isinstance(model, EntangledPair):
        return 1.0
    if isinstance(model, DisentangledEnsemble):
        return 0.5
    raise TypeError(f"unknown source model {model!r}")


def correlation_analytic(model: SourceModel, a: float, b: float) -> float:
    """Closed-form polarization correlation E(a, b) = -V cos 2(a - b).

    ``a`` and ``b`` are the two polarizer angles in radians. The entangled
    singlet gives V = 1; the disentangled ensemble gives V = 1/2 (sign
    flipped when the ensemble is built without anticorrelation). Entangled
    kinds other than the singlet are rejected: this two-polarizer geometry
    is specific to the singlet.
    """
    delta = float(np.cos(2.0 * (a - b)))
    if isinstance(model, EntangledPair):
        if model.kind is not BellKind.PSI_MINUS:
            raise ValueError(
                "correlation_analytic supports only the singlet Bell state, "
                f"got {model.kind}"
            )
        return -delta
    if isinstance(model, DisentangledEnsemble):
        return -0.5 * delta if model.anticorrelated else 0.5 * delta
    raise TypeError(f"unknown source model {model!r}")
