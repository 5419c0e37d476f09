"""Optical elements as state and operator transforms.

Polarizers follow the Malus law. A polarizing beam splitter is modeled as
the complementary Malus pair (cos^2, sin^2) for ensemble photons and as a
two-outcome projective measurement for entangled photons. Sum-frequency
crystals swap helicity basis amplitudes; a Bell-state measurement is a
rank-2 projector on the chosen photon pair.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .qcore import BellKind, PureState, bell_state
from .sources import AxisSample

__all__ = [
    "PolarizerSetting",
    "SfgType",
    "bsm_projector",
    "malus_probability",
    "sfg_axis_transform",
    "sfg_transform",
]

_TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class PolarizerSetting:
    """Orientation of a linear polarizer axis; stored reduced to [0, pi)."""

    angle: float

    def __post_init__(self):
        object.__setattr__(self, "angle", float(np.mod(self.angle, np.pi)))


class SfgType(enum.Enum):
    """Sum-frequency crystal type: which helicity amplitude pair it swaps."""

    TYPE_I = "type_i"    # |++> <-> |-->
    TYPE_II = "type_ii"  # |+-> <-> |-+>


def malus_probability(photon_axis: float, polarizer: PolarizerSetting) -> float:
    """Transmission probability cos^2(polarizer - photon axis).

    The complementary output channel at ``polarizer + pi/2`` carries the
    remaining sin^2, so the two-channel probabilities always sum to one.
    """
    return float(np.cos(polarizer.angle - photon_axis) ** 2)


_SFG_PERMUTATION = {
    SfgType.TYPE_I: np.array([3, 1, 2, 0]),
    SfgType.TYPE_II: np.array([0, 2, 1, 3]),
}


def sfg_transform(t: SfgType, state: PureState) -> PureState:
    """Apply the crystal's amplitude swap to a two-photon state.

    Type-I exchanges the ``|++>`` and ``|-->`` amplitudes, type-II the
    ``|+->`` and ``|-+>`` amplitudes. Both are unitary involutions.
    """
    if state.dim != 4:
        raise ValueError(f"sfg_transform acts on two-photon states (dim 4), got dim {state.dim}")
    return PureState(state.amplitudes[_SFG_PERMUTATION[t]])


def sfg_axis_transform(t: SfgType, axis: AxisSample) -> AxisSample:
    """Advance both ensemble phase angles by pi for a type-I crystal passage.

    The axis angle theta is unchanged, and so is the phase difference
    ``phi3 - phi2``, since the shift is common to both photons. The
    corresponding rule for type-II passage is not defined here and is
    rejected.
    """
    if t is not SfgType.TYPE_I:
        raise ValueError("axis transform is only defined for type-I crystal passage")
    return AxisSample(
        theta=axis.theta,
        phi2=float(np.mod(axis.phi2 + np.pi, _TWO_PI)),
        phi3=float(np.mod(axis.phi3 + np.pi, _TWO_PI)),
    )


def bsm_projector(kind: BellKind, photon_pair: tuple[int, int] = (1, 2)) -> np.ndarray:
    """Projector onto a Bell state of photons 1 and 2, embedded in dim 8.

    Returns the rank-2 matrix ``|bell><bell| (x) I_2`` (trace 2, so it is a
    projector, not a density operator). Only the pair ``(1, 2)`` is
    supported under the fixed left-to-right index convention.
    """
    if tuple(photon_pair) != (1, 2):
        raise ValueError(f"unsupported photon pair {photon_pair!r}; only (1, 2) is supported")
    bell = bell_state(kind).amplitudes
    return np.kron(np.outer(bell, bell.conj()), np.eye(2))
