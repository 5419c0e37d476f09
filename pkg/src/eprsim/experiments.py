"""Closed-form predictions for the four coincidence experiment families.

Each family is predicted for both source models, and each entangled
prediction can be cross-checked against a first-principles Born-rule
evaluation on the full one-, two- or three-photon space:

* ``aspect``: two-station double-coincidence polarizer correlation.
* ``gisin``: triple-coincidence fringe versus an analyzer phase angle,
  with a shared Bell pair and a joint singlet projection.
* ``zeilinger``: teleportation match/mismatch coincidence rates for
  diagonally polarized input photons.
* ``kim``: complete Bell-state-measurement fringes versus the analyzer
  angle at the receiving station.

The entangled expectations peak at 1/4; the ensemble versions halve the
fringe amplitude and sit on a nonzero baseline, giving the characteristic
1:3 offset-to-peak ratio.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import analytics
from .optics import PolarizerSetting
from .qcore import (
    ATOL_CONSISTENCY,
    BellKind,
    PureState,
    bell_state,
    born_expectation,
    linear_polarization_state,
    projector,
    tensor,
)
from .sources import EntangledPair, SourceModel, correlation_analytic, visibility_of

__all__ = [
    "AspectProbabilities",
    "Curve",
    "CurvePoint",
    "Diag45",
    "Engine",
    "ExperimentKind",
    "KimDetector",
    "ZEILINGER_CELLS",
    "aspect_probabilities",
    "entangled_first_principles",
    "gisin_expectation",
    "gisin_measured_state",
    "kim_bsm_kind",
    "kim_expectation",
    "kim_measured_state",
    "model_label",
    "sweep",
    "zeilinger_rate",
]

_SQRT_HALF = 1.0 / np.sqrt(2.0)


class ExperimentKind(enum.Enum):
    ASPECT_DOUBLE = "aspect"
    GISIN_TRIPLE = "gisin"
    ZEILINGER_TELEPORT = "zeilinger"
    KIM_COMPLETE_BSM = "kim"


class Engine(enum.Enum):
    ANALYTIC = "analytic"
    MONTE_CARLO = "montecarlo"


class Diag45(enum.Enum):
    """Diagonal polarization settings used at the teleportation stations."""

    PLUS = "+45"
    MINUS = "-45"

    @property
    def angle(self) -> float:
        return np.pi / 4 if self is Diag45.PLUS else -np.pi / 4


class KimDetector(enum.Enum):
    """The two Bell-state-measurement detector coincidences that fringe."""

    I = "I"
    II = "II"


# Cell order of the four teleportation match/mismatch combinations
# (alice, bob detector), used by the zeilinger table sweep.
ZEILINGER_CELLS = (
    (Diag45.PLUS, Diag45.PLUS),
    (Diag45.PLUS, Diag45.MINUS),
    (Diag45.MINUS, Diag45.PLUS),
    (Diag45.MINUS, Diag45.MINUS),
)


class AspectProbabilities(NamedTuple):
    p_pp: float
    p_pm: float
    p_mp: float
    p_mm: float


def model_label(model: SourceModel) -> str:
    """Short model name used in output metadata."""
    return "entangled" if isinstance(model, EntangledPair) else "disentangled"


def aspect_probabilities(
    model: SourceModel, a: PolarizerSetting, b: PolarizerSetting
) -> AspectProbabilities:
    """The four joint detection probabilities behind the correlation fringe.

    P(+-) = P(-+) = (1 + V cos 2(a-b))/4 and P(++) = P(--) =
    (1 - V cos 2(a-b))/4, with V the model visibility. They sum to one
    exactly; combining them as P(++) - P(+-) - P(-+) + P(--) reproduces the
    correlation -V cos 2(a-b).
    """
    if isinstance(model, EntangledPair) and model.kind is not BellKind.PSI_MINUS:
        raise ValueError(
            f"aspect probabilities require the singlet Bell state, got {model.kind}"
        )
    v = visibility_of(model)
    fringe = v * np.cos(2.0 * (a.angle - b.angle))
    unlike = 0.25 * (1.0 + fringe)
    # Complement rather than recompute, so the four channels total exactly 1.
    like = 0.5 - unlike
    return AspectProbabilities(p_pp=like, p_pm=unlike, p_mp=unlike, p_mm=like)


def gisin_expectation(
    model: SourceModel, beta: float, a0: float = _SQRT_HALF, a1: float = _SQRT_HALF
) -> float:
    """Triple-coincidence expectation versus the analyzer phase ``beta``.

    The receiving analyzer selects ``a0|+> + e^{i beta} a1|->`` with
    ``a0^2 + a1^2 = 1``. The entangled prediction is
    ``(1 - 2 a0 a1 cos beta)/8``; the ensemble prediction halves the fringe
    to ``(1 - a0 a1 cos beta)/8``. For the equal-amplitude analyzer these
    swing over [0, 1/4] and [1/16, 3/16] respectively.

    The unequal-amplitude entangled form is validated against the
    first-principles Born evaluation; the unequal-amplitude ensemble form
    is the matching half-fringe extrapolation.
    """
    if abs(a0 * a0 + a1 * a1 - 1.0) > ATOL_CONSISTENCY:
        raise ValueError(f"analyzer amplitudes must satisfy a0^2 + a1^2 = 1, got {a0, a1}")
    fringe = 2.0 * a0 * a1 * np.cos(beta) * visibility_of(model)
    # The fringe product can exceed 1 by one ulp; clamp the resulting
    # probability at zero.
    return float(max(0.0, (1.0 - fringe) / 8.0))


def zeilinger_rate(model: SourceModel, alice: Diag45, bob_detector: Diag45) -> float:
    """Teleportation coincidence rate for one match/mismatch cell.

    Entangled: 1/4 when Bob's detector matches Alice's preparation, 0 when
    it does not. Ensemble: 3/16 matched, 1/16 mismatched, i.e. a relative
    mismatched intensity of 1/3 instead of a full null.
    """
    matched = alice is bob_detector
    if isinstance(model, EntangledPair):
        return 0.25 if matched else 0.0
    # Ensemble average evaluated at the 45-degree mean axis, giving
    # (1 +/- 2 * 1/4)/8.
    return 3.0 / 16.0 if matched else 1.0 / 16.0


def kim_expectation(model: SourceModel, detector: KimDetector, phi: float) -> float:
    """Bell-state-measurement fringe versus the analyzer angle ``phi``.

    Detector I carries the ``+`` fringe, detector II the ``-`` fringe:
    ``(1 +/- 2V cos phi sin phi)/8`` with V the model visibility. The
    analyzer angle is 2pi-periodic and is accepted as any real number.
    """
    sign = 1.0 if detector is KimDetector.I else -1.0
    fringe = 2.0 * visibility_of(model) * np.cos(phi) * np.sin(phi)
    return float(max(0.0, (1.0 + sign * fringe) / 8.0))


# ---------------------------------------------------------------------------
# First-principles Born evaluations for the entangled model.
# ---------------------------------------------------------------------------

_PLUS_45 = projector(linear_polarization_state(np.pi / 4))

def kim_bsm_kind(detector: KimDetector) -> BellKind:
    """Joint projection observed by each fringing BSM detector.

    With the singlet shared between the stations, the detector that shows
    the rising (+) fringe corresponds to the Phi- type projection; with a
    Phi+ shared pair the assignment would be the opposite one.
    """
    return BellKind.PHI_MINUS if detector is KimDetector.I else BellKind.PHI_PLUS


def gisin_measured_state(beta: float, a0: float = _SQRT_HALF, a1: float = _SQRT_HALF) -> PureState:
    """Three-photon state selected by the joint singlet projection and analyzer."""
    analyzer = PureState([a0, np.exp(1j * beta) * a1])
    return tensor(bell_state(BellKind.PSI_MINUS), analyzer)


def kim_measured_state(detector: KimDetector, phi: float) -> PureState:
    """Three-photon state selected by one BSM detector and the analyzer."""
    analyzer = linear_polarization_state(phi)
    return tensor(bell_state(kim_bsm_kind(detector)), analyzer)


def _aspect_first_principles(a: float, b: float) -> float:
    rho = projector(bell_state(BellKind.PSI_MINUS))
    probs = []
    for channel_a in (0.0, np.pi / 2):
        for channel_b in (0.0, np.pi / 2):
            analyzer = tensor(
                linear_polarization_state(a + channel_a),
                linear_polarization_state(b + channel_b),
            )
            probs.append(born_expectation(rho, analyzer))
    p_pp, p_pm, p_mp, p_mm = probs
    return p_pp - p_pm - p_mp + p_mm


def _gisin_first_principles(beta: float, a0: float, a1: float) -> float:
    rho = tensor(_PLUS_45, projector(bell_state(BellKind.PHI_PLUS)))
    return born_expectation(rho, gisin_measured_state(beta, a0, a1))


def _zeilinger_first_principles(alice: Diag45, bob_detector: Diag45) -> float:
    rho = tensor(
        projector(linear_polarization_state(alice.angle)),
        projector(bell_state(BellKind.PSI_MINUS)),
    )
    measured = tensor(
        bell_state(BellKind.PSI_MINUS),
        linear_polarization_state(bob_detector.angle),
    )
    return born_expectation(rho, measured)


def _kim_first_principles(detector: KimDetector, phi: float) -> float:
    rho = tensor(_PLUS_45, projector(bell_state(BellKind.PSI_MINUS)))
    return born_expectation(rho, kim_measured_state(detector, phi))


def entangled_first_principles(kind: ExperimentKind, **settings) -> float:
    """Direct Born-rule evaluation of an entangled prediction.

    Evaluates the same quantity as the matching closed form, by explicit
    operator and state construction on the full product space. Settings per
    kind: ``aspect`` takes ``a`` and ``b`` (radians) and returns the
    correlation; ``gisin`` takes ``beta`` plus optional ``a0``/``a1``;
    ``zeilinger`` takes ``alice`` and ``bob_detector``; ``kim`` takes
    ``detector`` and ``phi``. Only the entangled model has a trial-level
    quantum description, so there is no ensemble counterpart here.
    """
    if kind is ExperimentKind.ASPECT_DOUBLE:
        return _aspect_first_principles(settings["a"], settings["b"])
    if kind is ExperimentKind.GISIN_TRIPLE:
        return _gisin_first_principles(
            settings["beta"], settings.get("a0", _SQRT_HALF), settings.get("a1", _SQRT_HALF)
        )
    if kind is ExperimentKind.ZEILINGER_TELEPORT:
        return _zeilinger_first_principles(settings["alice"], settings["bob_detector"])
    if kind is ExperimentKind.KIM_COMPLETE_BSM:
        return _kim_first_principles(settings["detector"], settings["phi"])
    raise ValueError(f"unknown experiment kind {kind!r}")


# ---------------------------------------------------------------------------
# Curves
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CurvePoint:
    x: float
    y: float
    stderr: float | None = None


@dataclass(frozen=True)
class Curve:
    """An ordered sweep of one experiment: strictly increasing x, bounded y."""

    kind: ExperimentKind
    model: SourceModel
    engine: Engine
    points: tuple[CurvePoint, ...]
    settings: tuple[tuple[str, object], ...] = ()

    def __post_init__(self):
        points = tuple(self.points)
        if not points:
            raise ValueError("a curve needs at least one point")
        xs = [p.x for p in points]
        if any(x2 <= x1 for x1, x2 in zip(xs, xs[1:])):
            raise ValueError("curve x values must be strictly increasing")
        lo, hi = (-1.0, 1.0) if self.kind is ExperimentKind.ASPECT_DOUBLE else (0.0, 1.0)
        for p in points:
            if not lo - 1e-12 <= p.y <= hi + 1e-12:
                raise ValueError(f"curve value {p.y!r} outside [{lo}, {hi}]")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "settings", tuple(self.settings))

    @property
    def xs(self) -> np.ndarray:
        return np.array([p.x for p in self.points])

    @property
    def ys(self) -> np.ndarray:
        return np.array([p.y for p in self.points])


def default_grid(kind: ExperimentKind, n: int = 64) -> list[float]:
    """Default sweep grid: 64 points over the natural domain of the kind."""
    if kind is ExperimentKind.ZEILINGER_TELEPORT:
        return [float(i) for i in range(len(ZEILINGER_CELLS))]
    stop = np.pi if kind is ExperimentKind.ASPECT_DOUBLE else 2.0 * np.pi
    return list(np.linspace(0.0, stop, n, endpoint=False))


def _analytic_value(kind, model, x, detector, a0, a1):
    if kind is ExperimentKind.ASPECT_DOUBLE:
        return correlation_analytic(model, 0.0, x)
    if kind is ExperimentKind.GISIN_TRIPLE:
        return gisin_expectation(model, x, a0, a1)
    if kind is ExperimentKind.ZEILINGER_TELEPORT:
        alice, bob = ZEILINGER_CELLS[int(x)]
        return zeilinger_rate(model, alice, bob)
    if kind is ExperimentKind.KIM_COMPLETE_BSM:
        if detector is None:
            raise ValueError("kim sweeps need a detector setting")
        return kim_expectation(model, detector, x)
    raise ValueError(f"unknown experiment kind {kind!r}")


def sweep(
    kind: ExperimentKind,
    model: SourceModel,
    grid=None,
    engine: Engine = Engine.ANALYTIC,
    mc=None,
    *,
    detector: KimDetector | None = None,
    a0: float = _SQRT_HALF,
    a1: float = _SQRT_HALF,
) -> Curve:
    """Evaluate one experiment over a grid and return the resulting curve.

    ``grid`` is a strictly increasing list of sweep values (radians, except
    the zeilinger table where it indexes the four match/mismatch cells).
    The analytic engine evaluates the closed forms; the Monte Carlo engine
    needs an ``McConfig`` and simulates each grid point with an
    independently derived random substream, so a fixed configuration gives
    bit-identical curves.
    """
    if grid is None:
        grid = default_grid(kind)
    grid = [float(x) for x in grid]
    if not grid:
        raise ValueError("sweep grid must not be empty")
    if kind is ExperimentKind.ZEILINGER_TELEPORT:
        valid = range(len(ZEILINGER_CELLS))
        if any(not x.is_integer() or int(x) not in valid for x in grid):
            raise ValueError("zeilinger grid entries must be cell indices 0..3")

    settings: list[tuple[str, object]] = []
    if kind is ExperimentKind.KIM_COMPLETE_BSM:
        settings.append(("detector", detector))
    if kind is ExperimentKind.GISIN_TRIPLE:
        settings.extend([("a0", a0), ("a1", a1)])

    if engine is Engine.ANALYTIC:
        points = [
            CurvePoint(x=x, y=float(_analytic_value(kind, model, x, detector, a0, a1)))
            for x in grid
        ]
        return Curve(kind=kind, model=model, engine=engine, points=tuple(points),
                     settings=tuple(settings))

    if engine is not Engine.MONTE_CARLO:
        raise ValueError(f"unknown engine {engine!r}")
    if mc is None:
        raise ValueError("montecarlo sweeps need an McConfig")

    from . import mc_engine

    points = []
    for i, x in enumerate(grid):
        if kind is ExperimentKind.ASPECT_DOUBLE:
            counts = mc_engine.run_double_coincidence(
                model, PolarizerSetting(0.0), PolarizerSetting(x), mc, key=(i,)
            )
            est = analytics.correlation_from_counts(counts)
            points.append(CurvePoint(x=x, y=est.value, stderr=est.std_err))
        else:
            if kind is ExperimentKind.ZEILINGER_TELEPORT:
                alice, bob = ZEILINGER_CELLS[int(x)]
                est = mc_engine.run_triple_coincidence(
                    kind, model, mc, alice=alice, bob_detector=bob, key=(i,)
                )
            elif kind is ExperimentKind.GISIN_TRIPLE:
                est = mc_engine.run_triple_coincidence(
                    kind, model, mc, beta=x, a0=a0, a1=a1, key=(i,)
                )
            else:
                est = mc_engine.run_triple_coincidence(
                    kind, model, mc, detector=detector, phi=x, key=(i,)
                )
            points.append(CurvePoint(x=x, y=est.value, stderr=est.std_err))
    return Curve(kind=kind, model=model, engine=engine, points=tuple(points),
                 settings=tuple(settings))
