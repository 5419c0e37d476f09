"""Seeded Monte Carlo engine for coincidence experiments.

Trials are partitioned into ``streams`` blocks; block ``b`` of a run draws
from a PCG64 generator seeded by ``SeedSequence(seed, spawn_key=key + (b,))``
where ``key`` identifies the run (for example the sweep point index). Block
results are reduced in block order with plain integer addition, so a fixed
``(seed, trials, streams)`` gives bit-identical results no matter how the
blocks are scheduled. The generator name is exported as ``RNG_NAME`` so
output metadata can record it.

Entangled trials follow Born-rule joint statistics directly. Ensemble
trials draw a product pair, pass it through the phase-matching window and
then detect each photon independently with its local Malus probability
(double coincidence) or average the exact per-sample Born probability of
the measured three-photon state (triple coincidence, a variance-reduced
estimator).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .experiments import (
    Diag45,
    ExperimentKind,
    KimDetector,
    aspect_probabilities,
    gisin_expectation,
    kim_bsm_kind,
    kim_expectation,
    zeilinger_rate,
)
from .optics import PolarizerSetting
from .qcore import BellKind, DensityOperator, PureState, bell_state, linear_polarization_state, projector
from .sources import DisentangledEnsemble, EntangledPair, SourceModel

__all__ = [
    "CoincidenceCounts",
    "McConfig",
    "McEstimate",
    "RNG_NAME",
    "estimate_detection_rate",
    "inject_accidentals",
    "phase_accept",
    "run_double_coincidence",
    "run_triple_coincidence",
]

RNG_NAME = "pcg64"

_TWO_PI = 2.0 * np.pi
_CHANNELS = ("pp", "pm", "mp", "mm")


@dataclass(frozen=True)
class CoincidenceCounts:
    """Coincidence events per joint outcome channel.

    Engine output has integer channel counts; accidental subtraction may
    leave fractional ones. ``n_accidental`` tracks injected uncorrelated
    events, which are also included in the channel counts.
    """

    n_pp: float
    n_pm: float
    n_mp: float
    n_mm: float
    n_trials: int
    n_accidental: float = 0

    def __post_init__(self):
        for name in ("n_pp", "n_pm", "n_mp", "n_mm", "n_accidental"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        if self.n_trials <= 0:
            raise ValueError("n_trials must be positive")
        if self.total_detected > self.n_trials + self.n_accidental + 1e-9:
            raise ValueError("detected coincidences exceed trials plus accidentals")

    @property
    def total_detected(self) -> float:
        return self.n_pp + self.n_pm + self.n_mp + self.n_mm

    def channels(self) -> dict[str, float]:
        return {
            "pp": self.n_pp,
            "pm": self.n_pm,
            "mp": self.n_mp,
            "mm": self.n_mm,
        }


@dataclass(frozen=True)
class McConfig:
    """Monte Carlo run configuration.

    ``phase_window`` is the half-width of the phase-matching acceptance in
    radians; ``math.inf`` disables the test. ``accidental_rate`` is the
    per-trial probability of one extra uncorrelated coincidence.
    """

    trials: int
    seed: int
    phase_window: float = math.inf
    accidental_rate: float = 0.0
    streams: int = 1

    def __post_init__(self):
        if self.trials <= 0:
            raise ValueError("trials must be positive")
        if self.phase_window < 0.0:
            raise ValueError("phase_window must be non-negative")
        if not 0.0 <= self.accidental_rate < 1.0:
            raise ValueError("accidental_rate must lie in [0, 1)")
        if self.streams <= 0:
            raise ValueError("streams must be positive")


@dataclass(frozen=True)
class McEstimate:
    """A Monte Carlo estimate with its standard error and sample basis."""

    value: float
    std_err: float
    n: int


def _wrap_to_half_open(delta):
    """Wrap a phase difference into (-pi, pi]."""
    return np.pi - np.remainder(np.pi - delta, _TWO_PI)


def phase_accept(phi2: float, phi3: float, window: float) -> bool:
    """True when the circular phase difference |phi3 - phi2| is inside the window.

    The comparison is strict, so a zero window accepts nothing and an
    infinite window accepts everything.
    """
    if window < 0.0:
        raise ValueError("window must be non-negative")
    return bool(np.abs(_wrap_to_half_open(phi3 - phi2)) < window)


def _block_sizes(trials: int, streams: int) -> list[int]:
    base, extra = divmod(trials, streams)
    return [base + (1 if b < extra else 0) for b in range(streams)]


def _block_rng(seed: int, key: tuple[int, ...], block: int) -> np.random.Generator:
    seq = np.random.SeedSequence(entropy=seed, spawn_key=tuple(key) + (block,))
    return np.random.Generator(np.random.PCG64(seq))


def _map_blocks(cfg: McConfig, key, per_block):
    """Run ``per_block(block_index, block_size, rng)`` for every block.

    Blocks execute on a thread pool when more than one stream is
    configured; results are always collected in block order.
    """
    sizes = _block_sizes(cfg.trials, cfg.streams)

    def run(block: int):
        return per_block(block, sizes[block], _block_rng(cfg.seed, key, block))

    live = [b for b in range(cfg.streams) if sizes[b] > 0]
    if len(live) <= 1:
        return [run(b) for b in live]
    with ThreadPoolExecutor(max_workers=min(8, len(live))) as pool:
        return list(pool.map(run, live))


# ---------------------------------------------------------------------------
# Double coincidences
# ---------------------------------------------------------------------------


def _ensemble_double_block(theta, phi2, phi3, u2, u3, a_angle, b_angle, window, anticorrelated):
    """Channel counts for one vectorized block of ensemble double trials.

    Each accepted trial detects photon 2 in the + channel with Malus
    probability cos^2(a - theta) and photon 3 against its own axis (theta +
    pi/2 when anticorrelated). Rejected trials are counted as trials but
    produce no coincidence.
    """
    if math.isinf(window):
        accepted = np.ones(theta.shape, dtype=bool)
    else:
        accepted = np.abs(_wrap_to_half_open(phi3 - phi2)) < window
    axis3 = theta + (np.pi / 2.0 if anticorrelated else 0.0)
    plus2 = u2 < np.cos(a_angle - theta) ** 2
    plus3 = u3 < np.cos(b_angle - axis3) ** 2
    channel = 2 * (~plus2).astype(np.int64) + (~plus3).astype(np.int64)
    return np.bincount(channel[accepted], minlength=4)


def run_double_coincidence(
    model: SourceModel,
    a: PolarizerSetting,
    b: PolarizerSetting,
    cfg: McConfig,
    key: tuple[int, ...] = (),
) -> CoincidenceCounts:
    """Simulate double-coincidence counting at two polarizer stations.

    Entangled pairs sample one of the four joint outcomes per trial from
    the Born-rule probabilities (their phases always match, so the
    phase window does not apply). Ensemble pairs are phase-gated and then
    detected locally and independently. Accidental coincidences are
    injected afterwards when the configuration asks for them.
    """
    if isinstance(model, EntangledPair):
        probs = aspect_probabilities(model, a, b)
        cumulative = np.cumsum(probs)

        def per_block(block, size, rng):
            outcome = np.searchsorted(cumulative, rng.random(size), side="right")
            return np.bincount(np.minimum(outcome, 3), minlength=4)

    elif isinstance(model, DisentangledEnsemble):

        def per_block(block, size, rng):
            theta = rng.random(size) * np.pi
            phi2 = rng.random(size) * _TWO_PI
            phi3 = rng.random(size) * _TWO_PI
            u2 = rng.random(size)
            u3 = rng.random(size)
            return _ensemble_double_block(
                theta, phi2, phi3, u2, u3, a.angle, b.angle,
                cfg.phase_window, model.anticorrelated,
            )

    else:
        raise TypeError(f"unknown source model {model!r}")

    totals = np.sum(_map_blocks(cfg, key, per_block), axis=0)
    counts = CoincidenceCounts(
        n_pp=int(totals[0]),
        n_pm=int(totals[1]),
        n_mp=int(totals[2]),
        n_mm=int(totals[3]),
        n_trials=cfg.trials,
    )
    if cfg.accidental_rate > 0.0:
        counts = inject_accidentals(
            counts, cfg.accidental_rate, _block_rng(cfg.seed, key, cfg.streams)
        )
    return counts


def inject_accidentals(
    counts: CoincidenceCounts, rate: float, rng: np.random.Generator
) -> CoincidenceCounts:
    """Add Binomial(n_trials, rate) uncorrelated events spread over the channels."""
    if not 0.0 <= rate < 1.0:
        raise ValueError("rate must lie in [0, 1)")
    if rate == 0.0:
        return counts
    extra_total = int(rng.binomial(counts.n_trials, rate))
    shares = rng.multinomial(extra_total, [0.25] * 4)
    return replace(
        counts,
        n_pp=counts.n_pp + int(shares[0]),
        n_pm=counts.n_pm + int(shares[1]),
        n_mp=counts.n_mp + int(shares[2]),
        n_mm=counts.n_mm + int(shares[3]),
        n_accidental=counts.n_accidental + extra_total,
    )


# ---------------------------------------------------------------------------
# Triple coincidences
# ---------------------------------------------------------------------------

_PLUS_45 = projector(linear_polarization_state(np.pi / 4))


def _triple_setup(kind: ExperimentKind, **settings):
    """Station-1 state and measured-state factors for one triple setup.

    Returns ``(rho1, bell_part, analyzer)``; the measured three-photon
    state is ``bell_part (x) analyzer``.
    """
    if kind is ExperimentKind.GISIN_TRIPLE:
        beta = settings["beta"]
        a0 = settings.get("a0", 1.0 / math.sqrt(2.0))
        a1 = settings.get("a1", 1.0 / math.sqrt(2.0))
        analyzer = PureState([a0, np.exp(1j * beta) * a1])
        return _PLUS_45, bell_state(BellKind.PSI_MINUS), analyzer
    if kind is ExperimentKind.ZEILINGER_TELEPORT:
        alice: Diag45 = settings["alice"]
        bob: Diag45 = settings["bob_detector"]
        rho1 = projector(linear_polarization_state(alice.angle))
        analyzer = linear_polarization_state(bob.angle)
        return rho1, bell_state(BellKind.PSI_MINUS), analyzer
    if kind is ExperimentKind.KIM_COMPLETE_BSM:
        detector: KimDetector = settings["detector"]
        analyzer = linear_polarization_state(settings["phi"])
        return _PLUS_45, bell_state(kim_bsm_kind(detector)), analyzer
    raise ValueError(f"run_triple_coincidence does not support {kind!r}")


def _closed_form_probability(kind: ExperimentKind, model: SourceModel, **settings) -> float:
    if kind is ExperimentKind.GISIN_TRIPLE:
        return gisin_expectation(
            model,
            settings["beta"],
            settings.get("a0", 1.0 / math.sqrt(2.0)),
            settings.get("a1", 1.0 / math.sqrt(2.0)),
        )
    if kind is ExperimentKind.ZEILINGER_TELEPORT:
        return zeilinger_rate(model, settings["alice"], settings["bob_detector"])
    return kim_expectation(model, settings["detector"], settings["phi"])


def _ensemble_triple_probabilities(rho1: DensityOperator, bell_part: PureState,
                                   analyzer: PureState, s2: np.ndarray, s3: np.ndarray):
    """Exact Born probability of the measured state per ensemble sample.

    For measured state ``M (x) analyzer`` with ``M`` the two-photon part
    reshaped to a matrix, the probability against
    ``rho1 (x) |s2><s2| (x) |s3><s3|`` factorizes into a quadratic form in
    s2 and an overlap with s3. Equivalent to running the full
    eight-dimensional Born rule sample by sample, but vectorized.
    """
    m = bell_part.amplitudes.reshape(2, 2)
    g = m.conj().T @ rho1.matrix @ m
    station2 = np.einsum("kl,ik,il->i", g, s2, s2.conj()).real
    station3 = np.abs(s3 @ analyzer.amplitudes.conj()) ** 2
    return station2 * station3


def run_triple_coincidence(
    kind: ExperimentKind,
    model: SourceModel,
    cfg: McConfig,
    key: tuple[int, ...] = (),
    **settings,
) -> McEstimate:
    """Estimate a triple-coincidence expectation by simulation.

    Entangled model: every trial is a Bernoulli draw of the projective
    outcome at its closed-form Born probability; the estimate is the hit
    fraction. Ensemble model: every accepted trial contributes the exact
    Born probability of the measured state for its sampled product pair,
    and the estimate is the sample mean (trials with mismatched phases are
    discarded by the window). Standard errors come from the sample
    variance either way.
    """
    if isinstance(model, EntangledPair):
        if model.kind is not BellKind.PSI_MINUS:
            raise ValueError("triple-coincidence simulation uses the singlet source")
        p = _closed_form_probability(kind, model, **settings)

        def per_block(block, size, rng):
            hits = int(np.count_nonzero(rng.random(size) < p))
            return np.array([hits, size], dtype=np.int64)

        totals = np.sum(_map_blocks(cfg, key, per_block), axis=0)
        hits, n = int(totals[0]), int(totals[1])
        est = hits / n
        std_err = math.sqrt(est * (1.0 - est) / n)
        return McEstimate(value=est, std_err=std_err, n=n)

    if not isinstance(model, DisentangledEnsemble):
        raise TypeError(f"unknown source model {model!r}")

    rho1, bell_part, analyzer = _triple_setup(kind, **settings)
    window = cfg.phase_window
    anticorrelated = model.anticorrelated

    def per_block(block, size, rng):
        theta = rng.random(size) * np.pi
        phi2 = rng.random(size) * _TWO_PI
        phi3 = rng.random(size) * _TWO_PI
        if not math.isinf(window):
            keep = np.abs(_wrap_to_half_open(phi3 - phi2)) < window
            theta, phi2, phi3 = theta[keep], phi2[keep], phi3[keep]
        c, s = np.cos(theta), np.sin(theta)
        s2 = np.stack([c, np.exp(1j * phi2) * s], axis=1)
        if anticorrelated:
            s3 = np.stack([s, -np.exp(1j * phi3) * c], axis=1)
        else:
            s3 = np.stack([c, np.exp(1j * phi3) * s], axis=1)
        q = _ensemble_triple_probabilities(rho1, bell_part, analyzer, s2, s3)
        return np.array([q.sum(), np.sum(q * q), q.size])

    totals = np.sum(_map_blocks(cfg, key, per_block), axis=0)
    q_sum, q_sq_sum, n = float(totals[0]), float(totals[1]), int(totals[2])
    if n == 0:
        raise ValueError("no trials passed the phase-matching window; widen it or add trials")
    mean = q_sum / n
    variance = max(0.0, (q_sq_sum - n * mean * mean) / max(1, n - 1))
    return McEstimate(value=mean, std_err=math.sqrt(variance / n), n=n)


# ---------------------------------------------------------------------------
# Detection rate
# ---------------------------------------------------------------------------


def estimate_detection_rate(window: float, trials: int, seed: int) -> float:
    """Fraction of random phase pairs that pass the matching window.

    Both phases are uniform on [0, 2pi), so the wrapped difference is
    uniform on (-pi, pi] and the analytic rate is ``window / pi`` (for
    windows below pi).
    """
    if window < 0.0:
        raise ValueError("window must be non-negative")
    if trials <= 0:
        raise ValueError("trials must be positive")
    rng = _block_rng(seed, (), 0)
    accepted = 0
    remaining = trials
    while remaining > 0:
        size = min(remaining, 1_000_000)
        phi2 = rng.random(size) * _TWO_PI
        phi3 = rng.random(size) * _TWO_PI
        if math.isinf(window):
            accepted += size
        else:
            accepted += int(np.count_nonzero(np.abs(_wrap_to_half_open(phi3 - phi2)) < window))
        remaining -= size
    return accepted / trials
