import math

import numpy as np
import pytest

from eprsim import (
    AxisSample,
    Diag45,
    DisentangledEnsemble,
    EntangledPair,
    ExperimentKind,
    KimDetector,
    McConfig,
    PolarizerSetting,
    SfgType,
    bell_state,
    born_expectation,
    correlation_analytic,
    correlation_from_counts,
    estimate_detection_rate,
    inject_accidentals,
    pair_from_axis,
    phase_accept,
    projector,
    run_double_coincidence,
    run_triple_coincidence,
    sfg_axis_transform,
    subtract_accidentals,
    tensor,
)
from eprsim.mc_engine import (
    CoincidenceCounts,
    _ensemble_double_block,
    _ensemble_triple_probabilities,
)
from eprsim.qcore import BellKind, PureState, linear_polarization_state

ENT = EntangledPair()
DIS = DisentangledEnsemble()
P0 = PolarizerSetting(0.0)


class TestConfigAndCounts:
    def test_config_validation(self):
        with pytest.raises(ValueError):
            McConfig(trials=0, seed=1)
        with pytest.raises(ValueError):
            McConfig(trials=10, seed=1, phase_window=-0.1)
        with pytest.raises(ValueError):
            McConfig(trials=10, seed=1, accidental_rate=1.0)
        with pytest.raises(ValueError):
            McConfig(trials=10, seed=1, streams=0)

    def test_counts_validation(self):
        with pytest.raises(ValueError):
            CoincidenceCounts(n_pp=-1, n_pm=0, n_mp=0, n_mm=0, n_trials=10)
        with pytest.raises(ValueError):
            CoincidenceCounts(n_pp=6, n_pm=5, n_mp=0, n_mm=0, n_trials=10)

    def test_counts_total(self):
        c = CoincidenceCounts(n_pp=1, n_pm=2, n_mp=3, n_mm=4, n_trials=100)
        assert c.total_detected == 10


class TestPhaseAccept:
    def test_zero_difference(self):
        assert phase_accept(0.0, 0.0, 1e-6)

    def test_outside_window(self):
        assert not phase_accept(0.0, 0.02, 0.01)

    def test_wraparound(self):
        assert phase_accept(0.01, 2 * np.pi + 0.005, 0.01)

    def test_zero_window_accepts_nothing(self):
        assert not phase_accept(0.3, 0.3, 0.0)

    def test_disabled_window(self):
        assert phase_accept(0.0, np.pi, math.inf)

    def test_negative_window_rejected(self):
        with pytest.raises(ValueError):
            phase_accept(0.0, 0.0, -1.0)


class TestDeterminism:
    def test_double_identical_runs(self):
        cfg = McConfig(trials=50_000, seed=13, streams=4)
        a = run_double_coincidence(DIS, P0, PolarizerSetting(0.7), cfg)
        b = run_double_coincidence(DIS, P0, PolarizerSetting(0.7), cfg)
        assert a == b

    def test_repeated_parallel_runs_bit_identical(self):
        # The thread pool schedules blocks in arbitrary order; three runs
        # must still reduce to the same counts.
        cfg = McConfig(trials=30_000, seed=14, streams=6)
        runs = [run_double_coincidence(ENT, P0, P0, cfg) for _ in range(3)]
        assert runs[0] == runs[1] == runs[2]

    def test_triple_identical_runs(self):
        cfg = McConfig(trials=40_000, seed=15, streams=3)
        a = run_triple_coincidence(ExperimentKind.GISIN_TRIPLE, DIS, cfg, beta=1.0)
        b = run_triple_coincidence(ExperimentKind.GISIN_TRIPLE, DIS, cfg, beta=1.0)
        assert a == b

    def test_key_separates_substreams(self):
        cfg = McConfig(trials=40_000, seed=16)
        a = run_double_coincidence(DIS, P0, P0, cfg, key=(0,))
        b = run_double_coincidence(DIS, P0, P0, cfg, key=(1,))
        assert a != b


class TestDoubleCoincidence:
    def test_entangled_parallel_never_alike(self):
        cfg = McConfig(trials=100_000, seed=17)
        c = run_double_coincidence(ENT, P0, P0, cfg)
        assert c.n_pp + c.n_mm == 0
        assert c.total_detected == cfg.trials

    def test_disentangled_matches_closed_form(self):
        cfg = McConfig(trials=1_000_000, seed=18)
        b = PolarizerSetting(np.pi / 8)
        est = correlation_from_counts(run_double_coincidence(DIS, P0, b, cfg))
        expected = correlation_analytic(DIS, 0.0, np.pi / 8)
        assert abs(est.value - expected) < 4.0 * est.std_err

    def test_entangled_matches_closed_form(self):
        cfg = McConfig(trials=1_000_000, seed=19)
        b = PolarizerSetting(np.pi / 8)
        est = correlation_from_counts(run_double_coincidence(ENT, P0, b, cfg))
        expected = correlation_analytic(ENT, 0.0, np.pi / 8)
        assert abs(est.value - expected) < 4.0 * est.std_err

    def test_phase_window_thins_detections(self):
        window = 0.01
        cfg = McConfig(trials=1_000_000, seed=20, phase_window=window)
        c = run_double_coincidence(DIS, P0, PolarizerSetting(np.pi / 8), cfg)
        rate = c.total_detected / cfg.trials
        expected = window / np.pi
        sigma = math.sqrt(expected * (1.0 - expected) / cfg.trials)
        assert abs(rate - expected) < 4.0 * sigma

    def test_channel_exchange_symmetry(self):
        n = 400_000
        a, b = PolarizerSetting(0.2), PolarizerSetting(0.9)
        c_ab = run_double_coincidence(DIS, a, b, McConfig(trials=n, seed=21))
        c_ba = run_double_coincidence(DIS, b, a, McConfig(trials=n, seed=22))
        p1, p2 = c_ab.n_pm / n, c_ba.n_mp / n
        sigma = math.sqrt(p1 * (1 - p1) / n + p2 * (1 - p2) / n)
        assert abs(p1 - p2) < 4.0 * sigma


class TestPhaseShiftInvariance:
    def test_common_shift_leaves_counts_unchanged(self):
        rng = np.random.default_rng(23)
        n = 200_000
        theta = rng.random(n) * np.pi
        phi2 = rng.random(n) * 2 * np.pi
        phi3 = rng.random(n) * 2 * np.pi
        u2, u3 = rng.random(n), rng.random(n)
        args = (u2, u3, 0.0, np.pi / 8, 0.01, True)
        direct = _ensemble_double_block(theta, phi2, phi3, *args)
        shifted = _ensemble_double_block(
            theta,
            np.mod(phi2 + np.pi, 2 * np.pi),
            np.mod(phi3 + np.pi, 2 * np.pi),
            *args,
        )
        np.testing.assert_array_equal(direct, shifted)

    def test_axis_transform_preserves_acceptance(self):
        rng = np.random.default_rng(24)
        for _ in range(1000):
            axis = AxisSample(
                theta=rng.random() * np.pi,
                phi2=rng.random() * 2 * np.pi,
                phi3=rng.random() * 2 * np.pi,
            )
            moved = sfg_axis_transform(SfgType.TYPE_I, axis)
            for window in (0.01, 0.3, 1.0):
                assert phase_accept(axis.phi2, axis.phi3, window) == phase_accept(
                    moved.phi2, moved.phi3, window
                )


class TestTripleCoincidence:
    def test_entangled_gisin_converges(self):
        cfg = McConfig(trials=1_000_000, seed=25)
        est = run_triple_coincidence(ExperimentKind.GISIN_TRIPLE, ENT, cfg, beta=np.pi)
        assert abs(est.value - 0.25) < 4.0 * est.std_err

    def test_entangled_zeilinger_mismatch_exact_zero(self):
        cfg = McConfig(trials=100_000, seed=26)
        est = run_triple_coincidence(
            ExperimentKind.ZEILINGER_TELEPORT, ENT, cfg,
            alice=Diag45.PLUS, bob_detector=Diag45.MINUS,
        )
        assert est.value == 0.0
        assert est.std_err == 0.0

    def test_entangled_kim_converges(self):
        cfg = McConfig(trials=500_000, seed=27)
        est = run_triple_coincidence(
            ExperimentKind.KIM_COMPLETE_BSM, ENT, cfg,
            detector=KimDetector.I, phi=np.pi / 4,
        )
        assert abs(est.value - 0.25) < 4.0 * est.std_err

    def test_disentangled_grid_mean_is_eighth(self):
        # The fringe term averages out over a full period regardless of the
        # ensemble's fringe amplitude, leaving the 1/8 baseline.
        cfg = McConfig(trials=100_000, seed=28)
        grid = np.linspace(0.0, 2 * np.pi, 16, endpoint=False)
        estimates = [
            run_triple_coincidence(ExperimentKind.GISIN_TRIPLE, DIS, cfg, beta=b, key=(i,))
            for i, b in enumerate(grid)
        ]
        mean = np.mean([e.value for e in estimates])
        sigma = math.sqrt(sum(e.std_err**2 for e in estimates)) / len(estimates)
        assert abs(mean - 0.125) < 4.0 * sigma

    def test_empty_window_rejected(self):
        cfg = McConfig(trials=1000, seed=29, phase_window=1e-9)
        with pytest.raises(ValueError, match="window"):
            run_triple_coincidence(ExperimentKind.GISIN_TRIPLE, DIS, cfg, beta=0.0)

    def test_factorized_born_matches_qcore(self):
        """The vectorized ensemble estimator must agree with the full
        eight-dimensional Born evaluation sample by sample."""
        rng = np.random.default_rng(30)
        rho1 = projector(linear_polarization_state(np.pi / 4))
        sq = 1.0 / math.sqrt(2.0)
        cases = [
            (bell_state(BellKind.PSI_MINUS), PureState([sq, np.exp(1j * 0.77) * sq])),
            (bell_state(BellKind.PHI_MINUS), linear_polarization_state(1.3)),
        ]
        for bell_part, analyzer in cases:
            measured = tensor(bell_part, analyzer)
            pairs = [
                pair_from_axis(
                    AxisSample(
                        theta=rng.random() * np.pi,
                        phi2=rng.random() * 2 * np.pi,
                        phi3=rng.random() * 2 * np.pi,
                    )
                )
                for _ in range(100)
            ]
            s2 = np.stack([p.state2.amplitudes for p in pairs])
            s3 = np.stack([p.state3.amplitudes for p in pairs])
            fast = _ensemble_triple_probabilities(rho1, bell_part, analyzer, s2, s3)
            for i, pair in enumerate(pairs):
                rho = tensor(tensor(rho1, projector(pair.state2)), projector(pair.state3))
                full = born_expectation(rho, measured)
                assert abs(fast[i] - full) < 1e-12


class TestAccidentals:
    def test_zero_rate_is_identity(self):
        c = CoincidenceCounts(n_pp=10, n_pm=20, n_mp=30, n_mm=40, n_trials=1000)
        rng = np.random.default_rng(31)
        assert inject_accidentals(c, 0.0, rng) == c

    def test_moments(self):
        c = CoincidenceCounts(n_pp=0, n_pm=0, n_mp=0, n_mm=0, n_trials=1_000_000)
        rng = np.random.default_rng(32)
        out = inject_accidentals(c, 0.2, rng)
        n, p = c.n_trials, 0.2
        assert abs(out.n_accidental - n * p) < 4.0 * math.sqrt(n * p * (1 - p))
        share_sigma = math.sqrt(out.n_accidental * 0.25 * 0.75)
        for value in out.channels().values():
            assert abs(value - out.n_accidental / 4) < 4.0 * share_sigma

    def test_round_trip_recovers_visibility(self):
        cfg = McConfig(trials=1_000_000, seed=7, accidental_rate=0.2)
        counts = run_double_coincidence(ENT, P0, P0, cfg)
        assert counts.n_accidental > 0
        raw = correlation_from_counts(counts)
        assert -raw.value < 0.9  # fitted visibility degraded
        floor = min(counts.n_accidental / 4.0, min(counts.channels().values()))
        restored = correlation_from_counts(subtract_accidentals(counts, floor))
        sigma = math.sqrt(counts.n_accidental) / restored.n
        assert abs(-restored.value - 1.0) < 4.0 * sigma


class TestDetectionRate:
    def test_full_window(self):
        assert estimate_detection_rate(np.pi, 100_000, 33) == 1.0

    def test_zero_window(self):
        assert estimate_detection_rate(0.0, 100_000, 34) == 0.0

    def test_uniform_phase_rate(self):
        window = 0.58 * np.pi / 180.0
        trials = 2_000_000
        rate = estimate_detection_rate(window, trials, 35)
        expected = window / np.pi
        sigma = math.sqrt(expected * (1 - expected) / trials)
        assert abs(rate - expected) < 4.0 * sigma

    def test_monotone_in_window(self):
        windows = [0.0, 0.001, 0.01, 0.1, 0.5, 1.5, np.pi]
        rates = [estimate_detection_rate(w, 200_000, 36) for w in windows]
        assert all(r1 <= r2 for r1, r2 in zip(rates, rates[1:]))
