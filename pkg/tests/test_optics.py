import numpy as np
import pytest

from eprsim import (
    AxisSample,
    BellKind,
    PolarizerSetting,
    PureState,
    SfgType,
    bell_state,
    bsm_projector,
    malus_probability,
    sfg_axis_transform,
    sfg_transform,
    states_equal_up_to_phase,
    tensor,
)

SQ = 1.0 / np.sqrt(2.0)


def random_two_photon_state(rng):
    v = rng.normal(size=4) + 1j * rng.normal(size=4)
    return PureState(v / np.linalg.norm(v))


class TestPolarizerSetting:
    def test_reduced_to_half_turn(self):
        assert abs(PolarizerSetting(np.pi + 0.3).angle - 0.3) < 1e-12
        assert abs(PolarizerSetting(-0.1).angle - (np.pi - 0.1)) < 1e-12


class TestMalus:
    def test_aligned(self):
        assert malus_probability(0.4, PolarizerSetting(0.4)) == pytest.approx(1.0, abs=1e-15)

    def test_crossed(self):
        assert malus_probability(0.0, PolarizerSetting(np.pi / 2)) == pytest.approx(0.0, abs=1e-15)

    def test_halfway(self):
        assert malus_probability(0.0, PolarizerSetting(np.pi / 4)) == pytest.approx(0.5, abs=1e-15)

    def test_two_channel_completeness(self):
        rng = np.random.default_rng(20)
        for _ in range(200):
            x, a = rng.normal(size=2) * 4.0
            total = malus_probability(x, PolarizerSetting(a)) + malus_probability(
                x, PolarizerSetting(a + np.pi / 2)
            )
            assert abs(total - 1.0) < 1e-12


class TestSfgTransform:
    def test_type_i_swaps_outer(self):
        out = sfg_transform(SfgType.TYPE_I, PureState([1, 0, 0, 0]))
        np.testing.assert_allclose(out.amplitudes, [0, 0, 0, 1], atol=1e-15)

    def test_type_ii_negates_singlet(self):
        out = sfg_transform(SfgType.TYPE_II, bell_state(BellKind.PSI_MINUS))
        np.testing.assert_allclose(out.amplitudes, [0, -SQ, SQ, 0], atol=1e-15)
        assert states_equal_up_to_phase(out, bell_state(BellKind.PSI_MINUS))

    def test_involution(self):
        rng = np.random.default_rng(21)
        for t in SfgType:
            for _ in range(50):
                psi = random_two_photon_state(rng)
                twice = sfg_transform(t, sfg_transform(t, psi))
                np.testing.assert_allclose(twice.amplitudes, psi.amplitudes, atol=1e-12)

    def test_unitary(self):
        rng = np.random.default_rng(22)
        for _ in range(100):
            psi = random_two_photon_state(rng)
            out = sfg_transform(SfgType.TYPE_I, psi)
            assert abs(np.linalg.norm(out.amplitudes) - 1.0) < 1e-12

    def test_types_commute(self):
        rng = np.random.default_rng(23)
        for _ in range(50):
            psi = random_two_photon_state(rng)
            a = sfg_transform(SfgType.TYPE_I, sfg_transform(SfgType.TYPE_II, psi))
            b = sfg_transform(SfgType.TYPE_II, sfg_transform(SfgType.TYPE_I, psi))
            np.testing.assert_allclose(a.amplitudes, b.amplitudes, atol=1e-12)

    def test_single_photon_rejected(self):
        with pytest.raises(ValueError, match="dim 4"):
            sfg_transform(SfgType.TYPE_I, PureState([1.0, 0.0]))


class TestSfgAxisTransform:
    def test_phases_advance_half_turn(self):
        out = sfg_axis_transform(SfgType.TYPE_I, AxisSample(theta=1.0, phi2=0.0, phi3=0.0))
        assert out.theta == 1.0
        assert abs(out.phi2 - np.pi) < 1e-12
        assert abs(out.phi3 - np.pi) < 1e-12

    def test_applying_twice_is_identity(self):
        axis = AxisSample(theta=0.4, phi2=1.234, phi3=5.678)
        out = sfg_axis_transform(SfgType.TYPE_I, sfg_axis_transform(SfgType.TYPE_I, axis))
        assert abs(out.phi2 - axis.phi2) < 1e-12
        assert abs(out.phi3 - axis.phi3) < 1e-12

    def test_phase_difference_preserved(self):
        rng = np.random.default_rng(24)
        for _ in range(200):
            axis = AxisSample(
                theta=rng.random() * np.pi,
                phi2=rng.random() * 2 * np.pi,
                phi3=rng.random() * 2 * np.pi,
            )
            out = sfg_axis_transform(SfgType.TYPE_I, axis)
            before = np.angle(np.exp(1j * (axis.phi3 - axis.phi2)))
            after = np.angle(np.exp(1j * (out.phi3 - out.phi2)))
            assert abs(before - after) < 1e-12

    def test_type_ii_rejected(self):
        with pytest.raises(ValueError, match="type-I"):
            sfg_axis_transform(SfgType.TYPE_II, AxisSample(theta=0.0, phi2=0.0, phi3=0.0))


class TestBsmProjector:
    def test_trace_two(self):
        for kind in BellKind:
            assert abs(np.trace(bsm_projector(kind)) - 2.0) < 1e-12

    def test_eigenvalues_zero_or_one(self):
        for kind in BellKind:
            eigs = np.linalg.eigvalsh(bsm_projector(kind))
            assert np.all((np.abs(eigs) < 1e-12) | (np.abs(eigs - 1.0) < 1e-12))

    def test_matching_state_is_fixed_point(self):
        rng = np.random.default_rng(25)
        chi = rng.normal(size=2) + 1j * rng.normal(size=2)
        chi = PureState(chi / np.linalg.norm(chi))
        state = tensor(bell_state(BellKind.PSI_MINUS), chi).amplitudes
        proj = bsm_projector(BellKind.PSI_MINUS)
        np.testing.assert_allclose(proj @ state, state, atol=1e-12)

    def test_orthogonal_state_annihilated(self):
        chi = PureState([1.0, 0.0])
        state = tensor(bell_state(BellKind.PHI_PLUS), chi).amplitudes
        proj = bsm_projector(BellKind.PSI_MINUS)
        np.testing.assert_allclose(proj @ state, np.zeros(8), atol=1e-12)

    def test_unsupported_pair(self):
        with pytest.raises(ValueError, match="photon pair"):
            bsm_projector(BellKind.PSI_MINUS, photon_pair=(2, 3))
