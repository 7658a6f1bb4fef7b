import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gaussmaj.channels import AdditiveNoise, Amplifier, ThermalAttenuator, apply_channel
from gaussmaj.errors import UnphysicalStateError
from gaussmaj.fock import coherent_vector, thermal_density, spectrum
from gaussmaj.functionals import von_neumann_entropy
from gaussmaj.gaussian import (
    Coherent,
    GaussianState,
    Thermal,
    apply_channel_gaussian,
    gaussian_entropy,
    gaussian_of,
    gaussian_spectrum,
    moments_from_density,
)

channels = st.one_of(
    st.builds(ThermalAttenuator, st.floats(0.05, 0.95), st.floats(0.0, 2.0)),
    st.builds(AdditiveNoise, st.floats(0.01, 2.0)),
    st.builds(Amplifier, st.floats(1.01, 3.0), st.floats(0.0, 1.0)),
)
inputs = st.one_of(
    st.builds(Coherent, st.complex_numbers(max_magnitude=3.0)),
    st.builds(Thermal, st.floats(0.0, 2.0)),
)

BATTERY = [ThermalAttenuator(0.6, 0.5), AdditiveNoise(1.0), Amplifier(1.5, 0.3), Amplifier(2.0), ThermalAttenuator(0.3)]


class TestStates:
    def test_vacuum(self):
        g = gaussian_of(Coherent(0))
        np.testing.assert_array_equal(g.mean, [0, 0])
        np.testing.assert_array_equal(g.cov, 0.5 * np.eye(2))

    def test_thermal(self):
        np.testing.assert_allclose(gaussian_of(Thermal(1.0)).cov, 1.5 * np.eye(2))

    def test_coherent_mean(self):
        np.testing.assert_allclose(gaussian_of(Coherent(1.0)).mean, [math.sqrt(2), 0])

    def test_uncertainty_violation(self):
        with pytest.raises(UnphysicalStateError):
            GaussianState([0, 0], 0.4 * np.eye(2))

    def test_asymmetric_cov(self):
        with pytest.raises(UnphysicalStateError):
            GaussianState([0, 0], [[1.0, 0.1], [0.0, 1.0]])


class TestChannels:
    @pytest.mark.parametrize("eta, n", [(0.6, 0.5), (0.2, 2.0)])
    def test_attenuator_on_vacuum(self, eta, n):
        out = apply_channel_gaussian(ThermalAttenuator(eta, n), gaussian_of(Coherent(0)))
        np.testing.assert_allclose(out.cov, (0.5 + (1 - eta) * n) * np.eye(2), atol=1e-15)

    def test_amplifier_on_vacuum(self):
        out = apply_channel_gaussian(Amplifier(2.0), gaussian_of(Coherent(0)))
        np.testing.assert_allclose(out.cov, 1.5 * np.eye(2), atol=1e-15)

    @given(st.floats(0.01, 3.0), inputs)
    def test_additive_noise_raises_determinant(self, n, state):
        g = gaussian_of(state)
        assert np.linalg.det(apply_channel_gaussian(AdditiveNoise(n), g).cov) > np.linalg.det(g.cov)

    @given(channels, inputs)
    def test_canonical_steps_reproduce_one_shot(self, channel, state):
        g = gaussian_of(state)
        eta1, kappa2 = channel.canonical
        step = g
        if eta1 < 1:
            step = apply_channel_gaussian(ThermalAttenuator(eta1), step)
        if kappa2 > 1:
            step = apply_channel_gaussian(Amplifier(kappa2), step)
        one = apply_channel_gaussian(channel, g)
        np.testing.assert_allclose(step.cov, one.cov, atol=1e-12)
        np.testing.assert_allclose(step.mean, one.mean, atol=1e-12)

    @given(channels, inputs)
    def test_isotropy_preserved(self, channel, state):
        assert apply_channel_gaussian(channel, gaussian_of(state)).is_isotropic


class TestEntropyAndSpectrum:
    def test_examples(self):
        assert gaussian_entropy(gaussian_of(Coherent(0.3))) == 0.0
        assert gaussian_entropy(gaussian_of(Thermal(1.0))) == pytest.approx(2 * math.log(2), abs=1e-14)
        amp = apply_channel_gaussian(Amplifier(2.0), gaussian_of(Coherent(0)))
        assert gaussian_entropy(amp) == pytest.approx(2 * math.log(2), abs=1e-14)

    def test_spectra(self):
        np.testing.assert_allclose(gaussian_spectrum(gaussian_of(Coherent(0)), 3).values, [1, 0, 0])
        np.testing.assert_allclose(gaussian_spectrum(gaussian_of(Thermal(1.0)), 3).values, [0.5, 0.25, 0.125])
        out = apply_channel_gaussian(ThermalAttenuator(0.6, 0.5), gaussian_of(Coherent(2.0)))
        assert gaussian_spectrum(out, 1).values[0] == pytest.approx(1 / 1.2, abs=1e-14)

    def test_leak_of_truncated_spectrum(self):
        s = gaussian_spectrum(gaussian_of(Thermal(1.0)), 10)
        assert s.leak == pytest.approx(2.0**-10)
        assert s.values.sum() + s.leak == pytest.approx(1.0)


def fock_input(state, cutoff=40):
    if isinstance(state, Coherent):
        return coherent_vector(state.alpha, cutoff)
    return thermal_density(state.N, cutoff)


@pytest.mark.parametrize("channel", BATTERY, ids=str)
@pytest.mark.parametrize("state", [Coherent(0), Coherent(1.0 - 0.5j), Coherent(2.0j), Thermal(0.2), Thermal(1.0)], ids=str)
class TestFockAgreement:
    def test_moments(self, channel, state):
        out = apply_channel(channel, fock_input(state))
        mean, cov = moments_from_density(out)
        g = apply_channel_gaussian(channel, gaussian_of(state))
        np.testing.assert_allclose(mean, g.mean, atol=1e-6)
        np.testing.assert_allclose(cov, g.cov, atol=1e-6)

    def test_spectrum_and_entropy(self, channel, state):
        out = spectrum(apply_channel(channel, fock_input(state)))
        g = apply_channel_gaussian(channel, gaussian_of(state))
        np.testing.assert_allclose(out.head(20), gaussian_spectrum(g, 20).values, atol=1e-6 + out.leak)
        assert von_neumann_entropy(out) == pytest.approx(gaussian_entropy(g), abs=1e-6)
