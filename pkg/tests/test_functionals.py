import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaussmaj.channels import AdditiveNoise, Amplifier, ThermalAttenuator, apply_channel, channel_transfer, worst_case_cutoff
from gaussmaj.concave import ClippedQuadratic, PowerGap, ShannonTerm
from gaussmaj.errors import CutoffError, ParameterError
from gaussmaj.fock import DensityOperator, Spectrum, coherent_vector, fock_vector, purity, random_pure, thermal_density, trace_distance
from gaussmaj.functionals import (
    OptimizerOptions,
    _Objective,
    _spectral_functional,
    coherent_fit,
    concave_trace_functional,
    maximize_beamsplitter_purity,
    minimize_output_functional,
    output_functional,
    renyi_entropy,
    von_neumann_entropy,
)
from oracles import dense_channel, random_density, random_unitary

BATTERY = [ThermalAttenuator(0.6, 0.5), AdditiveNoise(1.0), Amplifier(1.5, 0.3), Amplifier(2.0), ThermalAttenuator(0.3)]


class TestEntropies:
    def test_von_neumann(self):
        assert von_neumann_entropy(random_pure(0, 6).projector()) == pytest.approx(0.0, abs=1e-12)
        assert von_neumann_entropy(thermal_density(1.0, 60)) == pytest.approx(2 * math.log(2), abs=1e-12)
        assert von_neumann_entropy(Spectrum([0.5, 0.5])) == pytest.approx(math.log(2), abs=1e-15)

    def test_renyi(self):
        assert renyi_entropy(3.0, random_pure(0, 6).projector()) == pytest.approx(0.0, abs=1e-12)
        assert renyi_entropy(2.0, thermal_density(1.0, 60)) == pytest.approx(math.log(3), abs=1e-12)
        assert renyi_entropy(50.0, Spectrum([0.5, 0.5])) == pytest.approx(math.log(2), abs=1e-6)
        for p in (1.0, 0.5):
            with pytest.raises(ParameterError):
                renyi_entropy(p, Spectrum([1.0]))

    def test_trace_functionals(self):
        rho = thermal_density(1.0, 60)
        assert concave_trace_functional(ShannonTerm(), rho) == pytest.approx(von_neumann_entropy(rho), abs=1e-15)
        assert concave_trace_functional(PowerGap(2.0), rho) == pytest.approx(2 / 3, abs=1e-12)
        diag = DensityOperator(np.diag([0.6, 0.4]))
        assert concave_trace_functional(ClippedQuadratic(0.6, 0.05), diag) == pytest.approx(0.974, abs=1e-14)


@pytest.mark.parametrize("f", [ShannonTerm(), PowerGap(2.0)], ids=str)
class TestFunctionalProperties:
    @given(seed=st.integers(0, 2**31))
    def test_unitary_invariance(self, f, seed):
        rng = np.random.default_rng(seed)
        rho = random_density(rng, 8, rank=3)
        u = random_unitary(rng, 8)
        a = concave_trace_functional(f, DensityOperator(rho))
        b = concave_trace_functional(f, DensityOperator(u @ rho @ u.conj().T))
        assert a == pytest.approx(b, abs=1e-9)

    @given(seed=st.integers(0, 2**31))
    def test_strict_midpoint_concavity(self, f, seed):
        rng = np.random.default_rng(seed)
        r1, r2 = random_density(rng, 5, rank=2), random_density(rng, 5, rank=2)
        if trace_distance(DensityOperator(r1), DensityOperator(r2)) <= 1e-3:
            return
        mid = concave_trace_functional(f, DensityOperator((r1 + r2) / 2))
        avg = (concave_trace_functional(f, DensityOperator(r1)) + concave_trace_functional(f, DensityOperator(r2))) / 2
        assert mid - avg > 1e-9


@pytest.mark.parametrize("channel", BATTERY, ids=str)
def test_random_inputs_never_beat_vacuum(channel):
    for f in (ShannonTerm(), PowerGap(2.0)):
        floor = output_functional(channel, f, fock_vector(0, 2))
        for seed in range(20):
            assert output_functional(channel, f, random_pure(seed, 10)) >= floor - 1e-7


class TestCoherentFit:
    def test_coherent_state(self):
        fid, alpha = coherent_fit(coherent_vector(1.2 - 0.7j, 30))
        assert fid == pytest.approx(1.0, abs=1e-10)
        assert alpha == pytest.approx(1.2 - 0.7j, abs=1e-4)

    def test_single_photon(self):
        # max over r of r^2 exp(-r^2) is exp(-1), reached on the circle |alpha| = 1.
        fid, alpha = coherent_fit(fock_vector(1, 30))
        assert fid == pytest.approx(math.exp(-1), abs=1e-8)
        assert abs(alpha) == pytest.approx(1.0, abs=1e-3)


class TestObjective:
    @pytest.mark.parametrize("channel", [Amplifier(2.0), AdditiveNoise(1.0), ThermalAttenuator(0.6, 0.5)], ids=str)
    @pytest.mark.parametrize("f", [ShannonTerm(), PowerGap(2.0)], ids=str)
    def test_analytic_gradient_matches_differences(self, channel, f):
        d = 8
        obj = _Objective(channel_transfer(channel, d, worst_case_cutoff(channel, d)), _spectral_functional(f))
        x = np.random.default_rng(1).standard_normal(2 * d)
        val, grad = obj.value_and_grad(x)
        fd_val, fd_grad = obj.fd_value_and_grad(x, 1e-5)
        assert val == pytest.approx(fd_val, abs=1e-14)
        np.testing.assert_allclose(grad, fd_grad, atol=1e-7)

    def test_value_matches_kraus_pipeline(self):
        channel, d = Amplifier(1.5, 0.3), 10
        d_out = worst_case_cutoff(channel, d)
        obj = _Objective(channel_transfer(channel, d, d_out), _spectral_functional(ShannonTerm()))
        psi = random_pure(3, d)
        x = np.concatenate([psi.amplitudes.real, psi.amplitudes.imag])
        kraus = output_functional(channel, ShannonTerm(), psi, cutoff_out=d_out)
        assert obj.value(x) == pytest.approx(kraus, abs=1e-9)


def test_option_validation():
    with pytest.raises(ParameterError):
        OptimizerOptions(restarts=0)
    with pytest.raises(ParameterError):
        OptimizerOptions(gradient="newton")


def test_undersized_output_cutoff_raises():
    with pytest.raises(CutoffError):
        minimize_output_functional(Amplifier(2.0), ShannonTerm(), OptimizerOptions(cutoff=10, cutoff_out=15))


@pytest.fixture(scope="module")
def amplifier_run():
    return minimize_output_functional(Amplifier(2.0), ShannonTerm(), OptimizerOptions(cutoff=30, restarts=8, seed=0))


class TestMinimize:
    def test_amplifier_entropy(self, amplifier_run):
        r = amplifier_run
        assert r.best_value == pytest.approx(2 * math.log(2), abs=5e-3)
        assert r.coherent_fidelity > 0.99
        assert r.restarts_used == 8

    def test_result_invariants(self, amplifier_run):
        r = amplifier_run
        assert r.best_value == min(rec.value for rec in r.restarts)
        assert all(0.0 <= rec.coherent_fidelity <= 1.0 for rec in r.restarts)
        assert [rec.start for rec in r.restarts[:3]] == ["coherent", "fock", "haar"]

    def test_logs_nonincreasing(self, amplifier_run):
        for rec in amplifier_run.restarts:
            log = np.array(rec.log)
            assert log[-1] <= log[0]
            assert np.all(np.diff(log) <= 1e-12 * np.maximum(1.0, np.abs(log[:-1])))

    def test_pure_loss_reaches_zero_entropy(self):
        r = minimize_output_functional(ThermalAttenuator(0.7), ShannonTerm(), OptimizerOptions(cutoff=20, restarts=4))
        assert abs(r.best_value) < 1e-6
        assert r.coherent_fidelity > 0.99

    def test_coherent_start_stays_put(self):
        start = coherent_vector(0.5, 20)
        opts = OptimizerOptions(cutoff=20, restarts=1, jitter=0.0)
        r = minimize_output_functional(AdditiveNoise(1.0), PowerGap(2.0), opts, initial=[start])
        rec = r.restarts[0]
        assert rec.value <= rec.start_value
        assert rec.coherent_fidelity > 0.999

    def test_deterministic(self):
        opts = OptimizerOptions(cutoff=12, restarts=3, seed=5)
        a = minimize_output_functional(AdditiveNoise(0.5), PowerGap(2.0), opts)
        b = minimize_output_functional(AdditiveNoise(0.5), PowerGap(2.0), opts)
        assert [r.value for r in a.restarts] == [r.value for r in b.restarts]
        np.testing.assert_array_equal(a.argmin.amplitudes, b.argmin.amplitudes)

    def test_finite_difference_mode_agrees(self):
        kw = dict(cutoff=8, restarts=2, seed=2)
        fd = minimize_output_functional(Amplifier(1.5), ShannonTerm(), OptimizerOptions(gradient="fd", **kw))
        an = minimize_output_functional(Amplifier(1.5), ShannonTerm(), OptimizerOptions(**kw))
        assert fd.best_value == pytest.approx(an.best_value, abs=1e-6)


class TestPurity:
    def test_two_photons_through_balanced_splitter(self):
        oracle, _ = dense_channel("beamsplitter", 0.5, np.array([0, 0, 1.0]), 6)
        np.testing.assert_allclose(np.diag(oracle).real[:3], [0.25, 0.5, 0.25], atol=1e-12)
        out = apply_channel(ThermalAttenuator(0.5), fock_vector(2, 6))
        assert purity(out) == pytest.approx(0.375, abs=1e-12)
        assert np.sum(np.abs(oracle) ** 2) == pytest.approx(0.375, abs=1e-12)

    def test_reaches_pure_output(self):
        r = maximize_beamsplitter_purity(0.5, OptimizerOptions(cutoff=25, restarts=8))
        assert r.best_value == pytest.approx(1.0, abs=1e-6)
        assert r.coherent_fidelity > 0.99

    def test_escapes_single_photon_start(self):
        opts = OptimizerOptions(cutoff=15, restarts=1)
        r = maximize_beamsplitter_purity(0.5, opts, initial=[fock_vector(1, 15)])
        rec = r.restarts[0]
        assert rec.start_value == pytest.approx(0.5, abs=1e-3)
        assert abs(rec.value - 1.0) < 1e-6 or not rec.converged
