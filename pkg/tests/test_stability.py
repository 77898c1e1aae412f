"""Spectrum reports, cubic asymptotics and decay-model fits."""

import math

import numpy as np
import pytest
import sympy

from thermospec import (BoundaryKind, EnergyTrace, StateVector, abscissa_asymptotics,
                        assemble, evolve, fit_polynomial_decay, modal_cubic, spectrum,
                        valid_fit_horizon)

D = BoundaryKind.DIRICHLET
N = BoundaryKind.NEUMANN
ALL_PAIRS = [(D, D), (D, N), (N, D), (N, N)]


def cubic_roots_oracle(lam, gamma):
    """Arbitrary-precision roots of the mode pencil via sympy."""
    s = sympy.Symbol("s")
    poly = sympy.Poly(s**3 + lam * s**2 + (lam + gamma**2) * s + lam**2, s)
    return sorted((complex(r) for r in poly.nroots(n=30)), key=lambda z: z.imag)


class TestSpectrum:
    def test_decoupled_single_mode(self):
        report = spectrum(assemble(D, D, 0.0, 1))
        expected = np.array([-1j, -1.0, 1j])
        assert np.allclose(np.sort_complex(report.eigenvalues),
                           np.sort_complex(expected), atol=1e-12)
        assert report.min_distance_to_imaginary_axis == pytest.approx(0.0, abs=1e-12)

    def test_coupled_single_mode_matches_cubic(self):
        report = spectrum(assemble(D, D, 1.0, 1))
        oracle = cubic_roots_oracle(1.0, 1.0)
        assert np.allclose(report.eigenvalues, oracle, atol=1e-10)

    @pytest.mark.parametrize("bc", ALL_PAIRS)
    def test_all_pairs_strictly_stable(self, bc):
        report = spectrum(assemble(bc[0], bc[1], 0.5, 32))
        assert report.spectral_abscissa < 0

    def test_eigenvalues_closed_under_conjugation(self):
        report = spectrum(assemble(N, D, 0.7, 10))
        values = np.sort_complex(report.eigenvalues)
        conjugates = np.sort_complex(np.conj(report.eigenvalues))
        assert np.max(np.abs(values - conjugates)) <= 1e-12

    def test_mixed_case_abscissa_approaches_axis(self):
        small = spectrum(assemble(D, N, 1.0, 16)).spectral_abscissa
        large = spectrum(assemble(D, N, 1.0, 48)).spectral_abscissa
        assert small < large < 0


class TestModalCubic:
    @pytest.mark.parametrize("lam,gamma", [
        (1.0, 1.0), (4.0, 0.5), (81.0, 2.0), (1.0e4, 1.0), (625.0, 0.25)])
    def test_matches_arbitrary_precision_roots(self, lam, gamma):
        roots = modal_cubic(lam, gamma)
        oracle = cubic_roots_oracle(lam, gamma)
        scale = max(abs(r) for r in oracle)
        assert max(abs(a - b) for a, b in zip(roots, oracle)) <= 1e-9 * scale

    def test_reference_values_unit_mode(self):
        roots = modal_cubic(1.0, 1.0)
        real_root = roots[np.argmin(np.abs(roots.imag))]
        pair = roots[np.abs(roots.imag) > 0]
        assert real_root == pytest.approx(-0.56984029, abs=1e-7)
        assert sorted(pair, key=lambda z: z.imag)[1] == pytest.approx(
            -0.21507985 + 1.30714128j, abs=1e-7)

    def test_decoupled_limit(self):
        roots = modal_cubic(9.0, 0.0)
        assert np.allclose(np.sort_complex(roots),
                           np.sort_complex(np.array([-3j, -9.0, 3j])), atol=1e-12)

    @pytest.mark.parametrize("gamma", [0.1, 0.5, 1.0, 2.0])
    def test_vieta_identities(self, gamma):
        for m in range(1, 65):
            lam = float(m * m)
            roots = modal_cubic(lam, gamma)
            scale = max(lam, lam + gamma**2, lam**2)
            assert abs(roots.sum() + lam) <= 1e-9 * lam
            pairwise = roots[0] * roots[1] + roots[0] * roots[2] + roots[1] * roots[2]
            assert abs(pairwise - (lam + gamma**2)) <= 1e-9 * scale
            assert abs(roots.prod() + lam**2) <= 1e-9 * scale

    def test_wave_branch_asymptote(self):
        for gamma in (0.25, 0.5, 1.0):
            for lam in (400.0, 900.0, 2500.0, 1.0e4):
                roots = modal_cubic(lam, gamma)
                wave = roots[np.argmax(np.abs(roots.imag))]
                assert abs(wave.real * 2 * lam / gamma**2 + 1) <= 0.05

    def test_no_purely_imaginary_roots_when_coupled(self):
        # a root i w would force w^2 = lam and w^2 = lam + gamma^2 at once
        for m in range(1, 65):
            roots = modal_cubic(float(m * m), 1.0)
            assert np.min(np.abs(roots.real)) > 0

    def test_invalid_lambda(self):
        with pytest.raises(ValueError):
            modal_cubic(0.0, 1.0)


class TestAbscissaAsymptotics:
    def test_product_converges_to_minus_one(self):
        samples = abscissa_asymptotics((D, D), 0.5, [16, 32, 64])
        assert [s.mode_count for s in samples] == [16, 32, 64]
        assert samples[-1].lambda_top == pytest.approx(4096.0)
        assert abs(samples[-1].scaled_product + 1.0) <= 0.1
        errors = [abs(s.scaled_product + 1.0) for s in samples]
        assert errors[2] < errors[0]

    def test_stronger_coupling_gives_more_negative_abscissa(self):
        by_gamma = [abscissa_asymptotics((D, D), g, [16])[0].spectral_abscissa
                    for g in (0.1, 0.4, 0.7, 1.0)]
        assert all(a > b for a, b in zip(by_gamma, by_gamma[1:]))

    def test_matches_dense_spectrum(self):
        sample = abscissa_asymptotics((N, N), 0.8, [12])[0]
        dense = spectrum(assemble(N, N, 0.8, 12)).spectral_abscissa
        assert sample.spectral_abscissa == pytest.approx(dense, rel=1e-9)

    def test_decoupled_control_sits_on_axis(self):
        for sample in abscissa_asymptotics((D, D), 0.0, [16, 64]):
            assert abs(sample.spectral_abscissa) <= 1e-10
            assert math.isnan(sample.scaled_product)

    def test_mixed_pair_rejected(self):
        with pytest.raises(ValueError):
            abscissa_asymptotics((D, N), 1.0, [8])


class TestValidFitHorizon:
    def test_matches_abscissa_reciprocal(self):
        gen = assemble(D, D, 1.0, 16)
        report = spectrum(gen)
        assert valid_fit_horizon(gen) == pytest.approx(
            0.1 / abs(report.spectral_abscissa), rel=1e-12)

    def test_infinite_for_decoupled_system(self):
        assert math.isinf(valid_fit_horizon(assemble(D, D, 0.0, 4)))


def synthetic_trace(times, energy):
    times = np.asarray(times, dtype=float)
    energy = np.asarray(energy, dtype=float)
    return EnergyTrace(times=times, energy=energy, state_norms=np.sqrt(energy),
                       initial_graph_norm=1.0)


class TestFitPolynomialDecay:
    def test_exact_power_law(self):
        times = np.geomspace(1.0, 100.0, 30)
        fit = fit_polynomial_decay(synthetic_trace(times, 1.0 / times), (1.0, 100.0))
        assert fit.slope == pytest.approx(-0.5, abs=1e-12)
        assert fit.r_squared == pytest.approx(1.0, abs=1e-12)
        assert fit.decay_order_alpha == pytest.approx(2.0, abs=1e-12)
        assert fit.power_fit_residual <= 1e-20

    def test_single_heat_mode_prefers_exponential(self):
        gen = assemble(D, D, 0.0, 4)
        initial = StateVector.zeros(4)
        initial.theta_hat[0] = 1.0
        trace = evolve(gen, initial, np.geomspace(0.1, 8.0, 40))
        fit = fit_polynomial_decay(trace, (0.1, 8.0))
        assert fit.exp_fit_residual <= fit.power_fit_residual / 10.0

    def test_power_law_family_slope(self):
        # velocity data with amplitudes m^(-s) follows the envelope
        # exponent (1 - 2 s) / 4 on the pre-asymptotic window
        s, n = 1.6, 128
        gen = assemble(D, D, 1.0, n)
        initial = StateVector.zeros(n)
        initial.v_hat[:] = np.arange(1, n + 1, dtype=float) ** (-s)
        trace = evolve(gen, initial, np.geomspace(10.0, 1000.0, 48))
        fit = fit_polynomial_decay(trace, (10.0, 1000.0),
                                   max_valid_time=valid_fit_horizon(gen))
        assert fit.slope == pytest.approx((1 - 2 * s) / 4, abs=0.05)
        assert fit.exp_fit_residual >= 10 * fit.power_fit_residual

    def test_decay_exponent_tightens_toward_half_for_rough_data(self):
        # as s drops toward 3/2 the envelope exponent approaches -1/2 from below
        n = 128
        slopes = []
        for s in (2.1, 1.8, 1.55):
            gen = assemble(D, D, 1.0, n)
            initial = StateVector.zeros(n)
            initial.v_hat[:] = np.arange(1, n + 1, dtype=float) ** (-s)
            trace = evolve(gen, initial, np.geomspace(10.0, 1000.0, 40))
            slopes.append(fit_polynomial_decay(trace, (10.0, 1000.0)).slope)
        assert all(sl < -0.5 for sl in slopes)
        assert slopes[0] < slopes[1] < slopes[2]

    def test_window_validation(self):
        times = np.geomspace(1.0, 100.0, 20)
        trace = synthetic_trace(times, 1.0 / times)
        with pytest.raises(ValueError):
            fit_polynomial_decay(trace, (200.0, 300.0))  # outside the trace
        with pytest.raises(ValueError):
            fit_polynomial_decay(trace, (50.0, 10.0))  # empty
        with pytest.raises(ValueError):
            fit_polynomial_decay(trace, (1.0, 100.0), max_valid_time=50.0)
        short = synthetic_trace([1.0, 2.0, 3.0], [1.0, 0.5, 0.3])
        with pytest.raises(ValueError):
            fit_polynomial_decay(short, (1.0, 3.0))  # fewer than 5 samples

    def test_zero_energy_window_rejected(self):
        trace = synthetic_trace(np.linspace(1, 10, 10), np.zeros(10))
        with pytest.raises(ValueError):
            fit_polynomial_decay(trace, (1.0, 10.0))
