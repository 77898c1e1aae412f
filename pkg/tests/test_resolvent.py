"""Resolvent norms, witness solutions and growth-exponent fits."""

import math

import numpy as np
import pytest

from thermospec import (BoundaryKind, NearEigenvalueError, ResolventScan, StateVector,
                        assemble, growth_exponent, resolvent_norm, scan, solve_shifted,
                        to_euclidean, witness, worker_count)

D = BoundaryKind.DIRICHLET
N = BoundaryKind.NEUMANN


class TestResolventNorm:
    def test_decoupled_single_mode_at_zero(self):
        # wave and heat sub-blocks each contribute norm 1 at the origin
        gen = assemble(D, D, 0.0, 1)
        assert resolvent_norm(gen, 0.0) == pytest.approx(1.0, rel=1e-12)

    def test_matches_explicit_inverse_norm(self):
        gen = assemble(D, D, 1.0, 1)
        for lam in (0.0, 0.7, 2.5, -1.3):
            shifted = 1j * lam * np.eye(3) - to_euclidean(gen)
            oracle = np.linalg.svd(np.linalg.inv(shifted), compute_uv=False)[0]
            assert resolvent_norm(gen, lam) == pytest.approx(oracle, rel=1e-8)

    def test_same_basis_fast_path_matches_dense(self):
        gen = assemble(N, N, 0.8, 12)
        import scipy.linalg
        for lam in (0.3, 5.2, 11.9):
            dense = 1.0 / scipy.linalg.svdvals(1j * lam * np.eye(36) - to_euclidean(gen))[-1]
            assert resolvent_norm(gen, lam) == pytest.approx(dense, rel=1e-10)

    def test_witness_lower_bound(self):
        gamma, n = 1.0, 64
        gen = assemble(D, D, gamma, n)
        for m in (8, 16, 32):
            w = witness((D, D), m, gamma)
            bound = math.sqrt(w.energy_norm_sq_u)
            assert resolvent_norm(gen, w.lam) >= bound

    @pytest.mark.parametrize("gamma", [0.5, 1.0])
    def test_witness_lower_bound_full_sweep(self, gamma):
        # truncation-edge policy: the bound is claimed for modes up to N/2
        n = 32
        gen = assemble(D, D, gamma, n)
        for m in range(1, n // 2 + 1):
            w = witness((D, D), m, gamma)
            assert resolvent_norm(gen, w.lam) >= math.sqrt(w.energy_norm_sq_u)

    def test_near_eigenvalue_raises(self):
        gen = assemble(D, D, 0.0, 4)  # decoupled wave spectrum sits on the axis
        with pytest.raises(NearEigenvalueError) as info:
            resolvent_norm(gen, 2.0)
        assert info.value.lam == 2.0


class TestScan:
    def test_grid_away_from_spectrum_has_no_flags(self):
        gen = assemble(D, D, 1.0, 16)
        grid = np.arange(1, 9) + 0.5  # midpoints between wave frequencies
        result = scan(gen, grid)
        assert not np.any(result.flagged)
        assert np.all(np.isfinite(result.norms))

    def test_growth_beyond_small_frequencies(self):
        gen = assemble(D, D, 1.0, 48)
        result = scan(gen, np.arange(2.0, 25.0))
        assert np.all(np.diff(result.norms[1:]) > 0)

    def test_neumann_scan_equals_dirichlet_scan(self):
        # identical spectra on the interval once the constant mode is dropped
        grid = np.arange(1.0, 17.0) + 0.3
        dd = scan(assemble(D, D, 1.0, 32), grid)
        nn = scan(assemble(N, N, 1.0, 32), grid)
        assert np.max(np.abs(dd.norms - nn.norms) / dd.norms) <= 1e-9

    def test_symmetry_under_negation(self):
        gen = assemble(D, N, 1.0, 12)
        grid = np.array([0.4, 1.6, 3.7, 9.2])
        forward = scan(gen, grid).norms
        backward = scan(gen, -grid).norms
        assert np.max(np.abs(forward - backward) / forward) <= 1e-10

    def test_eigenvalue_hit_flagged_not_fatal(self):
        gen = assemble(D, D, 0.0, 8)
        result = scan(gen, np.array([2.0, 2.5]))
        assert bool(result.flagged[0]) and not bool(result.flagged[1])
        assert math.isinf(result.norms[0])

    def test_unbounded_growth_with_truncation_size(self):
        peaks = []
        for n in (16, 32, 64):
            gen = assemble(D, D, 1.0, n)
            grid = np.arange(1.0, n / 2 + 1.0)
            peaks.append(scan(gen, grid).norms.max())
        assert peaks[0] < peaks[1] < peaks[2]
        assert peaks[2] / peaks[0] > 10

    def test_empty_grid_rejected(self):
        gen = assemble(D, D, 1.0, 8)
        with pytest.raises(ValueError):
            scan(gen, [])


class TestWitness:
    def test_closed_form_dd(self):
        w = witness((D, D), 4, 1.0)
        assert w.lam == pytest.approx(4.0)
        assert w.b == pytest.approx(1.0)
        assert w.a == pytest.approx(1 - 4j)
        assert w.energy_norm_sq_u == pytest.approx(16 * 17)
        assert w.exact

    def test_closed_form_scaled_coupling(self):
        w = witness((D, D), 1, 2.0)
        assert w.b == pytest.approx(0.5)
        assert w.a == pytest.approx((1 - 1j) / 4)

    def test_closed_form_nn(self):
        w = witness((N, N), 3, 1.0)
        assert w.a == pytest.approx(1 - 3j)
        assert w.exact

    def test_mixed_pairs_are_heuristic(self):
        for pair in [(D, N), (N, D)]:
            w = witness(pair, 2, 1.0)
            assert not w.exact
            assert w.b == pytest.approx(1.0)
            assert w.a.real > 0 and w.a.imag == 0

    @pytest.mark.parametrize("kind", [D, N])
    @pytest.mark.parametrize("gamma", [0.1, 0.5, 1.0, 2.0])
    def test_numeric_solve_reproduces_witness(self, kind, gamma):
        n = 24
        gen = assemble(kind, kind, gamma, n)
        for m in range(1, n + 1):
            w = witness((kind, kind), m, gamma)
            rhs = StateVector.zeros(n)
            rhs.v_hat[m - 1] = 1.0
            out = solve_shifted(gen, 1j * w.lam, rhs)
            assert abs(out.u_hat[m - 1] - w.a) / abs(w.a) <= 1e-8
            assert abs(out.theta_hat[m - 1] - w.b) / abs(w.b) <= 1e-8

    def test_invalid_arguments(self):
        with pytest.raises(ValueError):
            witness((D, D), 3, 0.0)
        with pytest.raises(ValueError):
            witness((D, D), 0, 1.0)


class TestGrowthExponent:
    def synthetic_scan(self, lams, norms):
        lams = np.asarray(lams, dtype=float)
        norms = np.asarray(norms, dtype=float)
        return ResolventScan(lambdas=lams, norms=norms,
                             flagged=np.zeros(lams.size, dtype=bool),
                             bc_pair=(D, D), gamma=1.0, mode_count=len(lams))

    def test_exact_power_law(self):
        lams = np.linspace(2.0, 40.0, 12)
        fit = growth_exponent(self.synthetic_scan(lams, lams**2))
        assert fit["slope"] == pytest.approx(2.0, abs=1e-12)
        assert fit["r_squared"] == pytest.approx(1.0, abs=1e-12)

    def test_quadratic_growth_of_coupled_system(self):
        gen = assemble(D, D, 1.0, 64)
        grid = np.arange(6.0, 29.0)
        fit = growth_exponent(scan(gen, grid))
        assert fit["slope"] == pytest.approx(2.0, abs=0.1)
        assert fit["r_squared"] >= 0.99

    def test_heat_only_norms_stay_bounded(self):
        # decoupled thermal block: norms max_k 1 / |i lam + lam_k| are bounded
        # by the spectral gap, so the growth exponent is not positive
        lams = np.linspace(3.0, 60.0, 16)
        eig = np.arange(1.0, 33.0) ** 2
        norms = np.array([np.max(1.0 / np.abs(1j * lam + eig)) for lam in lams])
        fit = growth_exponent(self.synthetic_scan(lams, norms))
        assert fit["slope"] <= 0.05
        assert norms.max() <= 1.0

    def test_window_selection(self):
        lams = np.linspace(1.0, 16.0, 16)
        scan_result = self.synthetic_scan(lams, lams**3)
        fit = growth_exponent(scan_result, (4, 12))
        assert fit["slope"] == pytest.approx(3.0, abs=1e-12)

    def test_window_validation(self):
        scan_result = self.synthetic_scan([1, 2, 3, 4, 5, 6], [1, 4, 9, 16, 25, 36])
        with pytest.raises(ValueError):
            growth_exponent(scan_result, (0, 4))  # too few points
        bad = self.synthetic_scan([-1, 2, 3, 4, 5, 6], [1, 4, 9, 16, 25, 36])
        with pytest.raises(ValueError):
            growth_exponent(bad)
        flagged = self.synthetic_scan([1, 2, 3, 4, 5, 6],
                                      [1, math.inf, 9, 16, 25, 36])
        with pytest.raises(ValueError):
            growth_exponent(flagged)


class TestWorkerCount:
    def test_default_is_positive(self, monkeypatch):
        monkeypatch.delenv("THERMOSPEC_THREADS", raising=False)
        assert worker_count() >= 1

    def test_env_override(self, monkeypatch):
        monkeypatch.setenv("THERMOSPEC_THREADS", "2")
        assert worker_count() == 2

    def test_invalid_env_rejected(self, monkeypatch):
        monkeypatch.setenv("THERMOSPEC_THREADS", "many")
        with pytest.raises(ValueError):
            worker_count()
        monkeypatch.setenv("THERMOSPEC_THREADS", "0")
        with pytest.raises(ValueError):
            worker_count()

    def test_scan_result_independent_of_width(self, monkeypatch):
        gen = assemble(D, N, 1.0, 10)
        grid = np.array([0.5, 1.4, 2.6, 3.8])
        monkeypatch.setenv("THERMOSPEC_THREADS", "1")
        serial = scan(gen, grid).norms
        monkeypatch.setenv("THERMOSPEC_THREADS", "4")
        parallel = scan(gen, grid).norms
        assert np.array_equal(serial, parallel)
