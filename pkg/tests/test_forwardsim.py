"""Tests for the two-time-step stability study."""

import math

import numpy as np
import pytest

from dnscm.forwardsim import (
    GRID_COLUMNS,
    StabilityParams,
    analytic_variances,
    estimate_counterfactual,
    estimate_interventional,
    fixed_assignment_rule,
    generate_truth,
    negative_outcome_rule,
    point_seed,
    regime,
    run_grid,
    run_point,
)


def mean_kl(p, seeds=10):
    rows = [run_point(p.with_values(seed=s)) for s in range(seeds)]
    return (
        float(np.mean([row.kl_true_vs_int for row in rows])),
        float(np.mean([row.kl_true_vs_cf for row in rows])),
    )


class TestStabilityParams:
    def test_defaults(self):
        p = StabilityParams()
        assert (p.n, p.mu_z, p.sigma_z, p.delta, p.noise_scale) == (1000, 0.0, 1.0, 1.0, "sd")

    def test_negative_scale_rejected(self):
        with pytest.raises(ValueError, match="sigma_u must be >= 0"):
            StabilityParams(sigma_u=-1.0)

    def test_unknown_noise_scale(self):
        with pytest.raises(ValueError, match="Unknown noise_scale"):
            StabilityParams(noise_scale="precision")

    def test_scale_readings(self):
        sd = StabilityParams(sigma_u=4.0, sigma_mu=3.0)
        var = StabilityParams(sigma_u=4.0, sigma_mu=3.0, noise_scale="variance")
        assert (sd.var_u, sd.var_mu) == (16.0, 9.0)
        assert var.var_u == pytest.approx(4.0)
        assert var.var_mu == pytest.approx(3.0)
        assert sd.modeler_variance == var.modeler_variance == 25.0

    def test_regime(self):
        assert regime(StabilityParams()) == ("A1", "A3")
        assert regime(StabilityParams(sigma_u=0.5, sigma_mu=5.0)) == ("A2", "A4")


class TestGenerateTruth:
    def test_treatment_variable_law(self):
        data = generate_truth(StabilityParams(n=100_000, seed=1))
        assert abs(np.mean(data.z0)) < 4 / math.sqrt(100_000)
        assert abs(np.var(data.z0) - 1.0) < 0.05

    def test_negative_outcome_rule(self):
        data = generate_truth(StabilityParams(n=500, sigma_u=1.0, seed=2))
        assert np.array_equal(data.w, (data.y0 < 0).astype(int))
        assert np.array_equal(data.z1, data.z0 + data.w)

    def test_fixed_rule(self):
        p = StabilityParams(n=4, delta=2.0, seed=3)
        data = generate_truth(p, fixed_assignment_rule([1, 0, 0, 1]))
        assert list(data.offsets) == [2.0, 0.0, 0.0, 2.0]
        with pytest.raises(ValueError, match="4 entries for 5 units"):
            generate_truth(p.with_values(n=5), fixed_assignment_rule([1, 0, 0, 1]))

    def test_non_binary_rule_rejected(self):
        with pytest.raises(ValueError, match="binary"):
            generate_truth(StabilityParams(n=3), lambda z0, y0: np.full(3, 2))

    def test_constant_noise_gives_counterfactual(self):
        p = StabilityParams(n=2000, sigma_mu=3.0, delta=1.5, seed=4)
        data = generate_truth(p)
        assert np.array_equal(data.u0, data.u1)
        assert np.array_equal(data.y1_true, estimate_counterfactual(data, p).values)

    def test_no_noise_gives_interventional(self):
        p = StabilityParams(n=2000, seed=5)
        data = generate_truth(p)
        assert np.array_equal(data.y1_true, estimate_interventional(data, p).values)

    def test_null_treatment_keeps_marginal(self):
        p = StabilityParams(n=100_000, sigma_u=1.0, sigma_mu=1.0, delta=0.0, seed=6)
        data = generate_truth(p)
        assert abs(np.mean(data.y1_true) - np.mean(data.y0)) < 0.05
        assert np.var(data.y1_true) == pytest.approx(np.var(data.y0), rel=0.03)

    def test_pooled_noise_variance(self):
        p = StabilityParams(n=100_000, sigma_u=1.0, sigma_mu=2.0, seed=7)
        data = generate_truth(p)
        assert np.var(data.y0 - data.z0) == pytest.approx(p.modeler_variance, rel=0.05)

    def test_deterministic(self):
        p = StabilityParams(n=300, sigma_u=1.0, sigma_mu=1.0, seed=8)
        assert np.array_equal(generate_truth(p).y1_true, generate_truth(p).y1_true)

    def test_scatter_rows(self):
        p = StabilityParams(n=50, seed=9)
        data = generate_truth(p)
        for row in data.scatter_rows():
            assert row["y1_true"] == row["y0"] + row["w"]


class TestEstimates:
    def test_counterfactual_is_shifted_observation(self):
        p = StabilityParams(n=200, sigma_u=2.0, sigma_mu=1.0, delta=3.0, seed=10)
        data = generate_truth(p)
        assert np.array_equal(estimate_counterfactual(data, p).values, data.y0 + 3.0 * data.w)

    def test_interventional_deterministic(self):
        p = StabilityParams(n=200, sigma_u=2.0, seed=11)
        data = generate_truth(p)
        a = estimate_interventional(data, p).values
        b = estimate_interventional(data, p).values
        assert np.array_equal(a, b)


class TestAnalyticVariances:
    def test_variance_reading(self):
        a = analytic_variances(
            StabilityParams(sigma_u=5.0, sigma_mu=5.0, delta=1.0, noise_scale="variance")
        )
        assert a.y0 == pytest.approx(11.0)
        assert a.y1_cf == pytest.approx(8.604, abs=0.01)
        assert a.y1_true == pytest.approx(9.807, abs=0.01)
        assert a.z1 == pytest.approx(1.0094, abs=0.001)
        assert a.y1_int == pytest.approx(51.009, abs=0.01)

    def test_sd_reading(self):
        a = analytic_variances(StabilityParams(sigma_u=5.0, sigma_mu=5.0, delta=1.0))
        assert a.y0 == pytest.approx(51.0)
        assert a.y1_int == pytest.approx(51.14, abs=0.01)
        assert a.y1_int == pytest.approx(a.z1 + 50.0)

    def test_null_treatment(self):
        a = analytic_variances(StabilityParams(sigma_u=1.0, sigma_mu=2.0, delta=0.0))
        assert a.y1_true == a.y1_cf == a.y0
        assert a.z1 == 1.0

    def test_degenerate_population(self):
        a = analytic_variances(StabilityParams(sigma_z=0.0, mu_z=-1.0))
        assert a.y0 == 0.0
        assert a.y1_cf == 0.0

    def test_matches_simulation(self):
        p = StabilityParams(
            n=50_000, sigma_u=5.0, sigma_mu=5.0, delta=1.0, seed=12, noise_scale="variance"
        )
        a = analytic_variances(p)
        row = run_point(p)
        assert row.var_y0 == pytest.approx(a.y0, rel=0.03)
        assert row.var_y1_true == pytest.approx(a.y1_true, rel=0.03)
        assert row.var_y1_cf == pytest.approx(a.y1_cf, rel=0.03)
        assert row.var_y1_int == pytest.approx(a.y1_int, rel=0.03)


class TestKlRegimes:
    def test_unstructured_small_noise_favors_interventional(self):
        kl_int, kl_cf = mean_kl(StabilityParams(sigma_u=0.5, sigma_mu=0.0, noise_scale="variance"))
        assert kl_int < kl_cf

    def test_unstructured_large_noise_favors_counterfactual(self):
        kl_int, kl_cf = mean_kl(StabilityParams(sigma_u=5.0, sigma_mu=0.0, noise_scale="variance"))
        assert kl_cf < kl_int

    @pytest.mark.parametrize("sigma_u", [0.0, 1.0, 2.0, 3.0, 4.0, 5.0])
    def test_structured_noise_favors_counterfactual(self, sigma_u):
        kl_int, kl_cf = mean_kl(
            StabilityParams(sigma_u=sigma_u, sigma_mu=5.0, noise_scale="variance")
        )
        assert kl_cf < kl_int


class TestRunGrid:
    def test_row_order_and_columns(self):
        rows = run_grid([0.0, 0.5], [0.0, 1.0], [1.0], StabilityParams(n=200, seed=13))
        assert [(r.sigma_u, r.sigma_mu) for r in rows] == [(0.0, 0.0), (0.5, 0.0), (0.0, 1.0), (0.5, 1.0)]
        assert list(rows[0].to_dict()) == GRID_COLUMNS

    def test_thread_count_does_not_change_rows(self):
        p = StabilityParams(n=300, seed=14)
        single = run_grid([0.0, 0.5, 1.0], [0.0, 2.0], [0.5, 1.0], p, threads=1)
        many = run_grid([0.0, 0.5, 1.0], [0.0, 2.0], [0.5, 1.0], p, threads=4)
        assert single == many

    def test_point_seed_keyed_by_values(self):
        p = StabilityParams(n=300, seed=15)
        full = run_grid([0.0, 0.5], [0.0, 2.0], [1.0], p)
        alone = run_grid([0.5], [2.0], [1.0], p)
        assert alone[0] == full[3]
        assert alone[0].seed == point_seed(15, 0.5, 2.0, 1.0)

    def test_constant_noise_column_has_no_counterfactual_divergence(self):
        rows = run_grid([0.0], [0.0, 0.5, 5.0], [1.0], StabilityParams(n=500, seed=16))
        assert all(abs(r.kl_true_vs_cf) < 0.05 for r in rows)

    def test_empty_grid_rejected(self):
        with pytest.raises(ValueError, match="sigma_mu grid must be non-empty"):
            run_grid([0.0], [], [1.0], StabilityParams(n=50))

    def test_threads_checked(self):
        with pytest.raises(ValueError, match="threads must be at least 1"):
            run_grid([0.0], [0.0], [1.0], StabilityParams(n=50), threads=0)


class TestRules:
    def test_negative_outcome_rule(self):
        assert list(negative_outcome_rule(np.zeros(3), np.array([-1.0, 0.0, 2.0]))) == [1, 0, 0]
