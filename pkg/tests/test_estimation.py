"""Quantile and regression estimator behaviour, plus the density fit report."""
import numpy as np
import pytest

from forestdetect.errors import EstimationError
from forestdetect.stable import (
    StableParams,
    estimate_koutrouvelis,
    fit_report,
    mcculloch_initial,
    sample_stable,
)


def average_estimates(true_params, n, seeds):
    rows = []
    for seed in seeds:
        sample = sample_stable(true_params, n, seed=seed)
        p = estimate_koutrouvelis(sample)
        rows.append([p.alpha, p.beta, p.sigma, p.delta])
    return np.mean(rows, axis=0)


class TestMcCullochInitial:
    def test_gaussian_sample_alpha_near_two(self):
        sample = np.random.default_rng(0).normal(0.0, 1.0, 5000)
        assert mcculloch_initial(sample).alpha >= 1.9

    def test_symmetric_sample_small_beta(self):
        sample = sample_stable(StableParams(1.5, 0.0, 1.0, 0.0), 5000, seed=1)
        assert abs(mcculloch_initial(sample).beta) < 0.2

    def test_location_equivariance(self):
        shifts = []
        for seed in range(5):
            sample = sample_stable(StableParams(1.7, 0.0, 1.0, 0.0), 5000, seed=seed)
            shifts.append(mcculloch_initial(sample + 2.5).delta - mcculloch_initial(sample).delta)
        assert np.mean(shifts) == pytest.approx(2.5, abs=0.05)

    def test_small_sample_rejected(self):
        with pytest.raises(EstimationError):
            mcculloch_initial(np.arange(49, dtype=float))

    def test_constant_sample_rejected(self):
        with pytest.raises(EstimationError):
            mcculloch_initial(np.full(100, 0.3))

    def test_alpha_clamped_to_valid_range(self):
        heavy = sample_stable(StableParams(0.6, 0.0, 1.0, 0.0), 5000, seed=2)
        p = mcculloch_initial(heavy)
        assert 0.6 <= p.alpha <= 2.0
        assert -1.0 <= p.beta <= 1.0


class TestKoutrouvelis:
    def test_recovery_symmetric(self):
        est = average_estimates(StableParams(1.5, 0.0, 1.0, 0.0), 5000, range(12))
        assert abs(est[0] - 1.5) < 0.1
        assert abs(est[1]) < 0.15
        assert abs(est[2] - 1.0) < 0.1
        assert abs(est[3]) < 0.05

    def test_gaussian_alpha_near_two(self):
        sample = np.random.default_rng(3).normal(0.0, 1.0, 5000)
        p = estimate_koutrouvelis(sample)
        assert p.alpha > 1.9
        # alpha=2 Gaussian has stable scale sigma = std / sqrt(2)
        assert p.sigma == pytest.approx(1.0 / np.sqrt(2.0), abs=0.05)

    def test_delta_is_sample_mean_when_alpha_above_one(self):
        sample = sample_stable(StableParams(1.8, 0.0, 1.0, 0.5), 3000, seed=4)
        p = estimate_koutrouvelis(sample)
        assert p.alpha > 1.0
        assert p.delta == float(sample.mean())

    def test_affine_equivariance(self):
        a, b = 3.0, -2.0
        base_rows, mapped_rows = [], []
        for seed in range(6):
            sample = sample_stable(StableParams(1.6, 0.0, 1.0, 0.0), 4000, seed=seed)
            base_rows.append(estimate_koutrouvelis(sample))
            mapped_rows.append(estimate_koutrouvelis(a * sample + b))
        base_sigma = np.mean([p.sigma for p in base_rows])
        mapped_sigma = np.mean([p.sigma for p in mapped_rows])
        base_delta = np.mean([p.delta for p in base_rows])
        mapped_delta = np.mean([p.delta for p in mapped_rows])
        assert mapped_sigma == pytest.approx(a * base_sigma, rel=0.05)
        assert mapped_delta == pytest.approx(a * base_delta + b, abs=0.1)
        assert np.mean([p.alpha for p in mapped_rows]) == pytest.approx(
            np.mean([p.alpha for p in base_rows]), abs=0.1
        )

    def test_skew_sign_recovered(self):
        sample = sample_stable(StableParams(1.4, 0.7, 1.0, 0.0), 8000, seed=7)
        assert estimate_koutrouvelis(sample).beta > 0.2

    def test_small_sample_rejected(self):
        with pytest.raises(EstimationError):
            estimate_koutrouvelis(np.arange(100, dtype=float))

    def test_min_n_override_for_small_tiles(self):
        sample = sample_stable(StableParams(1.8, 0.0, 0.02, 0.2), 100, seed=8)
        p = estimate_koutrouvelis(sample, min_n=50)
        assert 0.3 <= p.alpha <= 2.0

    def test_constant_sample_rejected(self):
        with pytest.raises(EstimationError):
            estimate_koutrouvelis(np.full(500, 1.0))


class TestFitReport:
    def test_stable_sample_prefers_stable_law(self):
        sample = sample_stable(StableParams(1.5, 0.0, 1.0, 0.0), 4000, seed=9)
        report = fit_report(sample)
        rmse = {f.name: f.rmse for f in report.fits}
        assert rmse["stable"] < rmse["normal"]
        assert rmse["gamma"] is None  # sample spans negative values

    def test_gaussian_sample_normal_and_stable_agree(self):
        sample = np.random.default_rng(10).normal(5.0, 1.0, 4000)
        report = fit_report(sample)
        rmse = {f.name: f.rmse for f in report.fits}
        assert rmse["normal"] == pytest.approx(rmse["stable"], rel=0.5)
        assert rmse["gamma"] is not None
        assert rmse["normal"] < rmse["gamma"]

    def test_report_outputs_well_formed(self):
        sample = np.random.default_rng(11).normal(5.0, 1.0, 500)
        report = fit_report(sample)
        assert report.grid.size == 256
        text = report.to_text()
        assert "normal" in text and "stable" in text
        csv_text = report.density_csv()
        assert csv_text.splitlines()[0].startswith("x,empirical")
        assert len(csv_text.splitlines()) == 257

    def test_small_sample_rejected(self):
        with pytest.raises(EstimationError):
            fit_report(np.random.default_rng(0).normal(size=100))
