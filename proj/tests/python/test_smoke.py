import numpy as np
import pytest

import bandcov


def test_patch_ranges():
    assert bandcov.patch_ranges(10, 5, 3) == [(1, 5), (4, 8), (7, 10)]


def test_wahba_recovers_rotation():
    rng = np.random.default_rng(0)
    a = rng.standard_normal((6, 2))
    c, s = np.cos(0.7), np.sin(0.7)
    q = np.array([[c, -s], [s, c]])
    np.testing.assert_allclose(bandcov.solve_wahba(a @ q, a), q, atol=1e-10)


def test_estimate_from_simulation():
    obs, truth = bandcov.simulate(10, 50, K=3, seed=5)
    assert len(obs) == 1050
    cfg = bandcov.EstimatorConfig(band=7, increment=1, seed=1)
    est = bandcov.estimate_covariance(obs, cfg)
    assert est.sigma0.shape == (30, 30)
    assert est.cv is not None and est.rank == est.cv.chosen_r
    assert bandcov.rmse(est.sigma0, truth) < 0.5
    assert est.surface(0.0, 0.0) == pytest.approx(est.sigma0[0, 0])


def test_manual_observations_and_errors():
    grid = bandcov.Grid(4)
    samples = [bandcov.Sample(f"s{k}", [0, 1, 2], [k * 0.1, 1.0, -k * 0.2]) for k in range(5)]
    obs = bandcov.ObservationSet(grid, samples)
    with pytest.raises(bandcov.ConfigError):
        bandcov.estimate_covariance(obs, bandcov.EstimatorConfig(band=3, increment=1, rank=3))
    with pytest.raises(bandcov.InsufficientDataError):
        bandcov.estimate_covariance(obs, bandcov.EstimatorConfig(band=3, increment=1, rank=1))
