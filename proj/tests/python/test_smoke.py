import math

import numpy as np
import pytest

import excursion as ex


def test_constants():
    assert ex.g_beta(2.0) == pytest.approx(math.sqrt(math.pi) / 2, abs=1e-9)
    assert ex.k_beta(2.0) == pytest.approx(math.pi / (3 * math.sqrt(3)), abs=1e-8)
    assert ex.trend_k(0.0, 0.0) == pytest.approx(ex.k_beta(2.0), abs=1e-10)
    assert ex.normal_survival(0.0) == 0.5


def test_regimes_and_prediction():
    expected = {
        0.5: (math.sqrt(math.pi), 1.0, 0, ex.Regime.SideDominated),
        2 / 3: (3 * math.sqrt(math.pi) / 4, 1.0, 1, ex.Regime.LogProduct),
        1.0: (math.pi / (3 * math.sqrt(3)), 2.0, 0, ex.Regime.CriticalProduct),
        2.0: (math.pi / 4, 2.0, 0, ex.Regime.Classical),
    }
    for a, (pref, power, log_power, regime) in expected.items():
        params = ex.ModelParams(1.0, 2.0, a)
        assert ex.classify_regime(params) == regime
        p = ex.predict(params, 1.0)
        assert p.prefactor == pytest.approx(pref, abs=1e-10)
        assert p.u_power == pytest.approx(power, abs=1e-12)
        assert p.log_power == log_power
        assert p(3.0) > 0


def test_invalid_parameters_raise_value_error():
    with pytest.raises(ValueError):
        ex.ModelParams(1.5, 1.0, 1.0)
    with pytest.raises(ValueError):
        ex.predict_trend(ex.ModelParams(1.0, 3.0, 1.0), 1.0)


def test_integrals():
    u = 100.0
    assert u * u * ex.i_gamma(u, a=2.0) == pytest.approx(math.pi / 4, rel=1e-3)
    assert abs(ex.inner_a(1e-4) + math.log(1e-4)) <= 5
    assert 0.80 <= ex.j_lambda_ratio(1e8, 1 / 3, 0.5) <= 1.05


def test_sweep():
    rows = ex.regime_sweep(1.0, 2.0, [0.5, 2 / 3, 0.9, 1.0, 2.0], 10.0)
    assert [r.log_power for r in rows] == [0, 1, 1, 0, 0]
    assert rows[2].u_power == pytest.approx(4 - 2 / 0.9)


def test_field_sampling_is_reproducible():
    params = ex.ModelParams(1.0, 2.0, 2.0)
    grid = ex.build_grid(params, 8)
    cov = grid.covariance_matrix()
    assert cov.shape == (64, 64)
    assert np.allclose(cov, cov.T)
    f = grid.sample(seed=3)
    assert f.shape == (8, 8)
    assert np.array_equal(f, grid.sample(seed=3))
    a = ex.mc_excursion(grid, 2.0, n_samples=2000, seed=5)
    b = ex.mc_excursion(grid, 2.0, n_samples=2000, seed=5, workers=2)
    assert a.p_hat == b.p_hat
    assert 0.0 < a.p_hat < 1.0


def test_pickands_finite():
    est = ex.pickands_finite(1.0, 1.0, 21, 2000, seed=1)
    assert est.value >= 1.0
    assert est.std_err > 0
