import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from tllfp.model import LuttingerParams, ModelParams, bethe_params, continuum_gamma, coupling_g

# (delta, u, K, g at sigma_h = 0.05) as tabulated with the fitted cutoffs
TABLE = [
    (0.0, 1.0000, 1.0000, 6.37e-3),
    (-0.5, 0.6495, 1.5000, None),
    (-0.7, 0.4781, 1.9749, 5.50e-2),
    (0.5, 1.2990, 0.7500, None),
]


@pytest.mark.parametrize("delta,u,K,_", TABLE)
def test_bethe_table_values(delta, u, K, _):
    got_u, got_K = bethe_params(delta)
    assert got_u == pytest.approx(u, abs=5e-5)
    assert got_K == pytest.approx(K, abs=5e-5)


def test_free_point_is_exact():
    assert bethe_params(0.0) == (1.0, 1.0)
    assert bethe_params(0.0, J=2.5) == (2.5, 1.0)


@pytest.mark.parametrize("delta", [1.0, -1.0, 1.5, -3.0])
def test_gapped_anisotropy_rejected(delta):
    with pytest.raises(ValueError):
        bethe_params(delta)


def test_bad_exchange_rejected():
    with pytest.raises(ValueError):
        bethe_params(0.2, J=0.0)


def test_continuum_gamma():
    assert continuum_gamma(0.0) == 0.0
    assert continuum_gamma(0.05) == pytest.approx(2.533e-4, rel=1e-3)
    assert continuum_gamma(0.2) == pytest.approx(4.053e-3, rel=1e-3)
    with pytest.raises(ValueError):
        continuum_gamma(-0.1)


def test_coupling_g_examples():
    assert coupling_g(1.0, 1.0, 2.533e-4) == pytest.approx(6.37e-3, rel=5e-3)
    assert coupling_g(0.4781, 1.9749, 2.533e-4) == pytest.approx(5.50e-2, rel=5e-3)
    assert coupling_g(0.7, 1.3, 0.0) == 0.0


@pytest.mark.parametrize("delta,u,K,g", [row for row in TABLE if row[3] is not None])
def test_g_chain_matches_table_to_three_figures(delta, u, K, g):
    lp = ModelParams(delta, sigma_h=0.05).luttinger()
    assert float(f"{lp.g:.3g}") == g


@given(st.floats(-0.99, 0.99))
def test_g_recomputable(delta):
    lp = ModelParams(delta, sigma_h=0.1).luttinger()
    assert lp.g == 8 * math.pi * lp.K * lp.gamma / lp.u**2


def test_K_and_g_strictly_decreasing_in_delta():
    deltas = np.linspace(-0.99, 0.99, 397)
    Ks = np.array([bethe_params(d)[1] for d in deltas])
    gs = np.array([ModelParams(d, sigma_h=0.05).luttinger().g for d in deltas])
    assert np.all(np.diff(Ks) < 0)
    assert np.all(np.diff(gs) < 0)


def test_bethe_continuous_across_free_point():
    for eps in (1e-6, 1e-9):
        for side in (-1, 1):
            u, K = bethe_params(side * eps)
            assert abs(u - 1) < 10 * eps and abs(K - 1) < 10 * eps


def test_model_params_validation():
    assert ModelParams(0.3).zero_temperature
    assert not ModelParams(0.3, beta=2.0).zero_temperature
    for bad in (dict(delta=1.0), dict(delta=0, J=-1), dict(delta=0, sigma_h=-1), dict(delta=0, beta=0.0)):
        with pytest.raises(ValueError):
            ModelParams(**bad)
    with pytest.raises(ValueError):
        LuttingerParams(u=-1, K=1, gamma=0, g=0)
