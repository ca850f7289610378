import math

import numpy as np
import pytest

from eisencubic.testfunctions import (
    fejer,
    fejer_squared,
    gaussian,
    integrate_against,
    numerical_fourier,
    planar_gaussian,
    smoothed_indicator,
    phi_from_config,
)

PHIS = [fejer(0.5), fejer(1.0), fejer(13 / 11), fejer_squared(1.0), fejer_squared(0.3)]


@pytest.mark.parametrize("phi", PHIS, ids=lambda p: f"{p.ident}-{p.v:.3f}")
def test_transform_matches_numerical_fourier(phi):
    for t in np.linspace(0, 1.3 * phi.v, 9):
        assert abs(numerical_fourier(phi, t) - float(phi.phi_hat(t))) < 1e-8


def test_fejer_transform_at_zero():
    for v in (0.5, 1.0, 13 / 11):
        assert float(fejer(v).phi_hat(0.0)) == pytest.approx(1 / v)


@pytest.mark.parametrize("phi", PHIS, ids=lambda p: f"{p.ident}-{p.v:.3f}")
def test_cosine_expansion_is_exact(phi):
    for x in (0.7, 3.1, 17.25):
        series = sum(c * math.cos(2 * math.pi * f * x) for c, f in phi.cosine_terms) / x ** phi.decay
        assert float(phi.phi(x)) == pytest.approx(series, rel=1e-10)


@pytest.mark.parametrize("phi", PHIS, ids=lambda p: f"{p.ident}-{p.v:.3f}")
def test_integral_of_phi(phi):
    # phi is even, so its integral over (0, inf) is phi_hat(0) / 2
    assert integrate_against(phi, lambda x: 1.0) == pytest.approx(float(phi.phi_hat(0.0)) / 2, abs=1e-10)


def test_support():
    phi = fejer_squared(0.8)
    assert float(phi.phi_hat(0.8)) == 0 and float(phi.phi_hat(0.9)) == 0
    assert float(phi.phi_hat(0.79)) > 0


@pytest.mark.parametrize("w", [gaussian(), planar_gaussian()], ids=lambda w: w.ident)
def test_weight_mellin(w):
    assert w.mellin(1.0) == pytest.approx(w.mellin_one, rel=1e-9)


def test_smoothed_indicator():
    w = smoothed_indicator(100.0)
    assert np.all(w(np.array([0.0, 0.5, 1.0])) == 1)
    assert w(np.array([1.02]))[0] == 0
    assert 0 < w(np.array([1.005]))[0] < 1


def test_config_lookup():
    assert phi_from_config("fejer", 0.5).v == 0.5
    with pytest.raises(KeyError):
        phi_from_config("box", 1.0)
