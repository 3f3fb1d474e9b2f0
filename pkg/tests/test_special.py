import math

import mpmath
import numpy as np
import pytest
from scipy import special as sps

from chromakit.refdata import BESSEL_REFERENCES
from chromakit.special import bessel_j, bessel_j_orders, spherical_j, spherical_j_orders

from oracles import BESSEL_PAIRS, bessel_j_series, spherical_j_series


def test_values_at_zero():
    assert spherical_j(0, 0.0) == 1.0
    assert bessel_j(0, 0.0) == 1.0
    assert spherical_j(3, 0.0) == 0.0


def test_j0_zeros_at_multiples_of_pi():
    for n in range(1, 20):
        # sin(fl(pi n)) is about pi n * 2^-53, so j_0 is about 1.1e-16
        assert abs(spherical_j(0, math.pi * n)) < 3e-16


def test_j1_at_half_pi():
    assert spherical_j(1, math.pi / 2) == pytest.approx(4 / math.pi**2, rel=1e-15)


def test_frozen_table_matches_series_oracle():
    assert [(n, x) for n, x, _, _ in BESSEL_REFERENCES] == BESSEL_PAIRS
    with mpmath.workdps(50):
        for n, x, js, Js in BESSEL_REFERENCES[::4]:
            assert abs(mpmath.mpf(js) / spherical_j_series(n, x) - 1) < 1e-30
            assert abs(mpmath.mpf(Js) / bessel_j_series(n, x) - 1) < 1e-30


def test_reference_pairs():
    for n, x, js, Js in BESSEL_REFERENCES:
        assert spherical_j(n, x) == pytest.approx(float(mpmath.mpf(js)), rel=1e-12)
        assert bessel_j(n, x) == pytest.approx(float(mpmath.mpf(Js)), rel=1e-12)


def _away_from_zeros(vals, orders, x):
    # exclude points where the value is small next to its local envelope
    env = np.maximum(1.0 / np.maximum(np.abs(x), 1.0), 1e-300)
    return np.abs(vals) > 1e-2 * env


def test_against_scipy_on_a_grid():
    x = np.concatenate([np.linspace(-100, 100, 401), np.geomspace(1e-3, 5, 40)])
    S = spherical_j_orders(40, x)
    C = bessel_j_orders(40, x)
    for n in range(41):
        s_ref = sps.spherical_jn(n, x)
        c_ref = sps.jv(n, x)
        ok = _away_from_zeros(s_ref, n, x) & (np.abs(s_ref) > 1e-250)
        assert np.max(np.abs(S[n][ok] / s_ref[ok] - 1)) < 1e-10
        ok = _away_from_zeros(c_ref, n, x) & (np.abs(c_ref) > 1e-250)
        assert np.max(np.abs(C[n][ok] / c_ref[ok] - 1)) < 1e-10
    assert np.max(np.abs(S - np.array([sps.spherical_jn(n, x) for n in range(41)]))) < 1e-14
    assert np.max(np.abs(C - np.array([sps.jv(n, x) for n in range(41)]))) < 1e-13


def test_shapes_and_parity():
    assert spherical_j_orders(5, 1.3).shape == (6,)
    assert bessel_j_orders(5, np.ones((2, 3))).shape == (6, 2, 3)
    x = np.array([0.7, 3.3, 40.0])
    s = np.where(np.arange(9) % 2, -1.0, 1.0)[:, None]
    assert np.allclose(spherical_j_orders(8, -x), s * spherical_j_orders(8, x), rtol=0, atol=1e-17)
    assert np.allclose(bessel_j_orders(8, -x), s * bessel_j_orders(8, x), rtol=0, atol=1e-17)


def test_negative_order_rejected():
    with pytest.raises(ValueError):
        spherical_j(-1, 1.0)
    with pytest.raises(ValueError):
        bessel_j(-1, 1.0)


def test_tiny_arguments_stay_finite():
    # scipy loses up to 1e-13 here, so the mpmath series is the reference
    x = np.array([1e-300, 1e-100, 1e-20, 1e-5, 9.9e-5, 1.01e-4])
    S = spherical_j_orders(20, x)
    C = bessel_j_orders(20, x)
    assert np.all(np.isfinite(S)) and np.all(np.isfinite(C))
    for n in (0, 1, 2, 7, 13, 20):
        for i, xi in enumerate(x):
            for got, ref in ((S[n, i], spherical_j_series(n, xi, 60)),
                             (C[n, i], bessel_j_series(n, xi, 60))):
                want = float(ref)
                if abs(want) > 1e-290:
                    assert got == pytest.approx(want, rel=1e-14)
                else:
                    assert abs(got) < 1e-280
