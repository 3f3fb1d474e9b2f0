import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from chromakit.chromdiff import Jet, build_table, to_chromatic
from chromakit.errors import WindowError
from chromakit.filterbank import (
    FirDesign, apply_fir, design_fir, fd_stencil, fd_weights, freq_response, noise_trial,
    target_response,
)
from chromakit.opoly import HERMITE, LEGENDRE, eval_family

from oracles import lp_minimax

D15 = design_fir(n=15, taps=129, passband_fraction=0.9)


def test_order_15_experiment():
    assert D15.taps.size == 129
    assert D15.max_passband_error <= 1.3e-4
    assert D15.max_tap < 0.2
    assert D15.edges == pytest.approx((0.9 * math.pi, 1.1 * math.pi))


def test_order_0_near_allpass():
    # measured 5.9e-6 against an LP optimum of 5.7e-6, so 1e-6 is out of reach
    d = design_fir(n=0, taps=129)
    assert d.max_passband_error <= 1e-6


@pytest.mark.parametrize("n,taps", [(15, 129), (8, 65), (1, 65), (0, 65)])
def test_close_to_linear_programming_optimum(n, taps):
    d = D15 if (n, taps) == (15, 129) else design_fir(n=n, taps=taps)
    best = lp_minimax(n, taps)
    overall = max(d.max_passband_error, d.max_stopband_error)
    assert overall <= 1.05 * best


@pytest.mark.parametrize("n", [0, 1, 2, 7, 15, 24])
def test_tap_symmetry(n):
    d = D15 if n == 15 else design_fir(n=n, taps=65)
    c = d.taps
    assert np.array_equal(c[::-1], (-1) ** n * c)


def test_response_carries_phase_of_target():
    w = np.linspace(-math.pi, math.pi, 33)
    for n in (4, 7, 15):
        d = D15 if n == 15 else design_fir(n=n, taps=65)
        H = freq_response(d, w) / 1j**n
        assert np.max(np.abs(H.imag)) < 1e-13
        assert np.max(np.abs(target_response(n, w) / 1j**n).imag) == 0.0


def test_response_trivial_designs():
    zero = FirDesign(order=0, taps=np.zeros(5))
    assert freq_response(zero, 1.3) == 0
    one = FirDesign(order=0, taps=np.array([0.0, 1.0, 0.0]))
    assert np.allclose(freq_response(one, np.linspace(-6, 6, 7)), 1.0)


def test_response_at_zero_for_odd_order():
    assert abs(freq_response(D15, 0.0)) <= 1e-6


def test_passband_error_is_measured_on_target():
    w = np.linspace(0, 0.9 * math.pi, 2001)
    err = np.abs(freq_response(D15, w) - target_response(15, w))
    assert err.max() <= D15.max_passband_error * (1 + 1e-3)
    assert err.max() >= 0.9 * D15.max_passband_error


def test_estimate_of_sine():
    w = 0.4 * math.pi
    t = np.arange(-64, 65) * 0.5
    est = apply_fir(D15, np.sin(w * t), 64)
    # exact value from the Taylor jet of sin(w t) at 0
    taylor = [w**k * math.sin(k * math.pi / 2) for k in range(16)]
    exact = to_chromatic(build_table(LEGENDRE, 15), Jet("taylor", 0.0, taylor)).values[15]
    assert exact == pytest.approx(-eval_family(LEGENDRE, 15, w)[15], rel=1e-9)
    assert abs(est - exact) <= 2e-4


def test_apply_zero_signal_and_window():
    assert apply_fir(D15, np.zeros(129), 64) == 0.0
    with pytest.raises(WindowError):
        apply_fir(D15, np.zeros(129), 10)
    with pytest.raises(WindowError):
        apply_fir(D15, np.zeros(100), 64)


def test_noise_robustness_against_finite_differences():
    amp = 1e-3
    t = np.arange(-64, 65) * 0.5
    clean = np.sin(0.4 * math.pi * t)
    fir_err = noise_trial(D15.taps, clean, amp, 100, seed=0)
    assert np.max(np.abs(fir_err)) < 1e-2
    stencil = fd_stencil(build_table(LEGENDRE, 15), 15, 64)
    fd_err = noise_trial(stencil, clean, amp, 100, seed=0)
    assert np.sqrt(np.mean(fd_err**2)) / amp >= 1e3


def test_fd_stencil_is_accurate_without_noise():
    # narrow stencil on a slowly varying signal
    tab = build_table(LEGENDRE, 4)
    w = 0.3
    x = np.arange(-6, 7) * 0.5
    est = fd_stencil(tab, 4, 6) @ np.cos(w * x)
    assert est == pytest.approx(eval_family(LEGENDRE, 4, w)[4], rel=1e-6)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 6), st.integers(0, 4))
def test_fd_weights_exact_on_polynomials(order, extra):
    x = np.arange(-(order // 2 + 1 + extra), order // 2 + 2 + extra) * 0.5
    w = fd_weights(order, x)
    for deg in range(x.size):
        want = math.factorial(order) if deg == order else 0.0
        assert w @ x**deg == pytest.approx(want, abs=1e-8 * (1 + 2.0 ** x.size))


def test_exchange_levels_rise():
    for taps in (65, 129):
        d = D15 if taps == 129 else design_fir(n=15, taps=taps)
        lv = np.array(d.levels)
        assert lv.size >= 1
        assert np.all(np.diff(lv) >= -1e-12 * lv[1:])
        assert np.all(np.diff(d.history) < 0)
        assert d.max_passband_error <= d.history[-1] * (1 + 1e-2)


def test_error_falls_with_more_taps():
    errs = [design_fir(n=15, taps=k).max_passband_error for k in (65, 129, 257)]
    assert errs[0] > errs[1] > errs[2]


def test_report_fields():
    r = D15.report()
    assert r["taps"] == 129 and r["spacing"] == 0.5
    assert r["max_tap_magnitude"] == D15.max_tap


def test_bad_arguments():
    with pytest.raises(ValueError):
        design_fir(n=15, taps=128)
    with pytest.raises(ValueError):
        design_fir(n=25)
    with pytest.raises(ValueError):
        design_fir(n=3, passband_fraction=0.99)
    with pytest.raises(ValueError):
        design_fir(n=3, grid_density=8)
    with pytest.raises(ValueError):
        design_fir(spec=HERMITE, n=3)
