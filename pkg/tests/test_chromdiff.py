import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from chromakit import config
from chromakit.chromdiff import (
    Jet, JetKind, build_table, inverse_by_moments, kk_m_at_zero, to_chromatic, to_taylor,
)
from chromakit.errors import JetKindError, NumericOverflowError, OrderCapError
from chromakit.opoly import BUILTINS, HERMITE, HERRON, LEGENDRE

from oracles import legendre_P_coeffs

FAMILIES = list(BUILTINS.values())
TABLES24 = {f.name: build_table(f, 24) for f in FAMILIES}


def test_a00_is_one():
    for t in TABLES24.values():
        assert t.A[0, 0] == 1.0


def test_legendre_first_row():
    assert TABLES24["legendre"].A[1, 1] == pytest.approx(math.sqrt(3) / math.pi, rel=1e-15)


def test_hermite_second_order_on_constant():
    # K^2 = D^2/(g0 g1) + g0/g1, so K^2[1](0) = g0/g1 = 1/sqrt(2)
    assert TABLES24["hermite"].A[2, 0] == pytest.approx(1 / math.sqrt(2), rel=1e-15)


def test_legendre_table_against_polynomial_coefficients():
    # A[n, k] = i^(k - n) * (coefficient of w^k in P_n)
    A = TABLES24["legendre"].A
    for n, c in enumerate(legendre_P_coeffs(24)):
        for k in range(n + 1):
            want = c[k] * (-1) ** ((n - k) // 2) if (n - k) % 2 == 0 else 0.0
            assert A[n, k] == pytest.approx(want, rel=1e-9, abs=1e-12 * np.abs(c).max())


@pytest.mark.parametrize("name", list(BUILTINS))
def test_triangular_and_parity(name):
    t = TABLES24[name]
    n, k = np.indices(t.A.shape)
    assert np.all(t.A[k > n] == 0.0)
    assert np.all(t.B[k > n] == 0.0)
    assert np.all(t.A[(n - k) % 2 == 1] == 0.0)
    assert np.all(t.B[(n - k) % 2 == 1] == 0.0)


@pytest.mark.parametrize("name", list(BUILTINS))
def test_inverse_pair(name):
    t = TABLES24[name]
    I = np.eye(25)
    assert np.max(np.abs(t.A @ t.B - I)) <= 1e-9
    # B entries reach 1e11 and beyond, so B.A is judged entrywise relative
    # to the magnitude of the products being summed
    scale = np.abs(t.B) @ np.abs(t.A)
    assert np.all(np.abs(t.B @ t.A - I) <= 1e-9 * scale)


@pytest.mark.parametrize("name", list(BUILTINS))
def test_inverse_matches_moment_formula(name):
    t = build_table(BUILTINS[name], 16)
    Bm = inverse_by_moments(t)
    assert np.allclose(Bm, t.B, rtol=1e-9, atol=1e-12 * np.abs(t.B).max())


@pytest.mark.parametrize("name", list(BUILTINS))
def test_monomial_bound(name):
    t = TABLES24[name]
    f = t.family
    n = np.arange(25)[:, None]
    assert np.all(np.abs(t.A) <= (2 * f.M) ** n * (1 + 1e-12))


@pytest.mark.parametrize("name", ["legendre", "chebyshev", "hermite"])
def test_kernel_derivative_bound(name):
    # B[n, k] = (-1)^k (K^k o D^n)[m](0), bounded by (2M)^n (n + r)!^p
    t = TABLES24[name]
    f = t.family
    for n in range(25):
        lim = (2 * f.M) ** n * math.factorial(n + f.r) ** f.p
        assert np.all(np.abs(t.B[n]) <= lim * (1 + 1e-12))


def test_kk_examples():
    t = build_table(LEGENDRE, 4)
    assert kk_m_at_zero(t, 1, 1) == pytest.approx(-1.0, abs=1e-12)
    assert kk_m_at_zero(t, 0, 2) == pytest.approx(0.0, abs=1e-12)
    assert kk_m_at_zero(t, 2, 2) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("name", list(BUILTINS))
def test_kk_orthonormality(name):
    t = build_table(BUILTINS[name], 16)
    for n in range(17):
        for m in range(17):
            want = (-1.0) ** n if n == m else 0.0
            assert abs(kk_m_at_zero(t, n, m) - want) <= 1e-9


def test_kernel_derivatives_at_zero():
    d = build_table(LEGENDRE, 3).kernel_derivatives_at_zero()
    assert d[0] == 1.0 and d[1] == 0.0
    assert d[2] == pytest.approx(-math.pi**2 / 3, rel=1e-14)
    assert d[4] == pytest.approx(math.pi**4 / 5, rel=1e-14)


def test_zero_jets_map_to_zero():
    t = TABLES24["legendre"]
    z = Jet("taylor", 0.0, np.zeros(10))
    assert np.all(to_chromatic(t, z).values == 0.0)
    assert np.all(to_taylor(t, Jet("chromatic", 0.0, np.zeros(10))).values == 0.0)


def test_chromatic_jet_of_identity():
    t = TABLES24["legendre"]
    out = to_chromatic(t, Jet("taylor", 0.0, [0.0, 1.0, 0.0, 0.0]))
    assert out.kind is JetKind.CHROMATIC
    c3 = legendre_P_coeffs(3)[3][1]
    want = [0.0, math.sqrt(3) / math.pi, 0.0, -c3]
    assert np.allclose(out.values, want, rtol=1e-14, atol=0)


def test_taylor_jet_of_sinc():
    t = TABLES24["legendre"]
    got = to_taylor(t, Jet("chromatic", 0.0, np.eye(25)[0])).values
    with mpmath.workdps(30):
        ref = mpmath.taylor(lambda x: mpmath.sinc(mpmath.pi * x), 0, 24)
        want = [float(c * mpmath.factorial(k)) for k, c in enumerate(ref)]
    assert np.allclose(got, want, rtol=1e-9, atol=1e-12)


def test_base_point_is_carried():
    t = TABLES24["hermite"]
    j = to_chromatic(t, Jet("taylor", 2.5, [1.0, 2.0, 3.0]))
    assert j.base == 2.5
    assert to_taylor(t, j).base == 2.5


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(list(BUILTINS)),
       st.lists(st.floats(-10, 10), min_size=1, max_size=25))
def test_round_trip(name, vals):
    t = TABLES24[name]
    j = Jet("taylor", 0.3, vals)
    n = len(j)
    back = to_taylor(t, to_chromatic(t, j)).values
    scale = np.abs(t.B[:n, :n]) @ (np.abs(t.A[:n, :n]) @ np.abs(j.values))
    assert np.all(np.abs(back - j.values) <= 1e-12 * scale + 1e-300)


def test_wrong_jet_kind():
    t = TABLES24["legendre"]
    with pytest.raises(JetKindError):
        to_chromatic(t, Jet("chromatic", 0.0, [1.0]))
    with pytest.raises(JetKindError):
        to_taylor(t, Jet("taylor", 0.0, [1.0]))


def test_jet_too_long():
    with pytest.raises(ValueError):
        to_chromatic(build_table(LEGENDRE, 3), Jet("taylor", 0.0, np.ones(5)))


def test_order_cap_and_override(monkeypatch):
    monkeypatch.delenv(config.ENV_MAX_ORDER, raising=False)
    assert config.max_order() == 48
    with pytest.raises(OrderCapError):
        build_table(LEGENDRE, 49)
    assert build_table(LEGENDRE, 49, allow_large=True).order == 49
    monkeypatch.setenv(config.ENV_MAX_ORDER, "60")
    assert build_table(LEGENDRE, 60).order == 60
    monkeypatch.setenv(config.ENV_MAX_ORDER, "4")
    with pytest.raises(OrderCapError):
        build_table(LEGENDRE, 5)


def test_large_herron_table_reports_underflow():
    with pytest.raises(NumericOverflowError):
        build_table(HERRON, 200, allow_large=True)


def test_csv_layout():
    text = build_table(HERMITE, 2).to_csv("B")
    rows = [r.split(",") for r in text.strip().split("\n")]
    assert rows[0] == ["n", "k0", "k1", "k2"]
    assert len(rows) == 4
    assert float(rows[2][2]) == pytest.approx(build_table(HERMITE, 2).B[1, 1])
