"""
The kernel ``m(t)`` of a family and its chromatic derivatives ``K^n[m](t)``.

Closed forms exist for the four built-in families.  Any family can instead be
evaluated from the Taylor series ``sum_k (K^n o D^k)[m](0) t^k / k!``, whose
coefficients follow from the operator recurrence applied to the moments.
"""
import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np

from .errors import DomainError
from .opoly import FamilySpec, KernelKind
from .special import bessel_j_orders, spherical_j_orders

SERIES_CAP = 400
SERIES_RTOL = 1e-16
# the series is refused beyond this fraction of a finite convergence radius
RADIUS_MARGIN = 0.9


class Method(enum.Enum):
    CLOSED_FORM = "closed_form"
    SERIES = "series"


def _closed_orders(spec, nmax, t):
    kind = spec.kernel
    sign = np.where(np.arange(nmax + 1) % 2 == 1, -1.0, 1.0)
    sign = sign.reshape((-1,) + (1,) * t.ndim)
    if kind is KernelKind.LEGENDRE_SINC:
        scale = np.sqrt(2.0 * np.arange(nmax + 1) + 1.0).reshape(sign.shape)
        return sign * scale * spherical_j_orders(nmax, math.pi * t)
    if kind is KernelKind.CHEBYSHEV_BESSEL:
        scale = np.full(nmax + 1, math.sqrt(2.0))
        scale[0] = 1.0
        return sign * scale.reshape(sign.shape) * bessel_j_orders(nmax, math.pi * t)
    if kind is KernelKind.HERMITE_GAUSSIAN:
        out = np.empty((nmax + 1,) + t.shape)
        out[0] = np.exp(-t * t / 4.0)
        for k in range(1, nmax + 1):
            out[k] = -out[k - 1] * t / math.sqrt(2.0 * k)
        return out
    if kind is KernelKind.HERRON_SECH:
        e = np.exp(-2.0 * np.abs(t))
        sech = 2.0 * np.sqrt(e) / (1.0 + e)
        tanh = np.tanh(t)
        out = np.empty((nmax + 1,) + t.shape)
        out[0] = sech
        for k in range(1, nmax + 1):
            out[k] = -out[k - 1] * tanh
        return out
    raise ValueError(f"{spec.name} has no closed-form kernel")


@lru_cache(maxsize=32)
def _series_rows(spec, nmax, cap):
    """``V[n, k] = (K^n o D^k)[m](0) / k!`` for ``n <= nmax``, ``k < nmax + cap``.

    ``V[0, k] = (-1)^(k/2) mu_k / k!`` for even ``k``, and
    ``V[n+1, k] = (k+1) V[n, k+1] / gamma_n + gamma_{n-1}/gamma_n V[n-1, k]``.
    Each row step multiplies by up to ``L = nmax + cap`` before the two terms
    cancel, so about ``nmax * log10(L)`` digits are lost; the rows are formed
    with mpmath at a precision covering that loss and rounded once.
    """
    L = nmax + cap
    size = L // 2 + 2
    gam = spec.gammas(max(size, nmax) + 1)
    with mpmath.workdps(30 + int(nmax * math.log10(L + 1))):
        g = [mpmath.mpf(float(x)) for x in gam]
        v = [mpmath.mpf(0)] * (size + 1)
        v[0] = mpmath.mpf(1)
        row0 = [mpmath.mpf(1)]
        for k in range(1, L + 1):
            w = [mpmath.mpf(0)] * (size + 1)
            for i in range(size):
                w[i] += g[i] * v[i + 1]
                w[i + 1] += g[i] * v[i]
            v = [x / k for x in w]
            if k % 2:
                row0.append(mpmath.mpf(0))
            else:
                row0.append(-v[0] if (k // 2) % 2 else v[0])
        rows = [row0]
        prev = [mpmath.mpf(0)] * (L + 1)
        g_prev = mpmath.mpf(1)
        for n in range(nmax):
            cur = rows[n]
            nxt = [g_prev / g[n] * prev[k] for k in range(L + 1)]
            for k in range(L):
                nxt[k] += (k + 1) * cur[k + 1] / g[n]
            rows.append(nxt)
            prev, g_prev = cur, g[n]
        V = np.array([[float(x) for x in r] for r in rows])
    # (K^n o D^k)[m](0) = 0 for k < n and for k + n odd
    n_idx, k_idx = np.indices(V.shape)
    V[(k_idx < n_idx) | ((k_idx + n_idx) % 2 == 1)] = 0.0
    return V


def envelope_constant(spec):
    """Smallest ``K`` with ``(2M)^k (k+r)!^p / k!^p <= K^k`` for all ``k >= 1``."""
    k = np.arange(1, 2001, dtype=float)
    if spec.p == 0 or spec.r == 0:
        ratio = np.ones_like(k)
    else:
        lg = np.array([math.lgamma(x + spec.r + 1) - math.lgamma(x + 1) for x in k])
        ratio = np.exp(spec.p * lg / k)
    return 2.0 * spec.M * float(ratio.max()) * (1 + 1e-12)


def _check_series_domain(spec, t):
    lim = RADIUS_MARGIN * spec.series_radius
    if np.any(np.abs(t) >= lim):
        raise DomainError(
            f"series for {spec.name} refused for |t| >= {lim:.6g} "
            f"(convergence radius {spec.series_radius:.6g})"
        )


def series_eval(spec, n, t, cap=SERIES_CAP):
    """``K^n[m](t)`` by its Taylor series at 0; returns ``(values, terms)``.

    Terms are added until the envelope ``(K|t|)^k / k!^(1-p)`` drops below
    ``1e-16`` of the running sum, or ``cap`` terms.  For ``p >= 1`` the
    envelope does not decay, so summation stops once two consecutive terms are
    below that fraction instead.  ``terms`` is the largest count used.
    """
    t0 = np.asarray(t, dtype=float)
    t = t0.reshape(-1)
    _check_series_domain(spec, t)
    # share one cached table between nearby orders
    V = _series_rows(spec, 16 * (n // 16 + 1), cap)
    c = V[n, n:n + cap]
    K = envelope_constant(spec)
    with np.errstate(divide="ignore"):
        logt = np.log(np.abs(t))
        logKt = np.log(K * np.abs(t))
    neg = t < 0
    S = np.zeros_like(t)
    active = np.ones(t.shape, dtype=bool)
    quiet = np.zeros(t.shape, dtype=int)
    used = np.zeros(t.shape, dtype=int)
    for j in range(cap):
        k = n + j
        if k == 0:
            term = np.full_like(t, c[0])
        elif c[j] == 0.0:
            term = np.zeros_like(t)
        else:
            with np.errstate(over="ignore", under="ignore"):
                mag = np.exp(math.log(abs(c[j])) + k * logt)
            sgn = math.copysign(1.0, c[j]) * np.where(neg & (k % 2 == 1), -1.0, 1.0)
            term = sgn * mag
        S = np.where(active, S + term, S)
        used = np.where(active, j + 1, used)
        tiny = SERIES_RTOL * np.abs(S)
        if spec.p < 1:
            env = k * logKt - (1 - spec.p) * math.lgamma(k + 1) if k else np.zeros_like(t)
            with np.errstate(divide="ignore"):
                done = (env < np.log(tiny)) | (env == -np.inf)
        else:
            quiet = np.where(np.abs(term) <= tiny, quiet + (c[j] != 0.0), 0)
            done = (quiet >= 2) | (t == 0)
        active &= ~done
        if not active.any():
            break
    return S.reshape(t0.shape), int(used.max()) if used.size else 0


@dataclass(frozen=True)
class KernelEval:
    """Evaluator for ``K^n[m]`` up to order ``max_order`` by one method.

    ``closed_form`` falls back to the series for families that have none.
    ``series_terms`` caps the series length.
    """

    family: FamilySpec
    max_order: int
    method: Method = Method.CLOSED_FORM
    series_terms: int = SERIES_CAP

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))
        if self.max_order < 0:
            raise ValueError("max_order must be >= 0")

    @property
    def uses_series(self):
        return (self.method is Method.SERIES
                or self.family.kernel is KernelKind.GENERIC_SERIES)

    def orders(self, t):
        """``K^0[m](t) .. K^N[m](t)``, shape ``(N + 1,) + shape(t)``."""
        t = np.asarray(t, dtype=float)
        if not np.all(np.isfinite(t)):
            raise ValueError("t must be finite")
        if not self.uses_series:
            return _closed_orders(self.family, self.max_order, t)
        return np.array([
            series_eval(self.family, n, t, self.series_terms)[0]
            for n in range(self.max_order + 1)
        ])

    def km(self, n, t):
        if not 0 <= n <= self.max_order:
            raise ValueError(f"order {n} outside [0, {self.max_order}]")
        if self.uses_series:
            t = np.asarray(t, dtype=float)
            return series_eval(self.family, n, t, self.series_terms)[0]
        return self.orders(t)[n]

    def m(self, t):
        return self.km(0, t)


def _scalar(r):
    return float(r) if np.ndim(r) == 0 else r


def m_eval(family, t, method=Method.CLOSED_FORM):
    """Kernel ``m(t)``; ``m(0) = 1`` for every family."""
    return _scalar(KernelEval(family, 0, method).m(t))


def km_eval(family, n, t, method=Method.CLOSED_FORM):
    """``K^n[m](t)`` for a scalar or array ``t``."""
    return _scalar(KernelEval(family, n, method).km(n, t))


def kernel_grid(family, max_order, t, method=Method.CLOSED_FORM):
    """Rows ``(t, K^0[m](t), .., K^N[m](t))`` for tabulation."""
    t = np.asarray(t, dtype=float).reshape(-1)
    vals = KernelEval(family, max_order, method).orders(t)
    return np.column_stack([t, vals.T])
