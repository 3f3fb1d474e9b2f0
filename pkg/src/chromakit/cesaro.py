"""
Cesaro-averaged chromatic inner products.

For a family with growth exponent ``p`` the averaged product of ``f`` and
``g`` at ``t`` is ``sigma_n = (n + 1)**(p - 1) sum_{k<=n} K^k[f](t) K^k[g](t)``.
Pure harmonics get finite, nonzero norms this way while square-integrable
signals average to zero.

Harmonics are handled exactly: ``K^k`` maps ``exp(i w t)`` to
``i^k P_k(w) exp(i w t)``, so ``K^k[a sin(w t)](t) = a P_k(w) sin(w t + k pi/2)``
and likewise for ``cos``.
"""
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .expand import chromatic_jet_from_samples
from .opoly import FamilySpec, eval_family, power_family

MAX_N = 5000
# a decade ratio inside [1/DECADE_BAND, DECADE_BAND] counts as settled
DECADE_BAND = 2.0
# relative change over the last decade below which a Cesaro series is flagged converged
CONVERGED_RTOL = 0.05


@dataclass(frozen=True)
class Harmonic:
    kind: str
    omega: float
    amplitude: float = 1.0

    def __post_init__(self):
        if self.kind not in ("sin", "cos"):
            raise ValueError(f"harmonic kind must be 'sin' or 'cos', got {self.kind!r}")
        if not self.omega > 0:
            raise ValueError("omega must be positive")


def harmonic_derivatives(family, h, t, N):
    """``K^k[h](t)`` for ``k = 0..N``."""
    P = eval_family(family, N, h.omega)
    phase = h.omega * t + np.arange(N + 1) * (math.pi / 2)
    wave = np.sin(phase) if h.kind == "sin" else np.cos(phase)
    return h.amplitude * P * wave


@dataclass(frozen=True)
class CesaroSeries:
    family: FamilySpec
    p: float
    t: float
    partials: np.ndarray
    converged: bool
    decade_change: float

    @property
    def value(self):
        return float(self.partials[-1])


def _cesaro_partials(products, p):
    n = np.arange(products.shape[-1])
    return np.cumsum(products, axis=-1) / (n + 1.0) ** (1.0 - p)


def _decade_change(partials, scale):
    N = partials.size - 1
    ref = partials[max(N // 10, 0)]
    return abs(partials[-1] - ref) / scale if scale > 0 else 0.0


def cesaro_dot(family, f, g, t, N):
    """Cesaro partials ``sigma_0..sigma_N`` of ``<f, g>`` at ``t``.

    ``converged`` is a heuristic: the change over the last decade of ``n``,
    relative to ``sqrt(nu_N^f nu_N^g)``, is at most 5%.
    """
    if not 1 <= N <= MAX_N:
        raise ValueError(f"N must be in [1, {MAX_N}]")
    for h in (f, g):
        if h.omega >= family.support_radius:
            raise DomainError(
                f"omega = {h.omega} outside the support (-{family.support_radius:.6g}, "
                f"{family.support_radius:.6g}) of {family.name}"
            )
    p = min(family.p, 1.0)
    kf = harmonic_derivatives(family, f, t, N)
    kg = harmonic_derivatives(family, g, t, N)
    partials = _cesaro_partials(kf * kg, p)
    scale = math.sqrt(_cesaro_partials(kf * kf, p)[-1] * _cesaro_partials(kg * kg, p)[-1])
    change = _decade_change(partials, scale)
    return CesaroSeries(family, p, float(t), partials, change <= CONVERGED_RTOL, change)


def sum_squares_running(family, omega, N):
    """``sum_{k<=n} P_k(omega)**2`` for ``n = 0..N`` by streaming recurrence.

    Stops early if the values overflow; returns ``(sums, overflowed)`` with
    ``sums`` holding the finite prefix.
    """
    g = family.gammas(N + 1)
    sums = np.empty(N + 1)
    prev, cur, g_prev = 0.0, 1.0, 1.0
    total = 1.0
    sums[0] = total
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(N):
            nxt = omega / g[k] * cur - g_prev / g[k] * prev
            total += nxt * nxt
            if not math.isfinite(total):
                return sums[: k + 1], True
            sums[k + 1] = total
            prev, cur, g_prev = cur, nxt, g[k]
    return sums, False


@dataclass(frozen=True)
class ScanRow:
    omega: float
    n: np.ndarray
    means: np.ndarray
    decade_ratio: float
    verdict: str
    overflow: bool


def _log_orders(N, per_decade=10):
    pts = np.unique(np.round(np.logspace(0, math.log10(N), int(per_decade * math.log10(N)) + 1)))
    pts = pts.astype(int)
    # always include the decade marks used by the verdict
    marks = [N, N // 10]
    return np.unique(np.concatenate([[0], pts, marks]))


def verdict_for(ratio, last):
    if not math.isfinite(ratio):
        return "undetermined"
    if last <= 0:
        return "zero"
    if ratio > DECADE_BAND:
        return "growing"
    if ratio < 1.0 / DECADE_BAND:
        return "decaying"
    return "bounded, positive"


def conjecture_scan(p, omega_grid, N_max, family=None):
    """Cesaro means ``(n+1)**(p-1) sum_{k<=n} P_k(omega)**2`` at log-spaced ``n``.

    Uses ``gamma_n = (n+1)**p`` unless ``family`` is given.  The verdict is a
    heuristic read of the ratio between the means at ``N_max`` and at
    ``N_max / 10``: inside ``[0.5, 2]`` with a positive mean reads as
    "bounded, positive".  It reports what the numbers do; it proves nothing.
    """
    if N_max < 10:
        raise ValueError("N_max must be >= 10")
    fam = family if family is not None else power_family(p)
    orders = _log_orders(N_max)
    rows = []
    for w in np.atleast_1d(np.asarray(omega_grid, dtype=float)):
        sums, overflow = sum_squares_running(fam, float(w), N_max)
        n_avail = orders[orders < sums.size]
        means = sums[n_avail] / (n_avail + 1.0) ** (1.0 - p)
        if overflow:
            ratio, verdict = math.nan, "overflow"
        else:
            ratio = float(means[-1] / means[n_avail == N_max // 10][0])
            verdict = verdict_for(ratio, means[-1])
        rows.append(ScanRow(float(w), n_avail, means, ratio, verdict, overflow))
    return rows


def chebyshev_mean_closed(n, x):
    """Cesaro mean ``sum_{k<=n} P_k**2 / (n+1)`` of the orthonormal Chebyshev
    polynomials of the first kind at ``x = cos(theta)``, ``|x| < 1``:
    ``(2n+1)/(2n+2) + sin((2n+1) theta) / ((2n+2) sin(theta))``."""
    n = np.asarray(n, dtype=float)
    th = np.arccos(x)
    return (2 * n + 1) / (2 * n + 2) + np.sin((2 * n + 1) * th) / ((2 * n + 2) * np.sin(th))


def second_kind_mean_closed(n, x):
    """Same mean for ``U_k(x)``, the ``p = 0`` power family at ``w = 2x``:
    ``sum_{k<=n} U_k**2 = ((n+1)/2 - (sin((2n+3) theta) / sin(theta) - 1) / 4)
    / sin(theta)**2``."""
    n = np.asarray(n, dtype=float)
    th = np.arccos(x)
    s = np.sin(th)
    total = ((n + 1) / 2 - (np.sin((2 * n + 3) * th) / s - 1) / 4) / s**2
    return total / (n + 1)


def cesaro_null_check(family, sig, t, N, series=False):
    """``nu_N^f(t) = (N+1)**(p-1) sum_{k<=N} K^k[f](t)**2`` for a sampled
    signal; tends to zero for square-integrable ``f``."""
    if family.name != "legendre":
        raise ValueError("sampled signals are expanded in the Legendre family")
    jet = chromatic_jet_from_samples(sig, t, N)
    partials = _cesaro_partials(jet.values**2, family.p)
    return partials if series else float(partials[-1])
