"""
Transversal FIR estimators of chromatic derivatives.

A filter ``T[f](t) = sum_{k=-T}^{T} c_k f(t + k/2)`` has transfer function
``H(w) = sum_k c_k exp(i w k / 2)`` on ``|w| <= 2 pi`` (sample spacing 1/2).
It estimates ``K^n[f]`` for a signal band-limited to ``[-pi, pi]`` when
``H(w)`` matches ``i^n P_n(w)`` (Legendre) on the passband ``|w| <= pf * pi``.
The band ``pf * pi < |w| < (2 - pf) * pi`` is left free and the rest is
driven to zero.

With ``c_{-k} = (-1)^n c_k`` the response is ``i^n`` times a real amplitude
``A(w)``: ``c_0 + 2 sum c_k cos(k w/2)`` for even ``n`` and
``2 sum c_k sin(k w/2)`` for odd ``n``, which must match
``(-1)^(n // 2) P_n(w)``.  Designs work in ``theta = w / 2``.
"""
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import WindowError
from .opoly import LEGENDRE, eval_family

MAX_ORDER = 24
MAX_PASSBAND = 0.95


@dataclass(frozen=True)
class FirDesign:
    order: int
    taps: np.ndarray
    spacing: float = 0.5
    passband_fraction: float = 0.9
    max_passband_error: float = math.nan
    max_stopband_error: float = math.nan
    converged: bool = True
    iterations: int = 0
    history: tuple = field(default=(), repr=False)
    levels: tuple = field(default=(), repr=False)

    @property
    def half_length(self):
        return (self.taps.size - 1) // 2

    @property
    def max_tap(self):
        return float(np.max(np.abs(self.taps)))

    @property
    def edges(self):
        """Passband edge and stopband edge in ``w``."""
        pf = self.passband_fraction
        return pf * math.pi, (2.0 - pf) * math.pi

    def report(self):
        pe, se = self.edges
        return {
            "order": self.order,
            "taps": int(self.taps.size),
            "spacing": self.spacing,
            "passband_fraction": self.passband_fraction,
            "passband_edge": pe,
            "stopband_edge": se,
            "max_passband_error": self.max_passband_error,
            "max_stopband_error": self.max_stopband_error,
            "max_tap_magnitude": self.max_tap,
            "converged": self.converged,
            "iterations": self.iterations,
        }


class _Basis:
    """Amplitude basis for the free coefficients of a parity-``n`` filter."""

    def __init__(self, n, T):
        self.odd = n % 2 == 1
        self.k = np.arange(1, T + 1) if self.odd else np.arange(0, T + 1)
        self.sign = -1.0 if (n // 2) % 2 else 1.0
        self.n = n

    def matrix(self, theta):
        x = np.outer(theta, self.k)
        if self.odd:
            return 2.0 * np.sin(x)
        return np.where(self.k == 0, 1.0, 2.0) * np.cos(x)

    def target(self, theta, passband):
        d = np.zeros_like(theta)
        if np.any(passband):
            d[passband] = self.sign * eval_family(LEGENDRE, self.n, 2.0 * theta[passband])[self.n]
        return d

    def taps(self, a):
        T = int(self.k[-1])
        c = np.zeros(2 * T + 1)
        if self.odd:
            c[T + 1:] = a
            c[:T] = -a[::-1]
        else:
            c[T:] = a
            c[:T] = a[:0:-1]
        return c


def _grid(T, pf, density, odd):
    npts = density * (2 * T + 1)
    edge_p = pf * math.pi / 2
    edge_s = (2.0 - pf) * math.pi / 2
    span = edge_p + (math.pi - edge_s)
    th_p = np.linspace(0.0, edge_p, max(int(npts * edge_p / span), 8))
    th_s = np.linspace(edge_s, math.pi, max(int(npts * (math.pi - edge_s) / span), 8))
    if odd:
        # every sine basis function vanishes at theta = 0 and pi
        th_p = th_p[1:]
        th_s = th_s[:-1]
    theta = np.concatenate([th_p, th_s])
    passband = np.zeros(theta.size, dtype=bool)
    passband[: th_p.size] = True
    return theta, passband


def _local_extrema(err, passband):
    """Indices of local extrema of ``err`` within each band, endpoints included."""
    idx = []
    for band in (np.flatnonzero(passband), np.flatnonzero(~passband)):
        e = err[band]
        m = e.size
        for i in range(m):
            left = e[i - 1] if i > 0 else -np.inf * np.sign(e[i])
            right = e[i + 1] if i < m - 1 else -np.inf * np.sign(e[i])
            if e[i] >= 0 and e[i] >= left and e[i] >= right and e[i] > 0:
                idx.append(band[i])
            elif e[i] <= 0 and e[i] <= left and e[i] <= right and e[i] < 0:
                idx.append(band[i])
    return np.array(sorted(set(idx)), dtype=int)


def _select_reference(err, cand, r):
    """``r`` alternating-sign extrema from ``cand`` keeping the largest ones."""
    # merge runs of equal sign, keeping the largest in each run
    keep = []
    for i in cand:
        if keep and np.sign(err[i]) == np.sign(err[keep[-1]]):
            if abs(err[i]) > abs(err[keep[-1]]):
                keep[-1] = i
        else:
            keep.append(i)
    # drop the smaller end, or the smaller of an adjacent pair, until r remain
    while len(keep) > r:
        if len(keep) == r + 1:
            if abs(err[keep[0]]) < abs(err[keep[-1]]):
                keep.pop(0)
            else:
                keep.pop()
            continue
        mags = np.abs(err[keep])
        pair = np.minimum(mags[:-1], mags[1:])
        j = int(np.argmin(pair))
        if j == 0 and mags[0] <= mags[1]:
            keep.pop(0)
        elif j == len(keep) - 2 and mags[-1] <= mags[-2]:
            keep.pop()
        else:
            del keep[j:j + 2]
    return np.array(keep, dtype=int)


def _solve_reference(Phi, D, ref):
    r = ref.size
    alt = np.where(np.arange(r) % 2 == 0, 1.0, -1.0)
    M = np.column_stack([Phi[ref], alt])
    sol = np.linalg.solve(M, D[ref])
    return sol[:-1], sol[-1]


def design_fir(spec=LEGENDRE, n=15, taps=129, passband_fraction=0.9,
               grid_density=16, max_iter=60, tol=1e-6):
    """Minimax FIR estimator of ``K^n`` with uniform weight.

    Least squares on the dense grid gives the start; Remez multiple exchange
    then refines it.  Early exchanges can raise the maximum error even though
    the levelled error ``|delta|`` grows, so the design keeps the best iterate:
    ``history`` lists the maximum error of the start and of every iterate that
    improved on it, and ``levels`` the ``|delta|`` of every exchange.
    """
    if spec is not LEGENDRE and spec.name != "legendre":
        raise ValueError("filter targets are defined for the Legendre family")
    if taps % 2 != 1 or taps < 3:
        raise ValueError("taps must be odd and >= 3")
    if not 0 <= n <= MAX_ORDER:
        raise ValueError(f"order must be in [0, {MAX_ORDER}]")
    if not 0 < passband_fraction <= MAX_PASSBAND:
        raise ValueError(f"passband_fraction must be in (0, {MAX_PASSBAND}]")
    if grid_density < 16:
        raise ValueError("grid_density must be >= 16")
    T = (taps - 1) // 2
    basis = _Basis(n, T)
    theta, passband = _grid(T, passband_fraction, grid_density, basis.odd)
    Phi = basis.matrix(theta)
    D = basis.target(theta, passband)

    a = np.linalg.lstsq(Phi, D, rcond=None)[0]
    err = Phi @ a - D
    best_a, best = a, float(np.max(np.abs(err)))
    history = [best]
    levels = []
    r = basis.k.size + 1
    converged = False
    it = 0
    prev_ref = None
    for it in range(1, max_iter + 1):
        cand = _local_extrema(err, passband)
        ref = _select_reference(err, cand, r) if cand.size >= r else cand
        if ref.size < r or (prev_ref is not None and np.array_equal(ref, prev_ref)):
            break
        prev_ref = ref
        try:
            a, delta = _solve_reference(Phi, D, ref)
        except np.linalg.LinAlgError:
            break
        err = Phi @ a - D
        emax = float(np.max(np.abs(err)))
        levels.append(abs(float(delta)))
        if emax < best:
            best_a, best = a, emax
            history.append(emax)
        if emax - abs(delta) <= tol * emax:
            converged = True
            break

    c = basis.taps(best_a)
    # report on a grid finer than the design grid
    fine, fpass = _grid(T, passband_fraction, 4 * grid_density, basis.odd)
    ferr = basis.matrix(fine) @ best_a - basis.target(fine, fpass)
    return FirDesign(
        order=n,
        taps=c,
        passband_fraction=passband_fraction,
        max_passband_error=float(np.max(np.abs(ferr[fpass]))),
        max_stopband_error=float(np.max(np.abs(ferr[~fpass]))),
        converged=converged,
        iterations=it,
        history=tuple(history),
        levels=tuple(levels),
    )


def freq_response(design, w):
    """``H(w) = sum_k c_k exp(i w k spacing)``."""
    w = np.asarray(w, dtype=float)
    T = design.half_length
    k = np.arange(-T, T + 1)
    out = np.exp(1j * np.multiply.outer(w, k) * design.spacing) @ design.taps
    return complex(out) if out.ndim == 0 else out


def target_response(n, w):
    """``i^n P_n(w)`` in the Legendre family."""
    w = np.asarray(w, dtype=float)
    out = (1j**n) * eval_family(LEGENDRE, n, w)[n]
    return complex(out) if out.ndim == 0 else out


def apply_fir(design, samples, center):
    """``sum_k c_k f(t + k/2)`` with ``f(t + k/2) = samples[center + k]``."""
    samples = np.asarray(samples, dtype=float)
    T = design.half_length
    lo, hi = center - T, center + T
    if lo < 0 or hi >= samples.shape[-1]:
        raise WindowError(
            f"need samples {lo}..{hi} around index {center}; have 0..{samples.shape[-1] - 1}"
        )
    return samples[..., lo:hi + 1] @ design.taps


def fd_weights(order, offsets):
    """Finite-difference weights for ``d^order/dx^order`` at 0 on ``offsets``
    (Fornberg's recursion)."""
    x = np.asarray(offsets, dtype=float)
    m = x.size
    if order >= m:
        raise ValueError("need more points than the derivative order")
    C = np.zeros((m, order + 1))
    C[0, 0] = 1.0
    c1 = 1.0
    c4 = x[0]
    for i in range(1, m):
        mn = min(i, order)
        c2 = 1.0
        c5 = c4
        c4 = x[i]
        for j in range(i):
            c3 = x[i] - x[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    C[i, k] = c1 * (k * C[i - 1, k - 1] - c5 * C[i - 1, k]) / c2
                C[i, 0] = -c1 * c5 * C[i - 1, 0] / c2
            for k in range(mn, 0, -1):
                C[j, k] = (x[i] * C[j, k] - k * C[j, k - 1]) / c3
            C[j, 0] = x[i] * C[j, 0] / c3
        c1 = c2
    return C[:, order]


def fd_stencil(table, n, half_width, spacing=0.5):
    """Taps estimating ``K^n`` from ``2 * half_width + 1`` samples by combining
    finite-difference derivatives ``D^k``, ``k <= n``, through row ``n`` of the
    operator table."""
    x = np.arange(-half_width, half_width + 1) * spacing
    c = np.zeros(x.size)
    for k in range(n + 1):
        if table.A[n, k] != 0.0:
            c += table.A[n, k] * fd_weights(k, x)
    return c


def noise_trial(taps, clean, amplitude, trials, seed):
    """Errors of ``taps`` applied to ``clean + noise`` with noise uniform in
    ``[-amplitude, amplitude]``; returns one error per trial."""
    rng = np.random.default_rng(seed)
    noise = rng.uniform(-amplitude, amplitude, (trials, clean.size))
    return (clean + noise) @ taps - clean @ taps
