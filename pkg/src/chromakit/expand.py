"""
Chromatic, Shannon and Taylor approximation of band-limited signals.

Signals are given by integer samples ``f(n)`` on a finite window and
reconstructed by ``f(t) = sum_n f(n) sinc(t - n)``.  Their chromatic jets are
taken in the Legendre family, where ``K^k[sinc](t) = (-1)^k sqrt(2k+1)
j_k(pi t)``.
"""
import math
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .chromdiff import Jet, JetKind, build_table, to_taylor
from .errors import ConsistencyError, JetKindError
from .mkernel import KernelEval
from .opoly import LEGENDRE

# tail sums for E_n are extended until a term adds less than this, relatively
_TAIL_RTOL = 1e-17
_TAIL_MAX_EXTRA = 400
# number of trailing terms in the convergence diagnostic of local sums
TAIL_TERMS = 10


class TruncationWarning(UserWarning):
    pass


@dataclass(frozen=True)
class BandlimitedSignal:
    """Samples ``f(n)`` at integer ``n``; zero outside ``indices``."""

    indices: np.ndarray
    values: np.ndarray
    seed: Optional[int] = None

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=int).reshape(-1)
        val = np.asarray(self.values, dtype=float).reshape(-1)
        if idx.size != val.size:
            raise ValueError("indices and values differ in length")
        if np.unique(idx).size != idx.size:
            raise ValueError("duplicate sample indices")
        order = np.argsort(idx)
        object.__setattr__(self, "indices", idx[order])
        object.__setattr__(self, "values", val[order])

    @classmethod
    def random(cls, window, seed):
        """Samples uniform in ``(-1, 1)`` on ``[-window, window]``."""
        rng = np.random.default_rng(seed)
        n = np.arange(-window, window + 1)
        vals = rng.uniform(-1.0, 1.0, n.size)
        vals[vals == -1.0] = 0.0
        return cls(n, vals, seed)

    @classmethod
    def from_dict(cls, samples, seed=None):
        keys = sorted(samples)
        return cls(np.array(keys, dtype=int), np.array([samples[k] for k in keys]), seed)

    @property
    def window(self):
        return int(np.abs(self.indices).max()) if self.indices.size else 0

    @property
    def energy(self):
        """``sum_n f(n)**2``, which equals the integral of ``f**2``."""
        return float(np.sum(self.values**2))

    def as_dict(self):
        return {int(n): float(v) for n, v in zip(self.indices, self.values)}


def shannon_eval(sig, t):
    """``sum_n f(n) sinc(t - n)`` over the signal's samples."""
    t0 = np.asarray(t, dtype=float)
    t = t0.reshape(-1)
    if sig.indices.size == 0:
        return np.zeros(t0.shape) if t0.ndim else 0.0
    out = np.sinc(t[:, None] - sig.indices[None, :]) @ sig.values
    return out.reshape(t0.shape) if t0.ndim else float(out[0])


def _sinc_derivatives(order, x):
    """``K^k[sinc](x)`` for ``k <= order``, shape ``(order + 1,) + shape(x)``."""
    return KernelEval(LEGENDRE, order).orders(x)


def chromatic_jet_from_samples(sig, t, order, trunc_window=None):
    """Chromatic jet ``K^k[f](t)``, ``k <= order``, summed over the samples.

    Samples with ``|n| > trunc_window`` are dropped.  ``K^k[sinc](t - n)``
    decays only like ``1/|t - n|``, so dropping samples costs up to
    ``sum |f(n)| max_k |K^k[sinc](t - n)|`` in every order; a
    :class:`TruncationWarning` with that amount is issued when it is nonzero.
    The default window ``4 * sig.window`` keeps every sample.
    """
    t = float(t)
    if trunc_window is None:
        trunc_window = 4 * sig.window
    keep = np.abs(sig.indices) <= trunc_window
    values = np.zeros(order + 1)
    if np.any(keep):
        K = _sinc_derivatives(order, t - sig.indices[keep])
        values = K @ sig.values[keep]
    if np.any(~keep):
        dropped = _sinc_derivatives(order, t - sig.indices[~keep])
        lost = np.abs(dropped) @ np.abs(sig.values[~keep])
        warnings.warn(
            f"truncation window {trunc_window} drops {int(np.sum(~keep))} samples; "
            f"neglected contribution per order up to {lost.max():.3g} "
            f"(orders 0..{order}: {np.array2string(lost, precision=2)})",
            TruncationWarning,
            stacklevel=2,
        )
    return Jet(JetKind.CHROMATIC, t, values)


def _require_kind(jet, kind):
    if jet.kind is not kind:
        raise JetKindError(f"expected a {kind.value} jet, got {jet.kind.value}")


def chromatic_approx(family, jet, t):
    """``sum_k (-1)^k v_k K^k[m](t - u)`` for a chromatic jet ``v`` at ``u``."""
    _require_kind(jet, JetKind.CHROMATIC)
    t0 = np.asarray(t, dtype=float)
    K = KernelEval(family, jet.order).orders(t0 - jet.base)
    signs = np.where(np.arange(len(jet)) % 2 == 1, -1.0, 1.0) * jet.values
    out = np.tensordot(signs, K, axes=(0, 0))
    return float(out) if out.ndim == 0 else out


def taylor_approx(jet, t):
    """Truncated Taylor sum ``sum_k f^(k)(u) (t - u)^k / k!``."""
    _require_kind(jet, JetKind.TAYLOR)
    x = np.asarray(t, dtype=float) - jet.base
    out = np.full_like(x, jet.values[-1])
    for k in range(jet.order - 1, -1, -1):
        out = jet.values[k] + out * x / (k + 1)
    return float(out) if out.ndim == 0 else out


def error_bound_E(family, n, t):
    """``E_n(t) = (1 - sum_{k<=n} K^k[m](t)**2)**(1/2)``.

    Since ``sum_k K^k[m](t)**2 = 1``, the radicand equals the tail
    ``sum_{k>n} K^k[m](t)**2``; that form is used where the head is close to
    one, so small values of ``E_n`` keep their relative accuracy.
    """
    family.require_weakly_bounded("E_n")
    t0 = np.asarray(t, dtype=float)
    t = t0.reshape(-1)
    head_terms = KernelEval(family, n).orders(t)
    head = np.sum(head_terms**2, axis=0)
    rad = 1.0 - head
    if np.any(rad < -1e-12):
        i = int(np.argmin(rad))
        raise ConsistencyError(
            f"1 - sum K^k[m]^2 = {rad[i]:.3g} at t = {t[i]} for {family.name}, n = {n}"
        )
    near = rad < 0.5
    if np.any(near):
        rad[near] = _tail_squares(family, n, t[near])
    out = np.sqrt(np.maximum(rad, 0.0))
    return out.reshape(t0.shape) if t0.ndim else float(out[0])


def _tail_squares(family, n, t):
    extra = 32
    while True:
        K = KernelEval(family, n + extra).orders(t)[n + 1:]
        sq = K**2
        tail = np.sum(sq, axis=0)
        last = np.max(sq[-4:], axis=0)
        if np.all(last <= _TAIL_RTOL * tail) or extra >= _TAIL_MAX_EXTRA:
            return tail
        extra *= 2


@dataclass
class ApproxReport:
    """Chromatic and Taylor approximations of a sampled signal on a grid."""

    order: int
    base: float
    t: np.ndarray
    f: np.ndarray
    approx: np.ndarray
    taylor: np.ndarray
    E: np.ndarray
    tail: float
    seed: Optional[int] = None
    meta: dict = field(default_factory=dict)

    @property
    def error(self):
        return np.abs(self.f - self.approx)

    @property
    def taylor_error(self):
        return np.abs(self.f - self.taylor)

    @property
    def bound(self):
        return self.tail * self.E

    def bound_violations(self, slack=1e-12):
        """Grid indices where ``|f - CA_n| > tail * E_n + slack``."""
        return np.flatnonzero(self.error > self.bound + slack)


def approximation_report(sig, order, base, t, trunc_window=None):
    """Order-``order`` chromatic and Taylor approximations about ``base``.

    Uses the Legendre family.  ``tail = (sum_{k>order} K^k[f](u)**2)**(1/2)``
    is obtained as ``sum_n f(n)**2 - sum_{k<=order} K^k[f](u)**2``, exact for
    band-limited ``f``.
    """
    t = np.asarray(t, dtype=float)
    jet = chromatic_jet_from_samples(sig, base, order, trunc_window)
    table = build_table(LEGENDRE, order, allow_large=True)
    tjet = to_taylor(table, jet)
    tail = math.sqrt(max(sig.energy - float(np.sum(jet.values**2)), 0.0))
    return ApproxReport(
        order=order,
        base=float(base),
        t=t,
        f=shannon_eval(sig, t),
        approx=chromatic_approx(LEGENDRE, jet, t),
        taylor=taylor_approx(tjet, t),
        E=error_bound_E(LEGENDRE, order, t - base),
        tail=tail,
        seed=sig.seed,
    )


def transform_matrix(trunc):
    """``M[k, j] = sqrt(2k+1) j_k(pi n_j)`` for ``k <= trunc``, ``|n_j| <= trunc``."""
    n = np.arange(-trunc, trunc + 1, dtype=float)
    # K^k[sinc](-n) = sqrt(2k+1) j_k(pi n)
    return _sinc_derivatives(trunc, -n)


def shannon_chromatic_transform(direction, coeffs, trunc):
    """Map samples ``f(-trunc..trunc)`` to the jet ``K^k[f](0)``, ``k <= trunc``
    (``direction="samples_to_jet"``), or back (``"jet_to_samples"``)."""
    M = transform_matrix(trunc)
    c = np.asarray(coeffs, dtype=float)
    if direction == "samples_to_jet":
        if c.size != 2 * trunc + 1:
            raise ValueError(f"expected {2 * trunc + 1} samples, got {c.size}")
        return M @ c
    if direction == "jet_to_samples":
        if c.size != trunc + 1:
            raise ValueError(f"expected {trunc + 1} jet values, got {c.size}")
        return M.T @ c
    raise ValueError(f"unknown direction {direction!r}")


def _tail_energy(prod):
    return float(np.sum(np.abs(prod[-TAIL_TERMS:]))) if prod.size >= TAIL_TERMS else math.nan


def _common(jetF, jetG):
    _require_kind(jetF, JetKind.CHROMATIC)
    _require_kind(jetG, JetKind.CHROMATIC)
    if jetF.base != jetG.base:
        raise ValueError(f"jets at different bases {jetF.base} and {jetG.base}")
    n = min(len(jetF), len(jetG))
    return jetF.values[:n] * jetG.values[:n]


def local_dot(family, jetF, jetG, with_tail=False):
    """``sum_n K^n[f](u) K^n[g](u)``.

    With ``with_tail=True`` also returns the sum of the last ten terms, a
    convergence diagnostic rather than a bound.
    """
    prod = _common(jetF, jetG)
    val = float(np.sum(prod))
    return (val, _tail_energy(prod)) if with_tail else val


def local_norm(family, jetF, with_tail=False):
    prod = _common(jetF, jetF)
    val = math.sqrt(float(np.sum(prod)))
    return (val, _tail_energy(prod)) if with_tail else val


def local_conv(family, jetF, kernel_jet_fn, t, with_tail=False):
    """``sum_n K^n[f](u) K^n_u[g(t - u)]`` with ``K^n_u[g(t - u)] =
    (-1)^n K^n[g](t - u)``.

    ``kernel_jet_fn(x, order)`` returns the chromatic jet of ``g`` at ``x``
    (a :class:`Jet` or an array).
    """
    _require_kind(jetF, JetKind.CHROMATIC)
    g = kernel_jet_fn(float(t) - jetF.base, jetF.order)
    gv = g.values if isinstance(g, Jet) else np.asarray(g, dtype=float)
    n = min(len(jetF), gv.size)
    sign = np.where(np.arange(n) % 2 == 1, -1.0, 1.0)
    prod = jetF.values[:n] * sign * gv[:n]
    val = float(np.sum(prod))
    return (val, _tail_energy(prod)) if with_tail else val


def kernel_jet(family):
    """Jet generator for ``g = m``, for use with :func:`local_conv`."""
    def fn(x, order):
        return Jet(JetKind.CHROMATIC, x, KernelEval(family, order).orders(x))
    return fn
