"""
Bessel functions of the first kind by three-term recurrence.

Both families satisfy ``y_{k-1} = c_k(x) y_k - y_{k+1}``; ``j_n`` and ``J_n``
are the minimal solutions once ``k > |x|``, so they are generated downward
from a trial start (Miller's algorithm) and normalized afterwards.  Upward
recurrence is only used for orders below ``|x|``, where it is stable.
"""
import numpy as np

_RESCALE = 1e250
# below this |x| the ratio 1/x overflows the recurrence; two series terms are
# exact to O(x^4)
_SMALL = 1e-4


def _start_order(nmax, xmax):
    # j_k/J_k decay faster than 2^-k once k exceeds |x| + O(|x|^(1/3))
    return int(max(nmax, xmax) + 40 + 6.0 * xmax ** (1.0 / 3.0))


def _miller(nmax, x, coef):
    """Unnormalized minimal solution for orders ``0..nmax`` (x > 0 array)."""
    L = _start_order(nmax, float(np.max(x)))
    out = np.zeros((nmax + 1,) + x.shape)
    hi = np.zeros_like(x)
    cur = np.full_like(x, 1e-300)
    for k in range(L, 0, -1):
        lo = coef(k, x) * cur - hi
        hi, cur = cur, lo
        if k - 1 <= nmax:
            out[k - 1] = cur
        big = np.abs(cur) > _RESCALE
        if np.any(big):
            cur = np.where(big, cur / _RESCALE, cur)
            hi = np.where(big, hi / _RESCALE, hi)
            out[:, big] /= _RESCALE
    return out


def _small_series(nmax, x, spherical):
    """Leading two terms of the power series, orders ``0..nmax``, ``x > 0``."""
    out = np.empty((nmax + 1,) + x.shape)
    lead = np.ones_like(x)
    with np.errstate(under="ignore"):
        for k in range(nmax + 1):
            if k:
                lead = lead * (x / (2 * k + 1) if spherical else x / (2 * k))
            corr = x * x / (2 * (2 * k + 3)) if spherical else x * x / (4 * (k + 1))
            out[k] = lead * (1.0 - corr)
    return out


def spherical_j_orders(nmax, x):
    """``j_0(x) .. j_nmax(x)``; result shape ``(nmax + 1,) + shape(x)``."""
    if nmax < 0:
        raise ValueError("nmax must be >= 0")
    x0 = np.asarray(x, dtype=float)
    x = x0.reshape(-1)
    ax = np.abs(x)
    out = np.zeros((nmax + 1,) + x.shape)
    zero = ax == 0
    out[0][zero] = 1.0
    small = (ax < _SMALL) & ~zero
    if np.any(small):
        out[:, small] = _small_series(nmax, ax[small], True)

    up = (ax > nmax) & ~zero
    if np.any(up):
        xu = ax[up]
        j0 = np.sin(xu) / xu
        vals = [j0]
        if nmax >= 1:
            vals.append(j0 / xu - np.cos(xu) / xu)
        for k in range(1, nmax):
            vals.append((2 * k + 1) / xu * vals[k] - vals[k - 1])
        out[:, up] = np.array(vals)

    down = ~up & ~zero & ~small
    if np.any(down):
        xd = ax[down]
        raw = _miller(max(nmax, 1), xd, lambda k, z: (2 * k + 1) / z)
        j0 = np.sin(xd) / xd
        j1 = np.where(xd < 0.5, 0.0, j0 / xd - np.cos(xd) / xd)
        use0 = np.abs(j0) >= np.abs(j1)
        scale = np.empty_like(xd)
        scale[use0] = j0[use0] / raw[0][use0]
        scale[~use0] = j1[~use0] / raw[1][~use0]
        out[:, down] = raw[: nmax + 1] * scale

    neg = x < 0
    if np.any(neg):
        sign = np.where(np.arange(nmax + 1) % 2 == 1, -1.0, 1.0)
        out[:, neg] *= sign[:, None]
    return out.reshape((nmax + 1,) + x0.shape)


def bessel_j_orders(nmax, x):
    """``J_0(x) .. J_nmax(x)``, normalized by ``J_0 + 2 sum J_2k = 1``."""
    if nmax < 0:
        raise ValueError("nmax must be >= 0")
    x0 = np.asarray(x, dtype=float)
    x = x0.reshape(-1)
    ax = np.abs(x)
    out = np.zeros((nmax + 1,) + x.shape)
    zero = ax == 0
    out[0][zero] = 1.0
    small = (ax < _SMALL) & ~zero
    if np.any(small):
        out[:, small] = _small_series(nmax, ax[small], False)
    nz = ~zero & ~small
    if np.any(nz):
        xs = ax[nz]
        L = _start_order(nmax, float(np.max(xs)))
        # keep every order down to 0 for the normalization sum
        raw = _miller(L - 1, xs, lambda k, z: 2.0 * k / z)
        norm = raw[0] + 2.0 * np.sum(raw[2::2], axis=0)
        out[:, nz] = raw[: nmax + 1] / norm
    neg = x < 0
    if np.any(neg):
        sign = np.where(np.arange(nmax + 1) % 2 == 1, -1.0, 1.0)
        out[:, neg] *= sign[:, None]
    return out.reshape((nmax + 1,) + x0.shape)


def spherical_j(n, x):
    """Spherical Bessel function ``j_n(x)`` of the first kind."""
    if n < 0:
        raise ValueError("n must be >= 0")
    r = spherical_j_orders(n, x)[n]
    return float(r) if np.ndim(r) == 0 else r


def bessel_j(n, x):
    """Bessel function ``J_n(x)`` of the first kind, integer ``n >= 0``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    r = bessel_j_orders(n, x)[n]
    return float(r) if np.ndim(r) == 0 else r


def sinc(t):
    """Normalized cardinal sine ``sin(pi t) / (pi t)``."""
    return np.sinc(t)

