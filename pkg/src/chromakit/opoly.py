"""
Orthonormal polynomial families defined by symmetric three-term recurrences.

A family is given by its recursion coefficients ``gamma_n > 0``::

    P_{n+1}(w) = w / gamma_n * P_n(w) - gamma_{n-1} / gamma_n * P_{n-1}(w)

with ``P_{-1} = 0``, ``P_0 = 1`` and ``gamma_{-1} = 1``.  The moments of the
associated functional are the ``(0, 0)`` entries of powers of the symmetric
tridiagonal Jacobi matrix whose off-diagonal is ``gamma``.
"""
import enum
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import NotWeaklyBoundedError, NumericOverflowError


class KernelKind(enum.Enum):
    LEGENDRE_SINC = "LegendreSinc"
    CHEBYSHEV_BESSEL = "ChebyshevBessel"
    HERMITE_GAUSSIAN = "HermiteGaussian"
    HERRON_SECH = "HerronSech"
    GENERIC_SERIES = "GenericSeries"


@dataclass(frozen=True)
class FamilySpec:
    """A symmetric moment functional presented by its recursion coefficients.

    ``(M, p, r)`` are the weak-boundedness parameters: ``1/M <= gamma_n <=
    M (n + r)**p`` and ``gamma_n / gamma_{n+1} <= M**2``.  ``p >= 1`` marks a
    family that is not weakly bounded.
    """

    name: str
    gamma: Callable[[int], float] = field(repr=False, compare=False)
    p: float
    M: float
    r: int
    support_radius: float
    kernel: KernelKind = KernelKind.GENERIC_SERIES
    # radius of convergence of the Taylor series of m(t) when it is not entire
    series_radius: float = math.inf

    def __post_init__(self):
        if self.M < 1:
            raise ValueError(f"M must be >= 1, got {self.M}")
        if self.r < 0:
            raise ValueError(f"r must be >= 0, got {self.r}")
        if not self.support_radius > 0:
            raise ValueError("support_radius must be positive")

    @property
    def weakly_bounded(self):
        return self.p < 1

    def gammas(self, n):
        """Array ``gamma_0 .. gamma_{n-1}``."""
        g = np.array([float(self.gamma(k)) for k in range(n)], dtype=float)
        if np.any(~(g > 0)):
            bad = int(np.argmax(~(g > 0)))
            raise ValueError(f"{self.name}: gamma_{bad} = {g[bad]} is not positive")
        return g

    def require_weakly_bounded(self, what="this operation"):
        if not self.weakly_bounded:
            raise NotWeaklyBoundedError(
                f"{what} needs a weakly bounded family (p < 1); "
                f"{self.name} has p = {self.p}"
            )

    def check_weak_bounds(self, upto, rtol=1e-12):
        """Verify the weak-boundedness inequalities for ``n < upto``.

        Returns a list of violation messages; an empty list means the declared
        ``(M, p, r)`` hold on the checked range.
        """
        g = self.gammas(upto + 1)
        n = np.arange(upto)
        problems = []
        lo = 1.0 / self.M
        hi = self.M * np.power((n + self.r).astype(float), self.p)
        for k in n:
            if g[k] < lo * (1 - rtol):
                problems.append(f"gamma_{k} = {g[k]:.6g} < 1/M = {lo:.6g}")
            if g[k] > hi[k] * (1 + rtol):
                problems.append(f"gamma_{k} = {g[k]:.6g} > M(n+r)^p = {hi[k]:.6g}")
            if g[k] / g[k + 1] > self.M**2 * (1 + rtol):
                problems.append(f"gamma_{k}/gamma_{k + 1} = {g[k] / g[k + 1]:.6g} > M^2")
        return problems


def _legendre_gamma(n):
    return math.pi * (n + 1) / math.sqrt(4.0 * (n + 1) ** 2 - 1.0)


def _chebyshev_gamma(n):
    return math.pi / math.sqrt(2.0) if n == 0 else math.pi / 2


def _hermite_gamma(n):
    return math.sqrt((n + 1) / 2.0)


def _herron_gamma(n):
    return float(n + 1)


LEGENDRE = FamilySpec(
    "legendre", _legendre_gamma, p=0.0, M=math.pi / math.sqrt(3.0), r=0,
    support_radius=math.pi, kernel=KernelKind.LEGENDRE_SINC,
)
CHEBYSHEV = FamilySpec(
    "chebyshev", _chebyshev_gamma, p=0.0, M=math.pi / math.sqrt(2.0), r=0,
    support_radius=math.pi, kernel=KernelKind.CHEBYSHEV_BESSEL,
)
HERMITE = FamilySpec(
    "hermite", _hermite_gamma, p=0.5, M=math.sqrt(2.0), r=1,
    support_radius=math.inf, kernel=KernelKind.HERMITE_GAUSSIAN,
)
HERRON = FamilySpec(
    "herron", _herron_gamma, p=1.0, M=1.0, r=1,
    support_radius=math.inf, kernel=KernelKind.HERRON_SECH,
    series_radius=math.pi / 2,
)

BUILTINS = {f.name: f for f in (LEGENDRE, CHEBYSHEV, HERMITE, HERRON)}


def power_family(p):
    """Family with ``gamma_n = (n + 1)**p``.

    Shifted by one so that ``gamma_0 = 1 > 0``.  For ``p = 0`` this is the
    Chebyshev family of the second kind in ``w / 2``, supported on ``[-2, 2]``.
    """
    p = float(p)
    if not 0 <= p < 1:
        raise ValueError(f"power family needs 0 <= p < 1, got {p}")
    return FamilySpec(
        f"power-{p:g}", lambda n: (n + 1.0) ** p, p=p, M=1.0, r=1,
        support_radius=2.0 if p == 0 else math.inf,
    )


def get_family(name, p=None):
    """Look up a family by name (``legendre``, ``chebyshev``, ``hermite``,
    ``herron``, or ``power-p`` with ``p`` given separately or in the name)."""
    key = name.strip().lower()
    if key in BUILTINS:
        return BUILTINS[key]
    if key.startswith("power"):
        rest = key[len("power"):].lstrip("-_")
        if rest:
            p = float(rest)
        if p is None:
            raise ValueError("power family needs a value of p")
        return power_family(p)
    raise ValueError(f"unknown family {name!r}; choose from {sorted(BUILTINS)} or power-p")


def _check_finite(values, order):
    if not np.all(np.isfinite(values)):
        raise NumericOverflowError(
            f"recurrence overflowed at order {order}", order=order
        )


def eval_family(spec, n, w):
    """Values ``P_0(w) .. P_n(w)`` by forward recurrence.

    ``w`` may be a scalar or an array; the result has shape
    ``(n + 1,) + shape(w)``.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    w = np.asarray(w, dtype=float)
    g = spec.gammas(n + 1)
    out = np.empty((n + 1,) + w.shape)
    out[0] = 1.0
    prev = np.zeros_like(w)
    g_prev = 1.0
    for k in range(n):
        # overflow surfaces as NumericOverflowError below
        with np.errstate(over="ignore", invalid="ignore"):
            nxt = w / g[k] * out[k] - g_prev / g[k] * prev
        _check_finite(nxt, k + 1)
        prev = out[k]
        out[k + 1] = nxt
        g_prev = g[k]
    return out


def eval_family_with_derivative(spec, n, w):
    """``(P, dP)`` for orders ``0..n``, differentiating the recurrence termwise."""
    w = np.asarray(w, dtype=float)
    P = eval_family(spec, n, w)
    g = spec.gammas(n + 1)
    dP = np.zeros_like(P)
    prev = np.zeros_like(w)
    g_prev = 1.0
    for k in range(n):
        dP[k + 1] = (P[k] + w * dP[k]) / g[k] - g_prev / g[k] * prev
        prev = dP[k]
        g_prev = g[k]
    _check_finite(dP, n)
    return P, dP


def sum_squares(spec, n, w):
    """``sum_{k<=n} P_k(w)**2`` by direct summation."""
    return np.sum(eval_family(spec, n, w) ** 2, axis=0)


def sum_squares_closed(spec, n, w):
    """``gamma_n (P'_{n+1} P_n - P_{n+1} P'_n)``, the confluent
    Christoffel-Darboux form of :func:`sum_squares`."""
    P, dP = eval_family_with_derivative(spec, n + 1, w)
    g_n = spec.gammas(n + 1)[n]
    return g_n * (dP[n + 1] * P[n] - P[n + 1] * dP[n])


def cd_kernel(spec, n, w, s, check=False):
    """Christoffel-Darboux kernel ``sum_{k<=n} P_k(w) P_k(s)``.

    With ``check=True`` returns ``(lhs, rhs)`` where ``lhs = (w - s) * sum``
    and ``rhs = gamma_n (P_{n+1}(w) P_n(s) - P_{n+1}(s) P_n(w))``.
    """
    Pw = eval_family(spec, n + 1, w)
    Ps = eval_family(spec, n + 1, s)
    total = np.sum(Pw[: n + 1] * Ps[: n + 1], axis=0)
    if not check:
        return total
    g_n = spec.gammas(n + 1)[n]
    lhs = (np.asarray(w) - np.asarray(s)) * total
    rhs = g_n * (Pw[n + 1] * Ps[n] - Ps[n + 1] * Pw[n])
    return lhs, rhs


@dataclass(frozen=True)
class MomentSeq:
    """Moments ``mu_0 .. mu_{2N}`` of a normalized symmetric functional."""

    mu: np.ndarray

    def __post_init__(self):
        mu = np.asarray(self.mu, dtype=float)
        object.__setattr__(self, "mu", mu)
        if mu.ndim != 1 or mu.size == 0:
            raise ValueError("moment sequence must be a non-empty vector")
        if mu[0] != 1.0:
            raise ValueError(f"mu_0 must be 1, got {mu[0]}")
        if np.any(mu[1::2] != 0.0):
            raise ValueError("odd moments of a symmetric functional must vanish")
        if np.any(~(mu[0::2] > 0)):
            raise ValueError("even moments must be positive")

    def __len__(self):
        return self.mu.size

    def __getitem__(self, k):
        return self.mu[k]


def _jacobi_powers(spec, up_to, scaled):
    size = up_to // 2 + 2
    g = spec.gammas(size)
    v = np.zeros(size + 1)
    v[0] = 1.0
    out = np.zeros(up_to + 1)
    out[0] = 1.0
    for k in range(1, up_to + 1):
        # J v with J tridiagonal, zero diagonal, off-diagonal gamma
        w = np.zeros_like(v)
        w[:-1] += g * v[1:]
        w[1:] += g * v[:-1]
        if scaled:
            w /= k
        _check_finite(w, k)
        v = w
        out[k] = v[0] if k % 2 == 0 else 0.0
    return out


def moments(spec, up_to):
    """Moments ``mu_k = (J**k)[0, 0]`` for ``k = 0..up_to``."""
    if up_to < 0:
        raise ValueError("up_to must be >= 0")
    return MomentSeq(_jacobi_powers(spec, up_to, scaled=False))


def scaled_moments(spec, up_to):
    """``mu_k / k!`` for ``k = 0..up_to``, computed without forming ``mu_k``.

    Stays finite where the raw moments overflow (Hermite, Herron).
    """
    if up_to < 0:
        raise ValueError("up_to must be >= 0")
    return _jacobi_powers(spec, up_to, scaled=True)


@dataclass(frozen=True)
class RhoEstimate:
    value: float
    orders: np.ndarray
    sequence: np.ndarray


def rho_estimate(mom):
    """Finite-order proxy for ``limsup (mu_n / n!)**(1/n)``.

    ``sequence[j]`` is ``(mu_2n / (2n)!)**(1/(2n))`` for ``2n = orders[j]``;
    ``value`` is the maximum over the upper half of the available orders,
    which stands in for the limsup.  Diagnostic only.
    """
    mu = mom.mu if isinstance(mom, MomentSeq) else np.asarray(mom, dtype=float)
    even = np.arange(2, mu.size, 2)
    if even.size < 8:
        raise ValueError("need at least 8 even moments beyond mu_0")
    logs = np.log(mu[even]) - np.array([math.lgamma(k + 1.0) for k in even])
    seq = np.exp(logs / even)
    tail = seq[seq.size // 2:]
    return RhoEstimate(float(tail.max()), even, seq)
