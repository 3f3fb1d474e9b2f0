"""
Chromatic derivative operator tables.

``K^n = (-i)^n P_n(i D)`` is a real differential operator of order ``n`` with
only same-parity terms.  Writing ``K^n = sum_k A[n, k] D^k`` gives the
"direct" table ``A[n, k] = K^n[t^k/k!](0)``; its inverse ``B`` expresses
``D^n = sum_k B[n, k] K^k`` with ``B[n, k] = (-1)^k (D^n o K^k)[m](0)``.
"""
import csv
import enum
import io
from dataclasses import dataclass
from functools import cached_property

import mpmath
import numpy as np
from scipy.linalg import solve_triangular

from . import config
from .errors import JetKindError, NumericOverflowError, OrderCapError
from .opoly import FamilySpec, moments


class JetKind(enum.Enum):
    TAYLOR = "taylor"
    CHROMATIC = "chromatic"


@dataclass(frozen=True)
class Jet:
    """Derivative values ``v_0..v_N`` of one kind at base point ``base``."""

    kind: JetKind
    base: float
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "kind", JetKind(self.kind))
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float).copy())
        if self.values.ndim != 1:
            raise ValueError("jet values must be a vector")

    @property
    def order(self):
        return self.values.size - 1

    def __len__(self):
        return self.values.size


def check_order(N, allow_large=False):
    cap = config.max_order()
    if N < 0:
        raise ValueError("order must be >= 0")
    if N > cap and not allow_large:
        raise OrderCapError(
            f"order {N} exceeds the cap {cap}; pass allow_large=True or set "
            f"{config.ENV_MAX_ORDER}"
        )


def direct_coefficients(spec, N):
    """Lower-triangular ``A`` with ``A[n, k] = K^n[t^k/k!](0)``.

    Built from ``K^{n+1} = (D o K^n) / gamma_n + gamma_{n-1}/gamma_n K^{n-1}``
    acting on coefficient rows (``D`` shifts a row one place right).
    """
    g = spec.gammas(N + 1)
    A = np.zeros((N + 1, N + 1))
    A[0, 0] = 1.0
    prev = np.zeros(N + 1)
    g_prev = 1.0
    for n in range(N):
        row = g_prev / g[n] * prev
        row[1:] += A[n, :-1] / g[n]
        if not np.all(np.isfinite(row)):
            k = int(np.argmax(~np.isfinite(row)))
            raise NumericOverflowError(
                f"table entry A[{n + 1}, {k}] overflowed", order=n + 1, index=k
            )
        if row[n + 1] == 0.0:
            raise NumericOverflowError(
                f"diagonal entry A[{n + 1}, {n + 1}] underflowed to zero",
                order=n + 1, index=n + 1,
            )
        prev = A[n]
        A[n + 1] = row
        g_prev = g[n]
    return A


@dataclass(frozen=True)
class OperatorTable:
    family: FamilySpec
    order: int
    A: np.ndarray
    B: np.ndarray

    @cached_property
    def moments(self):
        return moments(self.family, 2 * self.order)

    @cached_property
    def _exact(self):
        return _exact_tables(self.family, self.order)

    def kernel_derivatives_at_zero(self):
        """``m^(j)(0)`` for ``j = 0..2N``: ``(-1)^(j/2) mu_j`` for even ``j``."""
        mu = self.moments.mu
        j = np.arange(mu.size)
        sign = np.where((j // 2) % 2 == 0, 1.0, -1.0)
        return np.where(j % 2 == 0, sign * mu, 0.0)

    def to_csv(self, which="A"):
        M = {"A": self.A, "B": self.B}[which]
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n"] + [f"k{k}" for k in range(self.order + 1)])
        for n in range(self.order + 1):
            w.writerow([n] + [repr(float(x)) for x in M[n]])
        return buf.getvalue()


def build_table(spec, N, allow_large=False):
    check_order(N, allow_large)
    A = direct_coefficients(spec, N)
    B = solve_triangular(A, np.eye(N + 1), lower=True)
    if not np.all(np.isfinite(B)):
        n, k = np.argwhere(~np.isfinite(B))[0]
        raise NumericOverflowError(
            f"inverse table entry B[{n}, {k}] overflowed", order=int(n), index=int(k)
        )
    return OperatorTable(spec, N, A, B)


def _exact_tables(spec, N):
    """``A`` rows and ``m^(j)(0)`` in extended precision.

    The monomial (moment) route sums alternating terms many orders of
    magnitude larger than its result, so it is evaluated with mpmath from the
    same float ``gamma`` values; the float64 tables are untouched.
    """
    dps = 40 + 2 * N
    with mpmath.workdps(dps):
        g = [mpmath.mpf(float(x)) for x in spec.gammas(N + 1)]
        A = [[mpmath.mpf(0)] * (N + 1) for _ in range(N + 1)]
        A[0][0] = mpmath.mpf(1)
        for n in range(N):
            g_prev = g[n - 1] if n > 0 else mpmath.mpf(1)
            for k in range(N + 1):
                v = g_prev / g[n] * A[n - 1][k] if n > 0 else mpmath.mpf(0)
                if k > 0:
                    v += A[n][k - 1] / g[n]
                A[n + 1][k] = v
        # m^(j)(0) = (-1)^(j/2) mu_j, mu_j = (J^j)[0, 0]
        size = N + 2
        v = [mpmath.mpf(0)] * (size + 1)
        v[0] = mpmath.mpf(1)
        gg = [mpmath.mpf(float(x)) for x in spec.gammas(size)]
        dm = [mpmath.mpf(1)]
        for j in range(1, 2 * N + 1):
            w = [mpmath.mpf(0)] * (size + 1)
            for i in range(size):
                w[i] += gg[i] * v[i + 1]
                w[i + 1] += gg[i] * v[i]
            v = w
            dm.append(v[0] * (-1 if (j // 2) % 2 else 1) if j % 2 == 0 else mpmath.mpf(0))
    return dps, A, dm


def inverse_by_moments(table):
    """``B`` recomputed from ``B[n, k] = (-1)^k sum_j A[k, j] m^(n+j)(0)``.

    Independent of the triangular solve in :func:`build_table`; used as a
    cross-check.
    """
    N = table.order
    dps, A, dm = table._exact
    B = np.zeros((N + 1, N + 1))
    with mpmath.workdps(dps):
        for n in range(N + 1):
            for k in range(n + 1):
                s = mpmath.fsum(A[k][j] * dm[n + j] for j in range(k + 1))
                B[n, k] = float(s) * (-1) ** k
    return B


def _convert(table, jet, expect, matrix, out_kind):
    if jet.kind is not expect:
        raise JetKindError(f"expected a {expect.value} jet, got {jet.kind.value}")
    n = len(jet)
    if n > table.order + 1:
        raise ValueError(f"jet of length {n} exceeds table order {table.order}")
    values = matrix[:n, :n] @ jet.values
    return Jet(out_kind, jet.base, values)


def to_chromatic(table, jet):
    """Taylor jet ``f^(k)(u)`` to chromatic jet ``K^m[f](u)``."""
    return _convert(table, jet, JetKind.TAYLOR, table.A, JetKind.CHROMATIC)


def to_taylor(table, jet):
    """Chromatic jet ``K^k[f](u)`` to Taylor jet ``f^(m)(u)``."""
    return _convert(table, jet, JetKind.CHROMATIC, table.B, JetKind.TAYLOR)


def kk_m_at_zero(table, n, m):
    """``(K^n o K^m)[m](0)`` by expanding in monomials against the moments.

    Equals ``sum_{j,k} A[n, j] A[m, k] m^(j+k)(0)``, evaluated in extended
    precision (see :func:`_exact_tables`).
    """
    N = table.order
    if not (0 <= n <= N and 0 <= m <= N):
        raise ValueError(f"orders must lie in [0, {N}]")
    if (n + m) % 2:
        return 0.0
    dps, A, dm = table._exact
    with mpmath.workdps(dps):
        s = mpmath.fsum(
            A[n][j] * A[m][k] * dm[j + k]
            for j in range(n + 1)
            for k in range(m + 1)
        )
    return float(s)
