"""Chebyshev grids, value<->coefficient transforms, and integration recurrences.

Series convention used throughout the package: a coefficient vector
``a[0..M]`` represents

    u(y) = a[0]/2 + sum_{j=1}^{M-1} a[j] T_j(y) + 0 * T_M(y),

i.e. the stored leading coefficient is halved in the series and the last
coefficient is always suppressed (``a[M] = 0`` is enforced on every
construction).  Grid points are ``y_j = cos(j pi / M)``, descending from +1
to -1.

Transforms between grid values and coefficients are DCT-I pairs:

    a_j = (2/M) * sum''_{k=0}^{M} v_k cos(j k pi / M)

with the double prime halving the k=0 and k=M terms.  The production path
uses ``scipy.fft.dct(type=1)``; the direct cosine summation serves as the
test oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.fft import dct


def _readonly(arr: np.ndarray) -> np.ndarray:
    out = np.asarray(arr, dtype=float).copy()
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class ChebGrid:
    """Chebyshev grid of order M: the M+1 points cos(j pi / M), descending."""

    m: int
    points: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"grid order must be >= 1, got {self.m}")
        pts = np.asarray(self.points, dtype=float)
        if pts.shape != (self.m + 1,):
            raise ValueError("points length must be m+1")
        object.__setattr__(self, "points", _readonly(pts))


def cheb_points(m: int) -> ChebGrid:
    """Grid of the m+1 Chebyshev points cos(j pi / m), j = 0..m.

    The endpoints and (for even m) the midpoint are pinned to 1, -1, 0
    exactly; rounding in cos would otherwise leave the midpoint at ~6e-17.
    """
    if m < 1:
        raise ValueError(f"grid order must be >= 1, got {m}")
    j = np.arange(m + 1)
    pts = np.cos(np.pi * j / m)
    pts[0] = 1.0
    pts[m] = -1.0
    if m % 2 == 0:
        pts[m // 2] = 0.0
    return ChebGrid(m, pts)


@dataclass(frozen=True)
class GridValues:
    """Function values at the m+1 Chebyshev points (descending from +1)."""

    m: int
    v: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.asarray(self.v, dtype=float)
        if vals.shape != (self.m + 1,):
            raise ValueError(f"expected {self.m + 1} values, got {vals.shape}")
        object.__setattr__(self, "v", _readonly(vals))


@dataclass(frozen=True)
class ChebCoeffs:
    """Truncated Chebyshev coefficients a[0..M] with a[M] zeroed on construction."""

    m: int
    a: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.asarray(self.a, dtype=float).copy()
        if arr.shape != (self.m + 1,):
            raise ValueError(f"expected {self.m + 1} coefficients, got {arr.shape}")
        arr[self.m] = 0.0
        object.__setattr__(self, "a", _readonly(arr))

    @staticmethod
    def zeros(m: int) -> "ChebCoeffs":
        return ChebCoeffs(m, np.zeros(m + 1))

    @staticmethod
    def unit(m: int, n: int, scale: float = 1.0) -> "ChebCoeffs":
        """Coefficient vector of scale * T_n (stored convention: T_0 is a[0]=2)."""
        a = np.zeros(m + 1)
        a[n] = 2.0 * scale if n == 0 else scale
        return ChebCoeffs(m, a)


def to_coeffs(vals: GridValues) -> ChebCoeffs:
    """Interpolation coefficients of grid values; a[M] is forced to zero."""
    return ChebCoeffs(vals.m, dct(vals.v, type=1) / vals.m)


def to_values(coeffs: ChebCoeffs) -> GridValues:
    """Series values at the grid points; exact inverse of to_coeffs on the a[M]=0 subspace."""
    return GridValues(coeffs.m, dct(coeffs.a, type=1) / 2.0)


def sample_function(f: Callable[[np.ndarray], np.ndarray], m: int) -> GridValues:
    """Sample f at the order-m Chebyshev points."""
    return GridValues(m, np.asarray(f(cheb_points(m).points), dtype=float))


def function_to_coeffs(f: Callable[[np.ndarray], np.ndarray], m: int) -> ChebCoeffs:
    return to_coeffs(sample_function(f, m))


def eval_series(coeffs: ChebCoeffs, y):
    """Evaluate the series at y in [-1, 1] by the backward (Clenshaw) recurrence.

    Accepts a scalar or an ndarray; no trigonometric calls, which keeps the
    evaluation accurate near +-1 where boundary layers live.
    """
    yarr = np.asarray(y, dtype=float)
    if np.any(yarr < -1.0) or np.any(yarr > 1.0):
        raise ValueError("evaluation point outside [-1, 1]")
    a = coeffs.a
    b1 = np.zeros_like(yarr)
    b2 = np.zeros_like(yarr)
    two_y = 2.0 * yarr
    for k in range(coeffs.m, 0, -1):
        b1, b2 = a[k] + two_y * b1 - b2, b1
    out = a[0] / 2.0 + yarr * b1 - b2
    return float(out) if np.isscalar(y) or np.ndim(y) == 0 else out


def eval_endpoints(coeffs: ChebCoeffs) -> tuple[float, float]:
    """(u(+1), u(-1)) from coefficients: u(+-1) = a0/2 + sum (+-1)^j a_j."""
    a = coeffs.a
    signs = np.ones_like(a)
    signs[1::2] = -1.0
    plus = a[0] / 2.0 + a[1:].sum()
    minus = a[0] / 2.0 + (a * signs)[1:].sum()
    return float(plus), float(minus)


def endpoint_derivative(coeffs: ChebCoeffs, endpoint: int) -> float:
    """Series derivative at +-1 from T_n'(+-1) = (+-1)^(n+1) n^2."""
    a = coeffs.a
    n = np.arange(len(a), dtype=float)
    w = n * n
    if endpoint == -1:
        w = w * (-1.0) ** (n + 1)
    elif endpoint != 1:
        raise ValueError("endpoint must be +1 or -1")
    return float(np.dot(a[1:], w[1:]))


def integrate_coeffs(coeffs: ChebCoeffs) -> ChebCoeffs:
    """Antiderivative coefficients with the T_0 coefficient set to zero.

    Uses int T_n = T_{n+1}/(2(n+1)) - T_{n-1}/(2(n-1)) for n > 1, int T_1 =
    T_2/4, int T_0 = T_1.  The contribution that would land on index M is
    dropped and a[M] stays zero.
    """
    m = coeffs.m
    a = coeffs.a
    b = np.zeros(m + 1)
    n = np.arange(1, m)
    b[1:m] = (a[0 : m - 1] - a[2 : m + 1]) / (2.0 * n)
    return ChebCoeffs(m, b)


def double_integrate_coeffs(coeffs: ChebCoeffs) -> ChebCoeffs:
    """Second antiderivative with T_0 and T_1 coefficients set to zero.

    Uses iint T_n = T_{n+2}/(4(n+1)(n+2)) - T_n/(2(n^2-1)) + T_{n-2}/(4(n-1)(n-2))
    for n > 2 together with the low-order special cases; truncation as in
    integrate_coeffs (indices beyond M-1 dropped, virtual a[M+1] = 0).
    """
    m = coeffs.m
    ap = np.concatenate([coeffs.a, [0.0, 0.0]])
    c = np.zeros(m + 1)
    n = np.arange(2, m)
    c[2:m] = (
        ap[0 : m - 2] / (4.0 * n * (n - 1))
        - ap[2:m] / (2.0 * (n * n - 1))
        + ap[4 : m + 2] / (4.0 * n * (n + 1))
    )
    return ChebCoeffs(m, c)


def pad_coeffs(coeffs: ChebCoeffs, m_new: int) -> ChebCoeffs:
    """Same polynomial on a finer grid order (zero-padded coefficients)."""
    if m_new < coeffs.m:
        raise ValueError("pad target must not be smaller than current order")
    a = np.zeros(m_new + 1)
    a[: coeffs.m + 1] = coeffs.a
    return ChebCoeffs(m_new, a)


def dense_sample(coeffs: ChebCoeffs, order: int) -> tuple[np.ndarray, np.ndarray]:
    """(points, values) of the series on a Chebyshev grid of the given order.

    Zero-padding the coefficients makes this an exact polynomial evaluation,
    so a refined clustered sampling costs one DCT.
    """
    order = max(order, coeffs.m)
    padded = pad_coeffs(coeffs, order)
    return cheb_points(order).points, to_values(padded).v
