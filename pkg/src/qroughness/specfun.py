"""Special functions and exact combinatorics.

Laguerre polynomials are evaluated by upward three-term recurrence, which
is stable for the bounded arguments met on phase-space grids.  Stirling
numbers, factorials and binomials are exact Python integers and are only
converted to floats at the end of an expression.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.special import gammaln

from .exceptions import DomainError

__all__ = [
    "LogFactorialTable",
    "assoc_laguerre",
    "binom_square_poly",
    "bn_ratio",
    "bn_ratio_exact",
    "central_binom_bounds",
    "central_binom_scaled",
    "laguerre",
    "log_factorial",
    "stirling_first_unsigned",
    "stirling_identity_lhs",
    "stirling_second",
]


def _check_order(name, value):
    if int(value) != value or value < 0:
        raise DomainError(f"{name} must be a non-negative integer, got {value!r}")
    return int(value)


def assoc_laguerre(n, k, x):
    """Associated Laguerre polynomial L_n^k(x).

    Works elementwise on arrays. Uses
    (j+1) L_{j+1} = (2j+1+k-x) L_j - (j+k) L_{j-1}.
    """
    n = _check_order("n", n)
    k = _check_order("k", k)
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev if prev.ndim else float(prev)
    cur = 1.0 + k - x
    for j in range(1, n):
        prev, cur = cur, ((2 * j + 1 + k - x) * cur - (j + k) * prev) / (j + 1)
    return cur if cur.ndim else float(cur)


def laguerre(n, x):
    """Laguerre polynomial L_n(x)."""
    return assoc_laguerre(n, 0, x)


@dataclass(frozen=True)
class LogFactorialTable:
    """Tabulated ln(n!) for 0 <= n <= max_n."""

    max_n: int
    values: np.ndarray = field(repr=False)

    @classmethod
    def build(cls, max_n):
        values = np.zeros(max_n + 1)
        if max_n > 0:
            values[1:] = np.cumsum(np.log(np.arange(1, max_n + 1, dtype=float)))
        values.setflags(write=False)
        return cls(max_n, values)

    def __call__(self, n):
        n = np.asarray(n)
        if np.any(n < 0):
            raise DomainError("log_factorial needs n >= 0")
        if np.all(n <= self.max_n):
            return self.values[n]
        return gammaln(n + 1.0)


_LOGFACT = LogFactorialTable.build(1024)


def log_factorial(n):
    """ln(n!); table lookup for n <= 1024, log-gamma above."""
    if np.ndim(n) == 0:
        n = _check_order("n", n)
        if n <= _LOGFACT.max_n:
            return float(_LOGFACT.values[n])
        return math.lgamma(n + 1.0)
    return _LOGFACT(n)


@lru_cache(maxsize=None)
def _stirling1_row(n):
    if n == 0:
        return (1,)
    prev = _stirling1_row(n - 1)
    row = [0] * (n + 1)
    for k in range(1, n + 1):
        above = prev[k] if k < n else 0
        row[k] = (n - 1) * above + prev[k - 1]
    return tuple(row)


@lru_cache(maxsize=None)
def _stirling2_row(n):
    if n == 0:
        return (1,)
    prev = _stirling2_row(n - 1)
    row = [0] * (n + 1)
    for k in range(1, n + 1):
        above = prev[k] if k < n else 0
        row[k] = k * above + prev[k - 1]
    return tuple(row)


def stirling_first_unsigned(n, k):
    """Unsigned Stirling number of the first kind [n, k] (exact int)."""
    n = _check_order("n", n)
    k = _check_order("k", k)
    if k > n:
        return 0
    return _stirling1_row(n)[k]


def stirling_second(n, k):
    """Stirling number of the second kind {n, k} (exact int)."""
    n = _check_order("n", n)
    k = _check_order("k", k)
    if k > n:
        return 0
    return _stirling2_row(n)[k]


def stirling_identity_lhs(n, j):
    """sum_{k=j}^{n} [n+1, k+1] {k, j}.

    Equals (n-j)! * C(n, j)**2 for every 0 <= j <= n.
    """
    n = _check_order("n", n)
    j = _check_order("j", j)
    if j > n:
        raise DomainError(f"need j <= n, got j={j}, n={n}")
    first = _stirling1_row(n + 1)
    return sum(first[k + 1] * _stirling2_row(k)[j] for k in range(j, n + 1))


def binom_square_poly(n, t):
    """P_n(t) = sum_j C(n, j)^2 t^(2j).

    Exact (int or Fraction) when ``t`` is an int or Fraction, float otherwise.
    """
    n = _check_order("n", n)
    if isinstance(t, (int, Fraction)):
        t2 = t * t
        return sum(math.comb(n, j) ** 2 * t2**j for j in range(n + 1))
    t2 = float(t) ** 2
    # Horner in t^2 keeps the float path cheap and positive
    acc = 0.0
    for j in range(n, -1, -1):
        acc = acc * t2 + math.comb(n, j) ** 2
    return acc


def bn_ratio_exact(n):
    """B_n = 4^n P_n(2) / (C(2n, n) 9^n) as an exact Fraction."""
    n = _check_order("n", n)
    return Fraction(4**n * binom_square_poly(n, 2), math.comb(2 * n, n) * 9**n)


def bn_ratio(n):
    """Ratio of 9^-n P_n(2) to the scaled central binomial 2^-2n C(2n, n)."""
    return float(bn_ratio_exact(n))


def central_binom_scaled(n):
    """2^(-2n) C(2n, n), evaluated in the log domain."""
    n = _check_order("n", n)
    if n == 0:
        return 1.0
    return math.exp(log_factorial(2 * n) - 2.0 * log_factorial(n) - 2 * n * math.log(2.0))


def central_binom_bounds(n):
    """Two-sided Stirling bounds on 2^(-2n) C(2n, n) for n >= 1."""
    n = _check_order("n", n)
    if n == 0:
        raise DomainError("bounds hold for n >= 1")
    base = 1.0 / math.sqrt(math.pi * n)
    return math.exp(-1.0 / (6 * n)) * base, math.exp(1.0 / (24 * n)) * base
