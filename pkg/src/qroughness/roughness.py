"""Roughness: closed forms for the standard families and the general Fock-basis path.

R^2 = 2 pi ||W - Q||^2 splits as r2_w2 + r2_q2 - r2_wq with
r2_w2 = 2 pi ||W||^2, r2_q2 = 2 pi ||Q||^2 and r2_wq = 4 pi (W, Q).
For a density matrix sum A[n, m] |n><m| each term is a quadratic form in
A over the phase-space overlaps of the dyad kernels, which are nonzero
only between dyads with equal offset n - m.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exceptions import ConsistencyError, DomainError
from .specfun import binom_square_poly, central_binom_scaled, log_factorial, stirling_identity_lhs
from .states import FockDensityMatrix

__all__ = [
    "IntegralTensorCache",
    "RoughnessBreakdown",
    "R_COHERENT",
    "build_tensor_cache",
    "fock_cross_term",
    "roughness_cat",
    "roughness_fock",
    "roughness_general",
    "roughness_squeezed",
    "roughness_thermal",
    "search_pure_minimum",
]

R_COHERENT = 1.0 / math.sqrt(6.0)

CLAMP_TOL = 1e-9
CANCELLATION_GUARD = 1e3


@dataclass(frozen=True)
class RoughnessBreakdown:
    r2_w2: float
    r2_q2: float
    r2_wq: float
    r: float

    @property
    def r2(self):
        return self.r * self.r

    @classmethod
    def from_terms(cls, r2_w2, r2_q2, r2_wq):
        r2 = r2_w2 + r2_q2 - r2_wq
        if r2 < -CLAMP_TOL:
            raise ConsistencyError(f"negative squared roughness {r2:.3g}")
        return cls(float(r2_w2), float(r2_q2), float(r2_wq), math.sqrt(max(r2, 0.0)))


# ---------------------------------------------------------------------------
# Fock states


def _cross_hypergeometric(n):
    s = sum(
        Fraction(math.factorial(n + j), math.factorial(j) ** 2 * math.factorial(n - j)) * Fraction(-4, 3) ** j
        for j in range(n + 1)
    )
    return Fraction(4, 3) * Fraction(-1, 3) ** n * s


def _cross_binomial_square(n):
    return Fraction(4, 3) * Fraction(binom_square_poly(n, 2), 9**n)


def _cross_stirling(n):
    c_n = Fraction(1, 3**n) * sum(
        Fraction(stirling_identity_lhs(n, j) * 4**j, math.factorial(n - j)) for j in range(n + 1)
    )
    return Fraction(4, 3) * Fraction(1, 3**n) * c_n


def fock_cross_term(n, rtol=1e-9):
    """r2_wq for |n><n|, cross-checked three ways.

    The alternating hypergeometric sum, the positive binomial-square sum
    and the Stirling-number rewriting are all evaluated exactly; the
    positive form is returned.
    """
    if n < 0:
        raise DomainError("n must be >= 0")
    positive = _cross_binomial_square(n)
    for name, other in (("hypergeometric", _cross_hypergeometric(n)), ("stirling", _cross_stirling(n))):
        if abs(other - positive) > rtol * positive:
            raise ConsistencyError(f"{name} form of the Fock cross term disagrees at n={n}")
    return float(positive)


def roughness_fock(n):
    """Roughness breakdown of the number state |n>."""
    if n < 0:
        raise DomainError("n must be >= 0")
    return RoughnessBreakdown.from_terms(1.0, 0.5 * central_binom_scaled(n), float(_cross_binomial_square(n)))


# ---------------------------------------------------------------------------
# Gaussian and cat closed forms


def roughness_squeezed(zeta):
    """Roughness of the vacuum squeezed along the q/p axes by ``zeta``."""
    e = math.exp(-abs(zeta))  # formula is even in zeta; use the decaying branch
    e2 = e * e
    r2 = 1.0 + e / (1.0 + e2) - 4.0 * e / math.sqrt((1.0 + 2.0 * e2) * (2.0 + e2))
    return math.sqrt(max(r2, 0.0))


def roughness_cat(q0, parity):
    """Roughness of the even/odd cat state built from coherent states at q = +/-q0."""
    if q0 < 0:
        raise DomainError("q0 must be >= 0")
    g = math.exp(-q0 * q0)
    g3 = math.exp(-q0 * q0 / 3.0)
    lead = (2.0 / 3.0) * math.exp(-2.0 * q0 * q0 / 3.0)
    if parity == "even":
        r2 = 7.0 / 12.0 + g / (1.0 + g) ** 2 - lead * ((1.0 + g3) / (1.0 + g)) ** 2
    elif parity == "odd":
        if q0 == 0:
            raise DomainError("odd cat state is undefined at q0 = 0")
        # (1 - e^{-x/3}) / (1 - e^{-x}) via expm1 to keep small q0 accurate
        ratio = math.expm1(-q0 * q0 / 3.0) / math.expm1(-q0 * q0)
        r2 = 7.0 / 12.0 - lead * ratio * ratio
    else:
        raise DomainError("parity must be 'even' or 'odd'")
    return math.sqrt(max(r2, 0.0))


def roughness_thermal(nbar):
    """Roughness of the thermal state with mean photon number ``nbar``."""
    if nbar < 0:
        raise DomainError("nbar must be >= 0")
    return math.sqrt(0.5 / ((nbar + 1.0) * (2.0 * nbar + 1.0) * (4.0 * nbar + 3.0)))


# ---------------------------------------------------------------------------
# General states


def _pi_psi_exact(k, y, yp):
    """Exact Wigner/Husimi dyad overlap for offset k, mins y (Wigner) and yp (Husimi)."""
    x = y + k
    xp = yp + k
    s = k + yp
    numer = sum(
        math.comb(x, y - j) * (math.factorial(s + j) // math.factorial(j)) * (-4) ** j * 3 ** (y - j)
        for j in range(y + 1)
    )
    if numer == 0:
        return 0.0
    log_mag = (
        math.log(2.0 / 3.0)
        + k * math.log(2.0)
        - (s + y) * math.log(3.0)
        + 0.5 * (log_factorial(y) - log_factorial(x) - log_factorial(xp) - log_factorial(yp))
        + math.log(abs(numer))
    )
    sign = (-1) ** y * (1 if numer > 0 else -1)
    return sign * math.exp(log_mag)


def _pi_psi_block(k, size, guard):
    """Matrix P[y, y'] of 2 pi int Pi* Psi for dyads with offset k.

    Terms are summed in floating point; entries whose sum cancels by more
    than ``guard`` (sum of |terms| over |sum|) are redone exactly.
    """
    y = np.arange(size)
    j = np.arange(size)
    yy, yp, jj = np.meshgrid(y, y, j, indexing="ij")
    valid = jj <= yy
    xx = yy + k
    s = k + yp
    jv = np.where(valid, jj, 0)
    log_comb = log_factorial(xx) - log_factorial(yy - jv) - log_factorial(xx - yy + jv)
    log_term = (
        math.log(2.0 / 3.0)
        + k * math.log(2.0)
        - s * math.log(3.0)
        + 0.5 * (log_factorial(yy) - log_factorial(xx) - log_factorial(yp + k) - log_factorial(yp))
        + log_comb
        + log_factorial(s + jv)
        - log_factorial(jv)
        + jv * math.log(4.0 / 3.0)
    )
    mag = np.where(valid, np.exp(log_term), 0.0)
    sign = np.where((yy + jv) % 2 == 0, 1.0, -1.0)
    total = np.sum(sign * mag, axis=2)
    scale = np.sum(mag, axis=2)
    with np.errstate(divide="ignore", invalid="ignore"):
        cancellation = np.where(total != 0, scale / np.abs(total), np.inf)
    bad = np.argwhere(cancellation > guard)
    for a, b in bad:
        total[a, b] = _pi_psi_exact(k, int(a), int(b))
    return total, len(bad)


def _psi_psi_block(k, size):
    y = np.arange(size)
    yy, yp = np.meshgrid(y, y, indexing="ij")
    s = yy + yp + k
    log_val = log_factorial(s) - (s + 1) * math.log(2.0) - 0.5 * (
        log_factorial(yy + k) + log_factorial(yy) + log_factorial(yp + k) + log_factorial(yp)
    )
    return np.exp(log_val)


class IntegralTensorCache:
    """Phase-space overlaps of Fock dyads, grouped by offset k = |n - m|.

    Entry [y, y'] of a block pairs the dyads whose smaller index is y and
    y' respectively (larger index y + k).  The Wigner-Wigner overlap is the
    identity and is not stored; ``psi_psi[k]`` holds 2 pi int Psi* Psi and
    ``pi_psi[k]`` holds 2 pi int Pi* Psi (Wigner dyad first).  The
    Husimi/Wigner pairing is its transpose.
    """

    def __init__(self, dim, max_offset=None, guard=CANCELLATION_GUARD):
        if dim < 1:
            raise DomainError("dim must be >= 1")
        self.dim = int(dim)
        self.max_offset = self.dim - 1 if max_offset is None else min(int(max_offset), self.dim - 1)
        self.psi_psi = []
        self.pi_psi = []
        self.exact_recomputes = 0
        for k in range(self.max_offset + 1):
            size = self.dim - k
            self.psi_psi.append(_psi_psi_block(k, size))
            block, n_exact = _pi_psi_block(k, size, guard)
            self.pi_psi.append(block)
            self.exact_recomputes += n_exact
        for blocks in (self.psi_psi, self.pi_psi):
            for b in blocks:
                b.setflags(write=False)

    def __repr__(self):
        return f"IntegralTensorCache(dim={self.dim}, max_offset={self.max_offset})"

    def pairing(self, which, n, m, n2, m2):
        """Overlap 2 pi int X*_{m,n} Y_{m2,n2} of the dyads |n><m| and |n2><m2|.

        ``which`` is one of ``"pipi"``, ``"psipsi"``, ``"pipsi"``, ``"psipi"``.
        """
        if n - m != n2 - m2:
            return 0.0
        k = abs(n - m)
        if k > self.max_offset or max(n, m, n2, m2) >= self.dim:
            raise DomainError("indices outside the cache")
        y, y2 = min(n, m), min(n2, m2)
        if which == "pipi":
            return 1.0 if y == y2 else 0.0
        if which == "psipsi":
            return float(self.psi_psi[k][y, y2])
        if which == "pipsi":
            return float(self.pi_psi[k][y, y2])
        if which == "psipi":
            return float(self.pi_psi[k][y2, y])
        raise DomainError(f"unknown pairing {which!r}")


def build_tensor_cache(dim, max_offset=None):
    """Precompute all nonzero dyad overlaps up to truncation ``dim``.

    ``max_offset`` limits the stored offsets |n - m|; 0 suffices for
    Fock-diagonal states.
    """
    return IntegralTensorCache(dim, max_offset)


def roughness_general(rho, cache):
    """Roughness breakdown of an arbitrary Fock-basis density matrix."""
    if rho.dim > cache.dim:
        raise DomainError(f"state dim {rho.dim} exceeds cache dim {cache.dim}")
    a = rho.coeffs
    if rho.max_offset() > cache.max_offset:
        raise DomainError(f"state has coherences at offset {rho.max_offset()} > cache max_offset {cache.max_offset}")
    r2_w2 = r2_q2 = r2_wq = 0.0
    for k in range(min(rho.dim, cache.max_offset + 1)):
        size = rho.dim - k
        s_block = cache.psi_psi[k][:size, :size]
        p_block = cache.pi_psi[k][:size, :size]
        cross = p_block + p_block.T
        vectors = [np.diagonal(a, -k)] if k == 0 else [np.diagonal(a, -k), np.diagonal(a, k)]
        for v in vectors:
            if not np.any(v):
                continue
            vc = v.conj()
            r2_w2 += float(np.real(vc @ v))
            r2_q2 += float(np.real(vc @ s_block @ v))
            r2_wq += float(np.real(vc @ cross @ v))
    return RoughnessBreakdown.from_terms(r2_w2, r2_q2, r2_wq)


def search_pure_minimum(dim, samples, rng=None, cache=None):
    """Random search over pure states for Roughness below 1/sqrt(6).

    Returns (smallest R found, list of (R, amplitudes) violating the
    coherent-state value by more than 1e-9).  A diagnostic only; nothing
    is asserted.
    """
    rng = np.random.default_rng(rng)
    cache = build_tensor_cache(dim) if cache is None else cache
    best = math.inf
    violations = []
    for _ in range(samples):
        c = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        c *= rng.random(dim) ** 3  # bias toward few-component states
        c /= np.linalg.norm(c)
        r = roughness_general(FockDensityMatrix(np.outer(c, c.conj()), check=False), cache).r
        best = min(best, r)
        if r < R_COHERENT - 1e-9:
            violations.append((r, c))
    return best, violations
