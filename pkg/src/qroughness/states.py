"""Single-mode states in a truncated Fock basis, plus analytic descriptors.

Units: hbar = omega = k_B = 1, so ``beta`` is the dimensionless inverse
temperature hbar*omega/(k_B T).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError, TruncationError, UnsupportedStateError
from .specfun import log_factorial

__all__ = [
    "AnalyticStateSpec",
    "FockDensityMatrix",
    "MixtureSpec",
    "TOL_TRUNCATE",
    "default_coherent_dim",
    "default_thermal_dim",
    "entropy_diagonal",
    "fidelity",
    "linear_entropy",
    "make_cat",
    "make_coherent",
    "make_diagonal",
    "make_fock",
    "make_mixture",
    "make_thermal",
    "make_thermal_beta",
    "mean_photon",
    "mix",
    "nbar_from_beta",
    "purity",
    "zmax_scan",
]

TOL_TRUNCATE = 1e-8
TOL_TRACE = 1e-10
TOL_OFFDIAG = 1e-12


class FockDensityMatrix:
    """Density matrix rho = sum A[n, m] |n><m| truncated to ``dim`` levels.

    The coefficient array is Hermitian by construction (the upper and lower
    triangles are symmetrised on input) and read-only afterwards.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs, *, check=True):
        a = np.array(coeffs, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
            raise ValueError(f"coefficients must be a non-empty square matrix, got {a.shape}")
        if check:
            skew = np.max(np.abs(a - a.conj().T))
            if skew > 1e-10 * max(1.0, np.max(np.abs(a))):
                raise ValueError(f"coefficient matrix is not Hermitian (max skew {skew:.3g})")
            tr = np.trace(a).real
            if abs(tr - 1.0) > TOL_TRACE:
                raise ValueError(f"trace is {tr!r}, expected 1")
            if np.min(np.diag(a).real) < -1e-12:
                raise ValueError("negative population on the diagonal")
        a = 0.5 * (a + a.conj().T)
        a.setflags(write=False)
        self._coeffs = a

    @property
    def coeffs(self):
        return self._coeffs

    @property
    def dim(self):
        return self._coeffs.shape[0]

    @property
    def populations(self):
        return self._coeffs.diagonal().real.copy()

    def is_diagonal(self, tol=TOL_OFFDIAG):
        off = self._coeffs - np.diag(self._coeffs.diagonal())
        return bool(np.all(np.abs(off) <= tol))

    def max_offset(self, tol=0.0):
        """Largest |n - m| with |A[n, m]| > tol."""
        n, m = np.nonzero(np.abs(self._coeffs) > tol)
        return int(np.max(np.abs(n - m))) if n.size else 0

    def padded(self, dim):
        """Same state embedded in a larger truncation."""
        if dim < self.dim:
            raise DomainError(f"cannot pad dim {self.dim} down to {dim}")
        a = np.zeros((dim, dim), dtype=complex)
        a[: self.dim, : self.dim] = self._coeffs
        return FockDensityMatrix(a, check=False)

    def __repr__(self):
        return f"FockDensityMatrix(dim={self.dim}, mean_photon={mean_photon(self):.6g})"

    def __eq__(self, other):
        if not isinstance(other, FockDensityMatrix):
            return NotImplemented
        return self.dim == other.dim and np.array_equal(self._coeffs, other._coeffs)

    __hash__ = None

    # JSON layout: {"dim": d, "coeffs": [[re, im], ...]} row-major, d*d pairs
    def to_dict(self):
        flat = self._coeffs.ravel()
        return {"dim": self.dim, "coeffs": [[float(z.real), float(z.imag)] for z in flat]}

    @classmethod
    def from_dict(cls, data):
        dim = int(data["dim"])
        pairs = np.asarray(data["coeffs"], dtype=float)
        if pairs.ndim == 3:
            pairs = pairs.reshape(-1, 2)
        if pairs.shape != (dim * dim, 2):
            raise ValueError(f"expected {dim * dim} [re, im] pairs, got shape {pairs.shape}")
        return cls((pairs[:, 0] + 1j * pairs[:, 1]).reshape(dim, dim))

    def to_json(self, path=None):
        text = json.dumps(self.to_dict())
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text)
        return text

    @classmethod
    def from_json(cls, path):
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


def _from_populations(p):
    return FockDensityMatrix(np.diag(np.asarray(p, dtype=complex)), check=False)


def _suggest_dim(weights_fn, start, tol=TOL_TRUNCATE, limit=100_000):
    dim = start
    while dim < limit:
        dim = int(dim * 1.5) + 1
        if weights_fn(dim) >= 1.0 - tol:
            return dim
    return None


def make_fock(n, dim):
    """Number state |n><n|."""
    if n < 0:
        raise DomainError("photon number must be >= 0")
    if n >= dim:
        raise TruncationError(f"|{n}> does not fit in dim={dim}", suggested_dim=n + 1)
    p = np.zeros(dim)
    p[n] = 1.0
    return _from_populations(p)


def _coherent_amplitudes(alpha, dim):
    n = np.arange(dim)
    r = abs(alpha)
    if r == 0:
        c = np.zeros(dim, dtype=complex)
        c[0] = 1.0
        return c
    logmag = -0.5 * r * r + n * math.log(r) - 0.5 * log_factorial(n)
    return np.exp(logmag) * np.exp(1j * n * np.angle(alpha))


def make_coherent(alpha, dim, tol=TOL_TRUNCATE):
    """Coherent state |alpha><alpha|, renormalised after truncation.

    The phase-space centre is (q, p) = sqrt(2) (Re alpha, Im alpha).
    """
    alpha = complex(alpha)
    c = _coherent_amplitudes(alpha, dim)
    kept = float(np.sum(np.abs(c) ** 2))
    if kept < 1.0 - tol:
        hint = _suggest_dim(lambda d: float(np.sum(np.abs(_coherent_amplitudes(alpha, d)) ** 2)), dim, tol)
        raise TruncationError(
            f"dim={dim} keeps only {kept:.3g} of |alpha={alpha}>; try dim >= {hint}",
            suggested_dim=hint,
        )
    c = c / math.sqrt(kept)
    return FockDensityMatrix(np.outer(c, c.conj()), check=False)


def make_cat(q0, parity, dim, tol=TOL_TRUNCATE):
    """Cat state (|q0> +/- |-q0>)/norm with coherent components centred at q = +/-q0."""
    if parity not in ("even", "odd"):
        raise DomainError("parity must be 'even' or 'odd'")
    if q0 < 0:
        raise DomainError("q0 must be >= 0")
    if parity == "odd" and q0 == 0:
        raise DomainError("odd cat state is undefined at q0 = 0")
    alpha = q0 / math.sqrt(2.0)
    c = _coherent_amplitudes(alpha, dim)
    n = np.arange(dim)
    sign = 1.0 if parity == "even" else -1.0
    c = c * (1.0 + sign * (-1.0) ** n)
    norm_exact = 2.0 * (1.0 + sign * math.exp(-q0 * q0))
    kept = float(np.sum(np.abs(c) ** 2))
    if kept < (1.0 - tol) * norm_exact:
        raise TruncationError(f"dim={dim} too small for cat with q0={q0}")
    c = c / math.sqrt(kept)
    return FockDensityMatrix(np.outer(c, c.conj()), check=False)


def nbar_from_beta(beta):
    """Bose-Einstein occupation 1/(e^beta - 1)."""
    if beta <= 0:
        raise DomainError("beta must be > 0")
    return 1.0 / math.expm1(beta)


def make_thermal(nbar, dim, tol=TOL_TRUNCATE):
    """Thermal state with mean photon number ``nbar``."""
    if nbar < 0:
        raise DomainError("nbar must be >= 0")
    if nbar == 0:
        return make_fock(0, dim)
    ratio = nbar / (nbar + 1.0)
    kept = -math.expm1(dim * math.log(ratio))
    if kept < 1.0 - tol:
        need = math.ceil(math.log(tol) / math.log(ratio))
        raise TruncationError(
            f"dim={dim} keeps only {kept:.3g} of thermal(nbar={nbar}); try dim >= {need}",
            suggested_dim=need,
        )
    p = np.exp(np.arange(dim) * math.log(ratio))
    return _from_populations(p / p.sum())


def make_thermal_beta(beta, dim, tol=TOL_TRUNCATE):
    """Thermal state at inverse temperature ``beta`` (hbar*omega = 1)."""
    return make_thermal(nbar_from_beta(beta), dim, tol)


def make_diagonal(m, dim):
    """Uniform mixture of |0>, ..., |m>."""
    if m < 0:
        raise DomainError("m must be >= 0")
    if m >= dim:
        raise TruncationError(f"diagonal state of order {m + 1} needs dim > {m}", suggested_dim=m + 1)
    p = np.zeros(dim)
    p[: m + 1] = 1.0 / (m + 1)
    return _from_populations(p)


def mix(rho1, rho2, z):
    """Convex combination (1 - z) rho1 + z rho2."""
    if rho1.dim != rho2.dim:
        raise ValueError(f"dimension mismatch: {rho1.dim} vs {rho2.dim}")
    if not 0.0 <= z <= 1.0:
        raise DomainError(f"z must lie in [0, 1], got {z}")
    return FockDensityMatrix((1.0 - z) * rho1.coeffs + z * rho2.coeffs, check=False)


@dataclass(frozen=True)
class MixtureSpec:
    """Thermal/Fock mixture (1 - z) rho_beta + z |M><M|."""

    beta: float
    M: int
    z: float

    def __post_init__(self):
        if self.beta <= 0:
            raise DomainError("beta must be > 0")
        if self.M < 0:
            raise DomainError("M must be >= 0")
        if not 0.0 <= self.z <= 1.0:
            raise DomainError("z must lie in [0, 1]")


def make_mixture(spec, dim):
    return mix(make_thermal_beta(spec.beta, dim), make_fock(spec.M, dim), spec.z)


def mean_photon(rho):
    return float(np.dot(np.arange(rho.dim), rho.coeffs.diagonal().real))


def purity(rho):
    """Tr(rho^2)."""
    return float(np.sum(np.abs(rho.coeffs) ** 2))


def linear_entropy(rho):
    """1 - Tr(rho^2)."""
    return 1.0 - purity(rho)


def entropy_diagonal(rho, tol_offdiag=TOL_OFFDIAG):
    """Von Neumann entropy (k_B = 1) of a state diagonal in the Fock basis.

    Raises UnsupportedStateError for states with coherences; those would
    need a Hermitian eigensolver, which is deliberately not done here.
    """
    if not rho.is_diagonal(tol_offdiag):
        raise UnsupportedStateError("entropy_diagonal needs a Fock-diagonal state")
    p = rho.populations
    p = p[p > 0]
    return float(-np.sum(p * np.log(p)))


def fidelity(rho1, rho2):
    """Tr(rho1 rho2) / Tr(rho1^2)."""
    if rho1.dim != rho2.dim:
        raise ValueError(f"dimension mismatch: {rho1.dim} vs {rho2.dim}")
    overlap = np.sum(rho1.coeffs.T * rho2.coeffs).real
    return float(overlap / purity(rho1))


def zmax_scan(beta, M, z_grid, dim=None):
    """Grid point z maximising the entropy of (1 - z) rho_beta + z |M><M|.

    Ties go to the smaller z.
    """
    z_grid = np.asarray(z_grid, dtype=float)
    if z_grid.size == 0:
        raise ValueError("empty z grid")
    if dim is None:
        dim = max(M + 1, default_thermal_dim(nbar_from_beta(beta)))
    thermal = make_thermal_beta(beta, dim)
    fock = make_fock(M, dim)
    s = np.array([entropy_diagonal(mix(thermal, fock, z)) for z in z_grid])
    best = np.flatnonzero(s == s.max())
    return float(np.min(z_grid[best]))


def default_thermal_dim(nbar, tol=TOL_TRUNCATE, minimum=8):
    """Smallest dim keeping 1 - tol of a thermal population (with a floor)."""
    if nbar <= 0:
        return minimum
    ratio = nbar / (nbar + 1.0)
    return max(minimum, math.ceil(math.log(tol) / math.log(ratio)) + 1)


def default_coherent_dim(alpha, tol=TOL_TRUNCATE, minimum=8):
    """Smallest dim keeping 1 - tol of a coherent state's Poisson weights."""
    dim = minimum
    while float(np.sum(np.abs(_coherent_amplitudes(complex(alpha), dim)) ** 2)) < 1.0 - tol:
        dim += max(1, dim // 4)
    return dim


@dataclass(frozen=True)
class AnalyticStateSpec:
    """Closed-form Gaussian or cat state.

    kind is one of ``coherent``, ``squeezed``, ``thermal``, ``cat-even``,
    ``cat-odd``.  Only the parameters relevant to ``kind`` are read.
    """

    kind: str
    q0: float = 0.0
    p0: float = 0.0
    zeta: float = 0.0
    nbar: float = 0.0

    def __post_init__(self):
        if self.kind not in ("coherent", "squeezed", "thermal", "cat-even", "cat-odd"):
            raise DomainError(f"unknown analytic state kind {self.kind!r}")
        if self.kind == "thermal" and self.nbar < 0:
            raise DomainError("nbar must be >= 0")
        if self.kind.startswith("cat") and self.q0 < 0:
            raise DomainError("cat q0 must be >= 0")
        if self.kind == "cat-odd" and self.q0 == 0:
            raise DomainError("odd cat state is undefined at q0 = 0")

    @classmethod
    def coherent(cls, q0=0.0, p0=0.0):
        return cls("coherent", q0=q0, p0=p0)

    @classmethod
    def squeezed(cls, zeta):
        return cls("squeezed", zeta=zeta)

    @classmethod
    def thermal(cls, nbar):
        return cls("thermal", nbar=nbar)

    @classmethod
    def cat(cls, q0, parity):
        return cls(f"cat-{parity}", q0=q0)
