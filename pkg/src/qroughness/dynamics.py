"""Kerr oscillator: exact quantum evolution, classical Liouville flow, and DDM.

The quantum evolution multiplies A[n, m] by exp(i t (m - n)(omega +
lam (n + m))), i.e. level energies omega n + lam n^2 with hbar = 1.  The
classical flow rotates each phase-space point by the angle
t (omega + lam (x^2 + p^2)), which is the same frequency to leading
order in n, so at t = 0 the classical density and the Husimi function
coincide.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError, GridTooSmallError
from .phasespace import CLASSICAL, HUSIMI, PhaseSpaceField, PhaseSpaceGrid, integrate
from .roughness import build_tensor_cache, roughness_general
from .states import FockDensityMatrix, default_coherent_dim, make_coherent

__all__ = [
    "KerrParams",
    "TrajectoryRecord",
    "classical_liouville_field",
    "ddm",
    "dynamics_grid",
    "edge_mass",
    "kerr_evolve",
    "kerr_husimi_field",
    "rd_correlation",
    "trajectory",
    "write_trajectory_csv",
]

MASS_TOL = 1e-10


@dataclass(frozen=True)
class KerrParams:
    """H = omega n + lam n^2 (hbar = 1)."""

    omega: float = 0.0
    lam: float = 1.0

    def __post_init__(self):
        if not self.lam > 0:
            raise DomainError("lam must be > 0")


@dataclass(frozen=True)
class TrajectoryRecord:
    t: float
    roughness: float
    ddm: float


def kerr_evolve(rho, params, t):
    n = np.arange(rho.dim)
    nn, mm = np.meshgrid(n, n, indexing="ij")
    phase = np.exp(1j * t * (mm - nn) * (params.omega + params.lam * (nn + mm)))
    np.fill_diagonal(phase, 1.0)
    return FockDensityMatrix(rho.coeffs * phase, check=False)


def _beta(grid):
    qq, pp = grid.mesh()
    return (qq + 1j * pp) / math.sqrt(2.0)


def classical_liouville_field(alpha0, params, t, grid):
    """Liouville-evolved density that starts as the Husimi function of |alpha0>."""
    beta = _beta(grid)
    angle = t * (params.omega + 2.0 * params.lam * np.abs(beta) ** 2)
    values = np.exp(-np.abs(alpha0 - beta * np.exp(1j * angle)) ** 2) / (2.0 * math.pi)
    return PhaseSpaceField(grid, values, CLASSICAL)


def _poisson_terms(mu, tol=1e-10):
    """Number of Poisson(mu) terms needed to hold 1 - tol of the mass."""
    n, term, total = 0, math.exp(-mu), 0.0
    while True:
        total += term
        n += 1
        if total >= 1.0 - tol:
            return n
        term *= mu / n


def kerr_husimi_field(alpha0, params, t, grid, n_terms=None):
    """Husimi function of the Kerr-evolved coherent state |alpha0>.

    Q(beta) = |sum_n (beta* alpha0)^n / n! e^{-i t (omega n + lam n^2)}|^2
    e^{-|beta|^2 - |alpha0|^2} / (2 pi).  The Gaussian prefactor is folded
    into the first term so every partial term stays below one.
    """
    alpha0 = complex(alpha0)
    beta = _beta(grid)
    z = np.conj(beta) * alpha0
    needed = _poisson_terms(abs(alpha0) ** 2)
    if n_terms is None:
        n_terms = max(needed, math.ceil(math.e * float(np.max(np.abs(z)))) + 30)
    elif n_terms < needed:
        raise DomainError(f"n_terms={n_terms} misses Poisson mass; need at least {needed}")
    term = np.exp(-0.5 * (np.abs(beta) ** 2 + abs(alpha0) ** 2)).astype(complex)
    acc = term.copy()
    for n in range(1, n_terms):
        term = term * z / n
        acc += term * np.exp(-1j * t * (params.omega * n + params.lam * n * n))
    return PhaseSpaceField(grid, np.abs(acc) ** 2 / (2.0 * math.pi), HUSIMI)


def edge_mass(field):
    """Integral of |f| over the outermost ring of grid cells."""
    v = np.abs(field.values)
    ring = v[0].sum() + v[-1].sum() + v[1:-1, 0].sum() + v[1:-1, -1].sum()
    return float(ring) * field.grid.dq * field.grid.dp


def ddm(f, q, mass_tol=MASS_TOL):
    """Dynamic distance sqrt(pi int |f - Q|^2) over the grid window."""
    if f.kind != CLASSICAL or q.kind != HUSIMI:
        raise DomainError("ddm expects a classical field and a Husimi field")
    if f.grid != q.grid:
        raise DomainError("fields live on different grids")
    for field in (f, q):
        m = edge_mass(field)
        if m > mass_tol:
            raise GridTooSmallError(f"{field.kind} field has edge mass {m:.3g}")
    d = f.values - q.values
    return math.sqrt(math.pi * integrate(d * d, f.grid))


def dynamics_grid(alpha0, points=256, log_tol=math.log(1e-13)):
    """Square grid holding the coherent-state annulus at every time."""
    half = math.sqrt(2.0) * abs(alpha0) + math.sqrt(-2.0 * log_tol) + 0.5
    return PhaseSpaceGrid.square(half, points)


def trajectory(alpha0, params, times, grid=None, dim=None, cache=None):
    """Roughness and DDM of the Kerr-evolved coherent state at each time."""
    if grid is None:
        grid = dynamics_grid(alpha0)
    if dim is None:
        dim = default_coherent_dim(alpha0)
    rho0 = make_coherent(alpha0, dim)
    if cache is None or cache.dim < dim or cache.max_offset < dim - 1:
        cache = build_tensor_cache(dim)
    records = []
    for t in times:
        r = roughness_general(kerr_evolve(rho0, params, t), cache).r
        d = ddm(classical_liouville_field(alpha0, params, t, grid), kerr_husimi_field(alpha0, params, t, grid))
        records.append(TrajectoryRecord(float(t), r, d))
    return records


def rd_correlation(records, t_min=0.0):
    """Pearson correlation of R(t) and D(t) for t >= t_min.

    A diagnostic for the anti-correlation seen in the long-time regime;
    not asserted anywhere.
    """
    sel = [(rec.roughness, rec.ddm) for rec in records if rec.t >= t_min]
    if len(sel) < 3:
        raise ValueError("need at least three records")
    r, d = np.array(sel).T
    return float(np.corrcoef(r, d)[0, 1])


def write_trajectory_csv(records, path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "R", "D"])
        for rec in records:
            writer.writerow([f"{rec.t:.12g}", f"{rec.roughness:.12g}", f"{rec.ddm:.12g}"])
