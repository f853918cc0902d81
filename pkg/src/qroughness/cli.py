"""Command-line entry point: data sweeps, mixture differences, Kerr trajectories, self-validation.

Every data command writes CSV (a ``#`` metadata line, a header row, values
at 12 significant digits) or JSON with the same columns as arrays.
Identical invocations produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from fractions import Fraction

import numpy as np

from . import __version__
from . import dynamics as dyn
from . import phasespace as ps
from . import roughness as rg
from . import specfun as sf
from . import states as st
from .exceptions import ConsistencyError, DomainError, GridTooSmallError, TruncationError, UnsupportedStateError

FAMILIES = ("fock", "squeezed", "cat-even", "cat-odd", "thermal", "diagonal", "mixture", "dynamics", "entropy-surface")

# (start, stop, count) used when --from/--to/--count are omitted
DEFAULT_RANGES = {
    "fock": (0, 50, 51),
    "squeezed": (0.0, 3.0, 61),
    "cat-even": (0.0, 5.0, 51),
    "cat-odd": (0.05, 5.0, 100),
    "thermal": (0.0, 5.0, 51),
    "diagonal": (0, 10, 11),
    "mixture": (0.0, 1.0, 101),
    "entropy-surface": (0.0, 1.0, 101),
}
DEFAULT_BETAS = (0.1, 0.2, 0.4, 0.7, 1.0, 2.0, 5.0, 10.0)
DEFAULT_POINTS = 256


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# output


def _fmt(x):
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    s = f"{x:.12g}"
    return "0" if s == "-0" else s


def _json_value(x):
    if isinstance(x, (int, np.integer)):
        return int(x)
    x = float(x)
    return None if math.isnan(x) else float(_fmt(x))


def render(columns, rows, meta, fmt="csv"):
    if fmt == "csv":
        lines = ["# " + " ".join(f"{k}={v}" for k, v in meta.items()), ",".join(columns)]
        lines += [",".join(_fmt(v) for v in row) for row in rows]
        return "\n".join(lines) + "\n"
    if fmt == "json":
        data = {"meta": meta, "columns": {c: [_json_value(row[i]) for row in rows] for i, c in enumerate(columns)}}
        return json.dumps(data, indent=2) + "\n"
    raise UsageError(f"unknown format {fmt!r}")


def emit(text, out):
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {out}: {exc.strerror}") from exc


# ---------------------------------------------------------------------------
# argument helpers


def _float_list(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}") from exc


def _int_list(text):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of integers: {text!r}") from exc


def param_values(args, default):
    """Parameter axis from --from/--to/--count, falling back to ``default``."""
    start, stop, count = default
    start = start if args.start is None else args.start
    stop = stop if args.stop is None else args.stop
    count = count if args.count is None else args.count
    if count < 1:
        raise UsageError("--count must be >= 1")
    if start > stop:
        raise UsageError("--from must not exceed --to")
    if count == 1:
        return np.array([float(start)])
    return np.linspace(start, stop, count)


def _integers(values, name):
    out = np.rint(values).astype(int)
    if np.any(np.abs(values - out) > 1e-9) or np.any(out < 0):
        raise UsageError(f"{name} values must be non-negative integers")
    return out


def _grid_for(radius, args):
    points = args.grid_points or DEFAULT_POINTS
    half = args.grid_extent if args.grid_extent is not None else radius
    return ps.PhaseSpaceGrid.square(half, points)


def _mixture_dim(beta, M, args):
    if args.dim is not None:
        if args.dim <= M:
            raise UsageError(f"--dim must exceed M={M}")
        return args.dim
    return max(st.default_thermal_dim(st.nbar_from_beta(beta)), M + 1)


def _alpha(args):
    return complex(args.alpha_re, args.alpha_im)


# ---------------------------------------------------------------------------
# families


def sweep_fock(args):
    ns = _integers(param_values(args, DEFAULT_RANGES["fock"]), "n")
    rows = []
    for n in ns:
        b = rg.roughness_fock(int(n))
        rows.append((int(n), b.r, b.r2_w2, b.r2_q2, b.r2_wq))
    return ["n", "R", "r2_w2", "r2_q2", "r2_wq"], rows, {}


def sweep_squeezed(args):
    zs = param_values(args, DEFAULT_RANGES["squeezed"])
    return ["zeta", "R"], [(z, rg.roughness_squeezed(z)) for z in zs], {}


def _sweep_cat(args, parity):
    qs = param_values(args, DEFAULT_RANGES["cat-" + parity])
    if parity == "even":
        return ["q0", "R"], [(q, rg.roughness_cat(q, "even")) for q in qs], {"parity": parity}
    # the odd table carries the even curve too, so one run holds both parities
    rows = [(q, rg.roughness_cat(q, "odd"), rg.roughness_cat(q, "even")) for q in qs]
    return ["q0", "R", "R_even"], rows, {"parity": parity}


def sweep_thermal(args):
    rows = []
    for nbar in param_values(args, DEFAULT_RANGES["thermal"]):
        rho = st.make_thermal(nbar, st.default_thermal_dim(nbar))
        rows.append((nbar, rg.roughness_thermal(nbar), st.entropy_diagonal(rho), st.linear_entropy(rho)))
    return ["nbar", "R", "S", "delta"], rows, {"dim": "per-state"}


def sweep_diagonal(args):
    ms = _integers(param_values(args, DEFAULT_RANGES["diagonal"]), "m")
    cache = rg.build_tensor_cache(int(ms.max()) + 1, max_offset=0)
    rows = []
    for m in ms:
        rho = st.make_diagonal(int(m), int(m) + 1)
        nbar = m / 2.0
        thermal = st.make_thermal(nbar, st.default_thermal_dim(nbar))
        r = rg.roughness_general(rho, cache).r
        rows.append((int(m), nbar, r, st.entropy_diagonal(rho), st.linear_entropy(rho), rg.roughness_thermal(nbar), st.entropy_diagonal(thermal)))
    # thermal values at the same mean photon number ride along for comparison
    return ["m", "nbar", "R", "S", "delta", "R_thermal", "S_thermal"], rows, {}


def _z_values(args, default):
    return np.array(args.z) if args.z else param_values(args, default)


def mixture_rows(beta, M, zs, dim, grid):
    """Quantifiers of the thermal/Fock mixture along ``zs``."""
    cache = rg.build_tensor_cache(dim, max_offset=0)
    fock = st.make_fock(M, dim)
    r1 = rg.roughness_general(fock, cache).r
    n1 = ps.negativity(ps.wigner_field(fock, grid))
    rows = []
    for z in zs:
        rho = st.make_mixture(st.MixtureSpec(beta, M, float(z)), dim)
        r = rg.roughness_general(rho, cache).r
        n = ps.negativity(ps.wigner_field(rho, grid))
        rel_n = n / n1 if n1 > 0 else math.nan
        rows.append((z, r, n, r / r1, rel_n, st.entropy_diagonal(rho), st.fidelity(fock, rho), rho))
    return rows


def _mixture_radius(betas, M, dims):
    radii = [ps.husimi_radius(st.make_fock(M, max(dims)))]
    radii += [ps.husimi_radius(st.make_thermal_beta(b, d)) for b, d in zip(betas, dims)]
    return max(radii)


def sweep_mixture(args):
    betas = args.beta or [10.0]
    Ms = args.M or [10]
    zs = _z_values(args, DEFAULT_RANGES["mixture"])
    multi = len(betas) > 1 or len(Ms) > 1
    columns = ["z", "R", "N", "relR", "relN", "S", "F"]
    rows, dims, grids = [], [], []
    for beta in betas:
        for M in Ms:
            dim = _mixture_dim(beta, M, args)
            grid = _grid_for(_mixture_radius([beta], M, [dim]), args)
            dims.append(dim)
            grids.append(f"{grid.q_max:.6g}")
            for row in mixture_rows(beta, M, zs, dim, grid):
                rows.append(((beta, M) if multi else ()) + row[:-1])
    meta = {"beta": _joined(betas), "M": _joined(Ms), "dim": _joined(dims), "grid_points": args.grid_points or DEFAULT_POINTS}
    meta["grid_extent"] = ",".join(grids)
    return (["beta", "M"] + columns if multi else columns), rows, meta


def sweep_entropy_surface(args):
    betas = args.beta or list(DEFAULT_BETAS)
    M = (args.M or [10])[0]
    zs = _z_values(args, DEFAULT_RANGES["entropy-surface"])
    rows = []
    for beta in betas:
        dim = _mixture_dim(beta, M, args)
        s = [st.entropy_diagonal(st.make_mixture(st.MixtureSpec(beta, M, float(z)), dim)) for z in zs]
        zmax = st.zmax_scan(beta, M, zs, dim)
        rows += [(beta, z, sv, zmax) for z, sv in zip(zs, s)]
    return ["beta", "z", "S", "zmax"], rows, {"M": M}


def dynamics_table(args):
    alpha = _alpha(args)
    params = dyn.KerrParams(args.omega, args.lam)
    ts = param_values(args, (0.0, math.pi / params.lam, 100))
    dim = args.dim if args.dim is not None else st.default_coherent_dim(alpha)
    if args.grid_extent is None:
        grid = dyn.dynamics_grid(alpha, args.grid_points or DEFAULT_POINTS)
    else:
        grid = _grid_for(None, args)
    records = dyn.trajectory(alpha, params, ts, grid=grid, dim=dim)
    meta = {
        "alpha": f"{_fmt(alpha.real)}{alpha.imag:+.12g}j",
        "omega": _fmt(params.omega),
        "lambda": _fmt(params.lam),
        "dim": dim,
        "grid_points": grid.nq,
        "grid_extent": f"{grid.q_max:.6g}",
    }
    return ["t", "R", "D"], [(r.t, r.roughness, r.ddm) for r in records], meta


def _joined(values):
    return ",".join(_fmt(v) for v in values)


SWEEPS = {
    "fock": sweep_fock,
    "squeezed": sweep_squeezed,
    "cat-even": lambda a: _sweep_cat(a, "even"),
    "cat-odd": lambda a: _sweep_cat(a, "odd"),
    "thermal": sweep_thermal,
    "diagonal": sweep_diagonal,
    "mixture": sweep_mixture,
    "dynamics": dynamics_table,
    "entropy-surface": sweep_entropy_surface,
}


# ---------------------------------------------------------------------------
# commands


def _with_meta(command, family, meta):
    head = {"version": __version__, "command": command}
    if family:
        head["family"] = family
    head.update(meta)
    return head


def cmd_sweep(args):
    columns, rows, meta = SWEEPS[args.family](args)
    emit(render(columns, rows, _with_meta("sweep", args.family, meta), args.format), args.out)
    return 0


def cmd_dynamics(args):
    columns, rows, meta = dynamics_table(args)
    emit(render(columns, rows, _with_meta("dynamics", None, meta), args.format), args.out)
    return 0


def cmd_mixture_diff(args):
    betas = args.beta or [0.4, 10.0]
    if len(betas) != 2:
        raise UsageError("mixture-diff needs --beta HOT,COLD")
    M = (args.M or [10])[0]
    zs = _z_values(args, DEFAULT_RANGES["mixture"])
    dims = [_mixture_dim(b, M, args) for b in betas]
    dim = max(dims)
    # one grid for both temperatures, so the z = 1 rows are identical fields
    grid = _grid_for(_mixture_radius(betas, M, [dim, dim]), args)
    hot, cold = (mixture_rows(b, M, zs, dim, grid) for b in betas)
    rows = []
    for h, c in zip(hot, cold):
        rows.append((h[0], h[1] - c[1], h[2] - c[2], 1.0 - st.fidelity(c[-1], h[-1])))
    meta = {
        "beta_hot": _fmt(betas[0]),
        "beta_cold": _fmt(betas[1]),
        "M": M,
        "dim": dim,
        "grid_points": grid.nq,
        "grid_extent": f"{grid.q_max:.6g}",
    }
    emit(render(["z", "dR", "dN", "1-F"], rows, _with_meta("mixture-diff", None, meta), args.format), args.out)
    return 0


def state_quantifiers(rho, grid=None, M=0):
    """R, N, linear entropy, entropy (diagonal states only) and fidelity with |M>."""
    cache = rg.build_tensor_cache(rho.dim, max_offset=rho.max_offset())
    grid = grid or ps.auto_grid(rho, points=DEFAULT_POINTS)
    fock = st.make_fock(M, rho.dim)
    try:
        s = st.entropy_diagonal(rho)
    except UnsupportedStateError:
        s = math.nan
    return {
        "R": rg.roughness_general(rho, cache).r,
        "N": ps.negativity(ps.wigner_field(rho, grid)),
        "delta": st.linear_entropy(rho),
        "S": s,
        "F": st.fidelity(fock, rho),
    }


def cmd_state_quantifiers(args):
    if not args.state_file:
        raise UsageError("--state-file is required")
    try:
        rho = st.FockDensityMatrix.from_json(args.state_file)
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"cannot read state file: {exc}") from exc
    M = (args.M or [0])[0]
    if M >= rho.dim:
        raise UsageError(f"--M must be below the state dim {rho.dim}")
    grid = None
    if args.grid_extent is not None or args.grid_points is not None:
        grid = _grid_for(ps.husimi_radius(rho), args)
    q = state_quantifiers(rho, grid, M)
    meta = {"dim": rho.dim, "M": M}
    emit(render(list(q), [tuple(q.values())], _with_meta("state-quantifiers", None, meta), args.format), args.out)
    return 0


# ---------------------------------------------------------------------------
# validation


def _close(a, b, tol):
    return abs(a - b) <= tol


def _random_state(rng, dim, rank=2):
    vecs = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = vecs @ vecs.conj().T
    return st.FockDensityMatrix(rho / np.trace(rho).real)


def _quick_checks():
    r0 = rg.R_COHERENT
    coh = st.make_coherent(0.7 + 0.4j, 20)
    g = ps.auto_grid(coh)
    w, q = ps.wigner_field(coh, g), ps.husimi_field(coh, g)
    yield "coherent R quadrature = 1/sqrt6", lambda: _close(ps.roughness_numeric(w, q), r0, 1e-6)
    yield "coherent R spectral = 1/sqrt6", lambda: _close(ps.spectral_roughness(w), r0, 1e-6)
    yield "coherent Husimi: direct vs FFT smoothing", lambda: np.max(np.abs(ps.smooth_to_husimi(w).values - q.values)) < 1e-6
    yield "coherent negativity = 0", lambda: abs(ps.negativity(w)) < 1e-8
    yield "Wigner integrates to 1", lambda: _close(ps.integrate(w.values, g), 1.0, 1e-9)
    yield "Wigner purity = Tr rho^2", lambda: _close(ps.wigner_purity(w), st.purity(coh), 1e-8)

    def fock1_negativity():
        f = st.make_fock(1, 2)
        return _close(ps.negativity(ps.wigner_field(f, ps.PhaseSpaceGrid.centered(7.0, 0.025))), 4 * math.exp(-0.5) - 2, 1e-6)

    yield "Fock(1) negativity = 4e^-1/2 - 2", fock1_negativity

    def fock_wigner_pointwise():
        grid = ps.PhaseSpaceGrid(-3.0, 3.0, -3.0, 3.0, 8, 8)
        qq, pp = grid.mesh()
        rr = 2 * (qq**2 + pp**2)
        ok = True
        for n in (0, 1, 4):
            expected = (-1) ** n / math.pi * np.exp(-rr / 2) * sf.laguerre(n, rr)
            ok &= np.allclose(ps.wigner_field(st.make_fock(n, n + 1), grid).values, expected, atol=1e-13)
        return ok

    yield "Fock Wigner functions pointwise", fock_wigner_pointwise
    yield "Fock cross term three-way, n <= 40", lambda: all(rg.fock_cross_term(n) > 0 for n in range(41))

    def fock_shape():
        b = [rg.roughness_fock(n) for n in range(41)]
        ordered = all(x.r2_w2 == 1.0 and 0 < x.r2_q2 < x.r2_wq for x in b)
        return ordered and all(b[i].r < b[i + 1].r for i in range(40))

    yield "Fock ordering and monotone R", fock_shape
    yield "Fock(200) R in (0.95, 1)", lambda: 0.95 < rg.roughness_fock(200).r < 1.0

    cache = rg.build_tensor_cache(24)

    def fock_general():
        return all(_close(rg.roughness_general(st.make_fock(n, 12), cache).r, rg.roughness_fock(n).r, 1e-9) for n in range(12))

    yield "Fock R: general route vs closed form", fock_general
    for nbar in (0.25, 1.0):
        yield f"thermal nbar={nbar}: general vs closed form", (
            lambda nbar=nbar: _close(
                rg.roughness_general(st.make_thermal(nbar, 24, tol=1e-4), cache).r, rg.roughness_thermal(nbar), 1e-4
            )
        )
    for parity in ("even", "odd"):
        yield f"cat {parity} q0=1: general vs closed form", (
            lambda parity=parity: _close(rg.roughness_general(st.make_cat(1.0, parity, 24), cache).r, rg.roughness_cat(1.0, parity), 1e-8)
        )

    def random_general_vs_quadrature():
        rng = np.random.default_rng(7)
        for _ in range(3):
            rho = _random_state(rng, 5)
            grid = ps.auto_grid(rho)
            num = ps.roughness_numeric(ps.wigner_field(rho, grid), ps.husimi_field(rho, grid))
            if not _close(rg.roughness_general(rho, cache).r, num, 1e-6):
                return False
        return True

    yield "random states: general vs quadrature", random_general_vs_quadrature
    yield "squeezed R(0) = 1/sqrt6", lambda: _close(rg.roughness_squeezed(0.0), r0, 1e-12)
    yield "squeezed symmetric in zeta", lambda: all(rg.roughness_squeezed(z) == rg.roughness_squeezed(-z) for z in (0.3, 1.0, 2.5))

    def squeezed_spectral():
        spec = st.AnalyticStateSpec.squeezed(1.0)
        w = ps.analytic_field(spec, "wigner", ps.analytic_grid(spec))
        return _close(ps.spectral_roughness(w), rg.roughness_squeezed(1.0), 1e-6)

    yield "squeezed closed form vs spectral", squeezed_spectral
    yield "cat limits sqrt(7/12)", lambda: all(_close(rg.roughness_cat(10.0, p), math.sqrt(7 / 12), 1e-6) for p in ("even", "odd"))
    yield "odd cat rougher than even", lambda: all(rg.roughness_cat(q, "odd") > rg.roughness_cat(q, "even") for q in (0.5, 1, 2, 4))
    yield "Stirling identity n <= 30", lambda: all(
        sf.stirling_identity_lhs(n, j) == math.factorial(n - j) * math.comb(n, j) ** 2 for n in range(31) for j in range(n + 1)
    )

    def binom_bounds():
        for n in range(1, 101):
            lo, hi = sf.central_binom_bounds(n)
            if not lo <= sf.central_binom_scaled(n) <= hi:
                return False
        return True

    yield "central binomial bounds n <= 100", binom_bounds

    def bn_monotone():
        b = [sf.bn_ratio_exact(n) for n in range(60)]
        tail = all(1 < b[i + 1] < b[i] for i in range(1, 59))
        return b[0] == 1 and b[1] == Fraction(10, 9) and tail

    yield "B_n decreasing in (1, 10/9] with B_0 = 1", bn_monotone
    yield "Laguerre recurrence vs scipy", lambda: _laguerre_vs_scipy()
    yield "log factorial vs lgamma", lambda: all(_close(sf.log_factorial(n), math.lgamma(n + 1), 1e-12 * max(1, math.lgamma(n + 1))) for n in (0, 5, 100, 2000))
    yield "linear entropy thermal = diagonal", lambda: all(
        _close(st.linear_entropy(_exact_thermal(nb)), st.linear_entropy(st.make_diagonal(int(2 * nb), int(2 * nb) + 1)), 1e-9)
        for nb in (0.5, 1, 2, 5)
    )
    yield "entropy thermal > diagonal", lambda: all(
        st.entropy_diagonal(st.make_thermal(nb, st.default_thermal_dim(nb))) > st.entropy_diagonal(st.make_diagonal(int(2 * nb), int(2 * nb) + 1))
        for nb in (0.5, 1, 2, 5)
    )

    def bounds_random():
        rng = np.random.default_rng(11)
        for _ in range(10):
            b = rg.roughness_general(_random_state(rng, int(rng.integers(2, 9)), rank=int(rng.integers(1, 4))), cache)
            if not (0 <= b.r <= 1 + 1e-9 and b.r2_wq >= 0):
                return False
        return True

    yield "0 <= R <= 1 on random states", bounds_random

    params = dyn.KerrParams(0.0, 1.0)

    def kerr_revival():
        rho = st.make_coherent(1.2, 40)
        back = dyn.kerr_evolve(rho, params, math.pi)
        return np.allclose(back.coeffs, st.make_coherent(-1.2, 40).coeffs, atol=1e-12)

    yield "Kerr revival at t = pi/lambda", kerr_revival

    def kerr_two_routes():
        grid = dyn.dynamics_grid(0.8, 64)
        rho = st.make_coherent(0.8, 40, tol=1e-15)
        a = dyn.kerr_husimi_field(0.8, params, 0.7, grid).values
        b = ps.husimi_field(dyn.kerr_evolve(rho, params, 0.7), grid).values
        return np.max(np.abs(a - b)) < 1e-8

    yield "Kerr Husimi: series vs evolved matrix", kerr_two_routes

    def ddm_zero():
        grid = dyn.dynamics_grid(2.0, 128)
        return abs(dyn.ddm(dyn.classical_liouville_field(2.0, params, 0.0, grid), dyn.kerr_husimi_field(2.0, params, 0.0, grid))) < 1e-6

    yield "DDM(0) = 0", ddm_zero


def _exact_thermal(nbar, tol=1e-14):
    return st.make_thermal(nbar, st.default_thermal_dim(nbar, tol=tol), tol=tol)


def _laguerre_vs_scipy():
    from scipy.special import eval_genlaguerre

    x = np.linspace(0, 30, 61)
    return all(
        np.allclose(sf.assoc_laguerre(n, k, x), eval_genlaguerre(n, k, x), rtol=1e-9, atol=1e-9) for n in (0, 1, 5, 20) for k in (0, 1, 3)
    )


def _full_checks():
    cache = rg.build_tensor_cache(8)

    def random_suite():
        rng = np.random.default_rng(2024)
        for _ in range(20):
            rho = _random_state(rng, int(rng.integers(2, 9)), rank=int(rng.integers(1, 4)))
            grid = ps.auto_grid(rho)
            num = ps.roughness_numeric(ps.wigner_field(rho, grid), ps.husimi_field(rho, grid))
            if not _close(rg.roughness_general(rho, cache).r, num, 1e-5):
                return False
        return True

    yield "20 random states dim <= 8: general vs quadrature", random_suite

    def mixture_shape():
        zs = np.linspace(0, 1, 21)
        grid = ps.PhaseSpaceGrid.square(9.0, 128)
        rows = mixture_rows(10.0, 10, zs, 40, grid)
        r = [row[1] for row in rows]
        return min(r[1:7]) < r[0] < r[-1]

    yield "mixture beta=10: R dips then rises", mixture_shape

    def dynamics_shape():
        recs = dyn.trajectory(2.0, dyn.KerrParams(0.0, 1.0), np.linspace(0, math.pi / 2, 11), grid=dyn.dynamics_grid(2.0, 128))
        return all(r.roughness <= 1 + 1e-9 for r in recs) and recs[5].roughness > 0.8

    yield "Kerr alpha=2: R saturates by pi/4", dynamics_shape


def run_validate(level="quick", stream=None):
    """Run the self-checks; returns (n_passed, n_failed)."""
    stream = stream or sys.stdout
    checks = list(_quick_checks())
    if level == "full":
        checks += list(_full_checks())
    passed = failed = 0
    for name, fn in checks:
        t0 = time.perf_counter()
        try:
            ok, note = bool(fn()), ""
        except (ConsistencyError, DomainError, GridTooSmallError, TruncationError, ArithmeticError, ValueError) as exc:
            ok, note = False, f" ({type(exc).__name__}: {exc})"
        dt = time.perf_counter() - t0
        stream.write(f"{'PASS' if ok else 'FAIL'}  {name}  [{dt:.2f}s]{note}\n")
        passed += ok
        failed += not ok
    stream.write(f"{passed} passed, {failed} failed\n")
    return passed, failed


def cmd_validate(args):
    _, failed = run_validate(args.level)
    return 1 if failed else 0


# ---------------------------------------------------------------------------
# parser


def _add_common(p, data=True):
    p.add_argument("--from", dest="start", type=float)
    p.add_argument("--to", dest="stop", type=float)
    p.add_argument("--count", type=int)
    p.add_argument("--beta", type=_float_list, help="comma-separated inverse temperatures")
    p.add_argument("--M", type=_int_list, help="comma-separated Fock indices")
    p.add_argument("--z", type=_float_list, help="explicit comma-separated z values")
    p.add_argument("--alpha-re", type=float, default=2.0)
    p.add_argument("--alpha-im", type=float, default=0.0)
    p.add_argument("--omega", type=float, default=0.0)
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--dim", type=int)
    p.add_argument("--grid-extent", type=float, help="grid half-width")
    p.add_argument("--grid-points", type=int, help="grid points per axis")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", help="output path (stdout if omitted)")


def build_parser():
    parser = argparse.ArgumentParser(prog="qroughness", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="tabulate a state family")
    p.add_argument("--family", choices=FAMILIES, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("mixture-diff", help="R, N and fidelity differences between two temperatures")
    _add_common(p)
    p.set_defaults(func=cmd_mixture_diff)

    p = sub.add_parser("dynamics", help="Kerr trajectory t, R, D")
    _add_common(p)
    p.set_defaults(func=cmd_dynamics)

    p = sub.add_parser("state-quantifiers", help="R, N, delta, S, F of a stored density matrix")
    p.add_argument("--state-file", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_state_quantifiers)

    p = sub.add_parser("validate", help="run the built-in cross-checks")
    p.add_argument("level", nargs="?", choices=("quick", "full"), default="quick")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, DomainError, GridTooSmallError, TruncationError, UnsupportedStateError) as exc:
        sys.stderr.write(f"qroughness: error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
