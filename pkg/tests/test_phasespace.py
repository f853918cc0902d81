import csv
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate as sci_integrate
from scipy.special import eval_genlaguerre, eval_hermite, roots_laguerre

from conftest import random_state
from qroughness import (
    AnalyticStateSpec,
    DomainError,
    GridTooSmallError,
    PhaseSpaceField,
    PhaseSpaceGrid,
    R_COHERENT,
    abs_integral,
    analytic_field,
    analytic_grid,
    auto_grid,
    husimi_field,
    integrate,
    inverse_spectral_transform,
    make_cat,
    make_coherent,
    make_fock,
    make_thermal,
    negativity,
    purity,
    roughness_numeric,
    roughness_squeezed,
    smooth_to_husimi,
    spectral_roughness,
    spectral_transform,
    upsample,
    wigner_field,
    wigner_purity,
)

# --- oracles ------------------------------------------------------------------


def hermite_function(n, x):
    return eval_hermite(n, x) * np.exp(-0.5 * x * x) / math.sqrt(2.0**n * math.factorial(n) * math.sqrt(math.pi))


def wigner_position_oracle(rho, q, p, half=9.0, points=4001):
    """W(q, p) = (1/pi) int <q + y|rho|q - y> e^{-2ipy} dy by dense trapezoid."""
    y = np.linspace(-half, half, points)
    plus = np.array([hermite_function(n, q + y) for n in range(rho.dim)])
    minus = np.array([hermite_function(n, q - y) for n in range(rho.dim)])
    kernel = np.einsum("ny,nm,my->y", plus, rho.coeffs, minus)
    return float(np.real(np.trapezoid(kernel * np.exp(-2j * p * y), y))) / math.pi


def fock_husimi(n, qq, pp):
    b2 = 0.5 * (qq**2 + pp**2)
    return np.exp(-b2) * b2**n / (2 * math.pi * math.factorial(n))


def radial_negativity(populations):
    """N of a Fock-diagonal state from 1D quadrature in x = 2 r^2 between sign changes.

    int |W| dq dp = (1/2) int_0^inf |sum_n p_n (-1)^n e^{-x/2} L_n(x)| dx.
    """

    def w(x):
        return sum(p * (-1) ** n * np.exp(-0.5 * x) * eval_genlaguerre(n, 0, x) for n, p in enumerate(populations))

    xs = np.linspace(0, 80, 80001)
    vals = w(xs)
    cuts = list(xs[np.flatnonzero(np.sign(vals[:-1]) != np.sign(vals[1:]))]) + [80.0]
    total, lo = 0.0, 0.0
    for hi in cuts:
        seg, _ = sci_integrate.quad(lambda x: abs(w(x)), lo, hi, epsabs=1e-14, epsrel=1e-13, limit=200)
        total += seg
        lo = hi
    return 0.5 * total - 1.0


# --- grids --------------------------------------------------------------------


def test_grid_validation():
    with pytest.raises(DomainError):
        PhaseSpaceGrid(0, 1, 0, 1, 7, 8)
    with pytest.raises(DomainError):
        PhaseSpaceGrid(1, 0, 0, 1, 8, 8)
    with pytest.raises(DomainError):
        PhaseSpaceGrid(0, 1, 0, 1, 4, 4)
    g = PhaseSpaceGrid.centered(3.0, 0.5)
    assert g.nq % 2 == 0 and 0.0 in g.q
    s = PhaseSpaceGrid.square(5.0, 64)
    assert s.nq == s.np == 64 and s.q[32] == 0.0


# --- Wigner -------------------------------------------------------------------


def test_wigner_examples():
    g = PhaseSpaceGrid.centered(6.0, 0.1)
    w0 = wigner_field(make_fock(0, 3), g)
    i0 = int(np.argmin(np.abs(g.q)))
    assert w0.values[i0, i0] == pytest.approx(1 / math.pi, rel=1e-14)
    w1 = wigner_field(make_fock(1, 3), g)
    assert w1.values[i0, i0] == pytest.approx(-1 / math.pi, rel=1e-14)
    for w in (w0, w1):
        assert w.integral() == pytest.approx(1.0, abs=1e-6)


def test_wigner_matches_position_integral(rng):
    rho = random_state(rng, 6)
    pts = [(0.0, 0.0), (0.7, -1.3), (-2.1, 0.4), (1.5, 1.5)]
    grid = PhaseSpaceGrid(-2.1, 1.4, -1.3, 2.2, 8, 8)  # dq = dp = 0.5
    field = wigner_field(rho, grid)
    for q, p in pts:
        i = int(np.argmin(np.abs(grid.q - q)))
        j = int(np.argmin(np.abs(grid.p - p)))
        expected = wigner_position_oracle(rho, grid.q[i], grid.p[j])
        assert field.values[i, j] == pytest.approx(expected, abs=1e-12)


def test_wigner_coherent_centre():
    alpha = 1.0 - 0.5j
    g = PhaseSpaceGrid.centered(8.0, 0.05)
    w = wigner_field(make_coherent(alpha, 30), g)
    i, j = np.unravel_index(np.argmax(w.values), w.values.shape)
    assert g.q[i] == pytest.approx(math.sqrt(2) * alpha.real, abs=0.05)
    assert g.p[j] == pytest.approx(math.sqrt(2) * alpha.imag, abs=0.05)


@settings(max_examples=15)
@given(st.integers(2, 9), st.integers(0, 2**32 - 1))
def test_wigner_bounds(dim, seed):
    rho = random_state(np.random.default_rng(seed), dim)
    g = auto_grid(rho, spacing=0.1)
    w = wigner_field(rho, g)
    assert np.max(np.abs(w.values)) <= 1 / math.pi + 1e-9
    assert wigner_purity(w) <= 1 + 1e-6
    assert wigner_purity(w) == pytest.approx(purity(rho), abs=1e-6)
    assert w.integral() == pytest.approx(1.0, abs=1e-6)


def test_wigner_purity_examples():
    g = PhaseSpaceGrid.centered(10.0, 0.05)
    assert wigner_purity(wigner_field(make_fock(4, 5), g)) == pytest.approx(1.0, abs=1e-6)
    assert wigner_purity(wigner_field(make_fock(0, 1), g)) == pytest.approx(1.0, abs=1e-6)
    assert wigner_purity(wigner_field(make_thermal(1.0, 60), g)) == pytest.approx(1 / 3, abs=1e-6)


# --- Husimi -------------------------------------------------------------------


def test_husimi_examples():
    g = PhaseSpaceGrid.centered(10.0, 0.1)
    qq, pp = g.mesh()
    q0 = husimi_field(make_fock(0, 2), g)
    i0 = int(np.argmin(np.abs(g.q)))
    assert q0.values[i0, i0] == pytest.approx(1 / (2 * math.pi), rel=1e-14)
    for n in (1, 3, 7):
        qn = husimi_field(make_fock(n, n + 1), g)
        np.testing.assert_allclose(qn.values, fock_husimi(n, qq, pp), atol=1e-12)
        assert qn.integral() == pytest.approx(1.0, abs=1e-6)


def test_husimi_cat_matches_closed_form():
    spec = AnalyticStateSpec.cat(1.5, "odd")
    g = analytic_grid(spec, spacing=0.1)
    direct = husimi_field(make_cat(1.5, "odd", 40, tol=1e-15), g)
    np.testing.assert_allclose(direct.values, analytic_field(spec, "husimi", g).values, atol=1e-12)


def test_husimi_nonnegative_floor():
    g = PhaseSpaceGrid.square(4.0, 16)
    with pytest.raises(Exception):
        PhaseSpaceField(g, -np.ones((16, 16)), "husimi")


# --- analytic fields ----------------------------------------------------------


def test_analytic_reductions():
    g = PhaseSpaceGrid.centered(8.0, 0.1)
    vac = analytic_field(AnalyticStateSpec.coherent(), "wigner", g).values
    for spec in (AnalyticStateSpec.squeezed(0.0), AnalyticStateSpec.thermal(0.0), AnalyticStateSpec.cat(0.0, "even")):
        np.testing.assert_allclose(analytic_field(spec, "wigner", g).values, vac, atol=1e-15)
    with pytest.raises(DomainError):
        analytic_field(AnalyticStateSpec.coherent(), "classical", g)


def test_analytic_matches_fock_basis():
    g = PhaseSpaceGrid.centered(9.0, 0.1)
    cases = [
        (AnalyticStateSpec.thermal(1.0), make_thermal(1.0, 60, tol=1e-15)),
        (AnalyticStateSpec.cat(2.0, "even"), make_cat(2.0, "even", 50, tol=1e-15)),
        (AnalyticStateSpec.cat(2.0, "odd"), make_cat(2.0, "odd", 50, tol=1e-15)),
        (AnalyticStateSpec.coherent(1.0, -0.5), make_coherent((1.0 - 0.5j) / math.sqrt(2), 40, tol=1e-15)),
    ]
    for spec, rho in cases:
        for which, fn in (("wigner", wigner_field), ("husimi", husimi_field)):
            np.testing.assert_allclose(analytic_field(spec, which, g).values, fn(rho, g).values, atol=1e-12)


# --- spectral route -----------------------------------------------------------


def test_spectral_round_trip(rng):
    rho = random_state(rng, 5)
    w = wigner_field(rho, auto_grid(rho, spacing=0.1))
    back = inverse_spectral_transform(spectral_transform(w))
    err = np.linalg.norm(back.values - w.values) / np.linalg.norm(w.values)
    assert err < 1e-10


def test_smooth_to_husimi_examples():
    g = PhaseSpaceGrid.centered(9.0, 0.05)
    qq, pp = g.mesh()
    vac = smooth_to_husimi(wigner_field(make_fock(0, 1), g))
    np.testing.assert_allclose(vac.values, fock_husimi(0, qq, pp), atol=1e-8)
    f3 = smooth_to_husimi(wigner_field(make_fock(3, 4), g))
    np.testing.assert_allclose(f3.values, fock_husimi(3, qq, pp), atol=1e-6)
    spec = AnalyticStateSpec.thermal(1.0)
    g = analytic_grid(spec)
    th = smooth_to_husimi(analytic_field(spec, "wigner", g))
    np.testing.assert_allclose(th.values, analytic_field(spec, "husimi", g).values, atol=1e-8)


@settings(max_examples=8)
@given(st.integers(2, 12), st.integers(0, 2**32 - 1))
def test_two_husimi_routes(dim, seed):
    rho = random_state(np.random.default_rng(seed), dim)
    g = auto_grid(rho, spacing=0.1)
    direct = husimi_field(rho, g)
    smoothed = smooth_to_husimi(wigner_field(rho, g))
    assert np.max(np.abs(direct.values - smoothed.values)) < 1e-6


def test_smoothing_detects_small_grid():
    g = PhaseSpaceGrid.centered(3.0, 0.1)
    w = wigner_field(make_fock(0, 1), g)
    with pytest.raises(GridTooSmallError):
        smooth_to_husimi(w)
    with pytest.raises(GridTooSmallError):
        spectral_roughness(w)
    with pytest.raises(DomainError):
        smooth_to_husimi(husimi_field(make_fock(0, 1), g))


# --- roughness by quadrature ---------------------------------------------------


def test_roughness_numeric_examples():
    g = PhaseSpaceGrid.centered(9.0, 0.05)
    for n, expected in ((0, R_COHERENT), (1, math.sqrt(55 / 108))):
        rho = make_fock(n, n + 1)
        w, q = wigner_field(rho, g), husimi_field(rho, g)
        assert roughness_numeric(w, q) == pytest.approx(expected, abs=1e-6)
        assert spectral_roughness(w) == pytest.approx(expected, abs=1e-6)
    w = wigner_field(make_fock(0, 1), g)
    same = PhaseSpaceField(g, w.values, "husimi")
    assert roughness_numeric(w, same) == 0.0


def test_roughness_translation_invariant():
    for q0, p0 in ((3, 0), (0, 3), (2, -2)):
        rho = make_coherent(complex(q0, p0) / math.sqrt(2), 40)
        g = auto_grid(rho)
        assert roughness_numeric(wigner_field(rho, g), husimi_field(rho, g)) == pytest.approx(R_COHERENT, abs=1e-6)


def test_roughness_numeric_rejects_mismatch():
    g1, g2 = PhaseSpaceGrid.centered(8.0, 0.1), PhaseSpaceGrid.centered(8.0, 0.2)
    rho = make_fock(0, 1)
    with pytest.raises(DomainError):
        roughness_numeric(wigner_field(rho, g1), husimi_field(rho, g2))
    with pytest.raises(DomainError):
        roughness_numeric(husimi_field(rho, g1), husimi_field(rho, g1))


def test_spectral_squeezed():
    for zeta in (0.5, 1.0, 2.0):
        spec = AnalyticStateSpec.squeezed(zeta)
        w = analytic_field(spec, "wigner", analytic_grid(spec))
        assert spectral_roughness(w) == pytest.approx(roughness_squeezed(zeta), abs=1e-6)


@settings(max_examples=10)
@given(st.integers(2, 8), st.integers(0, 2**32 - 1))
def test_spectral_matches_quadrature(dim, seed):
    rho = random_state(np.random.default_rng(seed), dim)
    g = auto_grid(rho)
    w = wigner_field(rho, g)
    num = roughness_numeric(w, husimi_field(rho, g))
    assert spectral_roughness(w) == pytest.approx(num, rel=1e-6)


# --- negativity ---------------------------------------------------------------


def test_negativity_gaussians_vanish():
    specs = [AnalyticStateSpec.coherent(1.0, 2.0), AnalyticStateSpec.squeezed(1.0), AnalyticStateSpec.thermal(2.0)]
    for spec in specs:
        w = analytic_field(spec, "wigner", analytic_grid(spec))
        assert abs(negativity(w)) < 1e-8


def test_negativity_radial_oracle_fock():
    assert radial_negativity([0, 1]) == pytest.approx(4 * math.exp(-0.5) - 2, abs=1e-10)
    for n in (1, 2, 3):
        rho = make_fock(n, n + 1)
        w = wigner_field(rho, auto_grid(rho, spacing=0.025))
        assert negativity(w) == pytest.approx(radial_negativity(rho.populations), abs=1e-6)


def test_negativity_radial_oracle_mixture():
    p = np.array([0.3, 0.0, 0.5, 0.2])
    from qroughness import FockDensityMatrix

    rho = FockDensityMatrix(np.diag(p))
    w = wigner_field(rho, auto_grid(rho, spacing=0.05))
    assert negativity(w) == pytest.approx(radial_negativity(p), abs=1e-5)


def test_negativity_requires_decay():
    g = PhaseSpaceGrid.centered(3.0, 0.1)
    with pytest.raises(GridTooSmallError):
        negativity(wigner_field(make_fock(1, 2), g))


def test_abs_integral_positive_field_is_integral():
    g = PhaseSpaceGrid.centered(8.0, 0.1)
    w = wigner_field(make_thermal(0.5, 40), g)
    assert abs_integral(w) == pytest.approx(w.integral(), abs=1e-12)


def test_upsample_is_band_limited_interpolation():
    g = PhaseSpaceGrid.centered(8.0, 0.2)
    w = wigner_field(make_fock(2, 3), g)
    fine = upsample(w, 4)
    exact = wigner_field(make_fock(2, 3), fine.grid)
    np.testing.assert_allclose(fine.values, exact.values, atol=1e-10)
    with pytest.raises(DomainError):
        upsample(w, 3)


# --- export -------------------------------------------------------------------


def test_field_export(tmp_path):
    g = PhaseSpaceGrid.square(4.0, 8)
    w = wigner_field(make_fock(1, 2), g)
    w.to_csv(tmp_path / "w.csv")
    rows = list(csv.reader(open(tmp_path / "w.csv")))
    assert rows[0] == ["q", "p", "value"]
    assert len(rows) == 65
    assert float(rows[2][0]) == g.q[0] and float(rows[2][1]) == pytest.approx(g.p[1])
    data = json.loads(w.to_json())
    assert data["grid"]["nq"] == 8 and len(data["values"]) == 64
    assert data["values"][1] == pytest.approx(w.values[0, 1])


def test_integrate_trapezoid():
    g = PhaseSpaceGrid(0.0, 1.0, 0.0, 2.0, 8, 8)
    qq, pp = g.mesh()
    assert integrate(qq + pp, g) == pytest.approx(1.0 * 2.0 * (0.5 + 1.0))
