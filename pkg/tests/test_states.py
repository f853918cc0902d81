import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.stats import poisson

from conftest import random_state
from qroughness import (
    AnalyticStateSpec,
    DomainError,
    FockDensityMatrix,
    MixtureSpec,
    TruncationError,
    UnsupportedStateError,
    default_coherent_dim,
    default_thermal_dim,
    entropy_diagonal,
    fidelity,
    linear_entropy,
    make_cat,
    make_coherent,
    make_diagonal,
    make_fock,
    make_mixture,
    make_thermal,
    make_thermal_beta,
    mean_photon,
    mix,
    nbar_from_beta,
    purity,
    zmax_scan,
)


def exact_thermal(nbar):
    return make_thermal(nbar, default_thermal_dim(nbar, tol=1e-15), tol=1e-15)


def test_fock_examples():
    np.testing.assert_array_equal(make_fock(0, 4).coeffs, np.diag([1, 0, 0, 0]))
    np.testing.assert_array_equal(make_fock(2, 4).coeffs, np.diag([0, 0, 1, 0]))
    with pytest.raises(TruncationError) as err:
        make_fock(5, 4)
    assert err.value.suggested_dim == 6


def test_density_matrix_validation():
    with pytest.raises(ValueError):
        FockDensityMatrix([[0.5, 0.1], [0.3, 0.5]])
    with pytest.raises(ValueError):
        FockDensityMatrix(np.eye(2))
    with pytest.raises(ValueError):
        FockDensityMatrix(np.diag([1.5, -0.5]))
    rho = make_fock(1, 3)
    with pytest.raises(ValueError):
        rho.coeffs[0, 0] = 1.0


def test_coherent_poisson():
    rho = make_coherent(2.0, 30)
    np.testing.assert_allclose(rho.populations, poisson.pmf(np.arange(30), 4.0) / poisson.cdf(29, 4.0), rtol=1e-12)
    assert mean_photon(rho) == pytest.approx(4.0, abs=1e-8)
    np.testing.assert_array_equal(make_coherent(0, 4).coeffs, make_fock(0, 4).coeffs)
    assert purity(rho) == pytest.approx(1.0, abs=1e-12)


def test_coherent_truncation_hint():
    with pytest.raises(TruncationError) as err:
        make_coherent(2.0, 5)
    dim = err.value.suggested_dim
    make_coherent(2.0, dim)  # the hint must be sufficient
    assert default_coherent_dim(2.0) <= dim


def test_coherent_phase():
    alpha = 0.6 * np.exp(0.7j)
    rho = make_coherent(alpha, 20)
    # <a> = Tr(rho a) = sum_n sqrt(n+1) A[n+1, n]
    a_mean = sum(math.sqrt(n + 1) * rho.coeffs[n + 1, n] for n in range(19))
    assert a_mean == pytest.approx(alpha, abs=1e-8)


def test_thermal_examples():
    np.testing.assert_array_equal(make_thermal(0, 5).coeffs, make_fock(0, 5).coeffs)
    rho = make_thermal(1.0, 40)
    p = rho.populations
    np.testing.assert_allclose(p[1:] / p[:-1], 0.5, rtol=1e-12)
    assert mean_photon(rho) == pytest.approx(1.0, abs=1e-9)
    assert mean_photon(make_thermal(2.0, default_thermal_dim(2.0))) == pytest.approx(2.0, abs=1e-6)
    with pytest.raises(TruncationError):
        make_thermal(100, 40)
    with pytest.raises(DomainError):
        make_thermal(-1, 4)


def test_thermal_beta():
    assert nbar_from_beta(math.log(2)) == pytest.approx(1.0)
    rho = make_thermal_beta(0.4, 80)
    assert mean_photon(rho) == pytest.approx(1 / math.expm1(0.4), rel=1e-9)
    with pytest.raises(DomainError):
        nbar_from_beta(0)


def test_diagonal_examples():
    np.testing.assert_array_equal(make_diagonal(0, 4).coeffs, make_fock(0, 4).coeffs)
    np.testing.assert_allclose(make_diagonal(1, 4).populations, [0.5, 0.5, 0, 0])
    assert mean_photon(make_diagonal(8, 9)) == pytest.approx(4.0)
    with pytest.raises(TruncationError):
        make_diagonal(4, 4)


def test_cat_states():
    even = make_cat(2.0, "even", 40)
    odd = make_cat(2.0, "odd", 40)
    assert np.allclose(even.populations[1::2], 0)
    assert np.allclose(odd.populations[0::2], 0)
    assert purity(even) == pytest.approx(1.0)
    # even cat at q0 = 0 is the vacuum
    np.testing.assert_allclose(make_cat(0.0, "even", 6).coeffs, make_fock(0, 6).coeffs, atol=1e-15)
    with pytest.raises(DomainError):
        make_cat(0.0, "odd", 6)
    with pytest.raises(TruncationError):
        make_cat(4.0, "even", 6)


def test_mix_examples():
    a, b = make_thermal_beta(10.0, 12), make_fock(10, 12)
    assert mix(a, b, 0.0) == a
    np.testing.assert_allclose(mix(a, b, 1.0).coeffs, b.coeffs)
    m = mix(a, b, 0.5)
    assert np.trace(m.coeffs).real == pytest.approx(1.0, abs=1e-12)
    assert m.is_diagonal()
    with pytest.raises(DomainError):
        mix(a, b, 1.2)
    with pytest.raises(ValueError):
        mix(a, make_fock(0, 3), 0.5)


def test_mixture_spec():
    rho = make_mixture(MixtureSpec(10.0, 10, 0.25), 20)
    thermal = make_thermal_beta(10.0, 20)
    np.testing.assert_allclose(rho.populations, 0.75 * thermal.populations + 0.25 * make_fock(10, 20).populations)
    for bad in [(0.0, 1, 0.5), (1.0, -1, 0.5), (1.0, 1, 1.5)]:
        with pytest.raises(DomainError):
            MixtureSpec(*bad)


@given(st.floats(0.05, 10.0), st.integers(0, 8), st.floats(0.0, 1.0))
def test_mix_is_affine_in_mean_photon(beta, M, z):
    dim = max(M + 1, default_thermal_dim(nbar_from_beta(beta)))
    t, f = make_thermal_beta(beta, dim), make_fock(M, dim)
    assert mean_photon(mix(t, f, z)) == pytest.approx((1 - z) * mean_photon(t) + z * M, rel=1e-12, abs=1e-12)


def test_linear_entropy_examples():
    assert linear_entropy(make_fock(3, 5)) == pytest.approx(0.0, abs=1e-15)
    for nbar in (0.5, 1.0, 2.0, 5.0):
        expected = 2 * nbar / (2 * nbar + 1)
        assert linear_entropy(exact_thermal(nbar)) == pytest.approx(expected, abs=1e-9)
        assert linear_entropy(make_diagonal(int(2 * nbar), int(2 * nbar) + 1)) == pytest.approx(expected, abs=1e-12)


def test_entropy_examples():
    assert entropy_diagonal(make_fock(4, 6)) == 0.0
    for nbar in (0.5, 1.0, 3.0):
        s_t = (1 + nbar) * math.log(1 + nbar) - nbar * math.log(nbar)
        assert entropy_diagonal(exact_thermal(nbar)) == pytest.approx(s_t, rel=1e-9)
    assert entropy_diagonal(exact_thermal(1.0)) == pytest.approx(2 * math.log(2), rel=1e-9)
    for m in (1, 2, 6):
        assert entropy_diagonal(make_diagonal(m, m + 1)) == pytest.approx(math.log(m + 1), rel=1e-14)


def test_entropy_rejects_coherences():
    with pytest.raises(UnsupportedStateError):
        entropy_diagonal(make_coherent(0.5, 12))


def test_entropy_thermal_exceeds_diagonal():
    for nbar in (0.5, 1.0, 1.5, 2.0, 5.0, 10.0):
        m = int(2 * nbar)
        assert entropy_diagonal(exact_thermal(nbar)) > entropy_diagonal(make_diagonal(m, m + 1))


def test_fidelity():
    rho = make_thermal(1.0, 40)
    assert fidelity(rho, rho) == 1.0
    assert fidelity(make_fock(1, 4), make_fock(2, 4)) == 0.0
    with pytest.raises(ValueError):
        fidelity(make_fock(1, 4), make_fock(1, 5))


def test_fidelity_distance_monotone_in_z():
    dim = 48
    zs = np.linspace(0, 1, 21)
    hot = [make_mixture(MixtureSpec(0.4, 10, z), dim) for z in zs]
    cold = [make_mixture(MixtureSpec(10.0, 10, z), dim) for z in zs]
    dist = np.array([1 - fidelity(c, h) for c, h in zip(cold, hot)])
    assert np.all(np.diff(dist) < 0)
    assert dist[-1] == pytest.approx(0.0, abs=1e-14)


def test_zmax_scan():
    zs = np.linspace(0, 1, 101)
    z_cold = zmax_scan(10.0, 10, zs)
    assert 0 < z_cold < 1
    assert zmax_scan(10.0, 10, [0.5]) == 0.5
    # scan oracle: explicit maximisation over the same grid
    dim = max(11, default_thermal_dim(nbar_from_beta(0.1)))
    s = [entropy_diagonal(make_mixture(MixtureSpec(0.1, 10, z), dim)) for z in zs]
    assert zmax_scan(0.1, 10, zs) == zs[int(np.argmax(s))]
    with pytest.raises(ValueError):
        zmax_scan(1.0, 2, [])


def test_zmax_ties_go_low():
    # beta = 60 makes the thermal part the vacuum to double precision, so
    # mixing it with |1> gives equal entropy at z and 1 - z
    assert zmax_scan(60.0, 1, [0.25, 0.75], dim=8) == 0.25


def test_json_roundtrip(tmp_path, rng):
    rho = random_state(rng, 5)
    path = tmp_path / "state.json"
    rho.to_json(path)
    data = json.loads(path.read_text())
    assert data["dim"] == 5 and len(data["coeffs"]) == 25
    assert data["coeffs"][1] == [rho.coeffs[0, 1].real, rho.coeffs[0, 1].imag]
    assert FockDensityMatrix.from_json(path) == rho


def test_padded_and_offsets():
    rho = make_coherent(0.3, 10)
    big = rho.padded(14)
    assert big.dim == 14 and np.allclose(big.coeffs[:10, :10], rho.coeffs)
    assert make_thermal(1, 40).max_offset() == 0
    assert rho.max_offset() == 9


def test_analytic_spec():
    assert AnalyticStateSpec.cat(1.0, "odd").kind == "cat-odd"
    for bad in [dict(kind="cat-odd"), dict(kind="thermal", nbar=-1), dict(kind="nope")]:
        with pytest.raises(DomainError):
            AnalyticStateSpec(**bad)


@given(st.integers(2, 7), st.integers(0, 2**32 - 1))
def test_constructor_invariants_random(dim, seed):
    rho = random_state(np.random.default_rng(seed), dim)
    a = rho.coeffs
    assert np.array_equal(a, a.conj().T)
    assert abs(np.trace(a).real - 1) < 1e-10
    assert 0 < purity(rho) <= 1 + 1e-12
