import numpy as np
import pytest
import scipy.special as sps
from hypothesis import given, settings, strategies as st

from eddybie import specfun

complex_args = st.complex_numbers(min_magnitude=0.1, max_magnitude=30.0,
                                  allow_nan=False, allow_infinity=False)


def test_phi_k_matches_formula():
    r = np.array([0.3, 1.0, 2.5])
    k = 1 + 1j
    want = np.exp(1j * k * r) / (2.0 * np.pi * r)
    assert np.allclose(specfun.phi_k(k, r), want, rtol=1e-14)


def test_hankel1_matches_scipy():
    x = np.linspace(0.1, 20.0, 37)
    assert np.allclose(specfun.hankel1(0, x), sps.hankel1(0, x), rtol=1e-12)
    assert np.allclose(specfun.hankel1(1, x), sps.hankel1(1, x), rtol=1e-12)


@given(z=complex_args)
@settings(max_examples=60, deadline=None)
def test_spherical_j1_closed_form(z):
    # j_1(z) = sin z / z^2 - cos z / z, exact for all complex z
    want = np.sin(z) / z ** 2 - np.cos(z) / z
    got = specfun.spherical_bessel_j(1, z)
    assert abs(got - want) <= 1e-9 * max(1.0, abs(want))


@given(z=complex_args)
@settings(max_examples=60, deadline=None)
def test_spherical_h1_closed_form(z):
    # h_1(z) = -(e^{iz}/z)(1 + i/z); h = j + iy cancels like e^{-|Im z|}
    # against components of size e^{|Im z|}, hence the tolerance factor
    want = -np.exp(1j * z) / z * (1.0 + 1j / z)
    got = specfun.spherical_hankel1(1, z)
    tol = 1e-9 * max(1.0, abs(want)) * np.exp(abs(z.imag))
    assert abs(got - want) <= tol


def test_riccati_definitions():
    for z in (0.7, 2.0 + 1.5j, 9.0 - 0.3j):
        psi = specfun.riccati_j(1, z)
        xi = specfun.riccati_h(1, z)
        assert abs(psi - z * specfun.spherical_bessel_j(1, z)) < 1e-12 * (
            1 + abs(psi))
        assert abs(xi - z * specfun.spherical_hankel1(1, z)) < 1e-12 * (
            1 + abs(xi))


def test_riccati_derivative_fd():
    h = 1e-6
    for z in (1.3, 2.0 + 1.0j):
        for fn in (specfun.riccati_j, specfun.riccati_h):
            fd = (fn(1, z + h) - fn(1, z - h)) / (2 * h)
            assert abs(fn(1, z, derivative=True) - fd) < 1e-7 * (1 + abs(fd))


def test_riccati_wronskian():
    # psi xi' - psi' xi is constant in z; freeze it at one point and
    # check invariance, which pins both functions jointly
    vals = []
    for z in (0.5, 1.7, 3.0 + 2.0j, 10.0):
        w = (specfun.riccati_j(1, z) * specfun.riccati_h(1, z, True)
             - specfun.riccati_j(1, z, True) * specfun.riccati_h(1, z))
        vals.append(w)
    assert np.allclose(vals, vals[0], rtol=1e-10)
    assert abs(abs(vals[0]) - 1.0) < 1e-12


def test_elliptic_limits():
    K, E = specfun.elliptic_KE(np.array([0.0]))
    assert abs(K[0] - np.pi / 2) < 1e-14
    assert abs(E[0] - np.pi / 2) < 1e-14
    m = np.array([0.3, 0.9, 0.999])
    K, E = specfun.elliptic_KE(m)
    assert np.allclose(K, sps.ellipk(m))
    assert np.allclose(E, sps.ellipe(m))


def test_elliptic_rejects_bad_parameter():
    with pytest.raises(ValueError):
        specfun.elliptic_KE(np.array([1.5]))
