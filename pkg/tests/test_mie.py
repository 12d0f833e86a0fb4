import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from eddybie import incident, mie


@pytest.mark.parametrize("km,kp", [(1e-4, 1 + 1j), (1e-8, 1 + 1j),
                                   (1.0, 2 + 2j), (0.5, 10 + 10j)])
def test_interface_residual(km, kp):
    coeffs = mie.mie_solve(km, kp)
    assert mie.interface_residual(coeffs) < 1e-12


def test_transparent_sphere():
    coeffs = mie.mie_solve(0.7, 0.7)
    assert abs(coeffs.r_M) < 1e-13
    assert abs(coeffs.r_N) < 1e-13
    assert abs(coeffs.t_M_scaled - 1.0) < 1e-12
    assert abs(coeffs.t_N_scaled - 1.0) < 1e-12


def test_matches_incident_when_transparent():
    km = 0.7
    coeffs = mie.mie_solve(km, km)
    rho = np.array([0.4, 1.6, 0.9])
    z = np.array([0.2, -1.1, 0.8])
    E, H = mie.mie_fields(coeffs, rho, z)
    E0, H0 = incident.partial_wave(km).EH(rho, z)
    for a, b in zip(E + H, E0 + H0):
        assert np.abs(a - b).max() < 1e-13


def test_radiation_condition_along_ray():
    km = 1.0
    coeffs = mie.mie_solve(km, 2 + 2j)
    # scattered fields only: subtract the incident wave
    inc = incident.partial_wave(km)
    radii = np.array([5.0, 20.0, 80.0])
    rho = radii / np.sqrt(2)
    z = radii / np.sqrt(2)
    E, H = mie.mie_fields(coeffs, rho, z)
    E0, H0 = inc.EH(rho, z)
    Es = np.array(E) - np.array(E0)
    Hs = np.array(H) - np.array(H0)
    # r-hat x E - H in cylindrical components along the 45 degree ray
    rh = np.array([1.0, 0.0, 1.0]) / np.sqrt(2)
    cross = np.array([rh[1] * Es[2] - rh[2] * Es[1],
                      rh[2] * Es[0] - rh[0] * Es[2],
                      rh[0] * Es[1] - rh[1] * Es[0]])
    mismatch = np.abs(cross - Hs).max(axis=0)
    scale = np.abs(Es).max(axis=0)
    ratio = mismatch / scale
    assert ratio[1] < 0.5 * ratio[0]
    assert ratio[2] < 0.5 * ratio[1]


def test_overflow_safe_interior():
    coeffs = mie.mie_solve(1e-8, 50 * (1 + 1j))
    E, H = mie.mie_fields(coeffs, np.array([0.3]), np.array([0.1]))
    assert np.all(np.isfinite([E, H]))
    assert mie.interface_residual(coeffs) < 1e-10


def test_normal_jump_at_interface():
    km, kp = 1e-4, 1 + 1j
    coeffs = mie.mie_solve(km, kp)
    kh = kp / km
    eps = 1e-7
    th = np.linspace(0.2, np.pi - 0.2, 9)
    for r, store in ((1 - eps, "in"), (1 + eps, "out")):
        rho, z = r * np.sin(th), r * np.cos(th)
        E, H = mie.mie_fields(coeffs, rho, z)
        nuE = E[0] * np.sin(th) + E[2] * np.cos(th)
        if store == "in":
            inner = nuE
        else:
            outer = nuE
    ratio = inner / outer
    assert np.abs(ratio - kh ** -2).max() < 1e-4 * abs(kh ** -2)


@given(st.floats(min_value=-8, max_value=-1),
       st.floats(min_value=-1, max_value=1.5))
@settings(max_examples=25, deadline=None)
def test_interface_residual_over_regime(log_km, log_kp):
    km = 10.0 ** log_km
    kp = 10.0 ** log_kp * (1 + 1j)
    coeffs = mie.mie_solve(km, kp)
    assert mie.interface_residual(coeffs) < 1e-10
