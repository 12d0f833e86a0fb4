import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from eddybie import geometry


def test_sphere_area(sphere_mesh):
    assert abs(sphere_mesh.dsurf.sum() - 4.0 * np.pi) < 1e-10


def test_torus_area(torus_mesh):
    # circular torus, core radius R and tube radius r: area 4 pi^2 R r
    curve = torus_mesh.curve
    R = curve.rho_cos[0]
    r = curve.rho_cos[1]
    want = 4.0 * np.pi ** 2 * R * abs(r)
    assert abs(torus_mesh.dsurf.sum() - want) < 1e-10 * want


@pytest.mark.parametrize("name", ["sphere", "rotated-starfish",
                                  "starfish-torus", "torus"])
def test_curve_derivatives_fd(name):
    curve = geometry.build_curve(name)
    s = np.linspace(curve.domain[0] + 0.05, curve.domain[1] - 0.05, 17)
    h = 1e-6
    for fn in (curve.rho, curve.z):
        fd = (fn(s + h) - fn(s - h)) / (2 * h)
        assert np.abs(fn(s, 1) - fd).max() < 1e-7
        fd2 = (fn(s + h) - 2 * fn(s) + fn(s - h)) / h ** 2
        assert np.abs(fn(s, 2) - fd2).max() < 1e-3


@pytest.mark.parametrize("name", ["sphere", "torus"])
def test_normals_unit_and_outward(name):
    mesh = geometry.default_mesh(name)
    assert np.abs(np.hypot(mesh.nu_rho, mesh.nu_z) - 1.0).max() < 1e-12
    # outward: moving along nu increases distance from an interior point
    if name == "sphere":
        c = np.array([0.0, 0.0])
    else:
        c = np.array([mesh.curve.rho_cos[0], mesh.curve.z_cos[0]])
    d0 = np.hypot(mesh.rho - c[0], mesh.zz - c[1])
    d1 = np.hypot(mesh.rho + 1e-3 * mesh.nu_rho - c[0],
                  mesh.zz + 1e-3 * mesh.nu_z - c[1])
    assert np.all(d1 > d0)


def test_panel_slices_partition(starfish_torus_mesh):
    mesh = starfish_torus_mesh
    seen = np.zeros(mesh.n, dtype=int)
    for p in range(mesh.n_panels):
        seen[mesh.panel_slice(p)] += 1
    assert np.all(seen == 1)


def test_integrate_average(sphere_mesh):
    assert abs(sphere_mesh.average(np.ones(sphere_mesh.n)) - 1.0) < 1e-13


@given(st.integers(min_value=2, max_value=12))
@settings(max_examples=10, deadline=None)
def test_panel_count_scales_nodes(n_panels):
    curve = geometry.build_curve("sphere")
    mesh = geometry.PanelMesh(curve, n_panels, order=8)
    assert mesh.n == 8 * n_panels


def test_bad_genus_rejected():
    with pytest.raises(ValueError):
        geometry.TrigCurve([0, 1], [0], [0], [0, 1], (0, np.pi), 2)
