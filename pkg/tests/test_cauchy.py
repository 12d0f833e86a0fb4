import numpy as np
import pytest

from eddybie import cauchy, geometry


@pytest.mark.parametrize("name", ["sphere", "torus"])
def test_static_double_layer_constant(name):
    # the exterior-normal double layer maps 1 to -1 on any closed surface
    mesh = geometry.default_mesh(name)
    ops = cauchy.scalar_layer_ops(mesh, 0.0)
    err = np.abs(ops["Kvp"] @ np.ones(mesh.n) + 1.0).max()
    assert err < 1e-8


def test_split_grid_idempotency():
    grid = cauchy.SplitGrid(geometry.build_curve("sphere"), 40)
    E = cauchy.cauchy_E_split(grid, 1 + 1j)
    err = np.abs(E @ E - np.eye(grid.size)).max()
    assert err < 1e-6


def test_hardy_projections_sum_to_identity(sphere_mesh):
    k = 1 + 1j
    Pp = cauchy.hardy_plus(sphere_mesh, k)
    Pm = cauchy.hardy_minus(sphere_mesh, k)
    assert np.abs(Pp + Pm - np.eye(8 * sphere_mesh.n)).max() < 1e-12


def test_dl_difference_matches_direct(sphere_mesh):
    # at moderate k plain subtraction is accurate enough to arbitrate
    k = 0.5
    direct = (cauchy.scalar_layer_ops(sphere_mesh, 0.0)["Kvp"]
              - cauchy.scalar_layer_ops(sphere_mesh, complex(k))["Kvp"])
    diff = cauchy.dl_difference(sphere_mesh, complex(k))
    scale = np.abs(direct).max()
    assert np.abs(diff - direct).max() < 1e-8 * scale


def test_interior_cauchy_reproduces_constant_field(sphere_mesh):
    # the constant field z-hat is two-sided monogenic at k = 0; the
    # interior Cauchy integral of its trace must reproduce it
    mesh = sphere_mesh
    dens = np.zeros((8, mesh.n), dtype=complex)
    tau_rho, tau_z = mesh.nu_z, -mesh.nu_rho
    dens[5] = mesh.nu_z
    dens[6] = tau_z
    targets = np.array([[0.3, 0.1], [0.5, -0.4], [0.1, 0.6]])
    F = cauchy.cauchy_field(mesh, 0.0, [dens], targets)[0]
    want = np.zeros((3, 8))
    want[:, 3] = 1.0  # F1 z-component in Cartesian multivector order
    assert np.abs(F - want).max() < 1e-10


def test_density_interp_partition_of_unity(starfish_torus_mesh):
    mesh = starfish_torus_mesh
    t = np.linspace(mesh.breaks[2] + 1e-4, mesh.breaks[3] - 1e-4, 7)
    Le, Lt = cauchy.density_interp(mesh, t, mesh.panel_slice(2))
    for L in (Le, Lt):
        assert np.abs(L.sum(axis=1) - 1.0).max() < 1e-10
        assert np.abs(L).max() < 50.0  # well conditioned on panels
