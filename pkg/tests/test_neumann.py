import numpy as np
import pytest

from eddybie import geometry, neumann


def test_loop_field_is_static_maxwell():
    # away from the wire the loop field is divergence and curl free
    loop = neumann.LoopSource(1.0, 0.0)
    h = 1e-5
    for rho, z in ((0.4, 0.3), (1.8, -0.6), (0.9, 1.1)):
        hr_p, hz_p = loop.field(rho + h, z)
        hr_m, hz_m = loop.field(rho - h, z)
        hr_zp, hz_zp = loop.field(rho, z + h)
        hr_zm, hz_zm = loop.field(rho, z - h)
        hr, hz = loop.field(rho, z)
        div = (hr_p - hr_m) / (2 * h) + hr / rho + (hz_zp - hz_zm) / (2 * h)
        curl = (hr_zp - hr_zm) / (2 * h) - (hz_p - hz_m) / (2 * h)
        scale = max(abs(hr), abs(hz))
        assert abs(div) < 1e-5 * scale
        assert abs(curl) < 1e-5 * scale


def test_loop_on_axis_field():
    # on the axis H_z = a^2 / (2 (a^2 + d^2)^{3/2}) for unit current
    loop = neumann.LoopSource(1.0, 0.0)
    for d in (0.0, 0.5, 2.0):
        hr, hz = loop.field(np.array([0.0]), np.array([d]))
        want = 0.5 / (1.0 + d * d) ** 1.5
        assert abs(hr[0]) == 0.0
        assert abs(hz[0] - want) < 1e-12 * want


def test_circulation_counts_linkage():
    curve = geometry.build_curve("torus")
    inside = neumann.default_loop(curve)
    assert abs(abs(inside.circulation(curve)) - 1.0) < 1e-10
    outside = neumann.LoopSource(3.0, 0.0)
    assert abs(outside.circulation(curve)) < 1e-10


def test_default_loop_needs_genus_one():
    with pytest.raises(ValueError):
        neumann.default_loop(geometry.build_curve("sphere"))


def test_weight_needs_genus_one(sphere_mesh):
    with pytest.raises(ValueError):
        neumann.compute_weight(sphere_mesh)


@pytest.fixture(scope="module")
def torus_weight(torus_mesh):
    return neumann.compute_weight(torus_mesh, cross_check=True)


def test_weight_positive_normalized(torus_mesh, torus_weight):
    wf = torus_weight
    assert np.all(wf.w > 0)
    mean = (wf.w * torus_mesh.dsurf).sum() / torus_mesh.dsurf.sum()
    assert abs(mean - 1.0) < 1e-12


def test_weight_routes_agree(torus_weight):
    # integral-equation route vs the null vector of the static operator
    assert torus_weight.route_deviation < 1e-5


def test_weight_solver_converges_fast(torus_weight):
    assert torus_weight.iterations < 60


def test_helmholtz_demo_duality(torus_mesh):
    # the duality residual carries a fixed discrete-adjoint mismatch
    # amplified by 1/(2 k^2), so it is checked at the largest k
    out = neumann.helmholtz_neumann_demo(torus_mesh, ks=(1e-1,))
    rec = out[0]
    assert rec["duality_residual"] < 1e-3
    # augmentation lifts the smallest singular value far above the
    # near-null one of the plain operator
    assert rec["sv_aug"] > 1e2 * rec["sv_plain"]
