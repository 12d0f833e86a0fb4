import warnings

import numpy as np
import pytest

from eddybie import system


def test_wavenumber_validation():
    with pytest.raises(ValueError):
        system.Wavenumbers(0.0, 1 + 1j)
    with pytest.raises(ValueError):
        system.Wavenumbers(1e-8, 0.0)
    with pytest.raises(ValueError):
        system.Wavenumbers(1e-8, -1.0)  # khat on the negative real axis
    with pytest.raises(ValueError):
        system.Wavenumbers(1e-8, 1 - 1j)  # lower half plane


def test_regime_advisory_warns():
    with warnings.catch_warnings(record=True) as rec:
        warnings.simplefilter("always")
        system.Wavenumbers(0.5, 1 + 1j)
    assert any("regime" in str(w.message).lower() for w in rec)
    with warnings.catch_warnings(record=True) as rec:
        warnings.simplefilter("always")
        system.Wavenumbers(1e-8, 1 + 1j)
    assert not rec


def test_scheme_names_map_to_variants():
    wn = system.Wavenumbers(1e-8, 1 + 1j)
    for scheme in system.SCHEMES:
        tn = system.make_params(scheme, wn)
        assert tn.identity_residual() < 1e-14


def test_variant_b_advisory():
    wn = system.Wavenumbers(1e-4, 1e-6 * (1 + 1j))
    with warnings.catch_warnings(record=True) as rec:
        warnings.simplefilter("always")
        system.make_params("B-aug0", wn)
    assert any("tuned" in str(w.message) for w in rec)


def test_baug1_requires_weight(torus_mesh):
    wn = system.Wavenumbers(1e-8, 1 + 1j)
    with pytest.raises(ValueError):
        system.assemble_system(torus_mesh, wn, "B-aug1", weight_w=None)


def test_baug1_rejects_genus0(sphere_mesh):
    wn = system.Wavenumbers(1e-8, 1 + 1j)
    with pytest.raises(ValueError):
        system.assemble_system(sphere_mesh, wn, "B-aug1",
                               weight_w=np.ones(sphere_mesh.n))


def test_quasistatic_limit_rejects_plain_a():
    with pytest.raises(ValueError):
        system.quasistatic_limit("A", None)
