"""End-to-end acceptance suite.

One test per acceptance criterion.  The heavy solves are shared through
module-scoped fixtures and every converged solve is registered so the
physical-invariant test can sweep all of them.
"""

import warnings

import numpy as np
import pytest

from eddybie import cauchy, fields, geometry, incident, mie, neumann, system
from eddybie.cli import _field_map
from eddybie.params import Tuning

warnings.filterwarnings("ignore", message=".*regime.*")

# registry of converged solves: (label, sys_, f0, h, field_solution)
SOLVES = []


def _grid(mesh, nr=20, nz=24, pad=0.6):
    r = np.linspace(0.05, mesh.rho.max() + pad, nr)
    z = np.linspace(mesh.zz.min() - pad, mesh.zz.max() + pad, nz)
    R, Z = np.meshgrid(r, z)
    return np.column_stack([R.ravel(), Z.ravel()])


def _digits(eps):
    return 16 if eps == 0 else int(-np.round(np.log10(eps)))


# ---------------------------------------------------------------------------
# criterion 1: tuning identity


def test_criterion_01_tuning_identity():
    rng = np.random.default_rng(11)
    for variant in ("dirac", "dirac-inf", "dirac-zero"):
        for _ in range(50):
            km = 10.0 ** rng.uniform(-10, -2)
            kp = 10.0 ** rng.uniform(-1, 1.5) * np.exp(1j * np.pi / 4)
            tn = Tuning(variant, km, kp)
            assert tn.identity_residual() < 1e-14


# ---------------------------------------------------------------------------
# criterion 2: Cauchy idempotency on the sphere


def test_criterion_02_cauchy_idempotency():
    curve = geometry.build_curve("sphere")
    for k, n in ((0.0, 24), (1e-4, 24), (1 + 1j, 24), (10 + 10j, 32)):
        grid = cauchy.SplitGrid(curve, n)
        E = cauchy.cauchy_E_split(grid, k)
        res = np.abs(E @ E - np.eye(grid.size)).max()
        assert res <= 1e-6, f"k={k}: {res:.3e}"


# ---------------------------------------------------------------------------
# criterion 3: Mie ground truth on the sphere


@pytest.fixture(scope="module")
def mie_runs(sphere_mesh):
    xs = np.linspace(-2.0, 2.0, 30)
    zs = np.linspace(-2.0, 2.0, 30)
    X, Z = np.meshgrid(xs, zs)
    targets = np.column_stack([np.abs(X.ravel()), Z.ravel()])
    out = {}
    for km in (1e-4, 1e-8):
        kp = 1 + 1j
        wn = system.Wavenumbers(km, kp)
        sys_ = system.assemble_system(sphere_mesh, wn, "B-aug0")
        pw = incident.partial_wave(km)
        f0 = incident.trace_f0(pw, sphere_mesh)
        res = sys_.solve(f0)
        assert res.converged
        sol = fields.evaluate_fields(res.x, sys_, targets, incident_field=pw)
        SOLVES.append((f"sphere B-aug0 km={km}", sys_, f0, res.x, sol))

        co = mie.mie_solve(km, kp)
        ok = sol.region != fields.REGION_FLAGGED
        Em, Hm = mie.mie_fields(co, targets[ok, 0], targets[ok, 1])
        scales = fields.boundary_scales(res.x, sys_, f0)
        dig = {}
        for reg, en, hn in ((fields.REGION_INTERIOR, "E_plus", "H_plus"),
                            (fields.REGION_EXTERIOR, "E_minus", "H_minus")):
            m = sol.region[ok] == reg
            eE = max(np.abs(sol.E[i][ok][m] - Em[i][m]).max()
                     for i in range(3))
            eH = max(np.abs(sol.H[i][ok][m] - Hm[i][m]).max()
                     for i in range(3))
            dig[en] = _digits(eE / scales[en])
            dig[hn] = _digits(eH / scales[hn])
        out[km] = dig
    return out


def test_criterion_03_mie_ground_truth(mie_runs):
    for km, dig in mie_runs.items():
        for name, d in dig.items():
            assert d >= 6, f"km={km} {name}: {d} digits"


# ---------------------------------------------------------------------------
# criterion 4: genus-0 experiment on the rotated starfish


@pytest.fixture(scope="module")
def starfish_runs(rotated_starfish_mesh):
    mesh = rotated_starfish_mesh
    ref_mesh = geometry.PanelMesh(mesh.curve, 24, order=16)
    wn = system.Wavenumbers(1e-8, 1 + 1j)
    pw = incident.partial_wave(wn.k_minus)
    targets = _grid(mesh)

    ref_sys = system.assemble_system(ref_mesh, wn, "B-aug0")
    ref_res = ref_sys.solve(incident.trace_f0(pw, ref_mesh))
    assert ref_res.converged
    scales = fields.boundary_scales(ref_res.x, ref_sys,
                                    incident.trace_f0(pw, ref_mesh))
    ref_sol = fields.evaluate_fields(ref_res.x, ref_sys, targets,
                                     incident_field=pw)

    out = {}
    for scheme in ("B-aug0", "A-inf-aug"):
        sys_ = system.assemble_system(mesh, wn, scheme)
        f0 = incident.trace_f0(pw, mesh)
        res = sys_.solve(f0)
        assert res.converged
        sol = fields.evaluate_fields(res.x, sys_, targets, incident_field=pw)
        SOLVES.append((f"rotated-starfish {scheme}", sys_, f0, res.x, sol))
        out[scheme] = {"digits": fields.accuracy_digits(sol, ref_sol, scales),
                       "iterations": res.iterations}
    return out


def test_criterion_04_genus0_experiment(starfish_runs):
    b = starfish_runs["B-aug0"]
    assert b["iterations"] <= 99
    for name, d in b["digits"].items():
        assert d >= 6, f"B-aug0 {name}: {d} digits"
    a = starfish_runs["A-inf-aug"]["digits"]
    assert a["E_plus"] <= b["digits"]["E_plus"] - 3, \
        f"A-inf-aug E_plus {a['E_plus']} vs B-aug0 {b['digits']['E_plus']}"


# ---------------------------------------------------------------------------
# criterion 5: genus-1 experiments on the starfish torus


@pytest.fixture(scope="module")
def st_meshes(starfish_torus_mesh):
    ref_mesh = geometry.PanelMesh(starfish_torus_mesh.curve, 28, order=16)
    return starfish_torus_mesh, ref_mesh


@pytest.fixture(scope="module")
def st_weight(st_meshes):
    return neumann.compute_weight(st_meshes[0], cross_check=True)


@pytest.fixture(scope="module")
def st_ref_weight(st_meshes):
    return neumann.compute_weight(st_meshes[1], cross_check=False)


CASES = {
    "a": ("partial", 1e-8, 1 + 1j, "B-aug1", 111),
    "b": ("zcoil", 1e-8, 1 + 1j, "A-inf-aug", 72),
    "c": ("zcoil", 1e-8, 1 + 1j, "B-aug1", 111),
    "d": ("zcoil", 1e-8, 1e-4 * (1 + 1j), "A-inf-aug", 48),
}


@pytest.fixture(scope="module")
def genus1_runs(st_meshes, st_weight, st_ref_weight):
    mesh, ref_mesh = st_meshes
    targets = _grid(mesh)
    out = {}
    for tag, (kind, km, kp, scheme, itmax) in CASES.items():
        wn = system.Wavenumbers(km, kp)
        fld = (incident.partial_wave(km) if kind == "partial"
               else incident.zcoil(km))
        w = st_weight.w if scheme == "B-aug1" else None
        wr = st_ref_weight.w if scheme == "B-aug1" else None

        sys_ = system.assemble_system(mesh, wn, scheme, weight_w=w)
        f0 = incident.trace_f0(fld, mesh)
        res = sys_.solve(f0)
        assert res.converged
        sol = fields.evaluate_fields(res.x, sys_, targets, incident_field=fld)
        SOLVES.append((f"starfish-torus {tag} {scheme}", sys_, f0, res.x,
                       sol))

        ref_sys = system.assemble_system(ref_mesh, wn, scheme, weight_w=wr)
        f0r = incident.trace_f0(fld, ref_mesh)
        ref_res = ref_sys.solve(f0r)
        assert ref_res.converged
        scales = fields.boundary_scales(ref_res.x, ref_sys, f0r)
        ref_sol = fields.evaluate_fields(ref_res.x, ref_sys, targets,
                                         incident_field=fld)
        out[tag] = {"digits": fields.accuracy_digits(sol, ref_sol, scales),
                    "iterations": res.iterations, "itmax": itmax}
    return out


def test_criterion_05_genus1_experiments(genus1_runs):
    for tag in ("a", "b", "d"):
        run = genus1_runs[tag]
        assert run["iterations"] <= run["itmax"], \
            f"case {tag}: {run['iterations']} iterations"
        for name, d in run["digits"].items():
            assert d >= 6, f"case {tag} {name}: {d} digits"
    assert genus1_runs["c"]["iterations"] <= genus1_runs["c"]["itmax"]
    dc = genus1_runs["c"]["digits"]
    others = min(dc["E_plus"], dc["H_plus"], dc["H_minus"])
    assert dc["E_minus"] <= others - 3, f"case c digits {dc}"


# ---------------------------------------------------------------------------
# criterion 6: excitation diagnostic


def test_criterion_06_excitation_diagnostic(st_meshes, st_weight):
    mesh = st_meshes[0]
    cases = [("partial", 1e-8, 1 + 1j, 0.4, 3.0),
             ("zcoil", 1e-8, 1 + 1j, 6e7, 10.0),
             ("zcoil", 1e-8, 1e-4 * (1 + 1j), 4e7, 10.0)]
    for kind, km, kp, want, factor in cases:
        wn = system.Wavenumbers(km, kp)
        fld = (incident.partial_wave(km) if kind == "partial"
               else incident.zcoil(km))
        f0 = incident.trace_f0(fld, mesh)
        _, ratio = neumann.excitation_diagnostic(f0, st_weight, mesh, wn)
        assert want / factor <= ratio <= want * factor, \
            f"{kind} kp={kp}: ratio {ratio:.3g} vs {want:g}"


# ---------------------------------------------------------------------------
# criterion 7: physical invariants on every converged solve


# The genus-0 A-inf-aug run is a deliberate negative control: its field
# representation loses digits through cancellation (this loss is what the
# accuracy contrast above requires), and the auxiliary Helmholtz
# components are exactly the diagnostic that detects it. The boundary
# jump identities still hold there; the small-Helmholtz bound applies to
# the accurate solves, and the control must trip the diagnostic.
NEGATIVE_CONTROLS = {"rotated-starfish A-inf-aug"}


def test_criterion_07_physical_invariants(mie_runs, starfish_runs,
                                          genus1_runs):
    assert SOLVES, "no converged solves registered"
    for label, sys_, f0, h, sol in SOLVES:
        jc = fields.jump_checks(h, sys_, f0)
        assert jc["ave_nuEminus"] <= 1e-8, \
            f"{label}: ave nu.E- {jc['ave_nuEminus']:.2e}"
        assert jc["normal_E_jump"] <= 1e-4, \
            f"{label}: normal jump {jc['normal_E_jump']:.2e}"
        ok = sol.region != fields.REGION_FLAGGED
        scale = max(fields.boundary_scales(h, sys_, f0).values())
        helm = np.abs(sol.helmholtz[:, ok]).max()
        if label in NEGATIVE_CONTROLS:
            assert helm > 1e-6 * scale, \
                f"{label}: Helmholtz diagnostic failed to flag {helm:.2e}"
        else:
            assert helm <= 1e-6 * scale, f"{label}: Helmholtz {helm:.2e}"
    SOLVES.clear()


# ---------------------------------------------------------------------------
# criterion 8: quasi-static null spaces and their augmentation


def _rel_svals(A):
    s = np.linalg.svd(A, compute_uv=False)
    return s / s[0]


def test_criterion_08_quasistatic_null_spaces(rotated_starfish_mesh,
                                              st_meshes, sphere_mesh,
                                              st_weight):
    st_mesh = st_meshes[0]
    plain = [("A-inf", rotated_starfish_mesh, 1),
             ("A-inf", st_mesh, 1),
             ("B", sphere_mesh, 2)]
    for scheme, mesh, nullity in plain:
        A, _ = system.quasistatic_limit(scheme, mesh)
        s = _rel_svals(A)
        # nullity read off the singular value gap: the claimed null
        # values sit >= 3 orders below the rest of the spectrum
        gap = s[-nullity - 1] / s[-nullity]
        assert gap >= 1e3, f"{scheme} n={mesh.n}: gap {gap:.2e}"
        assert s[-nullity - 1] >= 1e-3, \
            f"{scheme} n={mesh.n}: svals {s[-nullity-2:]}"

    augmented = [("A-inf-aug", rotated_starfish_mesh, None),
                 ("A-inf-aug", st_mesh, None),
                 ("B-aug0", sphere_mesh, None),
                 ("B-aug1", st_mesh, st_weight.w)]
    for scheme, mesh, w in augmented:
        A, _ = system.quasistatic_limit(scheme, mesh, augment=True,
                                        weight_w=w)
        s = _rel_svals(A)
        assert s[-1] >= 1e-3, f"{scheme}: smallest sval {s[-1]:.2e}"


# ---------------------------------------------------------------------------
# criterion 9: conditioning contrast on the torus


@pytest.fixture(scope="module")
def torus_weight(torus_mesh):
    return neumann.compute_weight(torus_mesh, cross_check=False)


def _cond(M):
    s = np.linalg.svd(M, compute_uv=False)
    return s[0] / s[-1]


def test_criterion_09_conditioning_contrast(torus_mesh, torus_weight):
    kms = np.logspace(-2, -12, 6)  # descending toward the static limit
    sys_conds, map_conds, ainf_map_conds = [], [], []
    for km in kms:
        wn = system.Wavenumbers(km, 1 + 1j)
        sys_b = system.assemble_system(torus_mesh, wn, "B-aug1",
                                       weight_w=torus_weight.w)
        sys_conds.append(_cond(sys_b.matrix))
        map_conds.append(_cond(_field_map(sys_b)))
        del sys_b
        sys_a = system.assemble_system(torus_mesh, wn, "A-inf")
        ainf_map_conds.append(_cond(_field_map(sys_a)))
        del sys_a

    for conds in (sys_conds, map_conds):
        spread = max(conds) / min(conds)
        assert spread < 1e2, f"B-aug1 cond spread {spread:.2e}"
    assert all(b > a for a, b in zip(ainf_map_conds, ainf_map_conds[1:])), \
        f"A-inf map conds not monotone: {ainf_map_conds}"
    growth = ainf_map_conds[-1] / ainf_map_conds[0]
    assert growth >= 1e4, f"A-inf map growth {growth:.2e}"


# ---------------------------------------------------------------------------
# criterion 10: weight machinery and the eddy eigenfield


def test_criterion_10_weight_machinery(st_meshes, st_weight):
    mesh = st_meshes[0]
    wf = st_weight
    assert np.all(wf.w > 0)
    mean = (wf.w * mesh.dsurf).sum() / mesh.dsurf.sum()
    assert abs(mean - 1.0) <= 1e-12
    assert wf.route_deviation <= 1e-6
    assert wf.iterations <= 60

    eig = neumann.eddy_eigenfield(mesh, grid_n=40)
    # tangentiality of J via the interior static Hardy projection
    n = mesh.n
    f = eig["trace"]
    g = np.zeros(8 * n, dtype=complex)
    g[6 * n:7 * n] = f[:n]
    g[7 * n:8 * n] = f[n:]
    E0 = cauchy.cauchy_E(mesh, 0.0)
    T = 0.5 * (g + E0 @ g)
    Jmax = np.abs(np.r_[T[6 * n:7 * n], T[7 * n:8 * n]]).max()
    nuJ = np.abs(T[5 * n:6 * n]).max() / Jmax
    assert nuJ <= 1e-6, f"nu.J residual {nuJ:.2e}"

    # curl H = J inside, curl H = 0 outside (4th order FD on the grid)
    from scipy.ndimage import binary_erosion
    m = 40
    tg, reg = eig["targets"], eig["region"]
    R = tg[:, 0].reshape(m, m)
    Hr = eig["H"][0].reshape(m, m)
    Hz = eig["H"][1].reshape(m, m)
    dr = R[0, 1] - R[0, 0]
    dz = tg[:, 1].reshape(m, m)[1, 0] - tg[:, 1].reshape(m, m)[0, 0]

    def d4(F, h, axis):
        c = (np.roll(F, -2, axis) - 8 * np.roll(F, -1, axis)
             + 8 * np.roll(F, 1, axis) - np.roll(F, 2, axis)) / (-12 * h)
        out = np.full_like(F, np.nan)
        sl = [slice(None)] * 2
        sl[axis] = slice(2, -2)
        out[tuple(sl)] = c[tuple(sl)]
        return out

    curl = d4(Hr, dz, 0) - d4(Hz, dr, 1)
    Jg = eig["J"][1].real.reshape(m, m)
    inside = reg.reshape(m, m) == fields.REGION_INTERIOR
    outside = reg.reshape(m, m) == fields.REGION_EXTERIOR
    Jscale = np.abs(Jg[inside]).max()
    mi = binary_erosion(inside, iterations=4)
    me = binary_erosion(outside, iterations=4) & (R > 0.15) \
        & np.isfinite(curl)
    ri = np.abs(curl[mi] - Jg[mi]).max() / Jscale
    re = np.abs(curl[me]).max() / Jscale
    assert ri <= 1e-3, f"interior curl residual {ri:.2e}"
    assert re <= 1e-3, f"exterior curl residual {re:.2e}"


# ---------------------------------------------------------------------------
# criterion 11: interior Neumann augmentation demo


def test_criterion_11_neumann_demo(torus_mesh):
    recs = neumann.helmholtz_neumann_demo(torus_mesh, ks=(1e-1, 1e-2, 1e-3))
    sv_aug = [r["sv_aug"] for r in recs]
    sv_plain = [r["sv_plain"] for r in recs]
    assert max(sv_aug) / min(sv_aug) < 10.0, f"sv_aug {sv_aug}"
    assert all(b < a for a, b in zip(sv_plain, sv_plain[1:])), \
        f"sv_plain not decaying: {sv_plain}"
