"""Volume and boundary field evaluation from a solved density.

The interior field is the Cauchy extension at k_plus of N'h, the
exterior scattered field the extension at k_minus of P'h, each with the
scheme's rank one corrections added to the density.  Targets are
classified against the generating curve by winding number; points very
close to the boundary are evaluated from an upsampled density or
flagged when closer than a quarter panel length.
"""

from __future__ import annotations

import numpy as np

from . import cauchy
from .geometry import PanelMesh

REGION_INTERIOR = 1
REGION_EXTERIOR = -1
REGION_FLAGGED = 0


def classify_targets(curve, targets, n_samples=2048):
    """Winding-number region test in the meridian half plane."""
    s = np.linspace(curve.domain[0], curve.domain[1], n_samples,
                    endpoint=curve.genus == 0)
    pr = curve.rho(s)
    pz = curve.z(s)
    if curve.genus == 0:
        # close the boundary along the symmetry axis
        zax = np.linspace(pz[-1], pz[0], 64)
        pr = np.concatenate([pr, np.zeros(64)])
        pz = np.concatenate([pz, zax])
    dx = pr[None, :] - targets[:, 0:1]
    dy = pz[None, :] - targets[:, 1:2]
    ang = np.arctan2(dy, dx)
    dang = np.diff(ang, axis=1, append=ang[:, :1])
    dang = (dang + np.pi) % (2 * np.pi) - np.pi
    wind = np.abs(dang.sum(axis=1)) / (2 * np.pi)
    return np.where(wind > 0.5, REGION_INTERIOR, REGION_EXTERIOR)


def _panel_lengths(mesh):
    return np.add.reduceat(mesh.dline, np.arange(0, mesh.n, mesh.order))


def _boundary_distance(mesh, targets):
    d = np.hypot(mesh.rho[None, :] - targets[:, 0:1],
                 mesh.zz[None, :] - targets[:, 1:2])
    return d.min(axis=1)


def _upsample(mesh, dens, factor=4):
    """Interpolate per-component panel densities onto a finer mesh."""
    fine = PanelMesh(mesh.curve, mesh.n_panels, order=mesh.order * factor)
    out = np.empty((8, fine.n), dtype=complex)
    xf, _ = cauchy.gauss_rule(mesh.order * factor)
    L = cauchy.lagrange_matrix(mesh.ref_nodes, xf)
    for p in range(mesh.n_panels):
        src = dens[:, mesh.panel_slice(p)]
        out[:, fine.panel_slice(p)] = src @ L.T
    return fine, out


class FieldSolution:
    """Fields on a target set, with region tags and diagnostics.

    E and H are (3, nt) cylindrical component arrays at azimuth zero
    (rho, phi=y, z).  Exterior entries hold total fields when an
    incident field was supplied, otherwise scattered ones.
    """

    def __init__(self, targets, region, E, H, helm, meta):
        self.targets = targets
        self.region = region
        self.E = E
        self.H = H
        self.helmholtz = helm
        self.meta = meta


def _density_pair(h, sys_):
    """Interior and exterior representation densities with corrections."""
    from .system import _comp_diag, _unit_density
    tn = sys_.tuning
    mesh = sys_.mesh
    gi = _comp_diag(mesh, tn.Np) * h
    ge = _comp_diag(mesh, tn.Pp) * h
    aug_scalars = {}
    fd = sys_.field_data
    if "cR_D" in fd:
        cd = fd["cR_D"] @ h
        ge = ge + _unit_density(mesh, 5) * cd
        aug_scalars["cR_D_h"] = cd
    if "cR_N" in fd:
        cn = fd["cR_N"] @ h
        gi = gi + (tn.sigma / tn.khat ** 2) * _unit_density(mesh, 7) * cn
        aug_scalars["cR_N_h"] = cn
    return gi.reshape(8, mesh.n), ge.reshape(8, mesh.n), aug_scalars


def evaluate_fields(h, sys_, targets, incident_field=None, opts=None,
                    near_factor=4):
    """Fields at meridian targets (nt, 2) from a solved density."""
    mesh = sys_.mesh
    if not isinstance(mesh, PanelMesh):
        raise TypeError("field evaluation needs a composite panel mesh")
    targets = np.atleast_2d(np.asarray(targets, dtype=float))
    nt = targets.shape[0]
    tn = sys_.tuning
    region = classify_targets(mesh.curve, targets)
    plen = _panel_lengths(mesh).max()
    dist = _boundary_distance(mesh, targets)
    flagged = dist < 0.25 * plen
    near = (dist < plen) & ~flagged
    region = np.where(flagged, REGION_FLAGGED, region)

    gi, ge, aug_scalars = _density_pair(h, sys_)
    E = np.zeros((3, nt), dtype=complex)
    H = np.zeros((3, nt), dtype=complex)
    helm = np.zeros((2, nt), dtype=complex)

    fine, gi_f = _upsample(mesh, gi, near_factor)
    _, ge_f = _upsample(mesh, ge, near_factor)

    for interior in (True, False):
        rmask = region == (REGION_INTERIOR if interior else REGION_EXTERIOR)
        for use_fine in (False, True):
            mask = rmask & (near if use_fine else ~near)
            if not mask.any():
                continue
            m = fine if use_fine else mesh
            g = ((gi_f if use_fine else gi) if interior
                 else (ge_f if use_fine else ge))
            k = tn.k_plus if interior else tn.k_minus
            F = cauchy.cauchy_field(m, k, [g], targets[mask], opts)[0]
            Ev = F[:, 1:4].T
            Hv = F[:, 4:7].T
            if interior:
                Hv = tn.khat * Hv
            E[:, mask] = Ev
            H[:, mask] = Hv
            helm[0, mask] = F[:, 0]
            helm[1, mask] = F[:, 7]

    if incident_field is not None:
        ext = region == REGION_EXTERIOR
        E0, H0 = incident_field.EH(targets[ext, 0], targets[ext, 1])
        for i in range(3):
            E[i, ext] += E0[i]
            H[i, ext] += H0[i]
    E[:, flagged] = np.nan
    H[:, flagged] = np.nan

    meta = {"scheme": sys_.scheme, "k_minus": tn.k_minus,
            "k_plus": tn.k_plus, "total_exterior": incident_field is not None}
    meta.update(aug_scalars)
    return FieldSolution(targets, region, E, H, helm, meta)


def surface_traces(h, sys_, opts=None):
    """On-surface Dirac traces (F_plus, F_minus) via Hardy projections."""
    mesh = sys_.mesh
    tn = sys_.tuning
    gi, ge, _ = _density_pair(h, sys_)
    Ep = cauchy.cauchy_E(mesh, tn.k_plus, opts)
    Em = cauchy.cauchy_E(mesh, tn.k_minus, opts)
    Fp = 0.5 * (gi.ravel() + Ep @ gi.ravel())
    Fm = -0.5 * (ge.ravel() - Em @ ge.ravel())
    return Fp, Fm


def boundary_scales(h, sys_, f0, opts=None):
    """max over the surface of |E+|, |E0+E-|, |H+|, |H0+H-|."""
    mesh = sys_.mesh
    n = mesh.n
    kh = sys_.tuning.khat
    Fp, Fm = surface_traces(h, sys_, opts)
    tot = Fm + f0
    Ep_max = np.abs(Fp.reshape(8, n)[5:8]).max()
    Hp_max = np.abs(kh * Fp.reshape(8, n)[1:4]).max()
    Em_max = np.abs(tot.reshape(8, n)[5:8]).max()
    Hm_max = np.abs(tot.reshape(8, n)[1:4]).max()
    return {"E_plus": Ep_max, "E_minus": Em_max,
            "H_plus": Hp_max, "H_minus": Hm_max}


def jump_checks(h, sys_, f0, opts=None):
    """Transmission-condition residuals of a solved density."""
    mesh = sys_.mesh
    n = mesh.n
    tn = sys_.tuning
    kh = tn.khat
    Fp, Fm = surface_traces(h, sys_, opts)
    Fp = Fp.reshape(8, n)
    tot = (Fm + f0).reshape(8, n)

    scales = {"E": max(np.abs(tot[5:8]).max(), np.abs(Fp[5:8]).max()),
              "H": max(np.abs(tot[1:4]).max(), np.abs(Fp[1:4]).max())}
    # tangential E continuity and tangential H continuity (F2+ = H+/khat)
    tang_E = np.abs(Fp[6:8] - tot[6:8]).max() / scales["E"]
    tang_H = np.abs(kh * Fp[2:4] - tot[2:4]).max() / scales["H"]
    nor_H = np.abs(kh * Fp[1] - tot[1]).max() / scales["H"]
    # normal E jump nu.E+ = khat^{-2} nu.(E0 + E-); for incident fields
    # with no normal E content (pure TE) both sides are roundoff, so the
    # denominator is floored at a small fraction of the full E scale
    nor_den = max(np.abs(Fp[5]).max(), np.abs(tot[5]).max() / abs(kh) ** 2,
                  1e-6 * scales["E"] + 1e-300)
    nor_E = np.abs(Fp[5] - tot[5] / kh ** 2).max() / nor_den
    # average of nu.E- over the surface (scattered part only), relative
    # to the full scattered E trace scale
    Fm = Fm.reshape(8, n)
    ave = abs((Fm[5] * mesh.dsurf).sum()) / (
        mesh.dsurf.sum() * np.abs(Fm[5:8]).max() + 1e-300)
    return {"tangential_E": tang_E, "tangential_H": tang_H,
            "normal_H": nor_H, "normal_E_jump": nor_E,
            "ave_nuEminus": ave}


def accuracy_digits(sol, ref, scales):
    """Digit counts for E and H in both regions against a reference.

    scales: dict from boundary_scales (reference surface maxima).  The
    relative error of each field in each region is the max pointwise
    deviation over shared unflagged targets divided by the matching
    surface scale; digits = -round(log10 eps).
    """
    if sol.targets.shape != ref.targets.shape or \
            not np.allclose(sol.targets, ref.targets):
        raise ValueError("solutions must share a target grid")
    out = {}
    names = {REGION_INTERIOR: ("E_plus", "H_plus"),
             REGION_EXTERIOR: ("E_minus", "H_minus")}
    for reg, (en, hn) in names.items():
        mask = (sol.region == reg) & (ref.region == reg)
        for name, a, b in ((en, sol.E, ref.E), (hn, sol.H, ref.H)):
            if not mask.any() or scales[name] == 0:
                out[name] = None
                continue
            eps = np.abs(a[:, mask] - b[:, mask]).max() / scales[name]
            out[name] = 16 if eps == 0 else int(-np.round(np.log10(eps)))
    return out
