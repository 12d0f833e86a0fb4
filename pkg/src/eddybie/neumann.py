"""Harmonic weight function, eddy eigenfields, and Neumann diagnostics.

On a genus-1 surface the exterior PEC Neumann eigenfield H is computed
from a static loop source H0: with psi solving (I + Knu0) psi = -nu.H0,
the field H = H0 + grad S psi is divergence- and curl-free outside,
tangential on the surface, and its tau component is the weight w used
by the Neumann augmentation.  The tangential block of the static Cauchy
operator yields the same trace as the null vector of its exterior
projection, and the interior eddy current J from the interior one.
"""

from __future__ import annotations

import numpy as np

from . import cauchy, fields, specfun
from .linalg import gmres


def _loop_kernel(a, d, rho):
    """(H_rho, H_z) at height d and radius rho from unit-current loops
    of radius a centered on the axis, via complete elliptic integrals."""
    a = np.asarray(a, dtype=float)
    d = np.asarray(d, dtype=float)
    rho = np.asarray(rho, dtype=float)
    rs = np.where(rho > 1e-12, rho, 1.0)
    den = (a + rho) ** 2 + d * d
    near = (a - rho) ** 2 + d * d
    m = np.clip(4.0 * a * rho / den, 0.0, 1.0 - 1e-15)
    K, E = specfun.elliptic_KE(m)
    front = 1.0 / (2.0 * np.pi * np.sqrt(den))
    hz = front * (K + E * (a * a - rho * rho - d * d) / near)
    hr = front * (d / rs) * (-K + E * (a * a + rho * rho + d * d) / near)
    hr = np.where(rho > 1e-12, hr, 0.0)
    return hr, hz


class LoopSource:
    """Static magnetic field of a unit current in a coaxial circular loop."""

    def __init__(self, radius, z0=0.0):
        self.radius = float(radius)
        self.z0 = float(z0)

    def field(self, rho, z):
        """(H_rho, H_z) of the loop at meridian points (rho, z)."""
        return _loop_kernel(self.radius,
                            np.asarray(z, dtype=float) - self.z0, rho)

    def circulation(self, curve, n=512):
        """Line integral of H around the generating curve (poloidal cycle)."""
        s = np.linspace(curve.domain[0], curve.domain[1], n, endpoint=False)
        hr, hz = self.field(curve.rho(s), curve.z(s))
        ds = (curve.domain[1] - curve.domain[0]) / n
        return float(np.sum(hr * curve.rho(s, 1) + hz * curve.z(s, 1)) * ds)


def default_loop(curve):
    """Loop on the core circle of a genus-1 generating curve."""
    if curve.genus != 1:
        raise ValueError("loop source placement needs a genus-1 curve")
    return LoopSource(curve.rho_cos[0], curve.z_cos[0])


def _tangential_block(mesh, opts=None):
    """The static operator -M0* on tangential vector fields (tau, theta)."""
    E0 = cauchy.cauchy_E(mesh, 0.0, opts)
    n = mesh.n
    idx = np.r_[6 * n:7 * n, 7 * n:8 * n]
    return E0[np.ix_(idx, idx)]


def _inverse_iteration(M, iters=5, tol=1e-10, seed=0):
    """Null vector of M by inverse iteration with zero shift."""
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(M.shape[0])
    from scipy.linalg import lu_factor, lu_solve
    lu = lu_factor(M)
    ray = np.inf
    for _ in range(iters):
        x = lu_solve(lu, x)
        x = x / np.linalg.norm(x)
        ray = np.linalg.norm(M @ x)
        if ray < tol:
            break
    return x, ray


class WeightFunction:
    def __init__(self, w, psi, iterations, route_deviation, h0_trace):
        self.w = w
        self.psi = psi
        self.iterations = iterations
        self.route_deviation = route_deviation
        self.h0_trace = h0_trace


def compute_weight(mesh, loop=None, opts=None, cross_check=True):
    """The positive weight w = tau . H on a genus-1 surface."""
    curve = mesh.curve
    if curve.genus != 1:
        raise ValueError("the weight function lives on genus-1 surfaces")
    loop = loop or default_loop(curve)
    ops = cauchy.scalar_layer_ops(mesh, 0.0, opts)
    hr, hz = loop.field(mesh.rho, mesh.zz)
    nu_h0 = mesh.nu_rho * hr + mesh.nu_z * hz
    tau_h0 = mesh.nu_z * hr - mesh.nu_rho * hz

    res = gmres(np.eye(mesh.n) + ops["Kv"], -nu_h0, maxiter=200)
    psi = res.x
    w = tau_h0 + ops["Ktau"] @ psi
    if np.abs(w.imag).max() > 1e-10 * np.abs(w.real).max():
        raise ArithmeticError("weight function came out non-real")
    w = w.real

    area = mesh.dsurf.sum()
    mean = (w * mesh.dsurf).sum() / area
    w = w / mean
    if np.any(w <= 0):
        raise ArithmeticError("weight function is not positive")

    deviation = None
    if cross_check:
        # exterior static Hardy trace: null of the exterior projection
        M = np.eye(2 * mesh.n) + _tangential_block(mesh, opts)
        v, _ = _inverse_iteration(M)
        w_alt = v[:mesh.n].real
        w_alt = w_alt / ((w_alt * mesh.dsurf).sum() / area)
        deviation = np.abs(w_alt - w).max() / np.abs(w).max()
    return WeightFunction(w, psi, res.iterations, deviation,
                          (nu_h0, tau_h0))


def excitation_diagnostic(f0, weight, mesh, wn):
    """The unbounded functional d1_N applied to an incident trace."""
    n = mesh.n
    scale = wn.khat ** 2 / wn.sigma_bracket
    comp8 = f0[7 * n:8 * n]
    d = scale * (comp8 * weight.w * mesh.dsurf).sum() / mesh.dsurf.sum()
    ratio = abs(d) / np.abs(f0).max()
    return d, ratio


def stokes_diagnostic(incident_field, weight_H, mesh, wn, box, n_grid=80):
    """Volume form of d1_N over a truncated exterior box (cross-check).

    weight_H: callable (rho, z) -> (H_rho, H_z) for the eigenfield H.
    The integral over the unbounded exterior is truncated to the box, so
    agreement with the surface form is only up to the tail.
    """
    r = np.linspace(box[0], box[1], n_grid)
    z = np.linspace(box[2], box[3], n_grid)
    R, Z = np.meshgrid(r, z)
    tg = np.column_stack([R.ravel(), Z.ravel()])
    region = fields.classify_targets(mesh.curve, tg)
    ext = region == fields.REGION_EXTERIOR
    E0, H0 = incident_field.EH(tg[ext, 0], tg[ext, 1])
    hr, hz = weight_H(tg[ext, 0], tg[ext, 1])
    dv = (r[1] - r[0]) * (z[1] - z[0]) * 2.0 * np.pi * tg[ext, 0]
    integral = np.sum((H0[0] * hr + H0[2] * hz) * dv)
    pref = 1j * wn.k_plus * wn.khat / (wn.sigma_bracket * mesh.dsurf.sum())
    return pref * integral


def _meridian_tree(curve, min_size):
    """Quadtree cover of the interior meridian cross section.

    Cells near the boundary are split down to min_size and resolved by
    4x4 indicator subsampling; the rest of the interior is kept as
    square cells for later target-adaptive refinement.  Returns
    (centers, sizes, boundary_points, boundary_weights).
    """
    import matplotlib.path as mpath
    from scipy.spatial import cKDTree

    s = np.linspace(curve.domain[0], curve.domain[1], 4096, endpoint=False)
    poly = np.column_stack([curve.rho(s), curve.z(s)])
    path = mpath.Path(poly)
    kd = cKDTree(poly)

    lo, hi = poly.min(axis=0), poly.max(axis=0)
    cells = np.array([0.5 * (lo + hi)])
    sizes = np.array([(hi - lo).max() * 1.02])
    in_c, in_s, b_p, b_w = [], [], [], []
    sub = (np.arange(4) + 0.5) / 4.0 - 0.5
    SX, SY = np.meshgrid(sub, sub)
    suboff = np.column_stack([SX.ravel(), SY.ravel()])
    while cells.size:
        d, _ = kd.query(cells)
        mixed = d < sizes * 0.75
        pure = ~mixed
        if pure.any():
            ins = path.contains_points(cells[pure])
            in_c.append(cells[pure][ins])
            in_s.append(sizes[pure][ins])
        fine = mixed & (sizes <= min_size)
        for c0, s0 in zip(cells[fine], sizes[fine]):
            pts = c0 + suboff * s0
            ins = path.contains_points(pts)
            b_p.append(pts[ins])
            b_w.append(np.full(int(ins.sum()), (s0 / 4.0) ** 2))
        split = mixed & (sizes > min_size)
        off = np.array([[-1, -1], [-1, 1], [1, -1], [1, 1]]) / 4.0
        cells = (cells[split][:, None, :]
                 + off[None] * sizes[split][:, None, None]).reshape(-1, 2)
        sizes = np.repeat(sizes[split] / 2.0, 4)
    return (np.concatenate(in_c), np.concatenate(in_s),
            np.concatenate(b_p), np.concatenate(b_w))


_GAUSS2 = np.array([[-1, -1], [-1, 1], [1, -1], [1, 1]]) / (2.0 * np.sqrt(3))


def _biot_savart(targets, in_c, in_s, b_p, b_w, c_fit,
                 theta=0.3, s_min=1e-4):
    """H of the azimuthal current c_fit / rho over the quadtree domain.

    Interior cells are refined per target until size < theta * distance
    (with 2x2 Gauss points per accepted cell), so the evaluated field is
    smooth enough for finite differencing; a cell shrunk below s_min
    that still contains the target is dropped (its self-field cancels
    to the accuracy of interest).
    """
    H = np.zeros((2, targets.shape[0]))
    off4 = np.array([[-1, -1], [-1, 1], [1, -1], [1, 1]]) / 4.0
    for i, (tr, tz) in enumerate(targets):
        pts = [b_p]
        wts = [b_w]
        cc, ss = in_c, in_s
        while cc.size:
            d = np.hypot(cc[:, 0] - tr, cc[:, 1] - tz)
            keep = (ss < theta * d) | (ss < s_min)
            hold = keep & (np.maximum(np.abs(cc[:, 0] - tr),
                                      np.abs(cc[:, 1] - tz)) > 0.5 * ss)
            kc, ks = cc[hold], ss[hold]
            if kc.size:
                p = kc[:, None, :] + _GAUSS2[None] * ks[:, None, None]
                pts.append(p.reshape(-1, 2))
                wts.append(np.repeat(ks * ks / 4.0, 4))
            rest, rs = cc[~keep], ss[~keep]
            cc = (rest[:, None, :]
                  + off4[None] * rs[:, None, None]).reshape(-1, 2)
            ss = np.repeat(rs / 2.0, 4)
        P = np.vstack(pts)
        W = np.concatenate(wts)
        cur = c_fit * W / P[:, 0]
        hr, hz = _loop_kernel(P[:, 0], tz - P[:, 1], tr)
        H[0, i] = cur @ hr
        H[1, i] = cur @ hz
    return H


def eddy_eigenfield(mesh, targets=None, grid_n=60, opts=None):
    """Eddy current J and magnetic field H of the ordinary-conductor
    Neumann eigenfield on a genus-1 surface.

    J extends the null tangential trace of the interior static Cauchy
    system into the interior; it comes out as a purely azimuthal
    current c / rho (the interior cohomology field), and the fitted
    profile feeds an adaptive Biot-Savart quadrature for H.  Output is
    normalized so that max |H| = 1 on the targets.
    """
    curve = mesh.curve
    if curve.genus != 1:
        raise ValueError("no interior harmonic field on genus 0")
    M = np.eye(2 * mesh.n) - _tangential_block(mesh, opts)
    f, ray = _inverse_iteration(M)
    dens = np.zeros((8, mesh.n), dtype=complex)
    dens[6] = f[:mesh.n]
    dens[7] = f[mesh.n:]

    if targets is None:
        pad = 0.05
        r = np.linspace(max(mesh.rho.min() - pad, 0.01),
                        mesh.rho.max() + pad, grid_n)
        z = np.linspace(mesh.zz.min() - pad, mesh.zz.max() + pad, grid_n)
        R, Z = np.meshgrid(r, z)
        targets = np.column_stack([R.ravel(), Z.ravel()])
    region = fields.classify_targets(curve, targets)
    inside = region == fields.REGION_INTERIOR

    J = np.zeros((3, targets.shape[0]), dtype=complex)
    if inside.any():
        F = cauchy.cauchy_field(mesh, 0.0, [dens], targets[inside], opts)[0]
        J[:, inside] = F[:, 1:4].T

    in_c, in_s, b_p, b_w = _meridian_tree(curve, 0.01)
    # the azimuthal c / rho profile, fitted against the Cauchy extension
    probe = in_c[np.argsort(in_s)[-64:]]
    Fp = cauchy.cauchy_field(mesh, 0.0, [dens], probe, opts)[0]
    cv = Fp[:, 2] * probe[:, 0]
    c_fit = cv.mean()
    spread = np.abs(cv - c_fit).max() / abs(c_fit)
    nonazi = np.abs(Fp[:, [1, 3]]).max() / np.abs(Fp[:, 2]).max()
    if max(spread, nonazi) > 1e-6:
        raise ArithmeticError("interior null field is not azimuthal c/rho")
    H = _biot_savart(targets, in_c, in_s, b_p, b_w, float(c_fit.real))

    scale = np.abs(H).max()
    H = H / scale
    J = J / scale
    return {"targets": targets, "region": region, "J": J, "H": H,
            "rayleigh": ray, "trace": f, "current_coef": c_fit / scale,
            "profile_spread": spread}


def helmholtz_neumann_demo(mesh, ks=(1e-1, 1e-2, 1e-3), opts=None,
                           seed=0):
    """Interior Neumann model problem: augmented vs plain conditioning.

    For each k the single layer ansatz gives the system (I - Knu_k)h =
    2g, singular at k = 0.  The augmentation b c_k with b = 1 and c_k h
    = int h w_k dGamma uses the stabilized weight w_k built from the
    static-minus-dynamic double layer difference.
    """
    rng = np.random.default_rng(seed)
    out = []
    n = mesh.n
    for k in ks:
        ops = cauchy.scalar_layer_ops(mesh, complex(k), opts)
        A = np.eye(n) - ops["Kv"]
        diff = cauchy.dl_difference(mesh, complex(k), opts)
        w_k = (diff @ np.ones(n)) / (2.0 * k ** 2)
        c_row = w_k * mesh.dsurf
        Aaug = A + np.outer(np.ones(n), c_row)
        # duality: -(1/2k^2) int (h - Knu_k h) dGamma = int h w_k dGamma
        h = rng.standard_normal(n)
        lhs = -(mesh.dsurf @ (A @ h)) / (2.0 * k ** 2)
        rhs = c_row @ h
        dual = abs(lhs - rhs) / max(abs(lhs), abs(rhs))
        out.append({"k": k,
                    "sv_plain": np.linalg.svd(A, compute_uv=False)[-1],
                    "sv_aug": np.linalg.svd(Aaug, compute_uv=False)[-1],
                    "w_k_max": float(np.abs(w_k).max()),
                    "duality_residual": float(dual)})
    return out
