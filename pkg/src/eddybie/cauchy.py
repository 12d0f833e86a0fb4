"""Cauchy singular integral machinery for the eight-component Dirac system.

The Dirac system on a surface of revolution is discretized with a
Fourier-Nystrom method for the rotationally invariant mode: the azimuthal
integral of the full 3D Cauchy kernel is carried out numerically with graded
product quadrature, leaving dense matrices that couple the nodes of the
generating curve.

Fields carry eight scalar components.  On the surface they are expressed in
the local frame (nu, tau, theta) in the order

    0: scalar part
    1: nu.F2   2: tau.F2   3: theta.F2      (bivector part)
    4: pseudoscalar part
    5: nu.F1   6: tau.F1   7: theta.F1      (vector part)

Off the surface, Cartesian components (scalar, vector, bivector,
pseudoscalar) are used instead.

The kernel is assembled in two pieces: a double-layer piece built from the
gradient of the fundamental solution Phi_k(x) = exp(ik|x|)/(2 pi |x|), and a
single-layer piece built from Phi_k itself.  The full singular Cauchy
operator is E_k = EK + ik ES, which satisfies E_k^2 = I.
"""

from __future__ import annotations

import functools
import hashlib
import os
from pathlib import Path

import numpy as np

# ---------------------------------------------------------------------------
# small vector helpers on component triples


def _dot(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def _cross(a, b):
    return (a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0])


def _scale(c, a):
    return (c * a[0], c * a[1], c * a[2])


def _sub(a, b):
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


@functools.lru_cache(maxsize=64)
def gauss_rule(n):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def lagrange_matrix(xref, xq):
    """Interpolation matrix from values at nodes xref to points xq."""
    xref = np.asarray(xref, dtype=float)
    xq = np.asarray(xq, dtype=float)
    n = xref.size
    bw = np.ones(n)
    for j in range(n):
        bw[j] = 1.0 / np.prod(xref[j] - np.delete(xref, j))
    d = xq[:, None] - xref[None, :]
    exact = np.isclose(d, 0.0, atol=1e-300)
    d = np.where(exact, 1.0, d)
    terms = bw[None, :] / d
    L = terms / terms.sum(axis=1)[:, None]
    hit = exact.any(axis=1)
    if np.any(hit):
        L[hit] = exact[hit].astype(float)
    return L


def bracket(u):
    """Stable evaluation of 1 + exp(u)(u - 1) = u^2/2 + u^3/3 + ...

    The naive form loses all significant digits for small |u|.
    """
    u = np.asarray(u, dtype=complex)
    out = np.where(np.abs(u) < 0.7, 0.0, 1.0 + np.exp(u) * (u - 1.0))
    small = np.abs(u) < 0.7
    if np.any(small):
        us = u[small]
        acc = np.zeros_like(us)
        term = us * us  # u^n, starting at n=2
        fact = 2.0
        for n in range(2, 22):
            acc = acc + term * ((n - 1.0) / fact)
            term = term * us
            fact = fact * (n + 1.0)
        out = np.where(small, _place(out, small, acc), out)
    return out


def _place(template, mask, vals):
    t = np.array(template, copy=True)
    t[mask] = vals
    return t


# ---------------------------------------------------------------------------
# azimuthal quadrature grids


@functools.lru_cache(maxsize=4096)
def phi_grid(level, osc, order=16):
    """Symmetric graded quadrature on (-pi, pi) clustered toward phi = 0.

    level controls the number of dyadic halvings toward 0; osc forces a
    maximum panel width pi*2^-osc to resolve oscillatory integrands.
    """
    bps = [np.pi * 2.0 ** (-j) for j in range(level)]
    bps.append(0.0)
    bps = bps[::-1]  # ascending from 0 to pi
    x, w = gauss_rule(order)
    nodes = []
    weights = []
    wmax = np.pi * 2.0 ** (-osc)
    for lo, hi in zip(bps[:-1], bps[1:]):
        width = hi - lo
        nsub = max(1, int(np.ceil(width / wmax - 1e-12)))
        edges = np.linspace(lo, hi, nsub + 1)
        for a, b in zip(edges[:-1], edges[1:]):
            h = 0.5 * (b - a)
            nodes.append(a + h * (x + 1.0))
            weights.append(h * w)
    pos = np.concatenate(nodes)
    pw = np.concatenate(weights)
    phi = np.concatenate([-pos[::-1], pos])
    phiw = np.concatenate([pw[::-1], pw])
    phi.setflags(write=False)
    phiw.setflags(write=False)
    return phi, phiw


def phi_level(delphi, max_level=46):
    """Grading depth needed for a peak of angular half-width delphi."""
    delphi = np.maximum(delphi, 1e-13)
    lev = np.ceil(np.log2(np.pi / delphi)).astype(int) + 1
    return np.clip(lev, 2, max_level)


def osc_level(k, rho_scale):
    """Extra uniform subdivision needed for the oscillatory factor."""
    rate = abs(k) * max(rho_scale, 0.0)  # max phase change per radian of phi
    if rate * np.pi <= 8.0:
        return 0
    return int(np.ceil(np.log2(rate * np.pi / 8.0)))


# ---------------------------------------------------------------------------
# modal kernel evaluation


def modal_blocks(mode, k, tgt, src, phi, phiw):
    """Azimuthally integrated kernel blocks for one target, many sources.

    tgt: dict with rho, z and optionally nu = (nu_rho, nu_z); when nu is
         present the output rows are in the surface frame of the target,
         otherwise they are Cartesian multivector components.
    src: dict with arrays rho, nu_rho, nu_z, drho, dz, where drho, dz are the
         meridian offsets rho_src - rho_tgt, z_src - z_tgt (computed stably
         by the caller when tiny).
    Returns a dict of (nrows, ncols, ns) arrays, phi-integrated.  The surface
    measure rho * jac * weight is NOT included.
    """
    rho_x = tgt["rho"]
    ns = src["rho"].size
    rho_t = src["rho"][:, None]
    nrho = src["nu_rho"][:, None]
    nz = src["nu_z"][:, None]
    drho = src["drho"][:, None]
    dz = src["dz"][:, None]

    cphi = np.cos(phi)[None, :]
    sphi = np.sin(phi)[None, :]
    h2 = np.sin(phi / 2)[None, :] ** 2

    R2 = drho * drho + dz * dz + 4.0 * rho_x * rho_t * h2
    R2 = np.maximum(R2, 1e-300)
    R = np.sqrt(R2)

    # chord y - x in Cartesian coordinates, target in the phi=0 half plane
    Dx = drho - 2.0 * rho_t * h2
    Dy = rho_t * sphi
    Dz = dz + np.zeros_like(Dy)
    D = (Dx + np.zeros_like(Dy), Dy, Dz)

    nu_y = (nrho * cphi, nrho * sphi, nz + np.zeros_like(Dy))

    ikR = 1j * k * R
    expf = np.exp(ikR)
    Phi = expf / (2.0 * np.pi * R)

    diff = mode in ("diff8", "scalardiff")
    if diff:
        # gradient difference of the static and dynamic kernels,
        # grad Phi_0 - grad Phi_k = -(g0 - gk), with the stable bracket
        gfac = bracket(ikR) / (2.0 * np.pi * R2 * R)
    else:
        gfac = Phi * (1.0 - ikR) / R2
    g = _scale(gfac, D)

    if mode in ("full8", "diff8"):
        out = _full8(mode, tgt, src, g, Phi, nu_y, cphi, sphi, phiw, ns)
    elif mode == "scalar":
        out = _scalar_ops(tgt, g, Phi, nu_y, phiw, ns)
    elif mode == "scalardiff":
        ker = -_dot(g, nu_y)
        out = {"K": (ker @ phiw).reshape(1, 1, ns)}
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return out


def _target_frame(tgt):
    nrho, nz = tgt["nu"]
    nu_x = (nrho, 0.0, nz)
    tau_x = (nz, 0.0, -nrho)
    theta_x = (0.0, 1.0, 0.0)
    return nu_x, tau_x, theta_x


def _full8(mode, tgt, src, g, Phi, nu_y, cphi, sphi, phiw, ns):
    nrho = src["nu_rho"][:, None]
    nz = src["nu_z"][:, None]
    zero = np.zeros_like(g[1])
    tau_y = (nz * cphi, nz * sphi, -nrho + zero)
    theta_y = (-sphi + zero, cphi + zero, zero)

    a = _dot(g, nu_y)
    m = _cross(g, nu_y)
    with_S = mode == "full8"
    if with_S:
        u = _scale(Phi, nu_y)

    zcol = (zero, (zero,) * 3, (zero,) * 3, zero)
    kcols = [(a, (zero,) * 3, m, zero)]
    scols = [(zero, u, (zero,) * 3, zero)] if with_S else None
    frames = (nu_y, tau_y, theta_y)
    for e in frames:  # bivector-type source components
        me = _dot(m, e)
        ame = _sub(_scale(a, e), _cross(m, e))
        kcols.append((-me, (zero,) * 3, ame, zero))
        if with_S:
            scols.append((zero, _scale(-1.0, _cross(u, e)),
                          (zero,) * 3, _dot(u, e)))
    kcols.append((zero, _scale(-1.0, m), (zero,) * 3, a))
    if with_S:
        scols.append((zero, (zero,) * 3, u, zero))
    for e in frames:  # vector-type source components
        me = _dot(m, e)
        ame = _sub(_scale(a, e), _cross(m, e))
        kcols.append((zero, ame, (zero,) * 3, me))
        if with_S:
            scols.append((_dot(u, e), (zero,) * 3, _cross(u, e), zero))

    out = {"K": _project(kcols, tgt, phiw, ns)}
    if with_S:
        out["S"] = _project(scols, tgt, phiw, ns)
    return out


def _project(cols, tgt, phiw, ns):
    """Integrate multivector columns over phi and project onto output rows."""
    blk = np.empty((8, 8, ns), dtype=complex)
    frame = tgt.get("nu") is not None
    if frame:
        nu_x, tau_x, theta_x = _target_frame(tgt)
    for j, (s, v, w, p) in enumerate(cols):
        si = s @ phiw
        vi = tuple(c @ phiw for c in v)
        wi = tuple(c @ phiw for c in w)
        pi = p @ phiw
        if frame:
            blk[0, j] = si
            blk[1, j] = _dot(wi, nu_x)
            blk[2, j] = _dot(wi, tau_x)
            blk[3, j] = _dot(wi, theta_x)
            blk[4, j] = pi
            blk[5, j] = _dot(vi, nu_x)
            blk[6, j] = _dot(vi, tau_x)
            blk[7, j] = _dot(vi, theta_x)
        else:
            blk[0, j] = si
            blk[1, j], blk[2, j], blk[3, j] = vi
            blk[4, j], blk[5, j], blk[6, j] = wi
            blk[7, j] = pi
    return blk


def _scalar_ops(tgt, g, Phi, nu_y, phiw, ns):
    nu_x, tau_x, theta_x = _target_frame(tgt)
    kvp = -_dot(g, nu_y)           # kernel of the acoustic double layer
    kv = -(g[0] * nu_x[0] + g[1] * nu_x[1] + g[2] * nu_x[2])
    kt = -(g[0] * tau_x[0] + g[1] * tau_x[1] + g[2] * tau_x[2])
    K = np.stack([kvp @ phiw, kv @ phiw, kt @ phiw])[:, None, :]
    S = (Phi @ phiw).reshape(1, 1, ns)
    return {"K": K, "S": S}


# ---------------------------------------------------------------------------
# Nystrom assembly on the generating curve


class QuadratureOptions:
    def __init__(self, eps_pv=1e-10, near_mult=1.2, sub_order=10,
                 max_level=46):
        self.eps_pv = eps_pv
        self.near_mult = near_mult
        self.sub_order = sub_order
        self.max_level = max_level


def _wrapped_dist(curve, s, t):
    d = t - s
    if curve.genus == 1:
        per = curve.period
        d = (d + per / 2) % per - per / 2
    return d


def _graded_offsets(width, dstop):
    """Dyadic breakpoint offsets from `width` down toward 0, stopping at
    dstop."""
    if width <= 2 * dstop:
        return [width, dstop]
    pts = [width]
    while pts[-1] / 2 > dstop * 1.5 and len(pts) < 60:
        pts.append(pts[-1] / 2)
    pts.append(dstop)
    return pts


def _graded_intervals(lo, hi, anchor_at_lo, dstop, close):
    """Sub-intervals of [lo, hi] dyadically refined toward the anchored end.

    With close=True the innermost interval reaches the anchor, otherwise an
    exclusion of size dstop is left (symmetric principal value handling).
    """
    width = hi - lo
    if width <= 0:
        return []
    if not close and width <= dstop:
        return []
    offs = _graded_offsets(width, dstop)
    if close:
        offs[-1] = 0.0
    out = []
    for o_small, o_big in zip(offs[1:], offs[:-1]):
        if o_big <= o_small:
            continue
        if anchor_at_lo:
            out.append((lo + o_small, lo + o_big))
        else:
            out.append((hi - o_big, hi - o_small))
    return out


_TANG = [2, 3, 6, 7]  # tau and theta components, vanishing on the axis
_EVEN = [0, 1, 4, 5]


def density_interp(mesh, t, sub):
    """Interpolation matrices (L_even, L_tang) from panel nodes to points t.

    On the global genus-0 spectral grid the interpolation respects the
    behavior of smooth axisymmetric fields at the axis: even components
    are polynomials in a variable even about both endpoints, tangential
    components carry an extra linearly vanishing factor.  On composite
    panel meshes every density is locally smooth in the curve parameter,
    so both matrices are plain Lagrange interpolation in the panel
    parameter; interpolating in the pole-even variable there would be
    badly conditioned, since panel nodes cluster quadratically in it
    near the axis.
    """
    s_sub = mesh.s[sub]
    if mesh.spacing != "even":
        lo = mesh.breaks[sub.start // mesh.order]
        hi = mesh.breaks[sub.start // mesh.order + 1]
        xr = (t - 0.5 * (lo + hi)) / (0.5 * (hi - lo))
        L = lagrange_matrix(mesh.ref_nodes, xr)
        return L, L
    Le = lagrange_matrix(mesh.pole_even(s_sub), mesh.pole_even(t))
    wt = mesh.pole_weight(t)
    wn = mesh.pole_weight(s_sub)
    Lt = wt[:, None] * Le / wn[None, :]
    return Le, Lt


def _near_panel_quad(mesh, s_i, q, k, mode, tgt, opts, accum):
    """Refined contribution of source panel q to one target row.

    s_i is the surface parameter of the target; when it falls inside panel q
    the integral is treated as a symmetric principal value around it.
    """
    curve = mesh.curve
    a, b = mesh.panel_bounds(q)
    sub = mesh.panel_slice(q)
    # the refined rule must resolve the panel's own density degree
    nq = max(opts.sub_order, mesh.order + 8)
    xq, _ = gauss_rule(nq)

    if s_i is not None and a < s_i < b:
        # principal value: symmetric parameter exclusion around the target
        intervals = (_graded_intervals(a, s_i, False, opts.eps_pv, False)
                     + _graded_intervals(s_i, b, True, opts.eps_pv, False))
    else:
        # grade toward the parameter of closest approach
        tsamp = np.linspace(a, b, 65)
        dr, dz = curve.chord(np.full_like(tsamp, s_i), tsamp)
        dmin_arr = np.hypot(dr, dz)
        jloc = max(curve.jacobian(np.array([0.5 * (a + b)]))[0], 1e-12)
        imin = int(np.argmin(dmin_arr))
        tstar = tsamp[imin]
        dstop = max(float(dmin_arr[imin]) / jloc * 0.5, opts.eps_pv)
        intervals = (_graded_intervals(a, tstar, False, dstop, True)
                     + _graded_intervals(tstar, b, True, dstop, True))

    ref_lo, ref_hi = a, b
    kmag = abs(k)
    for lo, hi in intervals:
        if hi - lo <= 0:
            continue
        h = 0.5 * (hi - lo)
        t = lo + h * (xq + 1.0)
        rho_t = curve.rho(t)
        z_t = curve.z(t)
        jac_t = curve.jacobian(t)
        nrho_t, nz_t = curve.normal(t)
        dr, dz = curve.chord(np.full_like(t, s_i), t)
        dmin = np.hypot(dr, dz).min()
        delphi = dmin / np.sqrt(max(tgt["rho"] * rho_t.max(), 1e-280))
        lev = int(phi_level(delphi, opts.max_level))
        osc = osc_level(kmag, np.sqrt(max(tgt["rho"] * rho_t.max(), 0.0)))
        phi, phiw = phi_grid(lev, osc)
        src = {"rho": rho_t, "nu_rho": nrho_t, "nu_z": nz_t,
               "drho": dr, "dz": dz}
        blocks = modal_blocks(mode, k, tgt, src, phi, phiw)
        wts = (h * gauss_rule(nq)[1]) * jac_t * rho_t
        # map refined nodes back onto the panel's own degrees of freedom
        Le, Lt = density_interp(mesh, t, sub)
        for name, blk in blocks.items():
            C = np.einsum("rcs,s,sj->rcj", blk, wts, Le, optimize=True)
            if blk.shape[1] == 8 and Lt is not Le:
                C[:, _TANG] = np.einsum("rcs,s,sj->rcj", blk[:, _TANG],
                                        wts, Lt, optimize=True)
            accum[name][:, :, sub] += C


def assemble_operator(mesh, k, mode="full8", opts=None, progress=None,
                      tgt_mesh=None):
    """Assemble azimuthal-mode-zero Nystrom matrices on the mesh.

    Returns a dict of matrices, each of shape (nr*Nt, nc*N) with
    component-major ordering.  For mode "full8" the keys are "K" and "S" and
    the singular Cauchy operator is K + ik S.

    tgt_mesh optionally supplies a different set of on-surface target nodes
    (same curve); sources and density interpolation stay on `mesh`.
    """
    opts = opts or QuadratureOptions()
    tm = mesh if tgt_mesh is None else tgt_mesh
    N = mesh.n
    Nt = tm.n
    shapes = {"full8": {"K": (8, 8), "S": (8, 8)},
              "diff8": {"K": (8, 8)},
              "scalar": {"K": (3, 1), "S": (1, 1)},
              "scalardiff": {"K": (1, 1)}}[mode]
    accums = {name: np.zeros(shp + (Nt, N), dtype=complex)
              for name, shp in shapes.items()}

    arclen = np.add.reduceat(mesh.dline, np.arange(0, N, mesh.order))
    kmag = abs(k)

    for i in range(Nt):
        tgt = {"rho": tm.rho[i], "z": tm.zz[i],
               "nu": (tm.nu_rho[i], tm.nu_z[i])}
        row = {name: acc[:, :, i, :] for name, acc in accums.items()}
        near = set()
        for p in range(mesh.n_panels):
            if mesh.breaks[p] <= tm.s[i] <= mesh.breaks[p + 1]:
                near.update(mesh.neighbor_panels(p))
        dm = np.hypot(mesh.rho - tm.rho[i], mesh.zz - tm.zz[i])
        for q in range(mesh.n_panels):
            if q in near:
                continue
            if dm[mesh.panel_slice(q)].min() < opts.near_mult * arclen[q]:
                near.add(q)

        # far panels: plain Nystrom with per-node graded azimuthal grids
        far_nodes = np.concatenate([
            np.arange(N)[mesh.panel_slice(q)]
            for q in range(mesh.n_panels) if q not in near]) if \
            len(near) < mesh.n_panels else np.array([], dtype=int)
        if far_nodes.size:
            delphi = dm[far_nodes] / np.sqrt(
                np.maximum(tm.rho[i] * mesh.rho[far_nodes], 1e-280))
            levs = phi_level(delphi, opts.max_level)
            oscs = np.array([osc_level(
                kmag, np.sqrt(max(tm.rho[i] * mesh.rho[j], 0.0)))
                for j in far_nodes])
            for key in sorted(set(zip(levs, oscs))):
                sel = far_nodes[(levs == key[0]) & (oscs == key[1])]
                phi, phiw = phi_grid(int(key[0]), int(key[1]))
                src = {"rho": mesh.rho[sel], "nu_rho": mesh.nu_rho[sel],
                       "nu_z": mesh.nu_z[sel],
                       "drho": mesh.rho[sel] - tm.rho[i],
                       "dz": mesh.zz[sel] - tm.zz[i]}
                blocks = modal_blocks(mode, k, tgt, src, phi, phiw)
                wts = mesh.dline[sel] * mesh.rho[sel]
                for name, blk in blocks.items():
                    row[name][:, :, sel] += blk * wts

        for q in sorted(near):
            _near_panel_quad(mesh, tm.s[i], q, k, mode, tgt, opts, row)
        if progress is not None:
            progress(i, Nt)

    out = {}
    for name, acc in accums.items():
        nr, nc = shapes[name]
        big = np.empty((nr * Nt, nc * N), dtype=complex)
        for r in range(nr):
            for c in range(nc):
                big[r * Nt:(r + 1) * Nt, c * N:(c + 1) * N] = acc[r, c]
        out[name] = big
    return out


# ---------------------------------------------------------------------------
# cached high-level interface


_MEM_CACHE = {}


def _cache_dir():
    root = os.environ.get("EDDYBIE_CACHE",
                          os.path.join(os.path.expanduser("~"),
                                       ".cache", "eddybie"))
    Path(root).mkdir(parents=True, exist_ok=True)
    return root


def _mesh_key(mesh):
    h = hashlib.sha256()
    for arr in (mesh.curve.rho_cos, mesh.curve.rho_sin,
                mesh.curve.z_cos, mesh.curve.z_sin):
        h.update(np.asarray(arr).tobytes())
    h.update(np.asarray(mesh.curve.domain).tobytes())
    h.update(bytes([mesh.curve.genus]))
    h.update(np.asarray([mesh.n_panels, mesh.order]).tobytes())
    h.update(mesh.spacing.encode())
    return h.hexdigest()[:16]


def cauchy_matrices(mesh, k, mode="full8", opts=None, use_disk=True,
                    tgt_mesh=None):
    """Assemble (or fetch cached) kernel matrices for the mesh at k."""
    key = (_mesh_key(mesh), complex(k), mode,
           None if tgt_mesh is None else _mesh_key(tgt_mesh))
    if key in _MEM_CACHE:
        return _MEM_CACHE[key]
    fname = None
    if use_disk:
        tag = hashlib.sha256(repr(key).encode()).hexdigest()[:24]
        fname = os.path.join(_cache_dir(), f"op_{tag}.npz")
        if os.path.exists(fname):
            with np.load(fname) as z:
                out = {name: z[name] for name in z.files}
            _MEM_CACHE[key] = out
            return out
    out = assemble_operator(mesh, k, mode=mode, opts=opts, tgt_mesh=tgt_mesh)
    _MEM_CACHE[key] = out
    if fname:
        try:
            np.savez(fname, **out)
        except OSError:
            pass
    return out


def cauchy_E(mesh, k, opts=None, use_disk=True):
    """The singular Cauchy operator E_k as a dense (8N, 8N) matrix."""
    ops = cauchy_matrices(mesh, k, "full8", opts, use_disk)
    return ops["K"] + 1j * k * ops["S"]


def hardy_plus(mesh, k, **kw):
    E = cauchy_E(mesh, k, **kw)
    return 0.5 * (np.eye(E.shape[0]) + E)


def hardy_minus(mesh, k, **kw):
    E = cauchy_E(mesh, k, **kw)
    return 0.5 * (np.eye(E.shape[0]) - E)


def scalar_layer_ops(mesh, k=0.0, opts=None, use_disk=True):
    """Named scalar boundary operators on the mesh at wavenumber k.

    Returns dict with the acoustic double layer "Kvp", its target-normal and
    target-tangent variants "Kv" and "Ktau", and the single layer "S"
    (without the ik factor).
    """
    ops = cauchy_matrices(mesh, k, "scalar", opts, use_disk)
    N = mesh.n
    K = ops["K"]
    return {"Kvp": K[0:N], "Kv": K[N:2 * N], "Ktau": K[2 * N:3 * N],
            "S": ops["S"]}


def dl_difference(mesh, k, opts=None, use_disk=True):
    """Matrix of the static-minus-dynamic double layer, K0' - Kk'."""
    return cauchy_matrices(mesh, k, "scalardiff", opts, use_disk)["K"]


def cauchy_difference8(mesh, k, opts=None, use_disk=True):
    """Matrix of EK0 - EKk (double-layer parts only), stable at small k."""
    return cauchy_matrices(mesh, k, "diff8", opts, use_disk)["K"]


# ---------------------------------------------------------------------------
# off-surface evaluation


def cauchy_field(mesh, k, densities, targets, opts=None):
    """Evaluate Cauchy extensions int Psi_k nu g dGamma at 3D targets.

    densities: list of (8, N) arrays of surface-frame components.
    targets: (nt, 2) array of (rho, z) meridian coordinates, evaluated at
    azimuth 0, i.e. x = (rho, 0, z).  Returns a list of (nt, 8) arrays of
    Cartesian multivector components.

    Targets close to the surface are handled with graded subdivision of the
    nearby panels, interpolating the density along each panel.
    """
    opts = opts or QuadratureOptions()
    targets = np.atleast_2d(np.asarray(targets, dtype=float))
    nt = targets.shape[0]
    out = [np.zeros((nt, 8), dtype=complex) for _ in densities]
    N = mesh.n
    curve = mesh.curve
    arclen = np.add.reduceat(mesh.dline, np.arange(0, N, mesh.order))
    kmag = abs(k)
    nq = max(opts.sub_order, mesh.order + 8)
    xq, wq = gauss_rule(nq)

    for it in range(nt):
        rho_x, z_x = targets[it]
        tgt = {"rho": rho_x, "z": z_x, "nu": None}
        dm = np.hypot(mesh.rho - rho_x, mesh.zz - z_x)
        near = set()
        for q in range(mesh.n_panels):
            if dm[mesh.panel_slice(q)].min() < opts.near_mult * arclen[q]:
                near.add(q)
        far_nodes = np.concatenate([
            np.arange(N)[mesh.panel_slice(q)]
            for q in range(mesh.n_panels) if q not in near]) if \
            len(near) < mesh.n_panels else np.array([], dtype=int)

        row = np.zeros((8, 8, N), dtype=complex)
        if far_nodes.size:
            delphi = dm[far_nodes] / np.sqrt(
                np.maximum(rho_x * mesh.rho[far_nodes], 1e-280))
            levs = phi_level(delphi, opts.max_level)
            oscs = np.array([osc_level(
                kmag, np.sqrt(max(rho_x * mesh.rho[j], 0.0)))
                for j in far_nodes])
            for key in sorted(set(zip(levs, oscs))):
                sel = far_nodes[(levs == key[0]) & (oscs == key[1])]
                phi, phiw = phi_grid(int(key[0]), int(key[1]))
                src = {"rho": mesh.rho[sel], "nu_rho": mesh.nu_rho[sel],
                       "nu_z": mesh.nu_z[sel],
                       "drho": mesh.rho[sel] - rho_x,
                       "dz": mesh.zz[sel] - z_x}
                blocks = modal_blocks("full8", k, tgt, src, phi, phiw)
                blk = blocks["K"] + 1j * k * blocks["S"]
                row[:, :, sel] += blk * (mesh.dline[sel] * mesh.rho[sel])

        for q in sorted(near):
            a, b = mesh.panel_bounds(q)
            sub = mesh.panel_slice(q)
            tsamp = np.linspace(a, b, 65)
            dmin_arr = np.hypot(curve.rho(tsamp) - rho_x,
                                curve.z(tsamp) - z_x)
            imin = int(np.argmin(dmin_arr))
            tstar = tsamp[imin]
            jloc = max(curve.jacobian(np.array([0.5 * (a + b)]))[0], 1e-12)
            dstop = max(float(dmin_arr[imin]) / jloc * 0.5, 1e-7)
            intervals = (_graded_intervals(a, tstar, False, dstop, True)
                         + _graded_intervals(tstar, b, True, dstop, True))
            for lo, hi in intervals:
                if hi - lo <= 0:
                    continue
                h = 0.5 * (hi - lo)
                t = lo + h * (xq + 1.0)
                rho_t = curve.rho(t)
                z_t = curve.z(t)
                dr = rho_t - rho_x
                dzz = z_t - z_x
                dmin = np.hypot(dr, dzz).min()
                delphi = dmin / np.sqrt(max(rho_x * rho_t.max(), 1e-280))
                lev = int(phi_level(delphi, opts.max_level))
                osc = osc_level(kmag, np.sqrt(max(rho_x * rho_t.max(), 0.0)))
                phi, phiw = phi_grid(lev, osc)
                src = {"rho": rho_t, "nu_rho": curve.normal(t)[0],
                       "nu_z": curve.normal(t)[1], "drho": dr, "dz": dzz}
                blocks = modal_blocks("full8", k, tgt, src, phi, phiw)
                blk = blocks["K"] + 1j * k * blocks["S"]
                wts = (h * wq) * curve.jacobian(t) * rho_t
                Le, Lt = density_interp(mesh, t, sub)
                C = np.einsum("rcs,s,sj->rcj", blk, wts, Le, optimize=True)
                if Lt is not Le:
                    C[:, _TANG] = np.einsum(
                        "rcs,s,sj->rcj", blk[:, _TANG], wts, Lt,
                        optimize=True)
                row[:, :, sub] += C

        for od, dens in zip(out, densities):
            od[it] = 0.5 * np.einsum("rcn,cn->r", row, dens)
    return out

# ---------------------------------------------------------------------------
# split-grid spectral discretization (genus 0)


SPLIT_EVEN = (0, 1, 4, 5)
SPLIT_TANGENTIAL = (2, 3, 6, 7)


class SplitGrid:
    """Paired spectral grids for the eight-component system on genus 0.

    Components that are even about the axis endpoints live on n+1 Gauss
    nodes of the pole-even variable; tangential components, which vanish
    at the axis, live on n nodes.  The one-node offset matches the degree
    bookkeeping of the singular Cauchy operator: tangential input of
    degree m produces even output of degree m+1 and even input of degree
    m produces tangential output of degree m-1, so the discrete space is
    invariant and operator identities hold at the matrix level.
    """

    def __init__(self, curve, n):
        from .geometry import PanelMesh
        if curve.genus != 0:
            raise ValueError("split grid requires a genus-0 curve")
        self.curve = curve
        self.n = int(n)
        self.mesh_even = PanelMesh(curve, 1, order=self.n + 1, spacing="even")
        self.mesh_tang = PanelMesh(curve, 1, order=self.n, spacing="even")
        self.offsets = []
        total = 0
        for c in range(8):
            self.offsets.append(total)
            total += self.mesh_for(c).n
        self.size = total

    def mesh_for(self, comp):
        return self.mesh_even if comp in SPLIT_EVEN else self.mesh_tang

    def comp_slice(self, comp):
        return slice(self.offsets[comp],
                     self.offsets[comp] + self.mesh_for(comp).n)


def cauchy_E_split(grid, k, opts=None, use_disk=True):
    """Singular Cauchy operator on a SplitGrid as one square matrix."""
    mats = {}
    for tname, tm in (("e", grid.mesh_even), ("t", grid.mesh_tang)):
        for sname, sm in (("e", grid.mesh_even), ("t", grid.mesh_tang)):
            ops = cauchy_matrices(sm, k, "full8", opts, use_disk,
                                  tgt_mesh=None if tm is sm else tm)
            mats[(tname, sname)] = ops["K"] + 1j * k * ops["S"]
    E = np.zeros((grid.size, grid.size), dtype=complex)
    for r in range(8):
        tg = "e" if r in SPLIT_EVEN else "t"
        Nt = grid.mesh_for(r).n
        for c in range(8):
            sg = "e" if c in SPLIT_EVEN else "t"
            Ns = grid.mesh_for(c).n
            M = mats[(tg, sg)]
            E[grid.comp_slice(r), grid.comp_slice(c)] = \
                M[r * Nt:(r + 1) * Nt, c * Ns:(c + 1) * Ns]
    return E
