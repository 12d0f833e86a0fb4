"""Assembly and solution of the tuned eight-component transmission systems.

The second kind system is (I + G) h = 2 N f0 with

    G = P (E_{k+} (r M') - M E_{k-}) P',

all diagonal factors acting componentwise.  Depending on the scheme, a
small number of rank one terms b c (an augmentation column b and a row
functional c) are added to suppress the null spaces that open up in the
low-frequency and high-conductivity limits, together with matching
corrections to the field representations.
"""

from __future__ import annotations

import time
import warnings

import numpy as np

from . import cauchy, params
from .linalg import gmres

SCHEMES = ("A", "A-inf", "A-inf-aug", "B", "B-aug0", "B-aug1")

_VARIANT_OF = {"A": "dirac", "A-inf": "dirac-inf", "A-inf-aug": "dirac-inf",
               "B": "dirac-zero", "B-aug0": "dirac-zero",
               "B-aug1": "dirac-zero"}


class Wavenumbers:
    """Validated wavenumber pair with derived quantities."""

    def __init__(self, k_minus, k_plus, length_scale=1.0):
        km = complex(k_minus)
        kp = complex(k_plus)
        if km == 0 or kp == 0:
            raise ValueError("wavenumbers must be nonzero")
        if km.imag < 0 or kp.imag < 0:
            raise ValueError("wavenumbers must have Im k >= 0")
        kh = kp / km
        if kh.imag == 0 and kh.real < 0:
            raise ValueError("khat on the negative real axis is rejected")
        self.k_minus = km
        self.k_plus = kp
        self.khat = kh
        self.a = kh / abs(kh)
        self.sigma_bracket = 1.0 + abs(kp * kh)
        L = float(length_scale)
        if not (abs(km) * L < 0.1 * abs(kp) * L and abs(kp) * L <= 50.0):
            warnings.warn("wavenumbers outside the eddy current regime "
                          "advisory window", stacklevel=2)


def make_params(scheme, wn, delta=0.2 / np.pi):
    """Tuning diagonals for a scheme, with the identity check enforced."""
    if scheme not in SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}")
    variant = _VARIANT_OF[scheme]
    if variant == "dirac-zero" and abs(wn.khat) < 1.0:
        warnings.warn("variant B is tuned for |khat| >= 1", stacklevel=2)
    tn = params.Tuning(variant, wn.k_minus, wn.k_plus, delta=delta)
    if tn.identity_residual() > 1e-14:
        raise ArithmeticError("tuning identity P(rM'+M)P' = I failed")
    return tn


def _comp_diag(mesh_or_grid, vec8):
    """Expand an 8-vector to the node ordering of a mesh or split grid."""
    if isinstance(mesh_or_grid, cauchy.SplitGrid):
        out = np.empty(mesh_or_grid.size, dtype=complex)
        for c in range(8):
            out[mesh_or_grid.comp_slice(c)] = vec8[c]
        return out
    return np.repeat(np.asarray(vec8, dtype=complex), mesh_or_grid.n)


def _cauchy_E(mesh_or_grid, k, opts=None):
    if isinstance(mesh_or_grid, cauchy.SplitGrid):
        return cauchy.cauchy_E_split(mesh_or_grid, k, opts)
    return cauchy.cauchy_E(mesh_or_grid, k, opts)


def assemble_G(mesh, tn, opts=None):
    """The dense operator block G = P (E_{k+} r M' - M E_{k-}) P'."""
    Ep = _cauchy_E(mesh, tn.k_plus, opts)
    Em = _cauchy_E(mesh, tn.k_minus, opts)
    P = _comp_diag(mesh, tn.P)
    Pp = _comp_diag(mesh, tn.Pp)
    rMp = _comp_diag(mesh, tn.r * tn.Mp)
    M = _comp_diag(mesh, tn.M)
    return (P[:, None] * (Ep * rMp[None, :] - M[:, None] * Em)
            * Pp[None, :])


def _unit_density(mesh, comp):
    e = np.zeros(8 * mesh.n, dtype=complex)
    e[comp * mesh.n:(comp + 1) * mesh.n] = 1.0
    return e


def _avg_row(mesh, comp, weight=None):
    """Row vector realizing the surface average of one component."""
    row = np.zeros(8 * mesh.n, dtype=complex)
    dens = mesh.dsurf if weight is None else mesh.dsurf * weight
    row[comp * mesh.n:(comp + 1) * mesh.n] = dens / mesh.dsurf.sum()
    return row


class AugmentationTerm:
    def __init__(self, name, b, c, d=None):
        self.name = name
        self.b = b
        self.c = c
        self.d = d


def build_augmentations(scheme, mesh, tn, weight_w=None, opts=None):
    """Rank one augmentation terms for an augmented scheme.

    Returns (terms, field_data) where field_data holds the rows needed by
    the corrected field representations (cR_D for the exterior field of
    the B schemes, cR_N for the interior field of B-aug1).
    """
    genus = mesh.curve.genus
    terms = []
    field_data = {}
    if scheme in ("A", "A-inf", "B"):
        return terms, field_data

    N8 = 8 * mesh.n
    Em = cauchy.cauchy_E(mesh, tn.k_minus, opts)
    Eminus = 0.5 * (np.eye(N8) - Em)
    Pp = _comp_diag(mesh, tn.Pp)
    e6 = _unit_density(mesh, 5)

    if scheme == "A-inf-aug":
        c1 = (_avg_row(mesh, 5) @ Eminus) * Pp
        terms.append(AugmentationTerm("bc1_D", e6, c1))
        return terms, field_data

    # B-aug0 and B-aug1 share the Dirichlet-eigenfield handling
    Ep = cauchy.cauchy_E(mesh, tn.k_plus, opts)
    Eplus = 0.5 * (np.eye(N8) + Ep)
    Np = _comp_diag(mesh, tn.Np)
    Pd = _comp_diag(mesh, tn.P)
    kh = tn.khat

    cR_D = _avg_row(mesh, 5)
    bR_D = 2.0 * _comp_diag(mesh, tn.N) * (Eminus @ e6)
    terms.append(AugmentationTerm("bcR_D", bR_D, cR_D))
    field_data["cR_D"] = cR_D

    row6m = _avg_row(mesh, 5) @ Eminus
    c2_D = row6m * Pp + (row6m @ e6) * cR_D
    terms.append(AugmentationTerm("bc2_D", _unit_density(mesh, 0), c2_D))

    row1p = _avg_row(mesh, 0) @ Eplus
    if scheme == "B-aug0":
        c1_H = kh * (row1p * Np)
        terms.append(AugmentationTerm("bc1_H", e6, c1_H))
        return terms, field_data

    # B-aug1 (genus 1)
    if weight_w is None:
        raise ValueError("B-aug1 needs the harmonic weight function w")
    if genus != 1:
        raise ValueError("B-aug1 applies to genus-1 surfaces")
    sig = tn.sigma
    e8 = _unit_density(mesh, 7)

    cR_N = _avg_row(mesh, 7)
    bR_N = 2.0 * (sig / kh ** 2) * Pd * (Eplus @ e8)
    terms.append(AugmentationTerm("bcR_N", bR_N, cR_N))
    field_data["cR_N"] = cR_N
    field_data["weight_w"] = np.asarray(weight_w)

    c2_H = kh * (row1p * Np) + (sig / kh) * (row1p @ e8) * cR_N
    terms.append(AugmentationTerm("bc2_H", e6, c2_H))

    roww = _avg_row(mesh, 7, weight=weight_w)
    scale = kh ** 2 / sig
    roww_p = roww @ Eplus
    term1 = scale * (roww_p * Np) + (roww_p @ e8) * cR_N
    keep15 = _comp_diag(mesh, [1, 1, 1, 1, 1, 0, 0, 0])
    term2 = scale * (((roww @ Eminus) * Pp) * keep15)
    diff = (cauchy.cauchy_difference8(mesh, tn.k_minus, opts)
            - 1j * tn.k_minus
            * cauchy.cauchy_matrices(mesh, tn.k_minus, "full8", opts)["S"])
    keep78 = _comp_diag(mesh, [0, 0, 0, 0, 0, 0, 1, 1])
    term3 = scale * 0.5 * ((roww @ diff) * keep78)
    c1_N = term1 + term2 + term3
    d1_N = scale * roww
    terms.append(AugmentationTerm("bc1_N", e8, c1_N, d=d1_N))
    return terms, field_data


class AssembledSystem:
    """Dense augmented system I + G + sum b c, ready for repeated solves."""

    def __init__(self, mesh, wn, scheme, tn, matrix, terms, field_data):
        self.mesh = mesh
        self.wavenumbers = wn
        self.scheme = scheme
        self.tuning = tn
        self.matrix = matrix
        self.terms = terms
        self.field_data = field_data

    def rhs(self, f0):
        b = 2.0 * _comp_diag(self.mesh, self.tuning.N) * f0
        for t in self.terms:
            if t.d is not None:
                b = b + t.b * (t.d @ f0)
        return b

    def solve(self, f0, maxiter=500):
        t0 = time.perf_counter()
        res = gmres(self.matrix, self.rhs(f0), maxiter=maxiter)
        res.wall_time = time.perf_counter() - t0
        return res


def assemble_system(mesh, wn, scheme, weight_w=None, delta=0.2 / np.pi,
                    opts=None):
    tn = make_params(scheme, wn, delta=delta)
    G = assemble_G(mesh, tn, opts)
    terms, field_data = build_augmentations(scheme, mesh, tn,
                                            weight_w=weight_w, opts=opts)
    A = np.eye(G.shape[0]) + G
    for t in terms:
        A += np.outer(t.b, t.c)
    return AssembledSystem(mesh, wn, scheme, tn, A, terms, field_data)


# ---------------------------------------------------------------------------
# quasi-static limit diagnostics


def _limit_path(scheme, t):
    """Wavenumber pair on the analysis path at parameter t."""
    if scheme.startswith("A"):
        # high-conductivity eddy scaling, k+ ~ sqrt(k-)
        return t, (1.0 + 1.0j) * np.sqrt(t)
    # k+ khat -> 0 sub-limit for variant B
    return t, (1.0 + 1.0j) * t ** 0.75


def _coef_tables(scheme, t):
    """The four 8x8 coefficient tables of G at path parameter t.

    G block (i, j) equals cK[i, j] EK0[i, j] + cS[i, j] S0[i, j] in the
    static limit, with cK = P (r M'_j - M_i) P'_j and cS the same with
    the i k factors of the two wavenumbers attached.
    """
    km, kp = _limit_path(scheme, t)
    tn = params.Tuning(_VARIANT_OF[scheme], km, kp, delta=0.0)
    cK = tn.P[:, None] * ((tn.r * tn.Mp)[None, :]
                          - tn.M[:, None]) * tn.Pp[None, :]
    cS = tn.P[:, None] * (1j * kp * (tn.r * tn.Mp)[None, :]
                          - 1j * km * tn.M[:, None]) * tn.Pp[None, :]
    return cK, cS, tn


def quasistatic_limit(scheme, mesh, t=1e-20, opts=None, augment=False,
                      weight_w=None):
    """The limit matrix I + G0 along the analysis path.

    Coefficients of the static kernels are extrapolated numerically:
    entries still shrinking between two path points are snapped to their
    zero limit, so the limit matrix carries exact zero blocks.  With
    augment=True the rank one terms of an augmented scheme are added,
    with their Cauchy factors taken at the static limit and their tuning
    coefficients at the path point.
    """
    if scheme not in ("A-inf", "A-inf-aug", "B", "B-aug0", "B-aug1"):
        raise ValueError("quasi-static limit applies to the A-inf and B "
                         "schemes")
    cK1, cS1, _ = _coef_tables(scheme, t * 1e8)
    cK2, cS2, tn = _coef_tables(scheme, t)

    def snap(c1, c2):
        lim = c2.copy()
        dying = np.abs(c2) < 1e-3 * np.abs(c1) + 1e-300
        lim[dying] = 0.0
        return lim

    cK = snap(cK1, cK2)
    cS = snap(cS1, cS2)
    ops = cauchy.cauchy_matrices(mesh, 0.0, "full8", opts)
    n = mesh.n
    G0 = np.zeros((8 * n, 8 * n), dtype=complex)
    for i in range(8):
        for j in range(8):
            blk = (cK[i, j] * ops["K"][i * n:(i + 1) * n, j * n:(j + 1) * n]
                   + cS[i, j] * ops["S"][i * n:(i + 1) * n,
                                         j * n:(j + 1) * n])
            G0[i * n:(i + 1) * n, j * n:(j + 1) * n] = blk
    A = np.eye(8 * n) + G0
    if augment:
        import copy
        tn0 = copy.copy(tn)
        tn0.k_minus = 0.0
        tn0.k_plus = 0.0
        terms, _ = build_augmentations(scheme, mesh, tn0,
                                       weight_w=weight_w, opts=opts)
        for term in terms:
            A += np.outer(term.b, term.c)
    return A, tn
