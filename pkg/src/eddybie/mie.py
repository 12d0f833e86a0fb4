"""Semi-analytic transmission solution on the unit sphere.

The incident field built in incident.partial_wave is a combination of the
two l = 1, m = 0 vector spherical waves

    M(k) = m(kr) sin(th) phi-hat
    N(k) = (1/k) curl M = (2 m(kr)/(kr)) cos(th) r-hat
                          - (w'(kr)/(kr)) sin(th) th-hat

with (m, w) = (j_1, psi_1) for regular waves and (h_1, xi_1) for
outgoing ones.  Matching tangential E and (scaled) tangential H across
r = 1 decouples into two 2x2 systems, one per polarization.  Interior
radial functions grow like exp(|Im k_plus|), so transmission
coefficients are stored against exponentially scaled functions.
"""

from __future__ import annotations

import numpy as np

from . import specfun

AMPLITUDE = np.sqrt(3.0 / (8.0 * np.pi))


def _scaled_trig(z):
    """(sin z, cos z) times exp(-|Im z|), overflow free."""
    z = np.asarray(z, dtype=complex)
    t = np.abs(z.imag)
    ep = np.exp(1j * z - t)
    em = np.exp(-1j * z - t)
    return (ep - em) / 2j, (ep + em) / 2.0


def scaled_j1(z):
    """j_1(z) exp(-|Im z|)."""
    s, c = _scaled_trig(z)
    return s / (z * z) - c / z


def scaled_psi1p(z):
    """psi_1'(z) exp(-|Im z|), psi_1(z) = z j_1(z)."""
    s, c = _scaled_trig(z)
    return s * (1.0 - 1.0 / (z * z)) + c / z


class MieCoefficients:
    """Reflection and scaled transmission coefficients at (k_minus, k_plus).

    t_M and t_N are stored multiplied by exp(scale), scale = |Im k_plus|,
    so that interior fields are formed as t_scaled * scaled_j1(k_plus r) *
    exp(-(1 - r) scale) without overflow.
    """

    def __init__(self, k_minus, k_plus, r_M, t_M_scaled, r_N, t_N_scaled,
                 scale, cond_TE, cond_TM):
        self.k_minus = k_minus
        self.k_plus = k_plus
        self.khat = k_plus / k_minus
        self.r_M = r_M
        self.t_M_scaled = t_M_scaled
        self.r_N = r_N
        self.t_N_scaled = t_N_scaled
        self.scale = scale
        self.cond_TE = cond_TE
        self.cond_TM = cond_TM


def mie_solve(k_minus, k_plus):
    """Solve the two interface systems on the unit sphere."""
    km = complex(k_minus)
    kp = complex(k_plus)
    kh = kp / km
    scale = abs(kp.imag)

    j1m = specfun.spherical_bessel_j(1, km)
    h1m = specfun.spherical_hankel1(1, km)
    pm = specfun.riccati_j(1, km, derivative=True) / km
    xm = specfun.riccati_h(1, km, derivative=True) / km
    j1p = scaled_j1(kp)
    pp = scaled_psi1p(kp) / kp

    # TE: tangential E continuity (phi), tangential H continuity (theta)
    A_te = np.array([[h1m, -j1p], [xm, -kh * pp]], dtype=complex)
    b_te = np.array([-j1m, -pm], dtype=complex)
    # TM: tangential E continuity (theta), tangential H continuity (phi)
    A_tm = np.array([[xm, -pp], [h1m, -kh * j1p]], dtype=complex)
    b_tm = np.array([-pm, -j1m], dtype=complex)

    cond_te = np.linalg.cond(A_te)
    cond_tm = np.linalg.cond(A_tm)
    if not (np.isfinite(cond_te) and np.isfinite(cond_tm)):
        raise ArithmeticError("singular Mie interface system (resonance)")
    r_M, t_M = np.linalg.solve(A_te, b_te)
    r_N, t_N = np.linalg.solve(A_tm, b_tm)
    return MieCoefficients(km, kp, r_M, t_M, r_N, t_N, scale,
                           cond_te, cond_tm)


def _waves(k, r, th, kind, scale=0.0):
    """Spherical components of M and N at radius r, polar angle th.

    kind "j" uses regular waves; "h" outgoing ones.  With scale > 0 the
    radial functions carry exp(-(scale - |Im kr|)), matching the scaled
    transmission coefficients.
    """
    x = k * r
    if kind == "j":
        m = scaled_j1(x) if scale else specfun.spherical_bessel_j(1, x)
        wp = (scaled_psi1p(x) if scale
              else specfun.riccati_j(1, x, derivative=True))
    else:
        m = specfun.spherical_hankel1(1, x)
        wp = specfun.riccati_h(1, x, derivative=True)
    if scale:
        damp = np.exp(np.abs(x.imag) - scale)
        m = m * damp
        wp = wp * damp
    st, ct = np.sin(th), np.cos(th)
    M = (np.zeros_like(m), np.zeros_like(m), m * st)          # r, th, phi
    N = (2.0 * m / x * ct, -wp / x * st, np.zeros_like(m))
    return M, N


def _to_cyl(F, th):
    """Spherical (r, th, phi) components to cylindrical (rho, phi, z)."""
    fr, ft, fp = F
    st, ct = np.sin(th), np.cos(th)
    return fr * st + ft * ct, fp, fr * ct - ft * st


def mie_fields(coeffs, rho, z):
    """Total fields at points (rho, z), exterior and interior combined.

    Returns (E, H) as cylindrical triples; exterior points carry
    E0 + Eminus, interior points the transmitted field.
    """
    rho = np.asarray(rho, dtype=float)
    z = np.asarray(z, dtype=float)
    r = np.hypot(rho, z)
    if np.any(r == 0):
        raise ValueError("mie_fields needs r > 0")
    th = np.arctan2(rho, z)
    c = AMPLITUDE
    km, kp, kh = coeffs.k_minus, coeffs.k_plus, coeffs.khat
    inside = r < 1.0

    E = [np.zeros(r.shape, complex) for _ in range(3)]
    H = [np.zeros(r.shape, complex) for _ in range(3)]

    if np.any(~inside):
        ro, to = r[~inside], th[~inside]
        Mj, Nj = _waves(km, ro, to, "j")
        Mh, Nh = _waves(km, ro, to, "h")
        Ee = [c * (Mj[i] + coeffs.r_M * Mh[i]
                   + Nj[i] + coeffs.r_N * Nh[i]) for i in range(3)]
        He = [-1j * c * (Mj[i] + coeffs.r_N * Mh[i]
                         + Nj[i] + coeffs.r_M * Nh[i]) for i in range(3)]
        ec = _to_cyl(Ee, to)
        hc = _to_cyl(He, to)
        for i in range(3):
            E[i][~inside] = ec[i]
            H[i][~inside] = hc[i]
    if np.any(inside):
        ri, ti = r[inside], th[inside]
        Mj, Nj = _waves(kp, ri, ti, "j", scale=coeffs.scale)
        Ei = [c * (coeffs.t_M_scaled * Mj[i]
                   + coeffs.t_N_scaled * Nj[i]) for i in range(3)]
        Hi = [-1j * c * kh * (coeffs.t_M_scaled * Nj[i]
                              + coeffs.t_N_scaled * Mj[i]) for i in range(3)]
        ec = _to_cyl(Ei, ti)
        hc = _to_cyl(Hi, ti)
        for i in range(3):
            E[i][inside] = ec[i]
            H[i][inside] = hc[i]
    return tuple(E), tuple(H)


def interface_residual(coeffs, n_points=64):
    """Worst interface mismatch at r = 1, the arbiter for the solver.

    Checks tangential E continuity, tangential H continuity, and the
    normal-E jump nu.E_plus = khat^{-2} nu.(E0 + Eminus); returns the
    maximum over test points, relative to the incident amplitude scale.
    """
    th = (np.arange(n_points) + 0.5) * np.pi / n_points
    r = np.ones(n_points)
    c = AMPLITUDE
    km, kp, kh = coeffs.k_minus, coeffs.k_plus, coeffs.khat

    Mj, Nj = _waves(km, r, th, "j")
    Mh, Nh = _waves(km, r, th, "h")
    Ee = [c * (Mj[i] + coeffs.r_M * Mh[i]
               + Nj[i] + coeffs.r_N * Nh[i]) for i in range(3)]
    He = [-1j * c * (Mj[i] + coeffs.r_N * Mh[i]
                     + Nj[i] + coeffs.r_M * Nh[i]) for i in range(3)]
    Mi, Ni = _waves(kp, r, th, "j", scale=coeffs.scale)
    Ei = [c * (coeffs.t_M_scaled * Mi[i]
               + coeffs.t_N_scaled * Ni[i]) for i in range(3)]
    Hi = [-1j * c * kh * (coeffs.t_M_scaled * Ni[i]
                          + coeffs.t_N_scaled * Mi[i]) for i in range(3)]

    res = 0.0
    for i in (1, 2):  # tangential spherical components
        res = max(res, np.abs(Ei[i] - Ee[i]).max(),
                  np.abs(Hi[i] - He[i]).max())
    res = max(res, np.abs(Ei[0] - Ee[0] / kh ** 2).max())
    return res / c
