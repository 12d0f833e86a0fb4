"""Axisymmetric surface geometry.

Surfaces of revolution are described by a generating curve s -> (rho(s), z(s))
in the meridian half-plane rho >= 0, rotated about the z axis.  Genus-0
surfaces use an open curve that starts and ends on the axis; genus-1 surfaces
(tori) use a closed curve that stays off the axis.

Both coordinates are stored as finite trigonometric series, which makes
derivatives of any order exact and lets chord differences c(t) - c(s) be
evaluated stably for nearly coincident parameters.
"""

from __future__ import annotations

import math

import numpy as np

_FACT = [math.factorial(n) for n in range(16)]


class TrigCurve:
    """Generating curve with trigonometric-series coordinates.

    Each coordinate is sum_m a_m cos(m s) + b_m sin(m s).  Coefficients are
    passed as dense arrays indexed by the harmonic m starting at 0.
    """

    def __init__(self, rho_cos, rho_sin, z_cos, z_sin, domain, genus):
        self.rho_cos = np.asarray(rho_cos, dtype=float)
        self.rho_sin = np.asarray(rho_sin, dtype=float)
        self.z_cos = np.asarray(z_cos, dtype=float)
        self.z_sin = np.asarray(z_sin, dtype=float)
        self.domain = (float(domain[0]), float(domain[1]))
        if genus not in (0, 1):
            raise ValueError("genus must be 0 or 1")
        self.genus = genus
        self.period = self.domain[1] - self.domain[0] if genus == 1 else None

    def _eval_series(self, cos_c, sin_c, s, order):
        """Evaluate the order-th derivative of a trig series at s."""
        s = np.asarray(s, dtype=float)
        out = np.zeros_like(s)
        for m in range(max(len(cos_c), len(sin_c))):
            a = cos_c[m] if m < len(cos_c) else 0.0
            b = sin_c[m] if m < len(sin_c) else 0.0
            if a == 0.0 and b == 0.0:
                continue
            ph = m * s + order * (np.pi / 2)
            out = out + (m ** order) * (a * np.cos(ph) + b * np.sin(ph))
        return out

    def rho(self, s, order=0):
        return self._eval_series(self.rho_cos, self.rho_sin, s, order)

    def z(self, s, order=0):
        return self._eval_series(self.z_cos, self.z_sin, s, order)

    def point(self, s):
        return self.rho(s), self.z(s)

    def jacobian(self, s):
        """Arclength density |c'(s)|."""
        return np.hypot(self.rho(s, 1), self.z(s, 1))

    def normal(self, s):
        """Outward unit normal (nu_rho, nu_z) = (z', -rho') / |c'|."""
        rp, zp = self.rho(s, 1), self.z(s, 1)
        j = np.hypot(rp, zp)
        return zp / j, -rp / j

    def chord(self, s, t):
        """Stable evaluation of c(t) - c(s) as (drho, dz).

        For small |t - s| the naive difference loses relative accuracy, so a
        Taylor expansion about the midpoint is used instead.
        """
        s = np.asarray(s, dtype=float)
        t = np.asarray(t, dtype=float)
        d = t - s
        if self.genus == 1:
            d = (d + self.period / 2) % self.period - self.period / 2
        small = np.abs(d) < 1e-3
        drho = self.rho(t) - self.rho(s)
        dz = self.z(t) - self.z(s)
        if np.any(small):
            m = s + d / 2
            ms, ds = np.broadcast_arrays(m, d)
            msel, dsel = ms[small], ds[small]
            dr_s = np.zeros_like(msel)
            dz_s = np.zeros_like(msel)
            # odd-order midpoint Taylor terms of c(m+d/2) - c(m-d/2)
            for order in (1, 3, 5, 7):
                coef = 2.0 * (dsel / 2) ** order / _FACT[order]
                dr_s += coef * self.rho(msel, order)
                dz_s += coef * self.z(msel, order)
            drho = np.where(small, _scatter_like(drho, small, dr_s), drho)
            dz = np.where(small, _scatter_like(dz, small, dz_s), dz)
        return drho, dz

    def axis_endpoints(self):
        """Parameter values where the curve meets the axis (genus 0)."""
        if self.genus != 0:
            return ()
        return self.domain


def _scatter_like(template, mask, values):
    out = np.array(template, copy=True)
    out[mask] = values
    return out


def build_curve(name):
    """Construct one of the built-in generating curves by name."""
    if name == "sphere":
        return TrigCurve([0, 1], [0], [0], [0, 1], (-np.pi / 2, np.pi / 2), 0)
    if name == "rotated-starfish":
        # (1 + 0.25 sin 5s) (cos s, sin s)
        rho_c = np.zeros(7)
        rho_s = np.zeros(7)
        z_c = np.zeros(7)
        z_s = np.zeros(7)
        rho_c[1] = 1.0
        rho_s[4] = 0.125
        rho_s[6] = 0.125
        z_s[1] = 1.0
        z_c[4] = 0.125
        z_c[6] = -0.125
        return TrigCurve(rho_c, rho_s, z_c, z_s, (-np.pi / 2, np.pi / 2), 0)
    if name == "starfish-torus":
        # (1, 0) + 0.5 (1 + 0.25 sin 5s) (cos s, sin s)
        rho_c = np.zeros(7)
        rho_s = np.zeros(7)
        z_c = np.zeros(7)
        z_s = np.zeros(7)
        rho_c[0] = 1.0
        rho_c[1] = 0.5
        rho_s[4] = 0.0625
        rho_s[6] = 0.0625
        z_s[1] = 0.5
        z_c[4] = 0.0625
        z_c[6] = -0.0625
        return TrigCurve(rho_c, rho_s, z_c, z_s, (-np.pi, np.pi), 1)
    if name == "torus":
        return TrigCurve([1, 0.5], [0], [0], [0, 0.5], (-np.pi, np.pi), 1)
    raise ValueError(f"unknown curve {name!r}")


def load_curve(path):
    """Read a generating curve from a structured text file.

    Format: one `key = value` pair per line.  Keys `genus`, `domain` (two
    floats) and coefficient lines `rho_cos[m]`, `rho_sin[m]`, `z_cos[m]`,
    `z_sin[m]`.  Lines starting with '#' are comments.
    """
    genus = 0
    domain = None
    coeffs = {"rho_cos": {}, "rho_sin": {}, "z_cos": {}, "z_sin": {}}
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, _, val = line.partition("=")
            key = key.strip()
            val = val.strip()
            if key == "genus":
                genus = int(val)
            elif key == "domain":
                domain = tuple(float(v) for v in val.split())
            elif "[" in key:
                base, idx = key[:-1].split("[")
                coeffs[base][int(idx)] = float(val)
            else:
                raise ValueError(f"unrecognized line in curve file: {line!r}")
    if domain is None:
        domain = (-np.pi, np.pi) if genus == 1 else (-np.pi / 2, np.pi / 2)
    arrays = {}
    for base, cmap in coeffs.items():
        n = max(cmap) + 1 if cmap else 1
        arr = np.zeros(n)
        for m, v in cmap.items():
            arr[m] = v
        arrays[base] = arr
    return TrigCurve(arrays["rho_cos"], arrays["rho_sin"],
                     arrays["z_cos"], arrays["z_sin"], domain, genus)


class PanelMesh:
    """Composite Gauss-Legendre panel discretization of a generating curve."""

    def __init__(self, curve, n_panels, order=16, spacing="panel"):
        self.curve = curve
        self.n_panels = int(n_panels)
        self.order = int(order)
        self.spacing = spacing
        a, b = curve.domain
        self.breaks = np.linspace(a, b, self.n_panels + 1)
        x, w = np.polynomial.legendre.leggauss(self.order)
        self.ref_nodes = x
        self.ref_weights = w
        if spacing == "even":
            # global spectral grid: Gauss nodes in the pole-even variable
            if curve.genus != 0 or self.n_panels != 1:
                raise ValueError("even spacing needs one panel on genus 0")
            v = np.arccos(-x)
            self.s = a + (b - a) / np.pi * v
            self.w = w * (b - a) / (np.pi * np.sin(v))
        else:
            ss = []
            ww = []
            for p in range(self.n_panels):
                lo, hi = self.breaks[p], self.breaks[p + 1]
                h = 0.5 * (hi - lo)
                ss.append(lo + h * (x + 1.0))
                ww.append(h * w)
            self.s = np.concatenate(ss)
            self.w = np.concatenate(ww)
        self.n = self.s.size
        self.rho = curve.rho(self.s)
        self.zz = curve.z(self.s)
        self.jac = curve.jacobian(self.s)
        self.nu_rho, self.nu_z = curve.normal(self.s)
        # line measure along the curve and full surface measure 2*pi*rho
        self.dline = self.w * self.jac
        self.dsurf = 2 * np.pi * self.rho * self.dline
        self.area = self.dsurf.sum()

    def pole_weight(self, s):
        """Vanishing factor for tangential components on genus-0 curves.

        Smooth axisymmetric fields have tau and theta components that vanish
        linearly at the axis; interpolating those components relative to this
        weight keeps near-boundary product quadrature consistent with smooth
        fields.  Identically 1 on genus-1 curves.
        """
        s = np.asarray(s, dtype=float)
        if self.curve.genus == 1:
            return np.ones_like(s)
        a, b = self.curve.domain
        return np.sin(np.pi * (s - a) / (b - a))

    def pole_even(self, s):
        """Coordinate that is even about both axis endpoints (genus 0).

        Scalar and normal components of smooth axisymmetric fields are smooth
        functions of this variable; on the unit sphere it reduces to z.
        """
        s = np.asarray(s, dtype=float)
        a, b = self.curve.domain
        return -np.cos(np.pi * (s - a) / (b - a))

    def panel_of(self, i):
        return i // self.order

    def panel_slice(self, p):
        return slice(p * self.order, (p + 1) * self.order)

    def panel_bounds(self, p):
        return self.breaks[p], self.breaks[p + 1]

    def neighbor_panels(self, p):
        """The panel itself plus adjacent panels, wrapping for genus 1."""
        out = [p]
        if p > 0:
            out.append(p - 1)
        elif self.curve.genus == 1:
            out.append(self.n_panels - 1)
        if p < self.n_panels - 1:
            out.append(p + 1)
        elif self.curve.genus == 1:
            out.append(0)
        return out

    def refined(self, factor=1.5):
        if self.spacing == "even":
            return PanelMesh(self.curve, 1, int(np.ceil(self.order * factor)),
                             spacing="even")
        return PanelMesh(self.curve, int(np.ceil(self.n_panels * factor)),
                         self.order)

    def integrate(self, f):
        """Surface integral of nodal values with the 2*pi*rho measure."""
        return np.sum(np.asarray(f) * self.dsurf)

    def average(self, f):
        return self.integrate(f) / self.area


DEFAULT_PANELS = {"sphere": 8, "rotated-starfish": 16,
                  "starfish-torus": 20, "torus": 10}


def default_mesh(name, order=16, n_panels=None):
    """Mesh a built-in curve with a resolution suited to its shape."""
    curve = build_curve(name)
    if n_panels is None:
        n_panels = DEFAULT_PANELS[name]
    return PanelMesh(curve, n_panels, order)
