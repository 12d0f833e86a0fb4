"""Analytic incident fields and their eight-component traces.

Two axisymmetric mode-0 sources are provided: a low-order spherical
partial wave and an infinite coil (line source) on the z axis.  Both
satisfy the exterior Maxwell pair curl E = i k H, curl H = -i k E away
from their sources.  Components on the surface follow the frame order

    0: scalar   1: nu.H  2: tau.H  3: theta.H
    4: theta'   5: nu.E  6: tau.E  7: theta.E

with the scalar and pseudoscalar slots zero for Maxwell data.
"""

from __future__ import annotations

import numpy as np

from . import specfun


class IncidentField:
    """Incident field evaluated in cylindrical components (rho, phi, z)."""

    def __init__(self, kind, k_minus, eh):
        self.kind = kind
        self.k_minus = complex(k_minus)
        self._eh = eh

    def EH(self, rho, z):
        """(E_rho, E_phi, E_z), (H_rho, H_phi, H_z) at points (rho, z)."""
        return self._eh(np.asarray(rho, dtype=float),
                        np.asarray(z, dtype=float))

    def E_cart(self, x, y, z):
        """Cartesian E at Cartesian points, for direction-free checks."""
        return self._cart(x, y, z, 0)

    def H_cart(self, x, y, z):
        return self._cart(x, y, z, 1)

    def _cart(self, x, y, z, which):
        x, y, z = np.broadcast_arrays(np.asarray(x, float),
                                      np.asarray(y, float),
                                      np.asarray(z, float))
        rho = np.hypot(x, y)
        cphi = np.where(rho > 0, x / np.where(rho > 0, rho, 1.0), 1.0)
        sphi = np.where(rho > 0, y / np.where(rho > 0, rho, 1.0), 0.0)
        fr, fp, fz = self.EH(rho, z)[which]
        return (fr * cphi - fp * sphi, fr * sphi + fp * cphi, fz)


def partial_wave(k_minus):
    """Beltrami combination of the two lowest axisymmetric vector waves.

    G is the azimuthal spherical wave c j_1(k r) (rho / r) theta-hat with
    c = sqrt(3 / (8 pi)); the field is E0 = G + (1/k) curl G, H0 = -i E0.
    The curl is carried out analytically; near the origin the radial
    profile switches to its power series to avoid cancellation.
    """
    k = complex(k_minus)
    c = np.sqrt(3.0 / (8.0 * np.pi))

    def profiles(r):
        # f = j_1(kr) / r and g = f'(r) / r, both finite at r = 0
        x = k * r
        small = np.abs(x) < 1e-3
        xs = np.where(small, 1.0, x)
        f = np.where(small,
                     k * (1.0 / 3.0 - x * x / 30.0 + x ** 4 / 840.0),
                     k * specfun.spherical_bessel_j(1, xs) / xs)
        rs = np.where(r > 0, r, 1.0)
        j1 = specfun.spherical_bessel_j(1, xs)
        dj1 = specfun.spherical_bessel_j(0, xs) - 2.0 * j1 / xs
        g_direct = (k * dj1 - j1 / rs) / (rs * rs)
        g = np.where(small, k ** 3 * (-1.0 / 15.0 + x * x / 210.0), g_direct)
        return f, g

    def eh(rho, z):
        r = np.hypot(rho, z)
        f, g = profiles(r)
        e_rho = -c * rho * z * g / k
        e_phi = c * rho * f
        e_z = c * (2.0 * f + rho * rho * g) / k
        E = (e_rho, e_phi, e_z)
        H = tuple(-1j * comp for comp in E)
        return E, H

    return IncidentField("partial_wave", k, eh)


def zcoil(k_minus):
    """Line-source coil field on the z axis, normalized at rho = 1."""
    k = complex(k_minus)
    c2 = 1.0 / abs(specfun.hankel1(1, k))

    def eh(rho, z):
        rho = np.asarray(rho, dtype=float)
        if np.any(rho <= 0):
            raise ValueError("zcoil field is singular on the z axis")
        zero = np.zeros(np.broadcast(rho, z).shape, dtype=complex)
        e_phi = 1j * c2 * specfun.hankel1(1, k * rho) + zero
        h_z = c2 * specfun.hankel1(0, k * rho) + zero
        return (zero, e_phi, zero), (zero, zero, h_z)

    return IncidentField("zcoil", k, eh)


def custom_field(k_minus, eh):
    """Wrap a user evaluator (rho, z) -> (E, H) cylindrical triples."""
    return IncidentField("custom", k_minus, eh)


def _frame_dot(mesh, F):
    """nu, tau, theta components of a cylindrical triple on mesh nodes."""
    frho, fphi, fz = F
    nu = mesh.nu_rho * frho + mesh.nu_z * fz
    tau = mesh.nu_z * frho - mesh.nu_rho * fz
    return nu, tau, fphi


def trace_f0(field, mesh):
    """Eight-component Maxwell trace of an incident field, shape (8 N,)."""
    E, H = field.EH(mesh.rho, mesh.zz)
    out = np.zeros(8 * mesh.n, dtype=complex)
    n = mesh.n
    out[1 * n:2 * n], out[2 * n:3 * n], out[3 * n:4 * n] = \
        _frame_dot(mesh, H)
    out[5 * n:6 * n], out[6 * n:7 * n], out[7 * n:8 * n] = \
        _frame_dot(mesh, E)
    return out


def trace_f0_split(field, grid):
    """Trace on a SplitGrid, each component on its own node set."""
    out = np.zeros(grid.size, dtype=complex)
    for comp in (1, 2, 3, 5, 6, 7):
        m = grid.mesh_for(comp)
        E, H = field.EH(m.rho, m.zz)
        comps = _frame_dot(m, H) if comp < 4 else _frame_dot(m, E)
        out[grid.comp_slice(comp)] = comps[(comp - 1) % 4]
    return out
