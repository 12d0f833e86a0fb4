"""Special functions used by kernels, sources, and the sphere oracle.

Thin wrappers around scipy.special with the domain checks this package
relies on (complex arguments in the closed upper half plane).
"""

from __future__ import annotations

import numpy as np
from scipy import special


def phi_k(k, r):
    """Causal fundamental solution e^{ikr} / (2 pi r) of Helmholtz."""
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0.0):
        raise ValueError("phi_k requires r > 0")
    return np.exp(1j * k * r) / (2.0 * np.pi * r)


def hankel1(n, z):
    """Hankel function of the first kind, orders 0 and 1."""
    if n not in (0, 1):
        raise ValueError("hankel1 supports orders 0 and 1")
    z = np.asarray(z, dtype=complex)
    if np.any(z == 0):
        raise ValueError("hankel1 is singular at z = 0")
    return special.hankel1(n, z)


def spherical_bessel_j(n, z):
    """Spherical Bessel function j_n for complex argument."""
    z = np.asarray(z, dtype=complex)
    return special.spherical_jn(n, z)


def spherical_bessel_y(n, z):
    z = np.asarray(z, dtype=complex)
    return special.spherical_yn(n, z)


def spherical_hankel1(n, z):
    """Spherical Hankel function of the first kind h_n^(1)."""
    z = np.asarray(z, dtype=complex)
    if np.any(z == 0):
        raise ValueError("spherical_hankel1 is singular at z = 0")
    return special.spherical_jn(n, z) + 1j * special.spherical_yn(n, z)


def riccati_j(n, z, derivative=False):
    """Riccati-Bessel function psi_n(z) = z j_n(z) or its derivative."""
    z = np.asarray(z, dtype=complex)
    if derivative:
        return special.spherical_jn(n, z) + z * special.spherical_jn(
            n, z, derivative=True)
    return z * special.spherical_jn(n, z)


def riccati_h(n, z, derivative=False):
    """Riccati-Hankel function xi_n(z) = z h_n^(1)(z) or its derivative."""
    if derivative:
        return spherical_hankel1(n, z) + z * (
            special.spherical_jn(n, z, derivative=True)
            + 1j * special.spherical_yn(n, z, derivative=True))
    return z * spherical_hankel1(n, z)


def elliptic_KE(m):
    """Complete elliptic integrals (K, E) with parameter m in [0, 1)."""
    m = np.asarray(m, dtype=float)
    if np.any(m < 0) or np.any(m >= 1):
        raise ValueError("elliptic_KE requires 0 <= m < 1")
    return special.ellipk(m), special.ellipe(m)
