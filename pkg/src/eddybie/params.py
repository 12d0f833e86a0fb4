"""Tuning parameters for the transmission integral equations.

The transmission problem couples Cauchy operators at the interior and
exterior wavenumbers through diagonal multiplier matrices acting on the
eight surface components.  A tuning variant is a choice of six scalar
parameters (r, beta, gamma, alpha', beta', gamma') together with a
diagonal right preconditioner P'; from these the multipliers M, M' and
the diagonal factors P, N, N' follow.

Variants:
    "dirac"      plain tuned system, well suited away from the eddy
                 current limits
    "dirac-inf"  tuned for the high-conductivity limit k_minus -> 0
    "dirac-zero" tuned for the limit k_plus * khat -> 0 at fixed
                 exterior wavenumber (used with the augmented systems)
"""

from __future__ import annotations

import numpy as np

VARIANTS = ("dirac", "dirac-inf", "dirac-zero")

# six-block structure over the eight components
_BLOCKS = ((0,), (1,), (2, 3), (4,), (5,), (6, 7))


def _expand(six):
    out = np.empty(8, dtype=complex)
    for vals, block in zip(six, _BLOCKS):
        for c in block:
            out[c] = vals
    return out


class Tuning:
    """Diagonal multipliers for one variant at one wavenumber pair."""

    def __init__(self, variant, k_minus, k_plus, delta=0.2 / np.pi):
        if variant not in VARIANTS:
            raise ValueError(f"unknown variant {variant!r}")
        self.variant = variant
        self.k_minus = complex(k_minus)
        self.k_plus = complex(k_plus)
        self.delta = float(delta)
        kh = self.k_plus / self.k_minus
        self.khat = kh
        self.alpha = kh * kh
        a = kh / abs(kh)
        xi = 1.0 + 1j * self.delta * np.angle(kh)
        sigma = 1.0 + abs(self.k_plus * kh)
        self.a = a
        self.xi = xi
        self.sigma = sigma

        if variant == "dirac":
            r, beta, gamma = 1.0 / kh, xi, a
            alphap, betap, gammap = 1.0 / kh, 1.0 / kh, np.conj(a)
            pp = [1.0,
                  np.sqrt(kh) / np.sqrt(1.0 + a),
                  np.sqrt(kh),
                  1.0,
                  1.0,
                  kh / (kh + 1.0)]
        elif variant == "dirac-inf":
            r, beta, gamma = 1.0 / kh, xi, a
            alphap = 1.0 / (abs(kh) * kh)
            betap = gammap = np.conj(a)
            pp = [sigma / (kh * kh), sigma, sigma, 1.0, 1.0, 1.0]
        else:  # dirac-zero
            r, beta, gamma = 1.0 / kh, kh / abs(kh) ** 2, kh * kh / xi
            alphap, betap, gammap = 1.0 / xi, 1.0 / kh, 1.0 / xi
            pp = [1.0, 1.0, 1.0,
                  sigma / (kh * kh), sigma / kh, 1.0]

        self.r = r
        self.M = _expand([kh / (self.alpha * beta), 1.0 / kh,
                          kh / self.alpha, 1.0 / gamma,
                          1.0 / self.alpha, 1.0])
        self.Mp = _expand([1.0 / alphap, 1.0 / gammap, 1.0, kh,
                           1.0 / (kh * alphap * betap),
                           1.0 / (alphap * kh)])
        self.Pp = _expand(pp)
        self.P = 1.0 / ((r * self.Mp + self.M) * self.Pp)
        self.N = self.P * self.M
        self.Np = r * self.Mp * self.Pp

    def identity_residual(self):
        """Entrywise residual of P (r M' + M) P' = I."""
        return np.abs(self.P * (self.r * self.Mp + self.M) * self.Pp
                      - 1.0).max()
