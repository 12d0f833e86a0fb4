"""Dense iterative and direct linear algebra helpers.

The transmission systems are dense, moderately sized, and solved with a
restart-free GMRES driven to (near) machine epsilon in the estimated
relative residual, so that reported iteration counts are meaningful.
"""

from __future__ import annotations

import numpy as np


class GmresResult:
    def __init__(self, x, iterations, residual, converged):
        self.x = x
        self.iterations = iterations
        self.residual = residual
        self.converged = converged


def gmres(A, b, rtol=2.2e-16, maxiter=500, x0=None):
    """Restart-free GMRES with full Arnoldi orthogonalization.

    A may be a dense matrix or a callable implementing the matvec.
    Iterates until the estimated relative residual drops below rtol,
    stagnates, or maxiter is hit; returns the best iterate either way.
    """
    b = np.asarray(b, dtype=complex).ravel()
    n = b.size
    matvec = A if callable(A) else (lambda v: A @ v)
    maxiter = min(maxiter, n)

    if x0 is None:
        r0 = b.copy()
        x0 = np.zeros(n, dtype=complex)
    else:
        x0 = np.asarray(x0, dtype=complex).ravel()
        r0 = b - matvec(x0)
    bnorm = np.linalg.norm(b)
    if bnorm == 0.0:
        return GmresResult(np.zeros(n, dtype=complex), 0, 0.0, True)
    beta = np.linalg.norm(r0)
    if beta / bnorm <= rtol:
        return GmresResult(x0, 0, beta / bnorm, True)

    V = np.zeros((maxiter + 1, n), dtype=complex)
    H = np.zeros((maxiter + 1, maxiter), dtype=complex)
    cs = np.zeros(maxiter, dtype=complex)
    sn = np.zeros(maxiter, dtype=complex)
    g = np.zeros(maxiter + 1, dtype=complex)
    V[0] = r0 / beta
    g[0] = beta

    res = beta / bnorm
    j_used = 0
    for j in range(maxiter):
        w = matvec(V[j])
        # modified Gram-Schmidt with one reorthogonalization pass
        for _ in range(2):
            for i in range(j + 1):
                hij = np.vdot(V[i], w)
                H[i, j] += hij
                w -= hij * V[i]
        H[j + 1, j] = np.linalg.norm(w)

        # apply stored Givens rotations, then form a new one
        for i in range(j):
            t = cs[i] * H[i, j] + sn[i] * H[i + 1, j]
            H[i + 1, j] = -np.conj(sn[i]) * H[i, j] + cs[i] * H[i + 1, j]
            H[i, j] = t
        denom = np.hypot(abs(H[j, j]), abs(H[j + 1, j]))
        if denom == 0.0:
            j_used = j
            break
        cs[j] = abs(H[j, j]) / denom
        ph = H[j, j] / abs(H[j, j]) if H[j, j] != 0 else 1.0
        sn[j] = ph * np.conj(H[j + 1, j]) / denom
        H[j, j] = cs[j] * H[j, j] + sn[j] * H[j + 1, j]
        H[j + 1, j] = 0.0
        g[j + 1] = -np.conj(sn[j]) * g[j]
        g[j] = cs[j] * g[j]

        res_new = abs(g[j + 1]) / bnorm
        j_used = j + 1
        if H[j + 1, j] == 0 and res_new == 0:
            res = 0.0
            break
        if res_new <= rtol or res_new >= res * (1 - 1e-14):
            res = min(res, res_new)
            break
        res = res_new
        if j + 1 < maxiter:
            V[j + 1] = w / np.linalg.norm(w)

    m = j_used
    y = np.linalg.solve(H[:m, :m], g[:m]) if m else np.zeros(0, complex)
    x = x0 + V[:m].T @ y
    return GmresResult(x, m, res, res <= max(rtol, 1e-13))
