"""Cyclic Jacobi eigensolver for small dense complex Hermitian matrices.

This is the reference kernel.  The compiled extension ``_jacobi.pyx`` mirrors
it rotation for rotation (same pivot order, same scalar factors), so the two
backends produce the same numbers; the extension is only faster.

The algorithm zeroes one off-diagonal pivot ``a[p, q]`` per rotation.  A
phase factor first makes the pivot real, then a standard symmetric Jacobi
rotation (smaller-root tangent choice) annihilates it.  Sweeps repeat until
the off-diagonal Frobenius mass falls under the stop threshold or a sweep
performs no rotation.
"""

import math

import numpy as np

MACHINE_EPS = 2.220446049250313e-16


def jacobi_eigh(matrix, tol=0.0, max_sweeps=60):
    """Diagonalize a Hermitian matrix by cyclic Jacobi rotations.

    Returns ``(w, v)``: eigenvalues ascending and a unitary ``v`` whose
    columns are the matching eigenvectors.  ``tol`` bounds the off-diagonal
    Frobenius mass at which sweeping stops; it is floored at a small multiple
    of machine precision times the matrix scale, below which rotations only
    churn rounding noise.
    """
    a = np.array(matrix, dtype=np.complex128, copy=True)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    if n == 1:
        return np.array([a[0, 0].real]), v

    fro = math.sqrt(float(np.sum(np.abs(a) ** 2)))
    stop = max(tol, 8.0 * n * MACHINE_EPS * fro)
    skip = stop / (2.0 * n * n)

    for _ in range(max_sweeps):
        off2 = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                x = a[p, q]
                off2 += x.real * x.real + x.imag * x.imag
        if math.sqrt(2.0 * off2) <= stop:
            break
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = complex(a[p, q])
                r = abs(apq)
                if r <= skip:
                    continue
                rotated = True
                app = a[p, p].real
                aqq = a[q, q].real
                ph = apq / r
                tau = (aqq - app) / (2.0 * r)
                if tau >= 0.0:
                    t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                phc = ph.conjugate()
                w_col = s * phc  # A <- A @ U, columns p and q
                u_col = c * phc
                colp = a[:, p].copy()
                colq = a[:, q].copy()
                a[:, p] = c * colp - w_col * colq
                a[:, q] = s * colp + u_col * colq
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - w_col * vq
                v[:, q] = s * vp + u_col * vq
                w_row = s * ph  # A <- U^* @ A, rows p and q
                u_row = c * ph
                rowp = a[p, :].copy()
                rowq = a[q, :].copy()
                a[p, :] = c * rowp - w_row * rowq
                a[q, :] = s * rowp + u_row * rowq
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
        if not rotated:
            break

    w = np.diag(a).real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], np.ascontiguousarray(v[:, order])
