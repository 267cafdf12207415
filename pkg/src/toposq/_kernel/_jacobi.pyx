# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled cyclic Jacobi kernel.

Mirrors ``jacobi_py.jacobi_eigh`` rotation for rotation; see that module for
the algorithm notes.  Keep the two in sync.
"""

from libc.math cimport sqrt, hypot

import numpy as np

DEF MACHINE_EPS = 2.220446049250313e-16


def jacobi_eigh(matrix, double tol=0.0, int max_sweeps=60):
    """Diagonalize a Hermitian matrix by cyclic Jacobi rotations.

    Same contract as the pure-Python kernel: returns eigenvalues ascending
    and eigenvector columns.
    """
    a_arr = np.array(matrix, dtype=np.complex128, copy=True, order="C")
    cdef Py_ssize_t n = a_arr.shape[0]
    v_arr = np.eye(n, dtype=np.complex128)
    if n == 1:
        return np.array([a_arr[0, 0].real]), v_arr

    cdef double complex[:, ::1] a = a_arr
    cdef double complex[:, ::1] v = v_arr

    cdef double fro = 0.0
    cdef Py_ssize_t i, j, p, q
    cdef double complex x
    for i in range(n):
        for j in range(n):
            x = a[i, j]
            fro += x.real * x.real + x.imag * x.imag
    fro = sqrt(fro)

    cdef double stop = tol
    if 8.0 * n * MACHINE_EPS * fro > stop:
        stop = 8.0 * n * MACHINE_EPS * fro
    cdef double skip = stop / (2.0 * n * n)

    cdef double off2, r, app, aqq, tau, t, c, s
    cdef double complex apq, ph, phc, w_col, u_col, w_row, u_row, cp, cq
    cdef bint rotated
    cdef int sweep

    for sweep in range(max_sweeps):
        off2 = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                x = a[p, q]
                off2 += x.real * x.real + x.imag * x.imag
        if sqrt(2.0 * off2) <= stop:
            break
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = hypot(apq.real, apq.imag)
                if r <= skip:
                    continue
                rotated = True
                app = a[p, p].real
                aqq = a[q, q].real
                ph = apq / r
                tau = (aqq - app) / (2.0 * r)
                if tau >= 0.0:
                    t = 1.0 / (tau + sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + sqrt(1.0 + tau * tau))
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                phc = ph.conjugate()
                w_col = s * phc
                u_col = c * phc
                for i in range(n):
                    cp = a[i, p]
                    cq = a[i, q]
                    a[i, p] = c * cp - w_col * cq
                    a[i, q] = s * cp + u_col * cq
                for i in range(n):
                    cp = v[i, p]
                    cq = v[i, q]
                    v[i, p] = c * cp - w_col * cq
                    v[i, q] = s * cp + u_col * cq
                w_row = s * ph
                u_row = c * ph
                for j in range(n):
                    cp = a[p, j]
                    cq = a[q, j]
                    a[p, j] = c * cp - w_row * cq
                    a[q, j] = s * cp + u_row * cq
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
        if not rotated:
            break

    w = np.diag(a_arr).real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], np.ascontiguousarray(v_arr[:, order])
