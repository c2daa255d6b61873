# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Cyclic Jacobi sweeps (row-cyclic pivot order) on a dense symmetric matrix."""

from libc.math cimport sqrt, fabs


cdef double _off_norm(double[:, ::1] a, Py_ssize_t n) noexcept nogil:
    cdef double s = 0.0
    cdef Py_ssize_t i, j
    for i in range(n):
        for j in range(n):
            if i != j:
                s += a[i, j] * a[i, j]
    return sqrt(s)


cdef int _jacobi(double[:, ::1] a, double[:, ::1] v, double tol, int max_sweeps) noexcept nogil:
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t p, q, k
    cdef int sweep
    cdef double apq, theta, t, c, s, x, y
    for sweep in range(max_sweeps + 1):
        if _off_norm(a, n) <= tol:
            return sweep
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if fabs(theta) > 1e150:
                    t = 0.5 / theta
                elif theta >= 0.0:
                    t = 1.0 / (theta + sqrt(theta * theta + 1.0))
                else:
                    t = -1.0 / (-theta + sqrt(theta * theta + 1.0))
                c = 1.0 / sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    x = a[k, p]
                    y = a[k, q]
                    a[k, p] = c * x - s * y
                    a[k, q] = s * x + c * y
                for k in range(n):
                    x = a[p, k]
                    y = a[q, k]
                    a[p, k] = c * x - s * y
                    a[q, k] = s * x + c * y
                a[p, q] = 0.0
                a[q, p] = 0.0
                for k in range(n):
                    x = v[k, p]
                    y = v[k, q]
                    v[k, p] = c * x - s * y
                    v[k, q] = s * x + c * y
    return -1


def jacobi_inplace(double[:, ::1] a, double[:, ::1] v, double tol, int max_sweeps):
    """Rotate ``a`` towards diagonal form, accumulating rotations into ``v``.

    Stops once the off-diagonal Frobenius norm is at most ``tol``.  Returns
    the number of sweeps performed, or -1 if ``max_sweeps`` was exhausted.
    """
    cdef int r
    with nogil:
        r = _jacobi(a, v, tol, max_sweeps)
    return r
