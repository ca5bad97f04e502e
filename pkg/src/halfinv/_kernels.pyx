# cython: boundscheck=False, wraparound=False, cdivision=True
# cython: language_level=3
"""Compiled versions of the hot kernels.

Entry points and array contracts match halfinv._kernels_py exactly; the
batched NumPy expressions there become plain C loops here.
"""

import numpy as np

from libc.math cimport ceil, cos, cosh, fabs, sin, sinh, sqrt


cdef inline void _free_cs(double zk, double xi, double* c, double* s) nogil:
    # c = cos(lambda*xi), s = sin(lambda*xi)/lambda as functions of z = lambda**2
    cdef double t = zk * xi * xi
    cdef double a
    if fabs(t) < 1e-8:
        c[0] = 1.0 - t / 2.0 + t * t / 24.0 - t * t * t / 720.0
        s[0] = (1.0 - t / 6.0 + t * t / 120.0 - t * t * t / 5040.0) * xi
    elif zk > 0.0:
        a = sqrt(zk) * xi
        c[0] = cos(a)
        s[0] = sin(a) / a * xi
    else:
        a = sqrt(-zk) * xi
        c[0] = cosh(a)
        s[0] = sinh(a) / a * xi


cdef inline void _omega(double sg, double zk, double c, double s,
                        double a1, double a2, double* o1, double* o2) nogil:
    cdef double cc = c * c
    cdef double ss = s * s
    cdef double cs = c * s
    cdef double o11 = sg * cc + sg * sg * cs - zk * sg * ss
    cdef double o12 = 2.0 * sg * cs + sg * sg * ss
    cdef double o21 = 2.0 * zk * sg * cs - sg * sg * cc
    o1[0] = o11 * a1 + o12 * a2
    o2[0] = o21 * a1 - o11 * a2


def shoot_classical(sig_half, z, double h):
    """RK4 on u' = s*u + v, v' = -s*(s*u+v) - z*u for a batch of z.
    Returns (U, V) of shape (len(z), n); see _kernels_py.shoot_classical."""
    sh_arr = np.ascontiguousarray(sig_half, dtype=np.float64)
    z_arr = np.ascontiguousarray(np.atleast_1d(np.asarray(z, dtype=np.float64)))
    cdef double[::1] sh = sh_arr
    cdef double[::1] zz = z_arr
    cdef Py_ssize_t n = (sh.shape[0] + 1) // 2
    cdef Py_ssize_t m = zz.shape[0]
    U_arr = np.empty((m, n))
    V_arr = np.empty((m, n))
    cdef double[:, ::1] U = U_arr
    cdef double[:, ::1] V = V_arr
    cdef Py_ssize_t k, i
    cdef double u, v, zk, s0, s1, s2
    cdef double du1, dv1, du2, dv2, du3, dv3, du4, dv4, ua, va, ub, vb, uc, vc
    with nogil:
        for k in range(m):
            zk = zz[k]
            u = 1.0
            v = 0.0
            U[k, 0] = u
            V[k, 0] = v
            for i in range(n - 1):
                s0 = sh[2 * i]
                s1 = sh[2 * i + 1]
                s2 = sh[2 * i + 2]
                du1 = s0 * u + v
                dv1 = -s0 * du1 - zk * u
                ua = u + 0.5 * h * du1
                va = v + 0.5 * h * dv1
                du2 = s1 * ua + va
                dv2 = -s1 * du2 - zk * ua
                ub = u + 0.5 * h * du2
                vb = v + 0.5 * h * dv2
                du3 = s1 * ub + vb
                dv3 = -s1 * du3 - zk * ub
                uc = u + h * du3
                vc = v + h * dv3
                du4 = s2 * uc + vc
                dv4 = -s2 * du4 - zk * uc
                u = u + (h / 6.0) * (du1 + 2.0 * du2 + 2.0 * du3 + du4)
                v = v + (h / 6.0) * (dv1 + 2.0 * dv2 + 2.0 * dv3 + dv4)
                U[k, i + 1] = u
                V[k, i + 1] = v
    return U_arr, V_arr


cdef inline double _sig_at(double[::1] sh, double pos, Py_ssize_t top) nogil:
    # piecewise-linear sigma on the half-grid; pos in units of h/2
    cdef Py_ssize_t j = <Py_ssize_t>pos
    if j >= top:
        return sh[top]
    cdef double frac = pos - j
    return sh[j] * (1.0 - frac) + sh[j + 1] * frac


def shoot_rotating(sig_half, z, double h):
    """Rotating-frame RK4 with per-frequency substepping, exact for
    sigma = 0; same contract as _kernels_py.shoot_rotating."""
    sh_arr = np.ascontiguousarray(sig_half, dtype=np.float64)
    z_arr = np.ascontiguousarray(np.atleast_1d(np.asarray(z, dtype=np.float64)))
    cdef double[::1] sh = sh_arr
    cdef double[::1] zz = z_arr
    cdef Py_ssize_t n = (sh.shape[0] + 1) // 2
    cdef Py_ssize_t m = zz.shape[0]
    cdef Py_ssize_t top = sh.shape[0] - 1
    U_arr = np.empty((m, n))
    V_arr = np.empty((m, n))
    cdef double[:, ::1] U = U_arr
    cdef double[:, ::1] V = V_arr
    cdef Py_ssize_t k, i, r, ns
    cdef double zk, w1, w2, s0, s1, s2, x0, hs, lam
    cdef double c0, ss0, c1, ss1, c2, ss2
    cdef double k1a, k1b, k2a, k2b, k3a, k3b, k4a, k4b
    with nogil:
        for k in range(m):
            zk = zz[k]
            lam = sqrt(fabs(zk))
            ns = <Py_ssize_t>ceil(lam * h / 0.5)
            if ns < 1:
                ns = 1
            hs = h / ns
            w1 = 1.0
            w2 = 0.0
            U[k, 0] = 1.0
            V[k, 0] = 0.0
            for i in range(n - 1):
                for r in range(ns):
                    x0 = h * i + hs * r
                    s0 = _sig_at(sh, 2.0 * x0 / h, top)
                    s1 = _sig_at(sh, 2.0 * (x0 + 0.5 * hs) / h, top)
                    s2 = _sig_at(sh, 2.0 * (x0 + hs) / h, top)
                    _free_cs(zk, x0, &c0, &ss0)
                    _free_cs(zk, x0 + 0.5 * hs, &c1, &ss1)
                    _free_cs(zk, x0 + hs, &c2, &ss2)
                    _omega(s0, zk, c0, ss0, w1, w2, &k1a, &k1b)
                    _omega(s1, zk, c1, ss1, w1 + 0.5 * hs * k1a,
                           w2 + 0.5 * hs * k1b, &k2a, &k2b)
                    _omega(s1, zk, c1, ss1, w1 + 0.5 * hs * k2a,
                           w2 + 0.5 * hs * k2b, &k3a, &k3b)
                    _omega(s2, zk, c2, ss2, w1 + hs * k3a, w2 + hs * k3b,
                           &k4a, &k4b)
                    w1 = w1 + (hs / 6.0) * (k1a + 2.0 * k2a + 2.0 * k3a + k4a)
                    w2 = w2 + (hs / 6.0) * (k1b + 2.0 * k2b + 2.0 * k3b + k4b)
                _free_cs(zk, h * (i + 1), &c2, &ss2)
                U[k, i + 1] = c2 * w1 + ss2 * w2
                V[k, i + 1] = -zk * ss2 * w1 + c2 * w2
    return U_arr, V_arr


def goursat_sweep(a, qmat, forcing, double h):
    """One successive-approximation sweep of the kernel integral
    equation; see _kernels_py.goursat_sweep for the formula."""
    a_arr = np.ascontiguousarray(a, dtype=np.float64)
    q_arr = np.ascontiguousarray(qmat, dtype=np.float64)
    f_arr = np.ascontiguousarray(forcing, dtype=np.float64)
    cdef double[:, ::1] av = a_arr
    cdef double[:, ::1] qv = q_arr
    cdef double[:, ::1] fv = f_arr
    cdef Py_ssize_t m = av.shape[0]
    g_arr = np.zeros((m, m))
    C_arr = np.empty((m, m))
    Ucum_arr = np.empty((m, m))
    out_arr = np.zeros((m, m))
    cdef double[:, ::1] g = g_arr
    cdef double[:, ::1] C = C_arr
    cdef double[:, ::1] Ucum = Ucum_arr
    cdef double[:, ::1] out = out_arr
    cdef double[::1] CD = np.empty(m)
    cdef Py_ssize_t i, j
    cdef double acc
    with nogil:
        for i in range(m):
            for j in range(i + 1):
                g[i, j] = qv[i, j] * av[i, j]
        for i in range(m):
            C[i, 0] = 0.0
            for j in range(1, m):
                C[i, j] = C[i, j - 1] + 0.5 * h * (g[i, j - 1] + g[i, j])
        for j in range(m):
            Ucum[0, j] = 0.0
        for i in range(1, m):
            for j in range(m):
                Ucum[i, j] = Ucum[i - 1, j] + 0.5 * h * (C[i - 1, j] + C[i, j])
        CD[0] = 0.0
        for i in range(1, m):
            CD[i] = CD[i - 1] + 0.5 * h * (C[i - 1, i - 1] + C[i, i])
        for i in range(m):
            for j in range(i + 1):
                out[i, j] = (-0.25 * (Ucum[i, j] - Ucum[j, j])
                             - 0.5 * CD[j] + fv[i, j])
    return out_arr
