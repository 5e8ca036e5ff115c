# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot kernels: radial RK4 shooting and SOR sweeps.

Semantics mirror ``pure.py`` exactly (same update order, same branch rules);
the pure module is the reference implementation for the parity tests.
"""
from libc.math cimport fabs, pow


cdef inline double _accel(double r, double uu, double vv,
                          double alpha, double beta, int ndim, bint op_plus,
                          double fc0, double fc1, double fcp, double fp) nogil:
    cdef double w = vv / r
    cdef double tang, s, rhs
    if op_plus:
        tang = (ndim - 1) * ((beta if w > 0.0 else alpha)) * w
    else:
        tang = (ndim - 1) * ((alpha if w > 0.0 else beta)) * w
    s = tang + fc0 + fc1 * uu
    if fcp != 0.0:
        s += fcp * pow(fabs(uu), fp - 1.0) * uu
    rhs = -s
    if op_plus:
        return rhs / (beta if rhs > 0.0 else alpha)
    return rhs / (alpha if rhs > 0.0 else beta)


def radial_rk4(double r0, double r1, double u0, double v0, long nsteps,
               double alpha, double beta, int ndim, bint op_plus,
               double fc0, double fc1, double fcp, double fp,
               double[::1] out_r=None, double[::1] out_u=None,
               double[::1] out_v=None):
    cdef double h = (r1 - r0) / nsteps
    cdef double u = u0, v = v0
    cdef double r, a1, a2, a3, a4, u2, v2, u3, v3, u4, v4
    cdef long k, m
    cdef int zero_count = 0, status = 0
    cdef int last_sign = 0, sign
    cdef bint store = out_r is not None
    if u > 0.0:
        last_sign = 1
    elif u < 0.0:
        last_sign = -1
    if store:
        out_r[0] = r0
        out_u[0] = u0
        out_v[0] = v0
    for k in range(nsteps):
        r = r0 + k * h
        a1 = _accel(r, u, v, alpha, beta, ndim, op_plus, fc0, fc1, fcp, fp)
        u2 = u + 0.5 * h * v
        v2 = v + 0.5 * h * a1
        a2 = _accel(r + 0.5 * h, u2, v2, alpha, beta, ndim, op_plus, fc0, fc1, fcp, fp)
        u3 = u + 0.5 * h * v2
        v3 = v + 0.5 * h * a2
        a3 = _accel(r + 0.5 * h, u3, v3, alpha, beta, ndim, op_plus, fc0, fc1, fcp, fp)
        u4 = u + h * v3
        v4 = v + h * a3
        a4 = _accel(r + h, u4, v4, alpha, beta, ndim, op_plus, fc0, fc1, fcp, fp)
        u += (h / 6.0) * (v + 2.0 * v2 + 2.0 * v3 + v4)
        v += (h / 6.0) * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
        if store:
            out_r[k + 1] = r + h
            out_u[k + 1] = u
            out_v[k + 1] = v
        if fabs(u) > 1e150 or fabs(v) > 1e150:
            status = 1
            if store:
                for m in range(k + 2, out_r.shape[0]):
                    out_r[m] = r + h
                    out_u[m] = u
                    out_v[m] = v
            break
        sign = 0
        if u > 0.0:
            sign = 1
        elif u < 0.0:
            sign = -1
        if sign != 0:
            if last_sign != 0 and sign != last_sign:
                zero_count += 1
            last_sign = sign
    return u, v, zero_count, status


def linear_sweeps(double[::1] u, double[::1] rhs, double[::1] diag,
                  int[::1] ip1, double[::1] wp1, int[::1] im1, double[::1] wm1,
                  int[::1] ip2, double[::1] wp2, int[::1] im2, double[::1] wm2,
                  double omega, long nsweeps):
    cdef long n = u.shape[0]
    cdef long i, s
    cdef int j
    cdef double acc, unew
    with nogil:
        for s in range(nsweeps):
            for i in range(n):
                acc = rhs[i]
                j = ip1[i]
                if j >= 0:
                    acc += wp1[i] * u[j]
                j = im1[i]
                if j >= 0:
                    acc += wm1[i] * u[j]
                j = ip2[i]
                if j >= 0:
                    acc += wp2[i] * u[j]
                j = im2[i]
                if j >= 0:
                    acc += wm2[i] * u[j]
                unew = acc / diag[i]
                u[i] += omega * (unew - u[i])
