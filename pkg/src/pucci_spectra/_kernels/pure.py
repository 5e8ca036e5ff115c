"""Pure-Python fallback kernels.

Same call signatures and update order as the compiled versions in
``_core.pyx``; used when the extension is unavailable or when
``PUCCI_SPECTRA_PURE=1`` forces them (tests, benchmarks).
"""
import math


def radial_rk4(r0, r1, u0, v0, nsteps, alpha, beta, ndim, op_plus,
               fc0, fc1, fcp, fp, out_r=None, out_u=None, out_v=None):
    """Integrate the radial ODE with classical 4-stage Runge-Kutta.

    The second derivative solves  theta(u'') u'' + (n-1) theta(v/r) v/r
    + f(u) = 0  with f(u) = fc0 + fc1*u + fcp*|u|^(fp-1)*u; the extremal
    coefficient theta is beta on the branch-positive side for the plus
    operator and alpha for the minus operator.  Coefficients are frozen per
    stage evaluation (no sub-step event location).

    Returns (end_u, end_v, zero_count, status); status 1 flags overflow.
    """
    h = (r1 - r0) / nsteps
    u, v = u0, v0
    store = out_r is not None
    if store:
        out_r[0] = r0
        out_u[0] = u0
        out_v[0] = v0
    zero_count = 0
    last_sign = 0 if u == 0.0 else (1 if u > 0.0 else -1)
    status = 0

    def accel(r, uu, vv):
        w = vv / r
        if op_plus:
            tang = (ndim - 1) * (beta if w > 0.0 else alpha) * w
        else:
            tang = (ndim - 1) * (alpha if w > 0.0 else beta) * w
        s = tang + fc0 + fc1 * uu
        if fcp != 0.0:
            s += fcp * math.pow(abs(uu), fp - 1.0) * uu
        rhs = -s
        if op_plus:
            return rhs / (beta if rhs > 0.0 else alpha)
        return rhs / (alpha if rhs > 0.0 else beta)

    for k in range(nsteps):
        r = r0 + k * h
        a1 = accel(r, u, v)
        u2 = u + 0.5 * h * v
        v2 = v + 0.5 * h * a1
        a2 = accel(r + 0.5 * h, u2, v2)
        u3 = u + 0.5 * h * v2
        v3 = v + 0.5 * h * a2
        a3 = accel(r + 0.5 * h, u3, v3)
        u4 = u + h * v3
        v4 = v + h * a3
        a4 = accel(r + h, u4, v4)
        u += (h / 6.0) * (v + 2.0 * v2 + 2.0 * v3 + v4)
        v += (h / 6.0) * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
        if store:
            out_r[k + 1] = r + h
            out_u[k + 1] = u
            out_v[k + 1] = v
        if abs(u) > 1e150 or abs(v) > 1e150:
            status = 1
            if store:
                for m in range(k + 2, len(out_r)):
                    out_r[m] = r + h
                    out_u[m] = u
                    out_v[m] = v
            break
        sign = 0 if u == 0.0 else (1 if u > 0.0 else -1)
        if sign != 0:
            if last_sign != 0 and sign != last_sign:
                zero_count += 1
            last_sign = sign
    return u, v, zero_count, status


def linear_sweeps(u, rhs, diag, ip1, wp1, im1, wm1, ip2, wp2, im2, wm2,
                  omega, nsweeps):
    """In-place SOR sweeps (lexicographic order) on the frozen 4-arm system.

    Equation per node:  diag*u  -  wp1*u[ip1] - wm1*u[im1]
                                 -  wp2*u[ip2] - wm2*u[im2]  =  rhs,
    with index -1 meaning homogeneous Dirichlet (value 0).
    """
    n = len(u)
    for _ in range(nsweeps):
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
