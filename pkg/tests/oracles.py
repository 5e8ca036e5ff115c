"""Independent oracles used to derive frozen expected values.

Everything here is deliberately package-free: plain-Python fixed-step RK4
shooting for the radial Laplacian modes (optionally with the m^2/r^2
angular potential), five-point Laplacian references, and brute-force
helpers.  The frozen constants below were produced by these functions
(see test_oracles.py, which re-derives them) and are what the package
results are compared against.
"""
import math

# --- frozen oracle outputs (radial Laplacian shooting at h=1e-5) ---------
# first Dirichlet eigenvalue of the unit disc
DISC_LAM1 = 5.783185962946671
# smallest radial eigenvalue with one interior zero (unit disc)
DISC_LAM2R = 30.47126234366107
# first eigenvalue of the half-disc (angular mode m=1)
HALF_DISC_LAM1 = 14.681970642124337
# first radial eigenvalue of the annulus 0.5 < r < 1
ANNULUS_LAM1 = 39.93297609641996


def laplace_radial_end(lam, r_inner, r_outer, dim=2, m=0, h=1e-5):
    """End value and interior sign changes of the radial Laplacian mode.

    Integrates u'' + (dim-1)/r u' + (lam - m^2/r^2) u = 0 with RK4 at fixed
    step h, starting either from a series expansion at the origin (balls)
    or from u=0, u'=1 at r_inner (annuli).
    """
    if r_inner == 0.0:
        r = 10.0 * h
        if m == 0:
            u = 1.0 - lam * r * r / (2.0 * dim)
            v = -lam * r / dim
        else:
            u = r**m
            v = m * r ** (m - 1)
    else:
        r, u, v = r_inner, 0.0, 1.0
    steps = int(round((r_outer - r) / h))
    hh = (r_outer - r) / steps

    def acc(rr, uu, vv):
        return -(dim - 1) / rr * vv - (lam - (m * m) / (rr * rr)) * uu

    zeros = 0
    last = 1 if u > 0 else (-1 if u < 0 else 0)
    for k in range(steps):
        rr = r + k * hh
        a1 = acc(rr, u, v)
        u2 = u + 0.5 * hh * v
        v2 = v + 0.5 * hh * a1
        a2 = acc(rr + 0.5 * hh, u2, v2)
        u3 = u + 0.5 * hh * v2
        v3 = v + 0.5 * hh * a2
        a3 = acc(rr + 0.5 * hh, u3, v3)
        u4 = u + hh * v3
        v4 = v + hh * a3
        a4 = acc(rr + hh, u4, v4)
        u += (hh / 6.0) * (v + 2.0 * v2 + 2.0 * v3 + v4)
        v += (hh / 6.0) * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
        s = 1 if u > 0 else (-1 if u < 0 else 0)
        if s != 0:
            if last != 0 and s != last:
                zeros += 1
            last = s
    return u, zeros


def bessel_shoot_eigenvalue(bracket, r_inner, r_outer, dim=2, m=0,
                            zeros_wanted=0, h=1e-5, tol=1e-9):
    """Eigenvalue by secant iteration on the shooting end value.

    The bracket must contain exactly one end-value sign change with the
    requested interior zero count on its lower side.
    """
    lo, hi = bracket
    f_lo, z_lo = laplace_radial_end(lo, r_inner, r_outer, dim, m, h)
    f_hi, z_hi = laplace_radial_end(hi, r_inner, r_outer, dim, m, h)
    if f_lo * f_hi > 0 or z_lo != zeros_wanted:
        raise ValueError(f"bad oracle bracket {bracket}: signs "
                         f"{f_lo:+.2e}/{f_hi:+.2e}, zeros {z_lo}/{z_hi}")
    for _ in range(200):
        mid = lo - f_lo * (hi - lo) / (f_hi - f_lo)   # secant step
        mid = min(max(mid, lo + 1e-15), hi - 1e-15)
        f_mid, _ = laplace_radial_end(mid, r_inner, r_outer, dim, m, h)
        if f_lo * f_mid <= 0:
            hi, f_hi = mid, f_mid
        else:
            lo, f_lo = mid, f_mid
        if hi - lo < tol:
            break
    return 0.5 * (lo + hi)


def five_point_laplacian(u, h):
    """Classical 5-point Laplacian on a full 2D array (interior only)."""
    return (u[2:, 1:-1] + u[:-2, 1:-1] + u[1:-1, 2:] + u[1:-1, :-2]
            - 4.0 * u[1:-1, 1:-1]) / (h * h)


def semilinear_radial_end(amp, r_outer, fcn, dim=2, h=1e-5):
    """Independent integrator for  u'' + (dim-1)/r u' + f(u) = 0  on a ball."""
    r = 10.0 * h
    f0 = fcn(amp)
    u = amp - f0 * r * r / (2.0 * dim)
    v = -f0 * r / dim
    steps = int(round((r_outer - r) / h))
    hh = (r_outer - r) / steps

    def acc(rr, uu, vv):
        return -(dim - 1) / rr * vv - fcn(uu)

    for k in range(steps):
        rr = r + k * hh
        a1 = acc(rr, u, v)
        u2 = u + 0.5 * hh * v
        v2 = v + 0.5 * hh * a1
        a2 = acc(rr + 0.5 * hh, u2, v2)
        u3 = u + 0.5 * hh * v2
        v3 = v + 0.5 * hh * a2
        a3 = acc(rr + 0.5 * hh, u3, v3)
        u4 = u + hh * v3
        v4 = v + hh * a3
        a4 = acc(rr + hh, u4, v4)
        u += (hh / 6.0) * (v + 2.0 * v2 + 2.0 * v3 + v4)
        v += (hh / 6.0) * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
    return u


def semilinear_radial_profile(amp, r_outer, fcn, dim=2, h=1e-4, samples=101):
    """Sampled profile of the independent semilinear integrator."""
    r = 10.0 * h
    f0 = fcn(amp)
    u = amp - f0 * r * r / (2.0 * dim)
    v = -f0 * r / dim
    steps = int(round((r_outer - r) / h))
    hh = (r_outer - r) / steps

    def acc(rr, uu, vv):
        return -(dim - 1) / rr * vv - fcn(uu)

    out_r, out_u = [0.0], [amp]
    stride = max(1, steps // (samples - 1))
    for k in range(steps):
        rr = r + k * hh
        a1 = acc(rr, u, v)
        u2 = u + 0.5 * hh * v
        v2 = v + 0.5 * hh * a1
        a2 = acc(rr + 0.5 * hh, u2, v2)
        u3 = u + 0.5 * hh * v2
        v3 = v + 0.5 * hh * a2
        a3 = acc(rr + 0.5 * hh, u3, v3)
        u4 = u + hh * v3
        v4 = v + hh * a3
        a4 = acc(rr + hh, u4, v4)
        u += (hh / 6.0) * (v + 2.0 * v2 + 2.0 * v3 + v4)
        v += (hh / 6.0) * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
        if (k + 1) % stride == 0 or k == steps - 1:
            out_r.append(rr + hh)
            out_u.append(u)
    return out_r, out_u


if __name__ == "__main__":
    print("DISC_LAM1      =", bessel_shoot_eigenvalue((4.0, 8.0), 0.0, 1.0))
    print("DISC_LAM2R     =", bessel_shoot_eigenvalue((25.0, 35.0), 0.0, 1.0,
                                                      zeros_wanted=1))
    print("HALF_DISC_LAM1 =", bessel_shoot_eigenvalue((10.0, 20.0), 0.0, 1.0,
                                                      m=1))
    print("ANNULUS_LAM1   =", bessel_shoot_eigenvalue((30.0, 50.0), 0.5, 1.0))
