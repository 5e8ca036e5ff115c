"""Radial reduction of the extremal-operator eigenvalue problems.

For a radial function u the Hessian has eigenvalue u'' (radial direction,
simple) and u'/r (tangential, multiplicity n-1), so the PDE reduces to a
piecewise-linear second-order ODE.  Eigenvalues are found by shooting with
a fixed-step 4th-order integrator plus bisection on a Sturm-type crossing
count, which is monotone in lambda.
"""
import math
from dataclasses import dataclass, field as dfield
from typing import Optional, Union

import numpy as np

from . import _kernels
from .errors import EigenError, InputError
from .pucci import EllipticityPair

# square of the first zero of the Bessel function J0: the first Dirichlet
# eigenvalue of the Laplacian on the unit disc, used to size brackets
BESSEL_J0_SQ = 5.783185962946785

DEFAULT_STEPS = 20000


@dataclass(frozen=True)
class RadialDomain:
    """Ball (r_inner = 0) or annulus, centered at the origin, dimension >= 2."""

    kind: str
    r_inner: float
    r_outer: float
    dim: int = 2

    def __post_init__(self):
        if self.kind not in ("ball", "annulus"):
            raise InputError(f"unknown radial domain kind {self.kind!r}")
        if not (0.0 <= self.r_inner < self.r_outer):
            raise InputError("need 0 <= r_inner < r_outer")
        if (self.r_inner == 0.0) != (self.kind == "ball"):
            raise InputError("r_inner = 0 exactly for balls")
        if self.dim < 2:
            raise InputError("dimension must be >= 2")

    @staticmethod
    def ball(r_outer, dim=2):
        return RadialDomain("ball", 0.0, float(r_outer), dim)

    @staticmethod
    def annulus(r_inner, r_outer, dim=2):
        return RadialDomain("annulus", float(r_inner), float(r_outer), dim)

    @property
    def width(self):
        return self.r_outer - self.r_inner


@dataclass
class RadialProfile:
    """Sampled radial function with derivative data."""

    radii: np.ndarray
    values: np.ndarray
    derivs: np.ndarray

    def __post_init__(self):
        if not (len(self.radii) == len(self.values) == len(self.derivs) >= 2):
            raise InputError("profile arrays must share a length >= 2")
        if np.any(np.diff(self.radii) <= 0):
            raise InputError("radii must be strictly increasing")

    def scaled(self, factor):
        return RadialProfile(self.radii, self.values * factor, self.derivs * factor)

    def __call__(self, r):
        return np.interp(r, self.radii, self.values)


@dataclass
class EigenResult:
    """Eigenvalue estimate with its eigenfunction and solver diagnostics."""

    lam: float
    eigenfunction: Union[RadialProfile, "object"]
    residual: float
    iterations: int
    cone: str
    zero_count: int
    diagnostics: dict = dfield(default_factory=dict)


def radial_operator_value(r, up, upp, ell, n, sign):
    """Extremal operator applied to the radial Hessian eigenvalues (upp, up/r).

    plus:  theta(upp)*upp + (n-1)*theta(up/r)*(up/r) with theta(s) = beta for
    s > 0 and alpha otherwise; minus swaps the coefficients.
    """
    if r <= 0.0:
        raise InputError("r must be positive; the origin needs the Taylor start")
    w = up / r

    def theta(s):
        if sign == "plus":
            return ell.beta if s > 0.0 else ell.alpha
        return ell.alpha if s > 0.0 else ell.beta

    return theta(upp) * upp + (n - 1) * theta(w) * w


def _swap(sign):
    return "minus" if sign == "plus" else "plus"


def _taylor_start(ell, sign, ndim, amp, f0):
    """phi''(0) for the even start phi = amp + phi''(0) r^2 / 2.

    At the origin all radial Hessian eigenvalues coincide with phi''(0), so
    n * theta(phi'') * phi'' + f(amp) = 0.  The alpha branch is tried first,
    the beta branch if inconsistent.
    """
    for coef in (ell.alpha, ell.beta):
        upp = -f0 / (ndim * coef)
        if sign == "plus":
            used = ell.beta if upp > 0.0 else ell.alpha
        else:
            used = ell.alpha if upp > 0.0 else ell.beta
        if used == coef:
            return upp
    raise EigenError("origin branch resolution failed for both coefficients")


def shoot_general(dom, ell, sign, amp, fc0, fc1, fcp, fp, h,
                  store_profile=True):
    """Integrate theta(u'')u'' + (n-1)theta(u'/r)u'/r + f(u) = 0 outward.

    Ball start: u(0) = amp, u'(0) = 0, with the singular first interval
    [0, h0], h0 = 10h, replaced by the even Taylor expansion.  Annulus
    start: u(r_inner) = 0, u'(r_inner) = amp.

    Returns (end_value, zero_count, profile_or_None, diverged).
    """
    if h <= 0.0:
        raise InputError("step h must be positive")
    op_plus = sign == "plus"
    n = dom.dim
    extra_zero = 0
    if dom.kind == "ball":
        h0 = min(10.0 * h, 0.1 * dom.width)
        f0 = fc0 + fc1 * amp + (fcp * abs(amp) ** (fp - 1.0) * amp if fcp else 0.0)
        upp0 = _taylor_start(ell, sign, n, amp, f0)
        r_start = h0
        u_start = amp + 0.5 * upp0 * h0 * h0
        v_start = upp0 * h0
        if u_start * amp < 0.0:
            extra_zero = 1
        taylor_r = np.linspace(0.0, h0, 11)
        taylor_u = amp + 0.5 * upp0 * taylor_r**2
        taylor_v = upp0 * taylor_r
    else:
        r_start = dom.r_inner
        u_start, v_start = 0.0, amp
        taylor_r = taylor_u = taylor_v = None

    nsteps = max(2, int(round((dom.r_outer - r_start) / h)))
    if store_profile:
        out_r = np.empty(nsteps + 1)
        out_u = np.empty(nsteps + 1)
        out_v = np.empty(nsteps + 1)
    else:
        out_r = out_u = out_v = None
    end_u, _end_v, zc, status = _kernels.radial_rk4(
        r_start, dom.r_outer, u_start, v_start, nsteps,
        ell.alpha, ell.beta, n, op_plus, fc0, fc1, fcp, fp,
        out_r, out_u, out_v)
    zc += extra_zero
    profile = None
    if store_profile:
        if taylor_r is not None:
            out_r = np.concatenate([taylor_r, out_r[1:]])
            out_u = np.concatenate([taylor_u, out_u[1:]])
            out_v = np.concatenate([taylor_v, out_v[1:]])
        out_r[-1] = dom.r_outer
        profile = RadialProfile(out_r, out_u, out_v)
    return end_u, zc, profile, status != 0


def shoot(dom, ell, sign, cone, lam, c0, h, store_profile=True):
    """Eigenfunction shchoot: integrates M_sign(D^2 phi) + (c0+lam) phi = 0.

    cone picks the start sign (+1 for positive, -1 for negative).
    Returns (end_value, zero_count, profile).
    """
    amp = 1.0 if cone == "positive" else -1.0
    end, zc, prof, _ = shoot_general(dom, ell, sign, amp,
                                     0.0, c0 + lam, 0.0, 1.0, h,
                                     store_profile=store_profile)
    return end, zc, prof


def _crossing_count(dom, ell, sign, start_sign, lam, c0, h):
    """Sturm count N(lam): interior zeros plus one if the boundary was reached.

    Monotone nondecreasing in lam; the k-th family eigenvalue is the
    infimum of {lam : N(lam) >= k}.
    """
    end, zc, _, diverged = shoot_general(dom, ell, sign, start_sign,
                                         0.0, c0 + lam, 0.0, 1.0, h,
                                         store_profile=False)
    if diverged:
        return zc, end
    arrived = end == 0.0 or end * (-1.0) ** zc * start_sign < 0.0
    return zc + (1 if arrived else 0), end


def _family_eigenvalue(dom, ell, sign, start_sign, index, c0, h, tol,
                       scan_step=None, check_monotone=False):
    """Bisect for the index-th eigenvalue of one shooting family.

    index = 1 is the principal eigenvalue of the family (no interior zeros).
    """
    lo = -c0
    width0 = 4.0 * BESSEL_J0_SQ * ell.beta / dom.width**2
    hi = lo + width0
    n_lo, _ = _crossing_count(dom, ell, sign, start_sign, lo, c0, h)
    if n_lo >= index:
        raise EigenError("lower bracket already above the target eigenvalue")
    iterations = 0
    if scan_step is not None and index > 1:
        # walk upward from the previous eigenvalue in fixed steps
        prev = _family_eigenvalue(dom, ell, sign, start_sign, index - 1,
                                  c0, h, max(tol, 1e-6))
        lo = prev.lam + 1e-6
        hi = lo + scan_step
        last_n = None
        for _ in range(20000):
            n_hi, _ = _crossing_count(dom, ell, sign, start_sign, hi, c0, h)
            iterations += 1
            if check_monotone and last_n is not None and n_hi < last_n:
                raise EigenError("crossing count decreased while scanning up")
            last_n = n_hi
            if n_hi >= index:
                break
            lo = hi
            hi += scan_step
        else:
            raise EigenError("no-eigenvalue-found: scan exhausted")
    else:
        for _ in range(60):
            n_hi, _ = _crossing_count(dom, ell, sign, start_sign, hi, c0, h)
            iterations += 1
            if n_hi >= index:
                break
            hi = lo + 2.0 * (hi - lo)
        else:
            raise EigenError("no-eigenvalue-found: bracket expansion exhausted")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        n_mid, _ = _crossing_count(dom, ell, sign, start_sign, mid, c0, h)
        iterations += 1
        if n_mid >= index:
            hi = mid
        else:
            lo = mid
    lam = 0.5 * (lo + hi)
    # eigenfunction taken from the not-yet-crossed side so it has exactly
    # index-1 interior zeros and a clean sign pattern
    end, zc, prof, _ = shoot_general(dom, ell, sign, start_sign,
                                     0.0, c0 + lo, 0.0, 1.0, h)
    return EigenResult(lam=lam, eigenfunction=prof, residual=float("nan"),
                       iterations=iterations,
                       cone="positive" if start_sign > 0 else "negative",
                       zero_count=zc,
                       diagnostics={"end_value": end, "bracket": (lo, hi)})


def _profile_residual(prof, ell, sign, n, czero, lam, skip=12):
    """Sup-norm of the centered-difference ODE residual along the profile."""
    r, u, v = prof.radii, prof.values, prof.derivs
    if len(r) < 2 * skip + 4:
        skip = 1
    upp = (v[2:] - v[:-2]) / (r[2:] - r[:-2])
    rr, uu, vv = r[1:-1], u[1:-1], v[1:-1]
    sl = slice(skip, len(rr) - 1)
    rr, uu, vv, upp = rr[sl], uu[sl], vv[sl], upp[sl]
    w = vv / rr
    if sign == "plus":
        tu = np.where(upp > 0, ell.beta, ell.alpha)
        tw = np.where(w > 0, ell.beta, ell.alpha)
    else:
        tu = np.where(upp > 0, ell.alpha, ell.beta)
        tw = np.where(w > 0, ell.alpha, ell.beta)
    res = tu * upp + (n - 1) * tw * w + (czero + lam) * uu
    return float(np.max(np.abs(res))) if len(res) else float("nan")


def _finish(res, dom, ell, sign, c0, cone, target_zeros, negate=False):
    """Normalize, compute the residual under the operator `sign`, validate."""
    prof = res.eigenfunction
    if negate:
        prof = prof.scaled(-1.0)
    if cone == "positive":
        scale = float(np.max(prof.values))
    else:
        scale = -float(np.min(prof.values))
    if scale <= 0.0:
        raise EigenError("eigenfunction normalization failed")
    prof = prof.scaled(1.0 / scale)
    residual = _profile_residual(prof, ell, sign, dom.dim, c0, res.lam)
    if res.zero_count != target_zeros:
        raise EigenError(
            f"converged profile has {res.zero_count} interior zeros, "
            f"expected {target_zeros}")
    return EigenResult(lam=res.lam, eigenfunction=prof, residual=residual,
                       iterations=res.iterations, cone=cone,
                       zero_count=res.zero_count, diagnostics=res.diagnostics)


def principal_eigenvalue_radial(dom, ell, c0=0.0, sign="plus",
                                cone="positive", h=None, tol=1e-8):
    """Principal eigenvalue of M_sign + c0 on a ball or annulus.

    The positive cone is solved by shooting; the negative cone uses the
    duality  lambda_1^-(M_sign + c0) = lambda_1^+(M_swapped + c0)  and
    negates the eigenfunction.
    """
    if h is None:
        h = dom.width / DEFAULT_STEPS
    if cone == "negative":
        base = _family_eigenvalue(dom, ell, _swap(sign), +1.0, 1, c0, h, tol)
        return _finish(base, dom, ell, sign, c0, "negative", 0, negate=True)
    base = _family_eigenvalue(dom, ell, sign, +1.0, 1, c0, h, tol)
    return _finish(base, dom, ell, sign, c0, "positive", 0)


def radial_nodal_eigenvalue(dom, ell, c0=0.0, sign="plus", interior_zeros=1,
                            h=None, tol=1e-8, scan_step=0.5):
    """Smallest eigenvalue of M_sign + c0 whose shot has the given zero count.

    Both start signs are tried and the smaller eigenvalue reported; the
    bracket walks upward from the previous family eigenvalue, relying on the
    (checked) monotonicity of the crossing count in lambda.
    """
    if interior_zeros < 1:
        raise InputError("interior_zeros must be >= 1")
    if h is None:
        h = dom.width / DEFAULT_STEPS
    index = interior_zeros + 1
    cands = []
    for start in (+1.0, -1.0):
        res = _family_eigenvalue(dom, ell, sign, start, index, c0, h, tol,
                                 scan_step=scan_step, check_monotone=True)
        cands.append(res)
    best = min(cands, key=lambda r: r.lam)
    cone = "positive" if best.cone == "positive" else "negative"
    return _finish(best, dom, ell, sign, c0, cone, interior_zeros)
