"""Dirichlet problems  -M_sign(D^2 u) = f(|x|, u)  and their linearization.

The nonlinearity is the four-parameter family
    f(u) = c0 + (c1 + mu) u + c_p |u|^(p-1) u ,      p >= 1,
which covers constants, eigenvalue-type linear terms and power
nonlinearities while keeping f' exact (no expression parsing).
Radial solutions come from amplitude shooting, planar ones from damped
fixed-point iteration around the frozen linearization.
"""
from dataclasses import dataclass

import numpy as np

from .errors import InputError, NoSolutionError, SolverError
from .grid2d.grid import ScalarField
from .grid2d.operators import discrete_pucci, solve_dirichlet
from .radial import DEFAULT_STEPS, RadialProfile, shoot_general


@dataclass(frozen=True)
class NonlinearitySpec:
    """f(r, u) = c0 + (c1 + mu) u + c_p |u|^(p-1) u, with exact derivative."""

    c0: float = 0.0
    c1: float = 0.0
    p: float = 1.0
    c_p: float = 0.0
    mu: float = 0.0

    def __post_init__(self):
        if self.p < 1.0:
            raise InputError("p >= 1 keeps f' continuous")

    @property
    def is_convex(self):
        return self.c_p >= 0.0

    def value(self, u):
        u = np.asarray(u, dtype=float)
        out = self.c0 + (self.c1 + self.mu) * u
        if self.c_p != 0.0:
            out = out + self.c_p * np.abs(u) ** (self.p - 1.0) * u
        return out

    def derivative(self, u):
        u = np.asarray(u, dtype=float)
        out = np.full_like(u, self.c1 + self.mu)
        if self.c_p != 0.0:
            out = out + self.c_p * self.p * np.abs(u) ** (self.p - 1.0)
        return out


def linearized_potential(u, nl):
    """Pointwise f'(|x|, u): the potential of the linearized operator M+ + f'(u)."""
    if isinstance(u, ScalarField):
        return ScalarField(u.grid, nl.derivative(u.values))
    if isinstance(u, RadialProfile):
        return nl.derivative(u.values)
    return nl.derivative(np.asarray(u, dtype=float))


def _shoot_amp(dom, ell, sign, nl, amp, h, store=False):
    return shoot_general(dom, ell, sign, amp, nl.c0, nl.c1 + nl.mu,
                         nl.c_p, nl.p, h, store_profile=store)


def _indicator(dom, ell, sign, nl, amp, h):
    """(crossing count, end value); divergence counts as no boundary hit."""
    end, zc, _, diverged = _shoot_amp(dom, ell, sign, nl, amp, h)
    if diverged:
        return zc, end, True
    arrived = end == 0.0 or end * (-1.0) ** zc * np.sign(amp) < 0.0
    return zc + (1 if arrived else 0), end, False


def solve_semilinear_radial(dom, ell, sign, nl, init_slope=1.0,
                            target_zeros=0, h=None, boundary_tol=1e-7,
                            max_bisect=200):
    """Radial solution with a prescribed interior zero count, by amplitude
    bisection on the shooting map.

    init_slope sets the sign and magnitude of the starting amplitude
    (center value on balls, inner slope on annuli).  Raises
    NoSolutionError when no amplitude bracket exists; existence is not
    guaranteed for every nonlinearity.
    """
    if h is None:
        h = dom.width / DEFAULT_STEPS
    if init_slope == 0.0:
        raise InputError("init_slope must be nonzero")
    target_n = target_zeros + 1

    def accept(amp):
        end, zc, prof, div = _shoot_amp(dom, ell, sign, nl, amp, h, store=True)
        if div or zc != target_zeros:
            return None
        if abs(end) <= boundary_tol * max(np.max(np.abs(prof.values)), 1e-300):
            return prof
        return None

    prof = accept(init_slope)
    if prof is not None:
        return prof

    # geometric amplitude ladder around init_slope, keeping its sign
    ladder = [init_slope * 1.25**j for j in range(-24, 41)]
    marks = []
    for amp in ladder:
        n, end, div = _indicator(dom, ell, sign, nl, amp, h)
        marks.append((amp, n))
    bracket = None
    for (a0, n0), (a1, n1) in zip(marks, marks[1:]):
        if n0 < target_n <= n1 or n1 < target_n <= n0:
            bracket = (a0, a1) if n0 < n1 else (a1, a0)
            break
    if bracket is None:
        raise NoSolutionError(
            f"no amplitude bracket with {target_zeros} interior zeros found")
    lo, hi = bracket   # N(lo) < target_n <= N(hi)
    for _ in range(max_bisect):
        mid = 0.5 * (lo + hi)
        n, end, div = _indicator(dom, ell, sign, nl, mid, h)
        if n >= target_n:
            hi = mid
        else:
            lo = mid
        prof = accept(lo)
        if prof is not None:
            return prof
        if abs(hi - lo) <= 1e-14 * max(1.0, abs(hi)):
            break
    prof = accept(lo) or accept(hi)
    if prof is None:
        raise NoSolutionError("amplitude bisection did not close the boundary "
                              "condition at the requested zero count")
    return prof


def solve_semilinear_grid(dom, h, ell, sign, nl, u0=None, grid=None,
                          tol=1e-8, max_iter=300):
    """Planar solution by damped iteration on the frozen linearization.

    Each step solves the monotone problem
        -M_sign(u) - f'(u_k) u + shift u = f(u_k) - f'(u_k) u_k + shift u_k
    and damps the update; the damping factor halves whenever the residual
    grows, with floor 1/64.
    """
    from .grid2d.grid import build_grid, const_field

    if grid is None:
        grid = build_grid(dom, h, min_interior=10)
    u = const_field(grid, 0.0) if u0 is None else u0.copy()

    def residual(field):
        value = discrete_pucci(field, ell, sign).values
        return float(np.max(np.abs(-value - nl.value(field.values))))

    res = residual(u)
    damping = 1.0
    history = [res]
    tuning = {}
    for _ in range(max_iter):
        if res <= tol:
            return u
        fp = nl.derivative(u.values)
        shift = max(0.0, float(fp.max())) + 1.0
        c = ScalarField(grid, fp)
        rhs = ScalarField(grid, nl.value(u.values) - fp * u.values
                          + shift * u.values)
        proposal = solve_dirichlet(c, shift, rhs, ell, sign, u0=u,
                                   tuning=tuning)
        new_u = ScalarField(grid, u.values
                            + damping * (proposal.values - u.values))
        new_res = residual(new_u)
        if new_res > res and damping > 1.0 / 64.0:
            damping = max(damping / 2.0, 1.0 / 64.0)
            continue
        u, res = new_u, new_res
        history.append(res)
        if len(history) > 12 and res > 0.999 * history[-10]:
            break   # stagnation
    if res <= tol:
        return u
    raise SolverError("semilinear iteration stagnated",
                      {"residual_history": history[-10:]})