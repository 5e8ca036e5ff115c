"""Wide-stencil discretization of M+/- and the monotone Dirichlet solver.

Per node the extreme Hessian eigenvalues are approximated by the max and
min directional second differences; the operator value applies the
coefficient rule (beta on positive branches, alpha on negative, swapped
for the minus operator) to that pair.  Dirichlet problems are solved by
policy iteration: freeze the extremizing direction pair and branch
coefficients, solve the resulting linear system by SOR sweeps, refresh.
"""
import numpy as np

from .. import _kernels
from ..errors import GridError, SolverError
from ..pucci import pucci_value
from .grid import ScalarField

LINEAR_TOL = 1e-12
NONLINEAR_TOL = 1e-10
MAX_POLICY_ROUNDS = 200
MAX_SWEEPS = 400_000


def _resolve_stencil(grid, stencil):
    if stencil is not None and stencil != grid.stencil:
        raise GridError("stencil does not match the one baked into the grid")
    return grid.stencil


def directional_second_differences(field):
    """All directional second differences, shape (n_interior, K)."""
    g = field.grid
    u = field.values
    up = np.where(g.nbr_plus >= 0, u[np.clip(g.nbr_plus, 0, None)], 0.0)
    um = np.where(g.nbr_minus >= 0, u[np.clip(g.nbr_minus, 0, None)], 0.0)
    return g.cp * up + g.cm * um + g.cdiag * u[:, None]


def discrete_pucci(field, ell, sign, stencil=None):
    """Nodal values of the discrete extremal operator applied to the field."""
    _resolve_stencil(field.grid, stencil)
    d2 = directional_second_differences(field)
    mu_max = d2.max(axis=1)
    mu_min = d2.min(axis=1)
    return ScalarField(field.grid, pucci_value(mu_max, mu_min, ell, sign))


def extract_policy(field, ell, sign):
    """Extremizing directions and branch coefficients at the current iterate."""
    d2 = directional_second_differences(field)
    k_max = d2.argmax(axis=1)
    k_min = d2.argmin(axis=1)
    mu_max = d2[np.arange(len(k_max)), k_max]
    mu_min = d2[np.arange(len(k_min)), k_min]
    if sign == "plus":
        a_max = np.where(mu_max > 0.0, ell.beta, ell.alpha)
        a_min = np.where(mu_min > 0.0, ell.beta, ell.alpha)
    else:
        a_max = np.where(mu_max > 0.0, ell.alpha, ell.beta)
        a_min = np.where(mu_min > 0.0, ell.alpha, ell.beta)
    return k_max, k_min, a_max, a_min


# over-relaxation ladder probed per linear system; the winning rung is cached
# in a tuning dict shared across the policy/power iterations of one caller
_OMEGA_LADDER = (1.0, 1.3, 1.5, 1.65, 1.75, 1.82, 1.88, 1.92)


class _FrozenSystem:
    """Linear system  diag*u - sum_w w*u_nbr = rhs  for a frozen policy."""

    def __init__(self, grid, policy, c_vals, shift):
        k_max, k_min, a_max, a_min = policy
        rows = np.arange(grid.n_interior)
        self.ip1 = np.ascontiguousarray(grid.nbr_plus[rows, k_max], np.int32)
        self.im1 = np.ascontiguousarray(grid.nbr_minus[rows, k_max], np.int32)
        self.ip2 = np.ascontiguousarray(grid.nbr_plus[rows, k_min], np.int32)
        self.im2 = np.ascontiguousarray(grid.nbr_minus[rows, k_min], np.int32)
        self.wp1 = np.ascontiguousarray(a_max * grid.cp[rows, k_max])
        self.wm1 = np.ascontiguousarray(a_max * grid.cm[rows, k_max])
        self.wp2 = np.ascontiguousarray(a_min * grid.cp[rows, k_min])
        self.wm2 = np.ascontiguousarray(a_min * grid.cm[rows, k_min])
        self.diag = np.ascontiguousarray(
            -(a_max * grid.cdiag[rows, k_max] + a_min * grid.cdiag[rows, k_min])
            - c_vals + shift)
        if np.any(self.diag <= 0.0):
            raise SolverError("frozen system lost positive diagonal; "
                              "increase the shift")
        # gather tables with boundary arms zeroed out
        self._gp1 = np.maximum(self.ip1, 0)
        self._gm1 = np.maximum(self.im1, 0)
        self._gp2 = np.maximum(self.ip2, 0)
        self._gm2 = np.maximum(self.im2, 0)
        self._zp1 = np.where(self.ip1 >= 0, self.wp1, 0.0)
        self._zm1 = np.where(self.im1 >= 0, self.wm1, 0.0)
        self._zp2 = np.where(self.ip2 >= 0, self.wp2, 0.0)
        self._zm2 = np.where(self.im2 >= 0, self.wm2, 0.0)

    def residual(self, u, rhs):
        lhs = self.diag * u
        lhs -= self._zp1 * u[self._gp1]
        lhs -= self._zm1 * u[self._gm1]
        lhs -= self._zp2 * u[self._gp2]
        lhs -= self._zm2 * u[self._gm2]
        lhs -= rhs
        return float(np.max(np.abs(lhs)))

    def _sweep(self, u, rhs, omega, nsweeps):
        _kernels.linear_sweeps(u, rhs, self.diag,
                               self.ip1, self.wp1, self.im1, self.wm1,
                               self.ip2, self.wp2, self.im2, self.wm2,
                               omega, nsweeps)

    def solve(self, rhs, u0=None, rel_tol=LINEAR_TOL, tuning=None):
        """SOR sweeps to a relative residual target.

        The relaxation factor climbs a fixed ladder while the measured decay
        rate improves; the winning rung is remembered in `tuning` so later
        solves (next policy round, next power iteration) skip the probing.
        """
        tuning = tuning if tuning is not None else {}
        u = np.zeros_like(rhs) if u0 is None else u0.copy()
        target = rel_tol * (1.0 + float(np.max(np.abs(rhs))))
        res = self.residual(u, rhs)
        if res <= target:
            return u, 0
        chunk, total = 40, 0
        rung = tuning.get("rung")
        probing = rung is None
        if probing:
            rung = 0
        best_res, best_u = res, u.copy()
        rate_at_rung = None
        stall = 0
        while total < MAX_SWEEPS:
            omega = _OMEGA_LADDER[rung]
            self._sweep(u, rhs, omega, chunk)
            total += chunk
            new_res = self.residual(u, rhs)
            if new_res <= target:
                tuning["rung"] = rung
                return u, total
            diverged = not np.isfinite(new_res) or new_res > 2.0 * best_res
            if diverged:
                u = best_u.copy()
                rung = max(rung - 1, 0)
                tuning["rung"] = rung
                probing = False
                res = best_res
                continue
            rate = new_res / max(res, 1e-300)
            if probing:
                if rate_at_rung is None or rate < rate_at_rung * 0.92:
                    # still improving clearly: climb one rung
                    rate_at_rung = rate
                    if rung + 1 < len(_OMEGA_LADDER):
                        rung += 1
                    else:
                        probing = False
                        tuning["rung"] = rung
                else:
                    rung = max(rung - 1, 0)
                    probing = False
                    tuning["rung"] = rung
            if new_res < best_res * (1.0 - 5e-4):
                stall = 0
            else:
                stall += 1
            if new_res < best_res:
                best_res, best_u = new_res, u.copy()
            res = new_res
            if stall >= 8 and not probing:
                # rounding floor of the Shortley-Weller rows: hand back the
                # best iterate and let the nonlinear residual check decide
                tuning["rung"] = rung
                return best_u, total
        raise SolverError("linear sweeps did not reach the residual target",
                          {"residual": res, "target": target, "sweeps": total})


def _policy_and_value(field, ell, sign):
    """One d2 evaluation shared between the operator value and the policy."""
    d2 = directional_second_differences(field)
    k_max = d2.argmax(axis=1)
    k_min = d2.argmin(axis=1)
    rows = np.arange(len(k_max))
    mu_max = d2[rows, k_max]
    mu_min = d2[rows, k_min]
    if sign == "plus":
        a_max = np.where(mu_max > 0.0, ell.beta, ell.alpha)
        a_min = np.where(mu_min > 0.0, ell.beta, ell.alpha)
    else:
        a_max = np.where(mu_max > 0.0, ell.alpha, ell.beta)
        a_min = np.where(mu_min > 0.0, ell.alpha, ell.beta)
    value = a_max * mu_max + a_min * mu_min
    return value, (k_max, k_min, a_max, a_min)


def solve_dirichlet(c, shift, rhs, ell, sign, stencil=None, u0=None,
                    tol=NONLINEAR_TOL, max_rounds=MAX_POLICY_ROUNDS,
                    tuning=None):
    """Solve  -M_sign(u) - c*u + shift*u = rhs  with zero boundary values.

    The caller picks a shift making the operator monotone; shift > max(c)
    is sufficient.  Policy iteration alternates freezing the extremizing
    directions/branches with SOR solves of the frozen linear system.
    """
    grid = c.grid
    _resolve_stencil(grid, stencil)
    if rhs.grid is not grid:
        raise GridError("c and rhs must live on the same grid")
    u = const_zero(grid) if u0 is None else u0.copy()
    scale = 1.0 + rhs.norm_inf
    history = []
    for _round in range(max_rounds):
        value, policy = _policy_and_value(u, ell, sign)
        res = float(np.max(np.abs(
            -value - c.values * u.values + shift * u.values - rhs.values)))
        history.append(res)
        if res <= tol * scale:
            return u
        if len(history) >= 6 and res > 0.995 * min(history[:-5]):
            break   # stalled across policy rounds
        sys_ = _FrozenSystem(grid, policy, c.values, shift)
        sol, _ = sys_.solve(rhs.values, u0=u.values, tuning=tuning)
        u = ScalarField(grid, sol)
    raise SolverError("policy iteration did not converge",
                      {"rounds": len(history), "residual_history": history[-10:]})


def const_zero(grid):
    return ScalarField(grid, np.zeros(grid.n_interior))


def operator_residual(u, c, lam, ell, sign):
    """Sup-norm of  -M_sign(u) - c*u - lam*u  (eigenpair defect)."""
    value = discrete_pucci(u, ell, sign).values
    return float(np.max(np.abs(-value - c.values * u.values - lam * u.values)))
