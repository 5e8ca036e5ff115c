"""Principal eigenvalues on grids by positive-cone inverse iteration.

Each step solves the shifted resolvent  (-M_sign - c + shift) u_{k+1} = u_k;
the per-node ratios u_k / u_{k+1} minus the shift bracket the principal
eigenvalue from both sides (Collatz-Wielandt), and the bracket width is the
stopping criterion.  The negative cone is obtained from the positive one of
the swapped operator, with the eigenfunction negated.
"""
import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from ..errors import EigenError, SolverError
from ..radial import EigenResult
from .grid import ScalarField, build_grid, const_field
from .operators import (directional_second_differences, discrete_pucci,
                        extract_policy, operator_residual, solve_dirichlet)

MAX_POWER_ITERATIONS = 500


def _swap(sign):
    return "minus" if sign == "plus" else "plus"


def principal_eigenvalue_grid(c=None, dom=None, h=None, ell=None, sign="plus",
                              cone="positive", stencil=None, grid=None,
                              tol=1e-6):
    """Principal eigenvalue of M_sign + c on a planar domain.

    `c` may be a ScalarField (its grid wins) or None for the zero potential,
    in which case `grid` or (dom, h) must describe the discretization.
    """
    if c is not None:
        grid = c.grid
    elif grid is None:
        grid = build_grid(dom, h, stencil=stencil, min_interior=10)
    if c is None:
        c = const_field(grid, 0.0)
    if cone == "negative":
        res = principal_eigenvalue_grid(c=c, ell=ell, sign=_swap(sign),
                                        cone="positive", tol=tol)
        phi = ScalarField(grid, -res.eigenfunction.values)
        residual = operator_residual(phi, c, res.lam, ell, sign)
        return EigenResult(lam=res.lam, eigenfunction=phi, residual=residual,
                           iterations=res.iterations, cone="negative",
                           zero_count=0, diagnostics=res.diagnostics)

    shift = max(0.0, float(np.max(c.values))) + 1.0
    for attempt in range(3):
        try:
            return _inverse_iteration(grid, c, ell, sign, shift, tol)
        except SolverError:
            shift *= 10.0   # cheap retry with a safer resolvent
    raise EigenError("inverse iteration failed for all shift choices")


def _inverse_iteration(grid, c, ell, sign, shift, tol):
    u = const_field(grid, 1.0)
    lam_lo = lam_hi = None
    lam = 0.0
    tuning = {}
    for it in range(1, MAX_POWER_ITERATIONS + 1):
        warm = ScalarField(grid, u.values / max(lam + shift, 1e-3))
        nxt = solve_dirichlet(c, shift, u, ell, sign, u0=warm, tuning=tuning)
        if np.any(nxt.values <= 0.0):
            raise SolverError("resolvent lost positivity")
        ratios = u.values / nxt.values
        lam_lo = float(ratios.min()) - shift
        lam_hi = float(ratios.max()) - shift
        lam = 0.5 * (lam_lo + lam_hi)
        phi = ScalarField(grid, nxt.values / float(np.max(nxt.values)))
        if lam_hi - lam_lo <= tol * (1.0 + abs(lam)):
            residual = operator_residual(phi, c, lam, ell, sign)
            return EigenResult(
                lam=lam, eigenfunction=phi, residual=residual, iterations=it,
                cone="positive", zero_count=0,
                diagnostics={"bracket": (lam_lo, lam_hi), "shift": shift})
        u = phi
    raise EigenError("Collatz-Wielandt bracket did not shrink within "
                     f"{MAX_POWER_ITERATIONS} iterations: "
                     f"[{lam_lo}, {lam_hi}]")


def _frozen_matrix(grid, field, c_vals, lam, ell, sign):
    """Sparse matrix of  -L_policy - c - lam  at the frozen policy of field."""
    k_max, k_min, a_max, a_min = extract_policy(field, ell, sign)
    n = grid.n_interior
    rows_idx = np.arange(n)
    mat = sp.lil_matrix((n, n))
    diag = -(a_max * grid.cdiag[rows_idx, k_max]
             + a_min * grid.cdiag[rows_idx, k_min]) - c_vals - lam
    mat.setdiag(diag)
    for karr, aarr, nbr, coef in (
            (k_max, a_max, grid.nbr_plus, grid.cp),
            (k_max, a_max, grid.nbr_minus, grid.cm),
            (k_min, a_min, grid.nbr_plus, grid.cp),
            (k_min, a_min, grid.nbr_minus, grid.cm)):
        cols = nbr[rows_idx, karr]
        w = -aarr * coef[rows_idx, karr]
        keep = cols >= 0
        mat[rows_idx[keep], cols[keep]] = mat[rows_idx[keep], cols[keep]] + w[keep]
    return mat.tocsr()


def nodal_candidate_refine(lam0, psi0, dom, h, ell, sign="plus",
                           max_steps=100, tol=1e-8):
    """Newton refinement of a sign-changing eigenpair candidate for M_sign.

    Solves {operator residual = 0, psi fixed to +-1 at its extremal node}
    with frozen-policy Jacobians.  Convergence is not guaranteed; returns
    None on failure (a legitimate outcome for these candidates).
    """
    from ..symmetry import nodal_analysis   # local import to avoid a cycle

    grid = psi0.grid
    n = grid.n_interior
    c = const_field(grid, 0.0)
    psi = psi0.values.copy()
    i_star = int(np.argmax(np.abs(psi)))
    sigma = 1.0 if psi[i_star] > 0 else -1.0
    psi /= abs(psi[i_star])
    lam = float(lam0)
    for step in range(1, max_steps + 1):
        field = ScalarField(grid, psi)
        value = discrete_pucci(field, ell, sign).values
        res = -value - lam * psi
        norm_defect = psi[i_star] - sigma
        if max(np.max(np.abs(res)), abs(norm_defect)) <= tol * (1.0 + abs(lam)):
            report = nodal_analysis(field)
            residual = operator_residual(field, c, lam, ell, sign)
            return EigenResult(
                lam=lam, eigenfunction=field, residual=residual,
                iterations=step,
                cone="positive" if sigma > 0 else "negative",
                zero_count=max(report.num_nodal_regions - 1, 0),
                diagnostics={"newton_steps": step})
        jac = _frozen_matrix(grid, field, c.values, lam, ell, sign)
        bordered = sp.bmat(
            [[jac, sp.csr_matrix(-psi.reshape(-1, 1))],
             [sp.csr_matrix((np.ones(1), (np.zeros(1, dtype=int), [i_star])),
                            shape=(1, n)), None]], format="csc")
        rhs = np.concatenate([-res, [-norm_defect]])
        try:
            delta = spla.spsolve(bordered, rhs)
        except Exception:
            return None
        if not np.all(np.isfinite(delta)):
            return None
        psi = psi + delta[:n]
        lam = lam + float(delta[n])
        if abs(lam) > 1e8 or np.max(np.abs(psi)) > 1e8:
            return None
    return None
