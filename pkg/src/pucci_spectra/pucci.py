"""Pointwise evaluation of the extremal operators M+/- on symmetric matrices.

M+(M) = beta * sum of positive eigenvalues + alpha * sum of negative ones,
M-(M) = the same with the coefficients swapped.  Equivalently M+(M) is the
supremum of tr(A M) over symmetric A with spectrum in [alpha, beta]; a
seeded Monte-Carlo scan over random orthogonal frames provides a lower
approximation of that supremum and serves as the validation oracle.
"""
from dataclasses import dataclass

import numpy as np

from .errors import InputError


@dataclass(frozen=True)
class EllipticityPair:
    """Ellipticity constants 0 < alpha <= beta."""

    alpha: float
    beta: float

    def __post_init__(self):
        if not (np.isfinite(self.alpha) and np.isfinite(self.beta)):
            raise InputError("ellipticity constants must be finite")
        if not (0.0 < self.alpha <= self.beta):
            raise InputError(
                f"need 0 < alpha <= beta, got alpha={self.alpha}, beta={self.beta}"
            )


def check_sym_matrix(m):
    """Validate and return a symmetric matrix as a float ndarray.

    The symmetry check is exact (entries[i][j] == entries[j][i] as stored).
    """
    a = np.asarray(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InputError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] < 2:
        raise InputError("matrix dimension must be >= 2")
    if not np.all(np.isfinite(a)):
        raise InputError("matrix entries must be finite")
    if not np.array_equal(a, a.T):
        raise InputError("matrix is not exactly symmetric")
    return a


def sym_eigenvalues(m):
    """All eigenvalues of a symmetric matrix, ascending, by cyclic Jacobi.

    Unconditionally convergent for symmetric input; the sweep stops once the
    off-diagonal Frobenius norm drops below 1e-14 * (1 + ||M||_F).
    """
    a = check_sym_matrix(m).copy()
    n = a.shape[0]
    tol = 1e-14 * (1.0 + np.linalg.norm(a))
    for _ in range(100):
        off = np.sqrt(np.sum(a**2) - np.sum(np.diag(a) ** 2))
        if off <= tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= tol / (n * n):
                    continue
                tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.sign(tau) if tau != 0 else 1.0
                t /= abs(tau) + np.sqrt(1.0 + tau * tau)
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                rot = np.eye(n)
                rot[p, p] = rot[q, q] = c
                rot[p, q] = s
                rot[q, p] = -s
                a = rot.T @ a @ rot
                a = 0.5 * (a + a.T)
    return np.sort(np.diag(a))


def _signed_sums(mu, scale):
    # eigenvalues below the cutoff count as zero; they contribute 0 either way
    cut = 1e-13 * (1.0 + scale)
    pos = float(np.sum(mu[mu > cut]))
    neg = float(np.sum(mu[mu < -cut]))
    return pos, neg


def pucci_plus(m, ell):
    """M+_{alpha,beta}(M) = beta * (positive eigenvalue sum) + alpha * (negative sum)."""
    a = check_sym_matrix(m)
    mu = sym_eigenvalues(a)
    pos, neg = _signed_sums(mu, np.linalg.norm(a))
    return ell.beta * pos + ell.alpha * neg


def pucci_minus(m, ell):
    """M-_{alpha,beta}(M) = alpha * (positive eigenvalue sum) + beta * (negative sum)."""
    a = check_sym_matrix(m)
    mu = sym_eigenvalues(a)
    pos, neg = _signed_sums(mu, np.linalg.norm(a))
    return ell.alpha * pos + ell.beta * neg


def pucci_value(mu_max, mu_min, ell, sign):
    """Coefficient rule applied to an eigenvalue pair (used by the 2D scheme)."""

    def branch_plus(s):
        return np.where(s > 0.0, ell.beta * s, ell.alpha * s)

    def branch_minus(s):
        return np.where(s > 0.0, ell.alpha * s, ell.beta * s)

    g = branch_plus if sign == "plus" else branch_minus
    return g(np.asarray(mu_max, dtype=float)) + g(np.asarray(mu_min, dtype=float))


def random_orthogonal_frames(count, n, seed):
    """Seeded batch of orthogonal matrices (rows = frame vectors).

    Gram-Schmidt orthonormalization of standard-normal matrices, with each
    row sign-fixed (largest-magnitude entry made positive) for determinism.
    """
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((count, n, n))

    def unit(v):
        return v / np.linalg.norm(v, axis=1, keepdims=True)

    if n == 2:
        q0 = unit(g[:, 0, :])
        q = np.stack([q0, np.stack([-q0[:, 1], q0[:, 0]], axis=1)], axis=1)
    elif n == 3:
        q0 = unit(g[:, 0, :])
        v1 = g[:, 1, :]
        v1 = v1 - np.sum(v1 * q0, axis=1, keepdims=True) * q0
        v1 = v1 - np.sum(v1 * q0, axis=1, keepdims=True) * q0
        q1 = unit(v1)
        q2 = np.cross(q0, q1)
        q = np.stack([q0, q1, q2], axis=1)
    else:
        q = np.empty_like(g)
        for i in range(n):
            v = g[:, i, :].copy()
            for _ in range(2):   # reorthogonalize: Q^T Q - I at machine eps
                for j in range(i):
                    proj = np.sum(v * q[:, j, :], axis=1, keepdims=True)
                    v -= proj * q[:, j, :]
            norm = np.linalg.norm(v, axis=1, keepdims=True)
            # vanishing rows are measure-zero; fall back to a unit vector
            bad = norm[:, 0] < 1e-300
            if np.any(bad):
                v[bad] = 0.0
                v[bad, i] = 1.0
                norm = np.linalg.norm(v, axis=1, keepdims=True)
            q[:, i, :] = v / norm
    # deterministic row signs (the sampled tr(A M) is sign-invariant)
    q *= np.where(q[:, :, :1] < 0.0, -1.0, 1.0)
    return q


def pucci_sup_oracle(m, ell, num_frames, seed):
    """Monte-Carlo lower approximation of sup tr(A M) over admissible A.

    Each frame Q contributes max over all diagonal coefficient choices in
    {alpha, beta}^n of tr(Q^T diag(a) Q M); the separable maximum handles the
    exhaustive coefficient scan in closed form.  Always <= pucci_plus(M),
    converging to it as num_frames grows.
    """
    a = check_sym_matrix(m)
    if num_frames < 1:
        raise InputError("num_frames must be >= 1")
    n = a.shape[0]
    best = -np.inf
    # chunked so huge frame counts do not blow up memory
    chunk = 200_000
    done = 0
    while done < num_frames:
        take = min(chunk, num_frames - done)
        q = random_orthogonal_frames(take, n, seed + done)
        d = np.sum((q @ a) * q, axis=2)   # d[f, i] = q_i . M q_i per frame
        vals = np.maximum(ell.alpha * d, ell.beta * d).sum(axis=1)
        best = max(best, float(vals.max()))
        done += take
    return best
