"""Shared constructions for the test-suite."""
import numpy as np
from scipy.optimize import brentq


def constant_diagonal_covariance(eigenvalues):
    """Symmetric matrix with the given spectrum and every diagonal entry equal.

    Standardizing data drawn from such a covariance rescales all columns by
    the same factor, so the planted eigenvalue ratios survive z-scoring.
    Built by Givens rotations in the Schur-Horn style: each step rotates one
    diagonal entry onto the target mean while preserving the spectrum.
    """
    lam = np.sort(np.asarray(eigenvalues, dtype=float))[::-1]
    p, target = lam.size, lam.mean()
    A = np.diag(lam)
    for _ in range(p - 1):
        d = np.diag(A)
        off = np.abs(d - target) > 1e-14
        if not off.any():
            break
        i = int(np.flatnonzero(off & (d > target))[0])
        j = int(np.flatnonzero(off & (d < target))[0])

        def entry(theta):
            c, s = np.cos(theta), np.sin(theta)
            return c * c * A[i, i] + 2 * c * s * A[i, j] + s * s * A[j, j] - target

        theta = brentq(entry, 0.0, np.pi / 2, xtol=1e-15)
        G = np.eye(p)
        c, s = np.cos(theta), np.sin(theta)
        G[i, i], G[i, j], G[j, i], G[j, j] = c, -s, s, c
        A = G.T @ A @ G
    return (A + A.T) / 2


def planted_sample(eigenvalues, n, seed):
    cov = constant_diagonal_covariance(eigenvalues)
    L = np.linalg.cholesky(cov)
    return np.random.default_rng(seed).standard_normal((n, len(eigenvalues))) @ L.T, cov


def random_rotation(p, seed):
    q, r = np.linalg.qr(np.random.default_rng(seed).standard_normal((p, p)))
    return q * np.sign(np.diag(r))
