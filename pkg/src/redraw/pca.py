"""Principal axes of small covariance matrices via cyclic Jacobi rotations.

The horizontal covariance matrices this package sees are at most 4x4, so a
dependency-free Jacobi sweep is plenty; the test suite cross-checks it against
an independent eigen decomposition.
"""

import numpy as np

JACOBI_TOL = 1e-12


def jacobi_eigh(matrix: np.ndarray, tol: float = JACOBI_TOL, max_sweeps: int = 100):
    """Eigenvalues (descending) and orthonormal column eigenvectors of a
    symmetric matrix."""
    a = np.array(matrix, dtype=float)
    k = a.shape[0]
    if a.shape != (k, k):
        raise ValueError("matrix must be square")
    v = np.eye(k)
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.tril(a, -1) ** 2))
        if off <= tol:
            break
        for p in range(k - 1):
            for q in range(p + 1, k):
                if abs(a[p, q]) <= tol * 1e-3:
                    continue
                tau = (a[q, q] - a[p, p]) / (2.0 * a[p, q])
                t = np.sign(tau) / (abs(tau) + np.hypot(1.0, tau)) if tau != 0 else 1.0
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                rot = np.eye(k)
                rot[p, p] = rot[q, q] = c
                rot[p, q] = s
                rot[q, p] = -s
                a = rot.T @ a @ rot
                v = v @ rot
    values = np.diag(a).copy()
    ordering = np.argsort(-values, kind="stable")
    return values[ordering], v[:, ordering]


def principal_axes(points: np.ndarray):
    """Covariance eigenpairs of a centered point cloud (rows are points)."""
    pts = np.asarray(points, dtype=float)
    n = pts.shape[0]
    centered = pts - (pts.mean(axis=0) if n else 0.0)
    if n > 1:
        cov = centered.T @ centered / (n - 1)
    else:
        cov = np.zeros((pts.shape[1], pts.shape[1]))
    return jacobi_eigh(cov)
