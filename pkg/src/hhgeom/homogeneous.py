"""Left-invariant geometry on a Lie group, computed entirely in its Lie algebra.

For a basis ``X_1..X_4`` of left-invariant fields with constant metric
``g(X_a, X_b) = ε_a δ_ab`` the Levi-Civita connection is given by the Koszul
formula and the curvature reduces to products of constants.
"""

from dataclasses import dataclass

import numpy as np

from .chart import FrameSnapshot
from .errors import NotClosed

DIM = 4
CLOSURE_TOL = 1e-10


@dataclass(frozen=True)
class LieAlgebraBasis:
    generators: np.ndarray  # shape (4, n, n)
    eps: tuple


def matrix_from_entries(n, entries):
    """n x n matrix from ``{(row, col): value}`` with 1-based indices."""
    m = np.zeros((n, n))
    for (i, j), v in entries.items():
        m[i - 1, j - 1] = v
    return m


def structure_constants(basis, tol=CLOSURE_TOL):
    """``c[a, b, d] = c^d_ab`` with ``[X_a, X_b] = c^d_ab X_d`` (matrix commutators)."""
    X = np.asarray(basis.generators, dtype=float)
    A = X.reshape(DIM, -1).T
    if np.linalg.matrix_rank(A) < DIM:
        raise NotClosed("generators are linearly dependent")
    c = np.zeros((DIM, DIM, DIM))
    worst = 0.0
    for a in range(DIM):
        for b in range(DIM):
            comm = X[a] @ X[b] - X[b] @ X[a]
            coef, *_ = np.linalg.lstsq(A, comm.ravel(), rcond=None)
            worst = max(worst, float(np.max(np.abs(A @ coef - comm.ravel()))))
            c[a, b] = coef
    if worst > tol:
        raise NotClosed(f"commutators leave the span of the generators (residual {worst:.3g})")
    return c


def jacobi_residual(c):
    # Σ_cyc [[X_a, X_b], X_c]: coefficient of X_f is Σ_e c^e_ab c^f_ec + cyclic
    t = np.einsum("abe,ecf->abcf", c, c)
    return float(np.max(np.abs(t + t.transpose(1, 2, 0, 3) + t.transpose(2, 0, 1, 3))))


def koszul_connection(c, eps):
    """``gamma[a, b, d] = Γ^d_ab`` for ``∇_{X_a} X_b = Γ^d_ab X_d``.

    2 g(∇_a X_b, X_c) = g([X_a,X_b],X_c) − g([X_b,X_c],X_a) + g([X_c,X_a],X_b).
    """
    eps = np.asarray(eps, dtype=float)
    # cl[a, b, d] = g([X_a, X_b], X_d)
    cl = c * eps[None, None, :]
    # transpose(2,0,1)[a,b,d] = cl[b,d,a]; transpose(1,2,0)[a,b,d] = cl[d,a,b]
    low = 0.5 * (cl - cl.transpose(2, 0, 1) + cl.transpose(1, 2, 0))
    return low * eps[None, None, :]


def curvature_homogeneous(gamma, c, eps):
    """``R[a,b,c,d] = g(R(X_a,X_b)X_c, X_d)`` for constant connection coefficients."""
    eps = np.asarray(eps, dtype=float)
    # R(X_a,X_b)X_c = Γ^e_bc Γ^d_ae − Γ^e_ac Γ^d_be − c^e_ab Γ^d_ec
    up = (np.einsum("bce,aed->abcd", gamma, gamma)
          - np.einsum("ace,bed->abcd", gamma, gamma)
          - np.einsum("abe,ecd->abcd", c, gamma))
    return up * eps[None, None, None, :]


def lie_snapshot(basis):
    """A :class:`FrameSnapshot` of the left-invariant frame (valid at every group element)."""
    c = structure_constants(basis)
    gamma = koszul_connection(c, basis.eps)
    R = curvature_homogeneous(gamma, c, basis.eps)
    return FrameSnapshot(
        point=None,
        eps=np.asarray(basis.eps, dtype=float),
        gamma=gamma,
        riemann=R,
        brackets=c,
    )
