"""Independent reference computations: plain nested central differences on
closed-form coordinate metrics, no jets and no package kernels."""

import numpy as np

H = 1e-4


def christoffel_fd(metric, p, h=H):
    """Γ^k_ij at p from central differences of metric(p) -> 4x4 array."""
    p = np.asarray(p, dtype=float)
    g = metric(p)
    ginv = np.linalg.inv(g)
    dg = np.empty((4, 4, 4))  # dg[k, i, j] = ∂_k g_ij
    for k in range(4):
        s = np.zeros(4)
        s[k] = h
        dg[k] = (metric(p + s) - metric(p - s)) / (2 * h)
    # low[i, j, m] = ½(∂_i g_jm + ∂_j g_im − ∂_m g_ij)
    low = 0.5 * (np.einsum("ijm->ijm", dg) + np.einsum("jim->ijm", dg) - np.einsum("mij->ijm", dg))
    return np.einsum("km,ijm->ijk", ginv, low)


def riemann_fd(metric, p, h=1e-3):
    """Covariant R_ijkl = g(R(∂_i,∂_j)∂_k, ∂_l) with R(X,Y) = [∇_X,∇_Y] − ∇_[X,Y]."""
    p = np.asarray(p, dtype=float)
    G = christoffel_fd(metric, p)
    dG = np.empty((4, 4, 4, 4))  # dG[m, i, j, k] = ∂_m Γ^k_ij
    for m in range(4):
        s = np.zeros(4)
        s[m] = h
        dG[m] = (christoffel_fd(metric, p + s) - christoffel_fd(metric, p - s)) / (2 * h)
    # R^l_{kij}... : (R(∂_i,∂_j)∂_k)^l = ∂_i Γ^l_jk − ∂_j Γ^l_ik + Γ^m_jk Γ^l_im − Γ^m_ik Γ^l_jm
    up = (np.einsum("ijkl->ijkl", dG)
          - np.einsum("jikl->ijkl", dG)
          + np.einsum("jkm,iml->ijkl", G, G)
          - np.einsum("ikm,jml->ijkl", G, G))
    return np.einsum("ijkm,ml->ijkl", up, metric(p))


def frame_riemann_fd(metric, frame, p):
    """Frame components R(e_a,e_b,e_c,e_d); ``frame(p)`` has e_a in column a."""
    E = frame(p)
    return np.einsum("ijkl,ia,jb,kc,ld->abcd", riemann_fd(metric, p), E, E, E, E)


def coordinate_J(frame, J, p):
    """J as a coordinate endomorphism E J E⁻¹ at p."""
    E = frame(p)
    return E @ J @ np.linalg.inv(E)


def _d(fn, p, h):
    """d[m, ...] = ∂_m fn at p by central differences."""
    out = []
    for m in range(4):
        s = np.zeros(4)
        s[m] = h
        out.append((fn(p + s) - fn(p - s)) / (2 * h))
    return np.array(out)


def nijenhuis_fd(frame, J, p, h=1e-5):
    """Frame components N(e_a,e_b)^c of N(X,Y) = [X,Y] + J[X,JY] + J[JX,Y] − [JX,JY]."""
    p = np.asarray(p, dtype=float)
    Jc = coordinate_J(frame, J, p)
    dJ = _d(lambda q: coordinate_J(frame, J, q), p, h)  # dJ[m, k, j] = ∂_m J^k_j

    def bracket(A, dA, B, dB):
        # coordinate fields A^k(p), B^k(p) given with their derivatives dA[m, k]
        return np.einsum("m,mk->k", A, dB) - np.einsum("m,mk->k", B, dA)

    N = np.zeros((4, 4, 4))
    eye = np.eye(4)
    zero = np.zeros((4, 4))
    for i in range(4):
        for j in range(4):
            Ji, dJi = Jc[:, i], dJ[:, :, i]
            Jj, dJj = Jc[:, j], dJ[:, :, j]
            N[i, j] = (Jc @ bracket(eye[i], zero, Jj, dJj)
                       + Jc @ bracket(Ji, dJi, eye[j], zero)
                       - bracket(Ji, dJi, Jj, dJj))
    E = frame(p)
    return np.einsum("ijk,ia,jb,ck->abc", N, E, E, np.linalg.inv(E))


def nabla_J_norm_fd(metric, frame, J, p, h=1e-5):
    """Signed ‖∇J‖² = g^{ii'} g^{jj'} g_{kk'} (∇_i J)^k_j (∇_i' J)^k'_j' from coordinates."""
    p = np.asarray(p, dtype=float)
    g = metric(p)
    gi = np.linalg.inv(g)
    G = christoffel_fd(metric, p, h=1e-4)  # G[i, j, k] = Γ^k_ij
    Jc = coordinate_J(frame, J, p)
    dJ = _d(lambda q: coordinate_J(frame, J, q), p, h)
    nJ = dJ + np.einsum("imk,mj->ikj", G, Jc) - np.einsum("ijm,km->ikj", G, Jc)  # nJ[i, k, j]
    return float(np.einsum("ia,jb,kc,ikj,acb->", gi, gi, g, nJ, nJ))
