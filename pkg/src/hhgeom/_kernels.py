"""Hot numeric kernels: second-order jet arithmetic and 4-dimensional tensor assembly.

Every kernel exists twice, a numba ``@njit`` loop version and a vectorised numpy
version with identical signatures.  The public names bind to the numba versions
unless numba is unavailable or ``HHGEOM_DISABLE_NUMBA`` is set to a truthy value
before import.  Both variants stay importable (``NUMBA_KERNELS``/``NUMPY_KERNELS``)
so tests and the benchmark can compare them directly.

All kernels take a flattened leading batch axis of length ``n``.  Derivative
axes always come last: ``grad[k, i] = d/du^i``, ``hess[k, i, j] = d2/du^i du^j``.
"""

import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

_FLAG = os.environ.get("HHGEOM_DISABLE_NUMBA", "").strip().lower()
NUMBA_DISABLED = _FLAG not in {"", "0", "false", "no"}

DIM = 4


# ---------------------------------------------------------------------------
# numpy path
# ---------------------------------------------------------------------------

def _sym_outer(a, b):
    o = a[:, :, None] * b[:, None, :]
    return o + o.transpose(0, 2, 1)


def jet_mul_np(av, ag, ah, bv, bg, bh):
    v = av * bv
    g = ag * bv[:, None] + av[:, None] * bg
    h = ah * bv[:, None, None] + av[:, None, None] * bh + _sym_outer(ag, bg)
    return v, g, h


def jet_div_np(av, ag, ah, bv, bg, bh):
    v = av / bv
    g = (ag - v[:, None] * bg) / bv[:, None]
    h = (ah - v[:, None, None] * bh - _sym_outer(g, bg)) / bv[:, None, None]
    return v, g, h


def jet_chain_np(ag, ah, f0, f1, f2):
    g = f1[:, None] * ag
    h = f1[:, None, None] * ah + f2[:, None, None] * (ag[:, :, None] * ag[:, None, :])
    return f0.copy(), g, h


def christoffel_np(gv, gd, gdd):
    """Gamma[k,i,j] = Γ^k_ij and dGamma[k,i,j,m] = ∂_m Γ^k_ij.

    ``gd[n,i,j,k] = ∂_k g_ij`` and ``gdd[n,i,j,k,m] = ∂_k ∂_m g_ij``.
    """
    ginv = np.linalg.inv(gv)
    # low[l,i,j] = ½(∂_i g_jl + ∂_j g_il − ∂_l g_ij)
    low = 0.5 * (
        np.einsum("njli->nlij", gd)
        + np.einsum("nilj->nlij", gd)
        - np.einsum("nijl->nlij", gd)
    )
    dlow = 0.5 * (
        np.einsum("njlim->nlijm", gdd)
        + np.einsum("niljm->nlijm", gdd)
        - np.einsum("nijlm->nlijm", gdd)
    )
    gam = np.einsum("nkl,nlij->nkij", ginv, low)
    corr = np.einsum("nlpm,npij->nlijm", gd, gam)
    dgam = np.einsum("nkl,nlijm->nkijm", ginv, dlow - corr)
    return gam, dgam


def riemann_np(gv, gam, dgam):
    """Fully covariant coordinate curvature R[i,j,k,l] = g(R(∂_i,∂_j)∂_k, ∂_l).

    R(x,y)z = ∇_x∇_y z − ∇_y∇_x z − ∇_[x,y] z.
    """
    up = (
        np.einsum("nljki->nijkl", dgam)
        - np.einsum("nlikj->nijkl", dgam)
        + np.einsum("nlim,nmjk->nijkl", gam, gam)
        - np.einsum("nljm,nmik->nijkl", gam, gam)
    )
    return np.einsum("nijkm,nml->nijkl", up, gv)


def frame_connection_np(E, dE, gam):
    """Frame connection Γ^c_ab (stored [a,b,c]) and bracket coefficients c^c_ab.

    ``E[n,i,a] = E^i_a`` (column a is e_a), ``dE[n,i,a,m] = ∂_m E^i_a``.
    """
    Einv = np.linalg.inv(E)
    deriv = np.einsum("nja,nibj->nabi", E, dE)        # (e_a E^i_b)
    cov = deriv + np.einsum("nja,nkb,nijk->nabi", E, E, gam)
    fgam = np.einsum("nci,nabi->nabc", Einv, cov)
    brk = np.einsum("nci,nabi->nabc", Einv, deriv - deriv.transpose(0, 2, 1, 3))
    return fgam, brk


def frame_tensor4_np(T, E):
    return np.einsum("nijkl,nia,njb,nkc,nld->nabcd", T, E, E, E, E, optimize=True)


def frame_tensor2_np(T, E):
    return np.einsum("nij,nia,njb->nab", T, E, E)


NUMPY_KERNELS = {
    "jet_mul": jet_mul_np,
    "jet_div": jet_div_np,
    "jet_chain": jet_chain_np,
    "christoffel": christoffel_np,
    "riemann": riemann_np,
    "frame_connection": frame_connection_np,
    "frame_tensor4": frame_tensor4_np,
    "frame_tensor2": frame_tensor2_np,
}


# ---------------------------------------------------------------------------
# numba path
# ---------------------------------------------------------------------------

if HAVE_NUMBA:

    @njit(cache=True)
    def jet_mul_nb(av, ag, ah, bv, bg, bh):
        n = av.shape[0]
        v = np.empty(n)
        g = np.empty((n, DIM))
        h = np.empty((n, DIM, DIM))
        for k in range(n):
            a0 = av[k]
            b0 = bv[k]
            v[k] = a0 * b0
            for i in range(DIM):
                g[k, i] = ag[k, i] * b0 + a0 * bg[k, i]
            for i in range(DIM):
                for j in range(DIM):
                    h[k, i, j] = (ah[k, i, j] * b0 + a0 * bh[k, i, j]
                                  + (ag[k, i] * bg[k, j] + ag[k, j] * bg[k, i]))
        return v, g, h

    @njit(cache=True)
    def jet_div_nb(av, ag, ah, bv, bg, bh):
        n = av.shape[0]
        v = np.empty(n)
        g = np.empty((n, DIM))
        h = np.empty((n, DIM, DIM))
        for k in range(n):
            b0 = bv[k]
            q = av[k] / b0
            v[k] = q
            for i in range(DIM):
                g[k, i] = (ag[k, i] - q * bg[k, i]) / b0
            for i in range(DIM):
                for j in range(DIM):
                    h[k, i, j] = (ah[k, i, j] - q * bh[k, i, j]
                                  - (g[k, i] * bg[k, j] + g[k, j] * bg[k, i])) / b0
        return v, g, h

    @njit(cache=True)
    def jet_chain_nb(ag, ah, f0, f1, f2):
        n = f0.shape[0]
        v = np.empty(n)
        g = np.empty((n, DIM))
        h = np.empty((n, DIM, DIM))
        for k in range(n):
            v[k] = f0[k]
            for i in range(DIM):
                g[k, i] = f1[k] * ag[k, i]
            for i in range(DIM):
                for j in range(DIM):
                    h[k, i, j] = f1[k] * ah[k, i, j] + f2[k] * (ag[k, i] * ag[k, j])
        return v, g, h

    @njit(cache=True)
    def christoffel_nb(gv, gd, gdd):
        n = gv.shape[0]
        gam = np.zeros((n, DIM, DIM, DIM))
        dgam = np.zeros((n, DIM, DIM, DIM, DIM))
        low = np.empty((DIM, DIM, DIM))
        dlow = np.empty((DIM, DIM, DIM, DIM))
        for s in range(n):
            ginv = np.linalg.inv(np.ascontiguousarray(gv[s]))
            for l in range(DIM):
                for i in range(DIM):
                    for j in range(DIM):
                        low[l, i, j] = 0.5 * (gd[s, j, l, i] + gd[s, i, l, j] - gd[s, i, j, l])
                        for m in range(DIM):
                            dlow[l, i, j, m] = 0.5 * (gdd[s, j, l, i, m] + gdd[s, i, l, j, m]
                                                      - gdd[s, i, j, l, m])
            for k in range(DIM):
                for i in range(DIM):
                    for j in range(DIM):
                        acc = 0.0
                        for l in range(DIM):
                            acc += ginv[k, l] * low[l, i, j]
                        gam[s, k, i, j] = acc
            for k in range(DIM):
                for i in range(DIM):
                    for j in range(DIM):
                        for m in range(DIM):
                            acc = 0.0
                            for l in range(DIM):
                                corr = 0.0
                                for p in range(DIM):
                                    corr += gd[s, l, p, m] * gam[s, p, i, j]
                                acc += ginv[k, l] * (dlow[l, i, j, m] - corr)
                            dgam[s, k, i, j, m] = acc
        return gam, dgam

    @njit(cache=True)
    def riemann_nb(gv, gam, dgam):
        n = gv.shape[0]
        out = np.empty((n, DIM, DIM, DIM, DIM))
        up = np.empty(DIM)
        for s in range(n):
            for i in range(DIM):
                for j in range(DIM):
                    for k in range(DIM):
                        for l in range(DIM):
                            acc = dgam[s, l, j, k, i] - dgam[s, l, i, k, j]
                            for m in range(DIM):
                                acc += gam[s, l, i, m] * gam[s, m, j, k] - gam[s, l, j, m] * gam[s, m, i, k]
                            up[l] = acc
                        for l in range(DIM):
                            acc = 0.0
                            for m in range(DIM):
                                acc += up[m] * gv[s, m, l]
                            out[s, i, j, k, l] = acc
        return out

    @njit(cache=True)
    def frame_connection_nb(E, dE, gam):
        n = E.shape[0]
        fgam = np.empty((n, DIM, DIM, DIM))
        brk = np.empty((n, DIM, DIM, DIM))
        deriv = np.empty((DIM, DIM, DIM))
        cov = np.empty((DIM, DIM, DIM))
        for s in range(n):
            Einv = np.linalg.inv(np.ascontiguousarray(E[s]))
            for a in range(DIM):
                for b in range(DIM):
                    for i in range(DIM):
                        d = 0.0
                        for j in range(DIM):
                            d += E[s, j, a] * dE[s, i, b, j]
                        c = d
                        for j in range(DIM):
                            for k in range(DIM):
                                c += E[s, j, a] * E[s, k, b] * gam[s, i, j, k]
                        deriv[a, b, i] = d
                        cov[a, b, i] = c
            for a in range(DIM):
                for b in range(DIM):
                    for c in range(DIM):
                        f = 0.0
                        t = 0.0
                        for i in range(DIM):
                            f += Einv[c, i] * cov[a, b, i]
                            t += Einv[c, i] * (deriv[a, b, i] - deriv[b, a, i])
                        fgam[s, a, b, c] = f
                        brk[s, a, b, c] = t
        return fgam, brk

    @njit(cache=True)
    def frame_tensor4_nb(T, E):
        # contract one slot at a time: 4 passes of 4^5 instead of 4^8
        n = T.shape[0]
        out = np.empty((n, DIM, DIM, DIM, DIM))
        t1 = np.empty((DIM, DIM, DIM, DIM))
        t2 = np.empty((DIM, DIM, DIM, DIM))
        for s in range(n):
            for a in range(DIM):
                for j in range(DIM):
                    for k in range(DIM):
                        for l in range(DIM):
                            acc = 0.0
                            for i in range(DIM):
                                acc += T[s, i, j, k, l] * E[s, i, a]
                            t1[a, j, k, l] = acc
            for a in range(DIM):
                for b in range(DIM):
                    for k in range(DIM):
                        for l in range(DIM):
                            acc = 0.0
                            for j in range(DIM):
                                acc += t1[a, j, k, l] * E[s, j, b]
                            t2[a, b, k, l] = acc
            for a in range(DIM):
                for b in range(DIM):
                    for c in range(DIM):
                        for l in range(DIM):
                            acc = 0.0
                            for k in range(DIM):
                                acc += t2[a, b, k, l] * E[s, k, c]
                            t1[a, b, c, l] = acc
            for a in range(DIM):
                for b in range(DIM):
                    for c in range(DIM):
                        for d in range(DIM):
                            acc = 0.0
                            for l in range(DIM):
                                acc += t1[a, b, c, l] * E[s, l, d]
                            out[s, a, b, c, d] = acc
        return out

    @njit(cache=True)
    def frame_tensor2_nb(T, E):
        n = T.shape[0]
        out = np.empty((n, DIM, DIM))
        for s in range(n):
            for a in range(DIM):
                for b in range(DIM):
                    acc = 0.0
                    for i in range(DIM):
                        for j in range(DIM):
                            acc += T[s, i, j] * E[s, i, a] * E[s, j, b]
                    out[s, a, b] = acc
        return out

    NUMBA_KERNELS = {
        "jet_mul": jet_mul_nb,
        "jet_div": jet_div_nb,
        "jet_chain": jet_chain_nb,
        "christoffel": christoffel_nb,
        "riemann": riemann_nb,
        "frame_connection": frame_connection_nb,
        "frame_tensor4": frame_tensor4_nb,
        "frame_tensor2": frame_tensor2_nb,
    }
else:  # pragma: no cover
    NUMBA_KERNELS = {}


if HAVE_NUMBA and not NUMBA_DISABLED:
    BACKEND = "numba"
    _active = NUMBA_KERNELS
else:
    BACKEND = "numpy"
    _active = NUMPY_KERNELS

jet_mul = _active["jet_mul"]
jet_div = _active["jet_div"]
jet_chain = _active["jet_chain"]
christoffel = _active["christoffel"]
riemann = _active["riemann"]
frame_connection = _active["frame_connection"]
frame_tensor4 = _active["frame_tensor4"]
frame_tensor2 = _active["frame_tensor2"]
