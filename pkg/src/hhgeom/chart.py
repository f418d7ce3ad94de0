"""Chart backend: metric jets -> Christoffel symbols -> curvature -> orthonormal frame.

Conventions used throughout the package:

* ``R(x, y)z = ∇_x∇_y z − ∇_y∇_x z − ∇_[x,y] z`` and
  ``R(x, y, z, w) = g(R(x, y)z, w)``; arrays store ``riemann[a,b,c,d] = R(e_a,e_b,e_c,e_d)``.
* ``gamma[a,b,c] = Γ^c_ab`` with ``∇_{e_a} e_b = Γ^c_ab e_c``.
* ``brackets[a,b,c] = c^c_ab`` with ``[e_a, e_b] = c^c_ab e_c``.
* A frame matrix ``E[i, a] = E^i_a`` has the vector ``e_a`` in column ``a``.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import _kernels as K
from .errors import SingularFrame, SingularMetric
from .jet import DIM, Jet2, seed, stack

COND_LIMIT = 1e12


def _points(p):
    p = np.asarray(p, dtype=float)
    single = p.ndim == 1
    return np.atleast_2d(p), single


def _as_matrix_jet(x):
    return x if isinstance(x, Jet2) else stack(x)


@dataclass(frozen=True)
class ChartMetric:
    """Metric given by its coordinate components as a function of the four coordinate jets."""

    components: Callable[[Sequence[Jet2]], object]
    signature: tuple = (2, 2)

    def jet(self, points):
        """Metric jet of shape ``(B, 4, 4)`` at points of shape ``(B, 4)``."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        g = _as_matrix_jet(self.components(seed(points))).broadcast_to(points.shape[:1] + (DIM, DIM))
        return g


@dataclass(frozen=True)
class Embedding:
    """Parametrised submanifold of a flat pseudo-Euclidean space with diagonal metric.

    ``map`` takes the four coordinate jets and returns the ``N`` ambient coordinates.
    The induced metric carries exact first derivatives; its second derivatives
    come from central differences of the exact first derivatives (step ``fd_step``).
    """

    map: Callable[[Sequence[Jet2]], object]
    ambient: tuple
    fd_step: float = 1e-5

    def position(self, points):
        points = np.atleast_2d(np.asarray(points, dtype=float))
        z = _as_matrix_jet(self.map(seed(points)))
        return z.broadcast_to(points.shape[:1] + (len(self.ambient),))

    def first_order(self, points):
        """Induced metric value and first derivatives ``(g[B,i,j], dg[B,i,j,k])``."""
        z = self.position(points)
        eta = np.asarray(self.ambient, dtype=float)
        dz, d2z = z.grad, z.hess
        g = np.einsum("bKi,K,bKj->bij", dz, eta, dz)
        t = np.einsum("bKik,K,bKj->bijk", d2z, eta, dz)
        return g, t + t.transpose(0, 2, 1, 3)

    def jacobian(self, points):
        return self.position(points).grad

    def jet(self, points):
        points = np.atleast_2d(np.asarray(points, dtype=float))
        g, dg = self.first_order(points)
        h = self.fd_step
        shifts = np.concatenate([np.eye(DIM) * h, -np.eye(DIM) * h])
        shifted = (points[None, :, :] + shifts[:, None, :]).reshape(-1, DIM)
        _, dg_s = self.first_order(shifted)
        dg_s = dg_s.reshape(2, DIM, len(points), DIM, DIM, DIM)
        # ddg[b,i,j,k,m] = ∂_m ∂_k g_ij
        ddg = ((dg_s[0] - dg_s[1]) / (2 * h)).transpose(1, 2, 3, 4, 0)
        ddg = 0.5 * (ddg + ddg.transpose(0, 1, 2, 4, 3))
        return Jet2(g, dg, ddg)


def pullback_metric(emb, p):
    """Induced metric jet at a point (shape ``(4, 4)``) or batch (``(B, 4, 4)``)."""
    pts, single = _points(p)
    g = emb.jet(pts)
    return g[0] if single else g


@dataclass(frozen=True)
class FrameField:
    """Frame ``e_a = E^i_a ∂_i`` given as a function of the coordinate jets, plus its signs."""

    coeffs: Callable[[Sequence[Jet2]], object]
    eps: tuple

    def jet(self, points):
        points = np.atleast_2d(np.asarray(points, dtype=float))
        return _as_matrix_jet(self.coeffs(seed(points))).broadcast_to(points.shape[:1] + (DIM, DIM))


IDENTITY_FRAME = FrameField(lambda u: np.eye(DIM).tolist(), (1, 1, 1, 1))


@dataclass
class FrameSnapshot:
    """Geometry at one point in orthonormal-frame components (see module docstring)."""

    point: Optional[np.ndarray]
    eps: np.ndarray
    gamma: np.ndarray
    riemann: np.ndarray
    brackets: np.ndarray
    frame: Optional[np.ndarray] = None
    metric: Optional[np.ndarray] = None
    christoffel: Optional[np.ndarray] = None
    extra: dict = field(default_factory=dict)

    @property
    def g(self):
        return np.diag(self.eps)


def _check_metric(gv):
    cond = np.linalg.cond(gv)
    if not np.all(np.isfinite(cond)) or np.any(cond > COND_LIMIT):
        raise SingularMetric(f"metric is singular (condition number {np.max(cond):.3g})")


def _check_frame(E):
    cond = np.linalg.cond(E)
    if not np.all(np.isfinite(cond)) or np.any(cond > COND_LIMIT):
        raise SingularFrame(f"frame is singular (condition number {np.max(cond):.3g})")


def christoffel_from_jet(gj):
    """``(Γ[B,k,i,j], ∂Γ[B,k,i,j,m])`` from a batched metric jet."""
    gv = np.ascontiguousarray(gj.value)
    _check_metric(gv)
    return K.christoffel(gv, np.ascontiguousarray(gj.grad), np.ascontiguousarray(gj.hess))


def christoffel(g, p):
    """Coordinate Christoffel symbols ``Γ^k_ij`` (``[k,i,j]``) and ``∂_m Γ^k_ij`` (``[k,i,j,m]``)."""
    pts, single = _points(p)
    gam, dgam = christoffel_from_jet(g.jet(pts))
    return (gam[0], dgam[0]) if single else (gam, dgam)


def riemann_coord(g, p):
    """Covariant coordinate curvature ``R_ijkl = g(R(∂_i,∂_j)∂_k, ∂_l)``."""
    pts, single = _points(p)
    gj = g.jet(pts)
    gam, dgam = christoffel_from_jet(gj)
    r = K.riemann(np.ascontiguousarray(gj.value), gam, dgam)
    return r[0] if single else r


def to_frame(tensor, E, slots=None):
    """Frame components of a coordinate tensor at one point.

    ``slots`` has one character per index: ``"d"`` (covariant, contracted with
    ``E``) or ``"u"`` (contravariant, contracted with ``E^{-1}``).  Defaults to
    all covariant.
    """
    tensor = np.asarray(tensor, dtype=float)
    E = np.asarray(E, dtype=float)
    _check_frame(E)
    slots = slots or "d" * tensor.ndim
    if len(slots) != tensor.ndim:
        raise ValueError("one slot character per tensor index")
    Einv = np.linalg.inv(E)
    out = tensor
    for axis, kind in enumerate(slots):
        if kind == "d":
            out = np.tensordot(out, E, axes=([axis], [0]))
        elif kind == "u":
            out = np.tensordot(out, Einv, axes=([axis], [1]))
        else:
            raise ValueError(f"unknown slot kind {kind!r}")
        out = np.moveaxis(out, -1, axis)
    return out


def frame_brackets(F, p):
    """All bracket coefficients ``c^c_ab`` (``[a,b,c]``) of the frame at ``p``."""
    pts, single = _points(p)
    Ej = F.jet(pts)
    E = np.ascontiguousarray(Ej.value)
    _check_frame(E)
    zero = np.zeros((len(pts), DIM, DIM, DIM))
    _, brk = K.frame_connection(E, np.ascontiguousarray(Ej.grad), zero)
    return brk[0] if single else brk


def frame_bracket(F, a, b, p):
    """Coefficients of ``[e_a, e_b]`` in the frame (0-based indices)."""
    return frame_brackets(F, np.asarray(p, dtype=float))[a, b]


def snapshots(g, F, points):
    """Batched :func:`snapshot` over an array of points; returns a list."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    gj = g.jet(pts)
    gv = np.ascontiguousarray(gj.value)
    gam, dgam = christoffel_from_jet(gj)
    rc = K.riemann(gv, gam, dgam)
    Ej = F.jet(pts)
    E = np.ascontiguousarray(Ej.value)
    _check_frame(E)
    fgam, brk = K.frame_connection(E, np.ascontiguousarray(Ej.grad), gam)
    rf = K.frame_tensor4(rc, E)
    gf = K.frame_tensor2(gv, E)
    eps = np.asarray(F.eps, dtype=float)
    out = []
    for s in range(len(pts)):
        out.append(FrameSnapshot(
            point=pts[s].copy(),
            eps=eps,
            gamma=fgam[s],
            riemann=rf[s],
            brackets=brk[s],
            frame=E[s],
            metric=gv[s],
            christoffel=gam[s],
            extra={"frame_metric": gf[s]},
        ))
    return out


def snapshot(g, F, p):
    return snapshots(g, F, np.asarray(p, dtype=float)[None, :])[0]


# ---------------------------------------------------------------------------
# structural checks (used by the catalog validator and the test-suite)
# ---------------------------------------------------------------------------

def orthonormality_residual(snap):
    """max |g(e_a, e_b) − ε_a δ_ab|."""
    gf = snap.extra.get("frame_metric")
    if gf is None:
        return 0.0
    return float(np.max(np.abs(gf - np.diag(snap.eps))))


def curvature_symmetry_residual(R):
    """Largest violation of the pair symmetries and the first Bianchi identity."""
    res = [
        R + R.transpose(1, 0, 2, 3),
        R + R.transpose(0, 1, 3, 2),
        R - R.transpose(2, 3, 0, 1),
        R + R.transpose(1, 2, 0, 3) + R.transpose(2, 0, 1, 3),
    ]
    return float(max(np.max(np.abs(r)) for r in res))


def metricity_residual(snap):
    """Γ_abc + Γ_acb with Γ_abc = ε_c Γ^c_ab; zero for a metric connection in an orthonormal frame."""
    low = snap.gamma * snap.eps[None, None, :]
    return float(np.max(np.abs(low + low.transpose(0, 2, 1))))


def torsion_residual(snap):
    """Γ^c_ab − Γ^c_ba − c^c_ab."""
    return float(np.max(np.abs(snap.gamma - snap.gamma.transpose(1, 0, 2) - snap.brackets)))
