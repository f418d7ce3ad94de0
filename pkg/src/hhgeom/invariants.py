"""Structural tensors, signed norms and curvature invariants at a point.

Everything is computed from a :class:`~hhgeom.chart.FrameSnapshot` in an
orthonormal frame with signs ``ε_a``, so ``g = diag(ε)`` and every metric
contraction is a sum weighted by the ``ε``'s.  The almost complex structures
are frame-constant matrices (see :mod:`hhgeom.hstructure`).
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DegenerateSection, NoAdmissibleSection

ALPHAS = (1, 2, 3)
SECTION_TOL = 1e-12


# ---------------------------------------------------------------------------
# structural tensors
# ---------------------------------------------------------------------------

def nabla_J(snap, H, alpha):
    """``out[a, b, c]`` = c-th frame component of ``(∇_{e_a} J_α) e_b``."""
    J = H[alpha]
    G = snap.gamma  # G[a, b, c] = Γ^c_ab
    return np.einsum("db,adc->abc", J, G) - np.einsum("abd,cd->abc", G, J)


def f_tensor(snap, H, alpha, check=True):
    """``F_α(e_a, e_b, e_c) = g((∇_{e_a} J_α) e_b, e_c)``.

    With ``check`` the result is compared with ``(∇_{e_a} g_α)(e_b, e_c)``
    computed directly from the connection.
    """
    eps = snap.eps
    F = nabla_J(snap, H, alpha) * eps[None, None, :]
    if check:
        J = H[alpha]
        G = snap.gamma
        ga = J.T * eps[None, :]  # ga[b, c] = g(J e_b, e_c)
        alt = -np.einsum("abd,dc->abc", G, ga) - np.einsum("acd,bd->abc", G, ga)
        scale = max(1.0, float(np.max(np.abs(F))))
        if np.max(np.abs(F - alt)) > 1e-10 * scale:
            raise ArithmeticError(f"F_{alpha} disagrees with ∇g_{alpha}")
    return F


def nijenhuis(snap, H, alpha):
    """``out[a, b, k]`` = k-th component of ``N_α(e_a, e_b)``, from frame brackets."""
    J = H[alpha]
    c = snap.brackets  # c[a, b, k] = c^k_ab
    return (c
            + np.einsum("km,db,adm->abk", J, J, c)
            + np.einsum("km,da,dbm->abk", J, J, c)
            - np.einsum("da,fb,dfk->abk", J, J, c))


def lie_form(F, eps):
    """θ(e_c) = Σ_a ε_a F(e_a, e_a, e_c)."""
    return np.einsum("a,aac->c", np.asarray(eps, dtype=float), F)


@dataclass
class StructuralTensors:
    F: np.ndarray       # (3, 4, 4, 4)
    N: np.ndarray       # (3, 4, 4, 4)
    theta: np.ndarray   # (3, 4)
    nablaJ: np.ndarray  # (3, 4, 4, 4)
    eps: np.ndarray

    def __getitem__(self, alpha):
        i = alpha - 1
        return self.F[i], self.N[i], self.theta[i]


def structural_tensors(snap, H):
    F = np.stack([f_tensor(snap, H, a) for a in ALPHAS])
    N = np.stack([nijenhuis(snap, H, a) for a in ALPHAS])
    theta = np.stack([lie_form(F[i], snap.eps) for i in range(3)])
    nJ = np.stack([nabla_J(snap, H, a) for a in ALPHAS])
    return StructuralTensors(F, N, theta, nJ, snap.eps)


def signed_norms(tensors):
    """Signed squared norms per α: ``{"nablaJ", "F", "N", "theta"} -> array(3)``."""
    e = np.asarray(tensors.eps, dtype=float)
    w3 = np.einsum("a,b,c->abc", e, e, e)
    return {
        "nablaJ": np.einsum("abc,xabc->x", w3, tensors.nablaJ ** 2),
        "F": np.einsum("abc,xabc->x", w3, tensors.F ** 2),
        "N": np.einsum("abc,xabc->x", w3, tensors.N ** 2),
        "theta": np.einsum("a,xa->x", e, tensors.theta ** 2),
    }


# ---------------------------------------------------------------------------
# curvature
# ---------------------------------------------------------------------------

def pi1(eps):
    """π₁(x,y,z,w) = g(y,z)g(x,w) − g(x,z)g(y,w) in frame components."""
    g = np.diag(np.asarray(eps, dtype=float))
    return np.einsum("bc,ad->abcd", g, g) - np.einsum("ac,bd->abcd", g, g)


def ricci(R, eps):
    """ρ(e_a, e_b) = Σ_c ε_c R(e_c, e_a, e_b, e_c)."""
    return np.einsum("c,cabc->ab", np.asarray(eps, dtype=float), R)


def scalar_curvature(R, eps):
    e = np.asarray(eps, dtype=float)
    return float(np.einsum("a,b,abba->", e, e, R))


def tau_star_hermitian(R, eps, J):
    """½ Σ ε_a ε_b R(e_a, J e_a, e_b, J e_b)."""
    e = np.asarray(eps, dtype=float)
    return 0.5 * float(np.einsum("a,b,da,fb,adbf->", e, e, J, J, R))


def tau_star_norden(R, eps, J):
    """Σ ε_a ε_b R(e_a, e_b, J e_b, e_a)."""
    e = np.asarray(eps, dtype=float)
    return float(np.einsum("a,b,db,abda->", e, e, J, R))


def ricci_and_scalars(snap, H):
    """(ρ, τ, τ*) with τ*₁ from the Hermitian formula and τ*₂, τ*₃ from the Norden one."""
    R, eps = snap.riemann, snap.eps
    rho = ricci(R, eps)
    tau = scalar_curvature(R, eps)
    tau_star = np.array([
        tau_star_hermitian(R, eps, H[1]),
        tau_star_norden(R, eps, H[2]),
        tau_star_norden(R, eps, H[3]),
    ])
    return rho, tau, tau_star


def sectional(snap, a, b):
    """k(e_a, e_b) = R(e_a,e_b,e_b,e_a) / π₁(e_a,e_b,e_b,e_a) (0-based indices)."""
    den = pi1(snap.eps)[a, b, b, a]
    if abs(den) < SECTION_TOL:
        raise DegenerateSection(f"section (e{a + 1}, e{b + 1}) is degenerate")
    return float(snap.riemann[a, b, b, a] / den)


def sectional_matrix(snap):
    k = np.zeros((4, 4))
    for a in range(4):
        for b in range(4):
            if a != b:
                k[a, b] = sectional(snap, a, b)
    return k


def constant_curvature_check(snap, tol=1e-9):
    """k if R = k π₁ (componentwise within ``tol``), otherwise None."""
    P = pi1(snap.eps)
    R = snap.riemann
    k = float(np.sum(R * P) / np.sum(P * P))
    if np.max(np.abs(R - k * P)) <= tol:
        return k
    return None


@dataclass
class TotallyRealCurvatures:
    sections: list            # [(a, b, nu, nu_star2)] over ordered admissible frame pairs
    spread: float
    constant: bool
    nu: Optional[float]
    nu_star2: Optional[float]
    ricci_residual: Optional[float] = None


def totally_real_curvatures(snap, H, alpha=2, tol=1e-8):
    """ν and ν*_α over the frame 2-planes σ with σ ⊥ J_α σ.

    ``ν = R(x,y,y,x)/π₁(x,y,y,x)`` and ``ν* = R(x,y,y,J x)/π₁(x,y,y,x)``.  When the
    values agree across all admissible sections within ``tol`` they are reported
    as pointwise constants together with the residual of ρ = 2(ν g − ν* g_α).
    """
    J = H[alpha]
    eps = snap.eps
    g = np.diag(eps)
    ga = J.T @ g  # ga[b, c] = g(J e_b, e_c)
    R = snap.riemann
    P = pi1(eps)
    sections = []
    for a in range(4):
        for b in range(4):
            if a == b:
                continue
            if any(abs(ga[x, y]) > SECTION_TOL for x in (a, b) for y in (a, b)):
                continue
            den = P[a, b, b, a]
            if abs(den) < SECTION_TOL:
                continue
            nu = R[a, b, b, a] / den
            nus = np.dot(J[:, a], R[a, b, b, :]) / den
            sections.append((a, b, float(nu), float(nus)))
    if not sections:
        raise NoAdmissibleSection(f"no frame section is totally real for J{alpha}")
    vals = np.array([(s[2], s[3]) for s in sections])
    spread = float(np.max(vals.max(axis=0) - vals.min(axis=0)))
    out = TotallyRealCurvatures(sections, spread, spread <= tol, None, None)
    if out.constant:
        out.nu, out.nu_star2 = (float(v) for v in vals.mean(axis=0))
        rho = ricci(R, eps)
        out.ricci_residual = float(np.max(np.abs(rho - 2 * (out.nu * g - out.nu_star2 * ga))))
    return out


# ---------------------------------------------------------------------------
# report
# ---------------------------------------------------------------------------

@dataclass
class InvariantReport:
    point: Optional[np.ndarray]
    norm_nablaJ: np.ndarray
    norm_F: np.ndarray
    norm_N: np.ndarray
    norm_theta: np.ndarray
    tau: float
    tau_star: np.ndarray
    tau_star_hermitian: np.ndarray
    tau_star_norden: np.ndarray
    ricci: np.ndarray
    sectional: np.ndarray
    riemann: np.ndarray
    max_F: np.ndarray
    max_N: np.ndarray
    max_theta: np.ndarray
    max_R: float
    constant_k: Optional[float]
    nu: Optional[float]
    nu_star2: Optional[float]
    nu_spread: Optional[float]
    flat: bool
    einstein: bool
    tensors: StructuralTensors = field(repr=False, default=None)


def invariant_report(snap, H, tol_zero=1e-8, tol_const=1e-9):
    t = structural_tensors(snap, H)
    norms = signed_norms(t)
    R, eps = snap.riemann, snap.eps
    rho, tau, tau_star = ricci_and_scalars(snap, H)
    max_R = float(np.max(np.abs(R)))
    try:
        tr = totally_real_curvatures(snap, H, 2, tol=max(tol_zero, 1e-8))
    except NoAdmissibleSection:
        tr = None
    einstein = bool(np.max(np.abs(rho - tau / 4 * np.diag(eps))) <= tol_zero)
    return InvariantReport(
        point=None if snap.point is None else np.asarray(snap.point),
        norm_nablaJ=norms["nablaJ"],
        norm_F=norms["F"],
        norm_N=norms["N"],
        norm_theta=norms["theta"],
        tau=tau,
        tau_star=tau_star,
        tau_star_hermitian=np.array([tau_star_hermitian(R, eps, H[a]) for a in ALPHAS]),
        tau_star_norden=np.array([tau_star_norden(R, eps, H[a]) for a in ALPHAS]),
        ricci=rho,
        sectional=sectional_matrix(snap),
        riemann=R,
        max_F=np.abs(t.F).reshape(3, -1).max(axis=1),
        max_N=np.abs(t.N).reshape(3, -1).max(axis=1),
        max_theta=np.abs(t.theta).max(axis=1),
        max_R=max_R,
        constant_k=constant_curvature_check(snap, tol_const),
        nu=None if tr is None else tr.nu,
        nu_star2=None if tr is None else tr.nu_star2,
        nu_spread=None if tr is None else tr.spread,
        flat=max_R <= tol_zero,
        einstein=einstein,
        tensors=t,
    )
