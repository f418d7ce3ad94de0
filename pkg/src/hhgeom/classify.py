"""Class membership for each J_α and the theorem cross-checks.

J₁ is Hermitian-compatible with g, so it is tested against the almost Hermitian
classes (Kähler, almost Kähler, Hermitian ``W4``).  J₂, J₃ are Norden-compatible
and are tested against ``W1, W2, W3``.  The main class ``W(J_α)`` is ``W4`` for
α = 1 and ``W1`` for α = 2, 3.
"""

from dataclasses import dataclass, field, fields

import numpy as np

from .errors import TheoremViolation

TOL_ZERO = 1e-8
TOL_MATCH = 1e-6


def _cyclic(T):
    return T + T.transpose(1, 2, 0) + T.transpose(2, 0, 1)


def _scale(F):
    return max(1.0, float(np.max(np.abs(F))))


def is_kaehler(tensors, alpha, tol=TOL_ZERO):
    return float(np.max(np.abs(tensors.F[alpha - 1]))) <= tol


def is_integrable(tensors, alpha, tol=TOL_ZERO):
    return float(np.max(np.abs(tensors.N[alpha - 1]))) <= tol


def is_hypercomplex(tensors, tol=TOL_ZERO):
    flags = [is_integrable(tensors, a, tol) for a in (1, 2, 3)]
    if sum(flags) == 2:
        # two vanishing Nijenhuis tensors force the third to vanish
        raise TheoremViolation("<point>", "hypercomplex two-of-three",
                               f"integrability flags {flags}")
    return all(flags)


def w4_rhs(theta, eps, J):
    """½[g(x,y)θ(z) − g(x,z)θ(y) − g(x,Jy)θ(Jz) + g(x,Jz)θ(Jy)]."""
    g = np.diag(eps)
    gJ = g @ J            # gJ[a, b] = g(e_a, J e_b)
    tJ = J.T @ theta      # tJ[c] = θ(J e_c)
    return 0.5 * (np.einsum("ab,c->abc", g, theta) - np.einsum("ac,b->abc", g, theta)
                  - np.einsum("ab,c->abc", gJ, tJ) + np.einsum("ac,b->abc", gJ, tJ))


def w1_rhs(theta, eps, J):
    """¼[g(x,y)θ(z) + g(x,z)θ(y) + g(x,Jy)θ(Jz) + g(x,Jz)θ(Jy)]."""
    g = np.diag(eps)
    gJ = g @ J
    tJ = J.T @ theta
    return 0.25 * (np.einsum("ab,c->abc", g, theta) + np.einsum("ac,b->abc", g, theta)
                   + np.einsum("ab,c->abc", gJ, tJ) + np.einsum("ac,b->abc", gJ, tJ))


def is_hermitian_W4(tensors, H, tol=TOL_MATCH):
    F, _, theta = tensors[1]
    res = np.max(np.abs(F - w4_rhs(theta, tensors.eps, H[1])))
    return float(res) <= tol * _scale(F)


def is_almost_kaehler(tensors, tol=TOL_MATCH):
    F = tensors.F[0]
    return float(np.max(np.abs(_cyclic(F)))) <= tol * _scale(F)


def is_norden_W1(tensors, H, alpha, tol=TOL_MATCH):
    if alpha not in (2, 3):
        raise ValueError("Norden classes apply to J2 and J3 only")
    F, _, theta = tensors[alpha]
    res = np.max(np.abs(F - w1_rhs(theta, tensors.eps, H[alpha])))
    return float(res) <= tol * _scale(F)


def norden_W2_W3(tensors, H, alpha, tol=TOL_MATCH):
    """(W2, W3): cyclic sums of F(x, y, Jz) and of F(x, y, z) vanish."""
    if alpha not in (2, 3):
        raise ValueError("Norden classes apply to J2 and J3 only")
    F = tensors.F[alpha - 1]
    FJ = np.einsum("abd,dc->abc", F, H[alpha])
    s = tol * _scale(F)
    return (float(np.max(np.abs(_cyclic(FJ)))) <= s,
            float(np.max(np.abs(_cyclic(F)))) <= s)


def is_isotropic_kaehler(report, alpha, tol=TOL_ZERO):
    return abs(float(report.norm_nablaJ[alpha - 1])) <= tol


@dataclass
class ClassVerdict:
    kaehler: list
    integrable: list
    isotropic_kaehler: list
    main_W: list
    almost_kaehler: bool
    norden_W2: list = field(default_factory=lambda: [None, None, None])
    norden_W3: list = field(default_factory=lambda: [None, None, None])
    lie_form_nonzero: list = field(default_factory=lambda: [None, None, None])

    @property
    def in_W(self):
        return all(self.main_W)

    @property
    def pseudo_hyper_kaehler(self):
        return all(self.kaehler)

    @property
    def hypercomplex(self):
        return all(self.integrable)

    def combine(self, other):
        """Pointwise AND (aggregation over sample points)."""
        def both(x, y):
            if isinstance(x, list):
                return [both(a, b) for a, b in zip(x, y)]
            if x is None or y is None:
                return None
            return bool(x and y)
        return ClassVerdict(**{f.name: both(getattr(self, f.name), getattr(other, f.name))
                               for f in fields(self)})

    def as_flat(self):
        out = {}
        for name in ("kaehler", "integrable", "isotropic_kaehler", "main_W",
                     "norden_W2", "norden_W3", "lie_form_nonzero"):
            for i, v in enumerate(getattr(self, name)):
                if v is not None:
                    out[f"{name}.{i + 1}"] = bool(v)
        out["almost_kaehler.1"] = bool(self.almost_kaehler)
        out["in_W"] = self.in_W
        out["pseudo_hyper_kaehler"] = self.pseudo_hyper_kaehler
        out["hypercomplex"] = self.hypercomplex
        return out


def classify(report, H, tol_zero=TOL_ZERO, tol_match=TOL_MATCH):
    t = report.tensors
    w2 = [None, None, None]
    w3 = [None, None, None]
    for a in (2, 3):
        w2[a - 1], w3[a - 1] = norden_W2_W3(t, H, a, tol_match)
    return ClassVerdict(
        kaehler=[is_kaehler(t, a, tol_zero) for a in (1, 2, 3)],
        integrable=[is_integrable(t, a, tol_zero) for a in (1, 2, 3)],
        isotropic_kaehler=[is_isotropic_kaehler(report, a, tol_zero) for a in (1, 2, 3)],
        main_W=[is_hermitian_W4(t, H, tol_match),
                is_norden_W1(t, H, 2, tol_match),
                is_norden_W1(t, H, 3, tol_match)],
        almost_kaehler=is_almost_kaehler(t, tol_match),
        norden_W2=w2,
        norden_W3=w3,
        lie_form_nonzero=[bool(report.max_theta[a] > tol_zero) for a in range(3)],
    )


THEOREMS = {
    "main_class_pair": "W(J_a) and W(J_b) together force W(J_c)",
    "kaehler_and_main": "K(J_a) with W(J_b), a != b, forces pseudo-hyper-Kähler",
    "isotropic_spread": "in W, one isotropic Kähler J_a makes all three isotropic Kähler",
    "phk_flat": "pseudo-hyper-Kähler forces R = 0",
}


def theorem_crosschecks(results, tol_flat=1e-8, raise_on_violation=True):
    """Check the four structure theorems on ``{example_id: [(report, verdict), ...]}``.

    Theorem keys are those of :data:`THEOREMS`.  Returns
    ``{example_id: {theorem: "pass" | "vacuous"}}``; a failing conclusion raises
    :class:`TheoremViolation` (or is recorded as ``"FAIL"``).
    """
    summary = {}
    for ex, items in sorted(results.items()):
        status = {}
        for report, v in items:
            checks = {}
            w = v.main_W
            if sum(w) >= 2:
                checks["main_class_pair"] = all(w)
            if any(v.kaehler[a] and w[b] for a in range(3) for b in range(3) if a != b):
                checks["kaehler_and_main"] = v.pseudo_hyper_kaehler
            if v.in_W and any(v.isotropic_kaehler):
                checks["isotropic_spread"] = all(v.isotropic_kaehler)
            if v.pseudo_hyper_kaehler:
                checks["phk_flat"] = report.max_R <= tol_flat
            for thm in THEOREMS:
                if thm not in checks:
                    status.setdefault(thm, "vacuous")
                    continue
                if not checks[thm]:
                    if raise_on_violation:
                        raise TheoremViolation(ex, thm)
                    status[thm] = "FAIL"
                elif status.get(thm) != "FAIL":
                    status[thm] = "pass"
        summary[ex] = status
    return summary
