"""Almost hypercomplex triples and their associated bilinear forms.

Each ``J_α`` is a constant 4x4 matrix acting on frame components by column
vectors: column ``a`` of ``J`` holds the components of ``J e_a``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import IncompatibleStructure

DIM = 4


def action_matrix(images):
    """Matrix of the endomorphism sending ``e_a`` to ``sign * e_|k|``.

    ``images`` lists one signed 1-based index per basis vector, e.g.
    ``[2, -1, 4, -3]`` for ``Je1 = e2, Je2 = -e1, Je3 = e4, Je4 = -e3``.
    """
    if len(images) != DIM:
        raise ValueError("need one image per basis vector")
    J = np.zeros((DIM, DIM))
    for a, k in enumerate(images):
        J[abs(k) - 1, a] = np.sign(k)
    return J


@dataclass(frozen=True)
class HTriple:
    J: np.ndarray  # shape (3, 4, 4)

    @classmethod
    def from_pair(cls, J1, J2):
        J1 = np.asarray(J1, dtype=float)
        J2 = np.asarray(J2, dtype=float)
        return cls(np.stack([J1, J2, J1 @ J2]))

    @classmethod
    def from_images(cls, images1, images2):
        return cls.from_pair(action_matrix(images1), action_matrix(images2))

    def __getitem__(self, alpha):
        """``J_α`` for α = 1, 2, 3."""
        return self.J[alpha - 1]

    def quaternion_residual(self):
        """Largest violation of J_α² = −I, J₁J₂ = −J₂J₁, J₃ = J₁J₂ and the cyclic relations."""
        J1, J2, J3 = self.J
        eye = np.eye(DIM)
        checks = [J1 @ J1 + eye, J2 @ J2 + eye, J3 @ J3 + eye,
                  J1 @ J2 + J2 @ J1, J3 - J1 @ J2, J2 - J3 @ J1, J1 - J2 @ J3]
        return float(max(np.max(np.abs(c)) for c in checks))


def standard_h():
    """The standard hypercomplex structure on (x, y, u, v)-ordered components."""
    # J1(x,y,u,v) = (-y, x, v, -u);  J2(x,y,u,v) = (-u, -v, x, y)
    return HTriple.from_images([2, -1, -4, 3], [3, 4, -1, -2])


def verify_compatibility(H, eps, tol=1e-12):
    """Check g = J₁ᵀgJ₁ = −J₂ᵀgJ₂ = −J₃ᵀgJ₃ for ``g = diag(eps)``.

    Returns the per-α maximal violation; raises :class:`IncompatibleStructure`
    on the first α exceeding ``tol``.
    """
    g = np.diag(np.asarray(eps, dtype=float))
    report = {}
    for alpha, sign in ((1, 1.0), (2, -1.0), (3, -1.0)):
        J = H[alpha]
        report[alpha] = float(np.max(np.abs(J.T @ g @ J - sign * g)))
    for alpha, v in report.items():
        if v > tol:
            raise IncompatibleStructure(alpha, v)
    return report


@dataclass(frozen=True)
class StructureForms:
    phi: np.ndarray
    g2: np.ndarray
    g3: np.ndarray

    def as_list(self):
        return [self.phi, self.g2, self.g3]


def fundamental_forms(H, eps):
    """Φ = g(J₁·,·), g₂ = g(J₂·,·), g₃ = g(J₃·,·) as frame matrices ``[b, c]``.

    Also asserts the symmetry types implied by the quaternionic decomposition
    ⟨·,·⟩ = −g + iΦ + jg₂ + kg₃: Φ skew, g₂ and g₃ symmetric.
    """
    g = np.diag(np.asarray(eps, dtype=float))
    # form[b, c] = g(J e_b, e_c) = Σ_d J[d, b] g[d, c]
    forms = [H[a].T @ g for a in (1, 2, 3)]
    phi, g2, g3 = forms
    if not (np.allclose(phi, -phi.T, atol=1e-12) and np.allclose(g2, g2.T, atol=1e-12)
            and np.allclose(g3, g3.T, atol=1e-12)):
        raise IncompatibleStructure(0, float("nan"), "associated forms have the wrong symmetry type")
    return StructureForms(phi, g2, g3)
