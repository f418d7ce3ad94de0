import numpy as np
import pytest

from hhgeom import catalog
from hhgeom.errors import IncompatibleStructure
from hhgeom.hstructure import HTriple, action_matrix, fundamental_forms, standard_h, verify_compatibility

NEUTRAL = np.array([1.0, 1.0, -1.0, -1.0])


def test_standard_h_action():
    H = standard_h()
    x, y, u, v = 1.0, 2.0, 3.0, 4.0
    vec = np.array([x, y, u, v])
    assert np.array_equal(H[1] @ vec, [-y, x, v, -u])
    assert np.array_equal(H[2] @ vec, [-u, -v, x, y])
    assert np.array_equal(H[3] @ vec, [v, -u, y, -x])
    assert np.array_equal(H[1] @ [1, 0, 0, 0], [0, 1, 0, 0])


def test_standard_h_quaternion_identities():
    H = standard_h()
    assert np.array_equal(H[3], H[1] @ H[2])
    assert np.array_equal(H[2] @ H[2], -np.eye(4))
    assert H.quaternion_residual() == 0.0


def test_action_matrix_images():
    J = action_matrix([2, -1, 4, -3])
    assert np.array_equal(J[:, 0], [0, 1, 0, 0])
    assert np.array_equal(J[:, 1], [-1, 0, 0, 0])
    with pytest.raises(ValueError):
        action_matrix([1, 2, 3])


def test_compatibility_with_neutral_metric():
    assert max(verify_compatibility(standard_h(), NEUTRAL).values()) == 0.0


def test_definite_metric_is_incompatible():
    with pytest.raises(IncompatibleStructure) as err:
        verify_compatibility(standard_h(), np.ones(4))
    assert err.value.alpha == 2
    assert err.value.magnitude == 2.0


@pytest.mark.parametrize("ex", catalog.list_examples())
def test_catalog_triples(ex):
    spec = catalog.build(ex)
    H = spec.H
    assert H.quaternion_residual() == 0.0
    assert np.array_equal(H[2], H[3] @ H[1])
    assert np.array_equal(H[1], H[2] @ H[3])
    assert max(verify_compatibility(H, spec.eps).values()) == 0.0
    forms = fundamental_forms(H, spec.eps)
    assert np.array_equal(forms.phi, -forms.phi.T)
    assert np.array_equal(forms.g2, forms.g2.T)
    assert np.array_equal(forms.g3, forms.g3.T)
    g = np.diag(spec.eps)
    assert np.array_equal(forms.g3, (H[1] @ H[2]).T @ g)


def test_kaehler_form_component():
    phi = fundamental_forms(standard_h(), NEUTRAL).phi
    assert phi[0, 1] == 1.0


def test_noncommuting_pair_is_rejected_by_residual():
    H = HTriple.from_images([2, -1, -4, 3], [3, -4, -1, 2])
    assert H.quaternion_residual() > 1.0
