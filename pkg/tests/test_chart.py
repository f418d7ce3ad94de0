import numpy as np
import pytest

from hhgeom import catalog, jet
from hhgeom.chart import (
    IDENTITY_FRAME, ChartMetric, Embedding, FrameField, christoffel, curvature_symmetry_residual,
    frame_bracket, frame_brackets, metricity_residual, orthonormality_residual,
    pullback_metric, riemann_coord, snapshot, to_frame, torsion_residual,
)
from hhgeom.errors import SingularFrame, SingularMetric
from oracles import christoffel_fd, frame_riemann_fd

CHARTS = [ex for ex in catalog.list_examples() if catalog.get_data(ex)["kind"] == "chart"]
GEOMETRIC = [ex for ex in catalog.list_examples() if catalog.get_data(ex)["kind"] != "lie_algebra"]


def semi_space_metric(u):
    c = 1 / u[0] ** 2
    return [[c, 0, 0, 0], [0, c, 0, 0], [0, 0, -c, 0], [0, 0, 0, -c]]


def random_points(spec, n, seed):
    from hhgeom.runner import random_points as rp
    return rp(spec, n, seed)


def test_constant_metric_has_no_christoffels():
    g = ChartMetric(lambda u: np.diag([1.0, 1.0, -1.0, -1.0]).tolist())
    G, dG = christoffel(g, [0.3, 0.1, 0.2, 0.5])
    assert not G.any() and not dG.any()


def test_semi_space_christoffels():
    g = ChartMetric(semi_space_metric)
    G, _ = christoffel(g, [1.0, 0.0, 0.0, 0.0])  # G[k, i, j] = Γ^k_ij
    assert G[0, 0, 0] == pytest.approx(-1.0, abs=1e-14)
    assert G[0, 1, 1] == pytest.approx(1.0, abs=1e-14)
    assert G[0, 2, 2] == pytest.approx(-1.0, abs=1e-14)
    assert G[1, 0, 1] == pytest.approx(-1.0, abs=1e-14)
    p = np.array([0.7, 0.2, -0.4, 1.1])
    ref = christoffel_fd(lambda q: np.array(semi_space_metric(q)), p)
    assert np.allclose(christoffel(g, p)[0], ref.transpose(2, 0, 1), atol=1e-7)


@pytest.mark.parametrize("ex", CHARTS)
def test_christoffel_symmetric_in_lower_indices(ex):
    spec = catalog.build(ex)
    for p in random_points(spec, 10, 1):
        G, _ = christoffel(spec.metric, p)
        assert np.abs(G - G.transpose(0, 2, 1)).max() <= 1e-14


def test_singular_metric_raises():
    g = ChartMetric(lambda u: [[1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    with pytest.raises(SingularMetric):
        christoffel(g, [0.0, 0.0, 0.0, 0.0])


def test_singular_frame_raises():
    g = ChartMetric(lambda u: np.eye(4).tolist())
    F = FrameField(lambda u: [[1, 1, 0, 0], [0, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]], (1, 1, 1, 1))
    with pytest.raises(SingularFrame):
        snapshot(g, F, [0.0, 0.0, 0.0, 0.0])


def test_cylinder_pullback_is_constant():
    spec = catalog.build("cx_cylinder")
    for p in random_points(spec, 5, 2):
        g = pullback_metric(spec.metric, p)
        assert np.abs(g.value - np.diag([1, 1, -1, -1])).max() <= 1e-12
        assert np.abs(g.grad).max() <= 1e-12


def test_cone_pullback_components():
    g = pullback_metric(catalog.build("cx_cone").metric, [1.0, 0.3, 0.0, -0.2]).value
    want = np.diag([2.0, 1.0, -2.0, -1.0])
    assert np.abs(g - want).max() <= 1e-12


def test_sphere_pullback_matches_stated_components():
    spec = catalog.build("cx_sphere")
    for u1, u2, u3, u4 in random_points(spec, 10, 3):
        g = pullback_metric(spec.metric, [u1, u2, u3, u4]).value
        g22 = np.cos(u1) ** 2 * np.cosh(u3) ** 2 - np.sin(u1) ** 2 * np.sinh(u3) ** 2
        g24 = 2 * np.sin(u1) * np.cos(u1) * np.sinh(u3) * np.cosh(u3)
        assert g[1, 1] == pytest.approx(g22, abs=1e-9)
        assert g[3, 3] == pytest.approx(-g22, abs=1e-9)
        assert g[1, 3] == pytest.approx(g24, abs=1e-9)
        assert g[0, 0] == pytest.approx(1.0, abs=1e-9)


def test_flat_linear_embedding():
    emb = Embedding(lambda u: [u[0], u[1], u[2], u[3], 0.0 * u[0]], (1, 1, 1, -1, -1))
    g = pullback_metric(emb, [0.2, -0.3, 1.0, 2.0])
    assert np.array_equal(g.value, np.diag([1.0, 1, 1, -1]))
    assert not g.grad.any() and not g.hess.any()


def test_identity_frame_leaves_components():
    spec = catalog.build("engel_a")
    p = [0.3, 0.2, 0.5, 0.1]
    R = riemann_coord(spec.metric, p)
    snap = snapshot(spec.metric, IDENTITY_FRAME, p)
    assert np.allclose(snap.riemann, R, atol=1e-14)
    assert not frame_brackets(IDENTITY_FRAME, p).any()


def test_to_frame_mixed_slots():
    rng = np.random.default_rng(4)
    E = rng.normal(size=(4, 4)) + 3 * np.eye(4)
    T = rng.normal(size=(4, 4))
    lowered = to_frame(T, E, "dd")
    assert np.allclose(lowered, E.T @ T @ E)
    raised = to_frame(T, E, "ud")
    assert np.allclose(raised, np.linalg.inv(E) @ T @ E)


def test_engel_bracket():
    F = catalog.build("engel_a").frame
    p = [0.3, 0.2, 0.5, 0.1]
    assert np.allclose(frame_bracket(F, 0, 1, p), [0, 0, -1, 0], atol=1e-15)
    c = frame_brackets(F, p)
    assert np.array_equal(c, -c.transpose(1, 0, 2))


def test_engel_frame_curvature_against_oracle():
    spec = catalog.build("engel_a")
    p = np.array([0.3, 0.2, 0.5, 0.1])
    snap = spec.snapshots(p)[0]
    metric = lambda q: np.array([[1, 0, 0, 0], [0, 1 - q[0] ** 2 - q[2] ** 2, q[0], q[2]],
                                 [0, q[0], -1, 0], [0, q[2], 0, -1]])
    frame = lambda q: np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, q[0], -1, 0], [0, q[2], 0, -1]])
    assert np.abs(snap.riemann - frame_riemann_fd(metric, frame, p)).max() <= 1e-6
    R = snap.riemann
    assert R[0, 1, 1, 0] == pytest.approx(0.75, abs=1e-12)
    assert R[1, 2, 2, 1] == pytest.approx(1.0, abs=1e-12)
    assert R[0, 2, 2, 0] == pytest.approx(0.25, abs=1e-12)


def test_semi_space_is_minus_pi1():
    from hhgeom.invariants import pi1
    snap = catalog.build("semi_space").snapshots([[1.0, 0.0, 0.0, 0.0]])[0]
    assert np.abs(snap.riemann + pi1(snap.eps)).max() <= 1e-12


def test_pseudo_cylinder_curvature_against_oracle():
    # the printed tanh/coth curvature pins are wrong: the (u2,u3,u4) block is a unit pseudo-sphere
    snap = catalog.build("cylinder_pseudo").snapshots([[0.0, 0.0, 0.0, 1.0]])[0]
    metric = lambda q: np.diag([1, np.cosh(q[3]) ** 2, -np.sinh(q[3]) ** 2, -1])
    frame = lambda q: np.diag([1, 1 / np.cosh(q[3]), 1 / np.sinh(q[3]), 1])
    ref = frame_riemann_fd(metric, frame, np.array([0.0, 0.0, 0.0, 1.0]))
    assert np.abs(snap.riemann - ref).max() <= 1e-5
    assert snap.riemann[1, 2, 2, 1] == pytest.approx(-1.0, abs=1e-8)
    assert snap.riemann[1, 3, 3, 1] == pytest.approx(-1.0, abs=1e-8)
    assert snap.riemann[2, 3, 3, 2] == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("ex", GEOMETRIC)
def test_structural_residuals_at_random_points(ex):
    spec = catalog.build(ex)
    tol = 1e-10 if spec.kind == "chart" else 1e-8
    for snap in spec.snapshots(random_points(spec, 6, 5)):
        assert curvature_symmetry_residual(snap.riemann) <= 1e-9 * max(1.0, np.abs(snap.riemann).max())
        assert metricity_residual(snap) <= tol
        assert torsion_residual(snap) <= tol
        assert orthonormality_residual(snap) <= tol


def test_ad_metric_jet_against_central_differences():
    from hhgeom.runner import fd_check
    for ex in CHARTS:
        spec = catalog.build(ex)
        res = fd_check(spec, random_points(spec, 5, 6))
        assert res["fd.max"] <= 1e-5, (ex, res)


def test_batched_snapshots_equal_single_ones():
    spec = catalog.build("cx_sphere")
    pts = spec.default_points
    batch = spec.snapshots(pts)
    for p, b in zip(pts, batch):
        s = snapshot(spec.metric, spec.frame, p)
        assert np.allclose(s.riemann, b.riemann, atol=1e-12)
        assert np.allclose(s.gamma, b.gamma, atol=1e-12)
