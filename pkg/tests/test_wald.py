import itertools

import numpy as np
import pytest

from oracles import cm_det_numpy, direct_v, law_of_cosines_angle, model_quadruples, sample_points
from ricciflow import shapes
from ricciflow.errors import (AmbiguousRoot, DomainExceeded, InvalidQuadruple, InvalidTriangle,
                              SphericalDomain, ZeroKappa)
from ricciflow.mesh import LengthAssignment, build_surface, lengths_from_embedding
from ricciflow.wald import (KappaSolverOptions, MetricQuadruple, cayley_menger, comparison_angle,
                            embedding_curvature, gauge_determinant, gauge_matrix,
                            region_curvature_at_least, star_distances, v_kappa,
                            vertex_wald_curvature)

R2 = np.sqrt(2.0)
TETRA_SPHERE = np.arccos(-1.0 / 3.0)
# mpmath: equilateral hyperbolic triangle of side 1
HYP_ANGLE = 0.918797872178027369036733054549
# mpmath: sides (1, 1.2) with opposite side 1.5 at kappa = 1, -1, 0
SPH_ANGLE = 1.73091880853156106992117390304
HYP_ANGLE2 = 1.31922343520027919041391426154
EUC_ANGLE = 1.49154673168254595428315352333


def square():
    return MetricQuadruple.from_distances(1, R2, 1, 1, R2, 1)


def regular(side):
    return MetricQuadruple.from_distances(*[side] * 6)


def octant():
    h = np.pi / 2
    return MetricQuadruple.from_distances(h, h, h, h, h, h)


def centred_triangle():
    # apex 0 at distance 1/sqrt(3) from an equilateral triangle of side 1
    c = 1 / np.sqrt(3)
    return MetricQuadruple.from_distances(c, c, c, 1, 1, 1)


# -- quadruples ------------------------------------------------------------

def test_quadruple_validation():
    with pytest.raises(InvalidQuadruple):
        MetricQuadruple.from_distances(1, 1, 5, 1, 1, 1)
    with pytest.raises(InvalidQuadruple):
        MetricQuadruple.from_distances(1, 0, 1, 1, 1, 1)
    with pytest.raises(InvalidQuadruple):
        MetricQuadruple(np.ones((3, 3)))


# -- Cayley-Menger ---------------------------------------------------------

def test_cayley_menger_examples():
    assert cayley_menger(square()) == pytest.approx(0, abs=1e-12)
    assert cayley_menger(regular(1.0)) == pytest.approx(4.0, rel=1e-13)
    line = MetricQuadruple(np.abs(np.subtract.outer(np.arange(4.0), np.arange(4.0))))
    assert cayley_menger(line) == pytest.approx(0, abs=1e-9)


def test_cayley_menger_volume():
    # unit right-corner tetrahedron has volume 1/6
    p = np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1.0]])
    d = np.linalg.norm(p[:, None] - p[None], axis=2)
    assert cayley_menger(MetricQuadruple(d)) == pytest.approx(288 / 36, rel=1e-13)


# -- gauge determinant -----------------------------------------------------

def test_gauge_zero_kappa():
    with pytest.raises(ZeroKappa):
        gauge_determinant(square(), 0.0)


def test_gauge_domain():
    with pytest.raises(DomainExceeded):
        gauge_determinant(regular(2.0), 4.0)


def test_gauge_continuity_at_zero():
    assert abs(gauge_determinant(regular(1.0), -1e-12)) < 1e-6


def test_gauge_spherical_tetrahedron():
    assert abs(gauge_determinant(regular(TETRA_SPHERE), 1.0)) < 1e-10


def test_gauge_hyperboloid():
    rng = np.random.default_rng(11)
    for _ in range(20):
        q = MetricQuadruple(sample_points(-1.0, rng))
        assert abs(gauge_determinant(q, -1.0)) < 1e-8


def test_gauge_matches_plain_determinant():
    rng = np.random.default_rng(5)
    for kappa in (-0.7, 0.4, 2.0):
        q = MetricQuadruple(sample_points(0.0, rng, radius=0.8))
        if kappa > 0 and np.sqrt(kappa) * q.scale > np.pi:
            continue
        plain = np.linalg.det(gauge_matrix(q, kappa))
        assert gauge_determinant(q, kappa) == pytest.approx(plain, rel=1e-6, abs=1e-14)


# -- embedding curvature ---------------------------------------------------

def test_embedding_flat():
    r = embedding_curvature(square())
    assert (r.kappa, r.branch) == (0.0, "flat")


def test_embedding_spherical_tetrahedron():
    r = embedding_curvature(regular(TETRA_SPHERE))
    assert r.branch == "spherical"
    assert r.kappa == pytest.approx(1.0, abs=1e-6)


def test_embedding_hyperboloid():
    rng = np.random.default_rng(2)
    for q in model_quadruples(-1.0, rng, 10):
        r = embedding_curvature(q)
        assert r.branch == "hyperbolic"
        assert r.kappa == pytest.approx(-1.0, abs=1e-5)


def test_embedding_residual_small():
    rng = np.random.default_rng(8)
    for kappa in (-1.0, 0.25):
        for q in model_quadruples(kappa, rng, 10):
            r = embedding_curvature(q)
            scale = np.abs(gauge_matrix(q, r.kappa)).max() ** 4
            assert abs(r.residual) <= 1e-9 * scale


def test_regular_euclidean_tetrahedron_is_spherical():
    # a positive-volume regular tetrahedron sits on a sphere through its four vertices
    r = embedding_curvature(regular(1.0))
    assert r.branch == "spherical" and r.kappa > 0


def test_require_unique_reports_all_roots():
    rng = np.random.default_rng(0)
    opts = KappaSolverOptions(require_unique=True)
    for _ in range(300):
        q = MetricQuadruple(sample_points(1.0, rng))
        roots = embedding_curvature(q).roots
        if len(roots) > 1:
            with pytest.raises(AmbiguousRoot):
                embedding_curvature(q, opts)
            break
    else:
        pytest.skip("no multi-root sample drawn")


# -- comparison angles -----------------------------------------------------

def test_comparison_angle_examples():
    assert comparison_angle(1, 1, 1, 0.0) == pytest.approx(np.pi / 3, abs=1e-15)
    h = np.pi / 2
    assert comparison_angle(h, h, h, 1.0) == pytest.approx(np.pi / 2, abs=1e-15)
    assert comparison_angle(1, 1, 1, -1.0) == pytest.approx(HYP_ANGLE, rel=1e-14)
    assert comparison_angle(1, 1.2, 1.5, 1.0) == pytest.approx(SPH_ANGLE, rel=1e-14)
    assert comparison_angle(1, 1.2, 1.5, -1.0) == pytest.approx(HYP_ANGLE2, rel=1e-14)
    assert comparison_angle(1, 1.2, 1.5, 0.0) == pytest.approx(EUC_ANGLE, rel=1e-14)


def test_comparison_angle_degenerate_straight():
    assert comparison_angle(1, 1, 2, 0.0) == pytest.approx(np.pi, abs=1e-7)
    assert comparison_angle(1, 1, 2, -4.0) == pytest.approx(np.pi, abs=1e-7)


def test_comparison_angle_errors():
    with pytest.raises(InvalidTriangle):
        comparison_angle(1, 1, 3, 0.0)
    with pytest.raises(SphericalDomain):
        comparison_angle(3, 3, 3, 1.0)


def test_comparison_angle_against_arccos():
    rng = np.random.default_rng(4)
    for _ in range(200):
        a, b = rng.uniform(0.1, 1.2, 2)
        opp = rng.uniform(abs(a - b) + 0.05, a + b - 0.05) if a + b - abs(a - b) > 0.1 else a
        for kappa in (-2.0, -0.3, 0.0, 0.5, 1.5):
            if kappa > 0 and np.sqrt(kappa) * (a + b + opp) > 2 * np.pi:
                continue
            ref = law_of_cosines_angle(a, b, opp, kappa)
            assert comparison_angle(a, b, opp, kappa) == pytest.approx(ref, abs=1e-7)


# -- V_kappa ---------------------------------------------------------------

def test_v_kappa_examples():
    assert v_kappa(centred_triangle(), 0, 0.0) == pytest.approx(2 * np.pi, abs=1e-14)
    assert v_kappa(octant(), 0, 1.0) == pytest.approx(1.5 * np.pi, abs=1e-14)
    assert v_kappa(octant(), 0, 0.0) == pytest.approx(np.pi, abs=1e-14)


def test_region_examples():
    ok, wit = region_curvature_at_least([centred_triangle()], 0.0)
    assert ok and wit is None
    ok, wit = region_curvature_at_least([centred_triangle()], 0.1)
    assert not ok
    n, apex, v = wit
    assert (n, apex) == (0, 0) and v > 2 * np.pi
    assert region_curvature_at_least([octant()] * 3, 1.0) == (True, None)


def test_region_needs_quadruples():
    with pytest.raises(ValueError):
        region_curvature_at_least([], 0.0)


# -- vertex stars ----------------------------------------------------------

def test_star_distances_flat_hexagon(flat_torus):
    s, l = flat_torus
    link, D = star_distances(s, l, 0)
    assert len(link) == 6
    assert np.allclose(D[0, 1:], 1.0)
    # neighbours two apart are sqrt(3) apart, opposite ones 2 apart
    for i in range(6):
        assert D[1 + i, 1 + (i + 2) % 6] == pytest.approx(np.sqrt(3), rel=1e-14)
        assert D[1 + i, 1 + (i + 3) % 6] == pytest.approx(2.0, rel=1e-14)


def test_star_distances_saddle(saddle):
    s, l = saddle
    link, D = star_distances(s, l, 0)
    assert len(link) == 7
    n = 7
    for i in range(n):
        assert D[1 + i, 1 + (i + 1) % n] == pytest.approx(1.0, rel=1e-14)
        assert D[1 + i, 1 + (i + 2) % n] == pytest.approx(np.sqrt(3), rel=1e-14)
        assert D[1 + i, 1 + (i + 3) % n] == pytest.approx(2.0, rel=1e-14)


def test_saddle_has_no_finite_lower_bound(saddle):
    # a triple with two straight comparison angles keeps V_kappa above 2 pi for every kappa
    s, l = saddle
    assert vertex_wald_curvature(s, l, 0) == -np.inf


def test_vertex_wald_examples(flat_torus, tetra, saddle):
    s, l = flat_torus
    assert vertex_wald_curvature(s, l, 0) == pytest.approx(0.0, abs=1e-6)
    s, l = tetra
    assert vertex_wald_curvature(s, l, 0) > 0
    s, l = saddle
    assert vertex_wald_curvature(s, l, 0) < 0


def test_vertex_wald_sign_matches_defect(icosa):
    s, l = icosa
    assert all(vertex_wald_curvature(s, l, v) > 0 for v in range(s.n_vertices))


def test_vertex_wald_scales(tetra):
    s, l = tetra
    k1 = vertex_wald_curvature(s, l, 0)
    k2 = vertex_wald_curvature(s, LengthAssignment(l.lengths * 3.0), 0)
    assert k2 == pytest.approx(k1 / 9, rel=1e-6)


def test_vertex_wald_is_supremum(tetra):
    s, l = tetra
    k = vertex_wald_curvature(s, l, 0)
    link, D = star_distances(s, l, 0)
    q = MetricQuadruple(D)
    assert direct_v(q.d, 0, k * (1 - 1e-6)) <= 2 * np.pi + 1e-9
    assert direct_v(q.d, 0, k * (1 + 1e-3)) > 2 * np.pi
