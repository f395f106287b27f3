import math
from fractions import Fraction

import numpy as np
import pytest

from spinquad.errors import EmptyCase, ImproperPredicate, NegativeRadicand, OutOfDomain
from spinquad.param import (
    ELLIPSOIDAL_CASES,
    TOROIDAL_CASES,
    ChartParams,
    ParamCase,
    case_by_number,
    case_metadata,
    classify_case,
    classify_reduced,
    eval_spinor,
    eval_t,
    sample_chart,
)
from spinquad.predicate import assemble_matrix, classify_predicate, make_reduced
from spinquad.spectrum import orthonormal_frame

from _generators import reduced_with_magnitudes, ellipsoidal_type_sweep, toroidal_type_sweep

Z = (0, 0, 0)
F = Fraction


def surface_residual(a, b, c, t):
    x, y, z, w = t
    eq = (a + b) * x * x + (a - b) * y * y + (b - a) * z * z - (a + b) * w * w - c
    return eq, x * x + y * y + z * z + w * w - 1


# -- classification --------------------------------------------------------------


def test_classify_examples():
    assert classify_case(4, 1, -5) is ParamCase.EMPTY
    assert classify_case(1, 4, 0) is ParamCase.Y_BARREL
    assert classify_case(2, 2, 0) is ParamCase.YZ_CROSSED
    assert classify_case(0, 4, 0) is ParamCase.XZ_YW_TORUS


def test_classify_improper():
    with pytest.raises(ImproperPredicate):
        classify_case(0, 0, 1)


@pytest.mark.parametrize("a,b", [(1, 2), (3, 3), (5, 2), (F(1, 3), F(7, 2))])
def test_ellipsoidal_type_sweep(a, b):
    for c, expected in ellipsoidal_type_sweep(F(a), F(b)):
        got = classify_case(F(a) ** 2, F(b) ** 2, c)
        assert (got.family, got.number) == ("ellipsoidal", expected), (a, b, c)


@pytest.mark.parametrize("m", [1, 2, F(5, 3)])
def test_toroidal_type_sweep(m):
    for pq in (True, False):
        a2, b2 = (F(m) ** 2, 0) if pq else (0, F(m) ** 2)
        for c, expected in toroidal_type_sweep(F(m), pq):
            got = classify_case(a2, b2, c)
            assert (got.family, got.number) == ("toroidal", expected)


def test_classify_irrational_magnitudes_near_boundaries():
    # a = sqrt(2), b = sqrt(3): a - b = -0.3178..., rational c straddling it
    a2, b2 = F(2), F(3)
    assert classify_case(a2, b2, F(-3178, 10000)) is ParamCase.Y_BARREL
    assert classify_case(a2, b2, F(-3179, 10000)) is ParamCase.SEPARATE_ELLIPSOIDS
    s = math.sqrt(2) + math.sqrt(3)  # 3.1462...
    assert classify_case(a2, b2, F(31462, 10000)) is ParamCase.YZ_CAPS
    assert classify_case(a2, b2, F(31463, 10000)) is ParamCase.EMPTY
    assert classify_case(a2, b2, F(-31463, 10000)) is ParamCase.EMPTY
    assert classify_case(a2, b2, F(-31462, 10000)) is ParamCase.SEPARATE_ELLIPSOIDS
    assert s > 3.1462


def test_case_lookup_and_counts():
    assert len(ELLIPSOIDAL_CASES) == 11 and len(TOROIDAL_CASES) == 7
    assert case_by_number("ellipsoidal", 9) is ParamCase.NOTCHED_Y_BARREL
    assert case_by_number("toroidal", 5) is ParamCase.XZ_YW_TORUS
    with pytest.raises(KeyError):
        case_by_number("toroidal", 8)


def test_metadata_examples():
    md = case_metadata(ParamCase.SEPARATE_ELLIPSOIDS)
    assert (md.component_count, md.dimension, md.domain_hole, md.is_manifold) == (2, 2, "empty", True)
    md = case_metadata(ParamCase.Y_BARREL)
    assert (md.component_count, md.dimension, md.domain_hole, md.is_manifold) == (
        1, 2, "deformed-ellipse", True)
    assert case_metadata(ParamCase.YZ_CROSSED).is_manifold is False


def test_metadata_invariants():
    for case in ParamCase:
        md = case.metadata
        assert (md.dimension == -1) == case.is_empty
        assert md.component_count in (0, 1, 2)
        if case.family == "toroidal" and not case.is_empty:
            assert md.component_count == 1


# -- chart evaluation ------------------------------------------------------------


def test_eval_pair_of_points():
    for ws in (1, -1):
        pt = eval_t(ParamCase.PAIR_OF_POINTS, 2, 1, -3, ChartParams(wsign=ws))
        np.testing.assert_array_equal(pt.t, (0, 0, 0, ws))


def test_eval_separate_ellipsoids_example():
    pt = eval_t(ParamCase.SEPARATE_ELLIPSOIDS, 2, 1, -2, ChartParams(alpha=0, second=0, wsign=1))
    np.testing.assert_allclose(pt.t, (0, 0, math.sqrt(0.5), math.sqrt(0.5)), atol=1e-15)
    x, y, z, w = pt.t
    assert (-2 + 1) * z * z + (-2 - 1) * w * w == pytest.approx(-2, abs=1e-15)


def test_eval_torus_and_circle_examples():
    pt = eval_t(ParamCase.XY_ZW_TORUS, 1, 0, 0, ChartParams(alpha=0, second=0))
    np.testing.assert_allclose(pt.t, (math.sqrt(0.5), 0, math.sqrt(0.5), 0), atol=1e-15)
    for al in (0.0, 1.0, 4.0):
        pt = eval_t(ParamCase.XY_CIRCLE, 3, 0, 3, ChartParams(alpha=al))
        np.testing.assert_allclose(pt.t, (math.cos(al), math.sin(al), 0, 0), atol=1e-15)


def test_eval_domain_errors():
    with pytest.raises(EmptyCase):
        eval_t(ParamCase.EMPTY, 1, 1, 5, ChartParams())
    with pytest.raises(OutOfDomain):
        eval_t(ParamCase.Y_BARREL, 1, 2, 0, ChartParams(alpha=0, second=1.5))
    with pytest.raises(OutOfDomain):
        eval_t(ParamCase.Y_BARREL, 1, 2, 0, ChartParams(alpha=2 * math.pi, second=0))
    with pytest.raises(OutOfDomain):
        eval_t(ParamCase.Y_BARREL, 1, 2, 0, ChartParams(alpha=0, second=None))
    with pytest.raises(OutOfDomain):
        eval_t(ParamCase.YZ_CAPS, 1, 2, 1, ChartParams(alpha=0, second=-0.5))
    with pytest.raises(OutOfDomain):
        eval_t(ParamCase.Y_BARREL, 1, 2, 0, ChartParams(alpha=0, second=0, wsign=0))


def test_literal_z_barrel_radius_is_negative():
    # the v radicand with a (b - a) denominator is negative wherever the z-barrel applies
    a, b, c = 3.0, 1.0, 0.5
    assert classify_case(F(9), F(1), F(1, 2)) is ParamCase.Z_BARREL
    assert (a - b + c) / (2 * (b - a)) < 0
    with pytest.raises(NegativeRadicand):
        from spinquad.param import _root

        _root((a - b + c) / (2 * (b - a)))
    # the corrected chart lies on the surface
    for h in np.linspace(-1, 1, 7):
        for al in np.linspace(0, 6, 7):
            for ws in (1, -1):
                t = eval_t(ParamCase.Z_BARREL, a, b, c, ChartParams(alpha=al, second=h, wsign=ws)).t
                eq, unit = surface_residual(a, b, c, t)
                assert abs(eq) <= 1e-12 and abs(unit) <= 1e-12


REPRESENTATIVES = {
    # (a, b, c) per non-empty type, exact rationals
    ParamCase.PAIR_OF_POINTS: (1, 2, -3),
    ParamCase.SEPARATE_ELLIPSOIDS: (1, 2, -2),
    ParamCase.Y_TOUCHING: (1, 2, -1),
    ParamCase.YZ_CROSSED: (2, 2, 0),
    ParamCase.Z_TOUCHING: (2, 1, -1),
    ParamCase.Y_BARREL: (1, 2, 0),
    ParamCase.Z_BARREL: (2, 1, 0),
    ParamCase.NOTCHED_Y_BARREL: (1, 2, 1),
    ParamCase.NOTCHED_Z_BARREL: (2, 1, 1),
    ParamCase.YZ_CAPS: (1, 2, 2),
    ParamCase.XY_ZW_TORUS: (2, 0, 1),
    ParamCase.XY_CIRCLE: (2, 0, 2),
    ParamCase.ZW_CIRCLE: (2, 0, -2),
    ParamCase.XZ_YW_TORUS: (0, 2, 1),
    ParamCase.XZ_CIRCLE: (0, 2, 2),
    ParamCase.YW_CIRCLE: (0, 2, -2),
}


@pytest.mark.parametrize("case", list(REPRESENTATIVES), ids=lambda c: c.slug)
def test_representatives_classify_and_lie_on_surface(case):
    a, b, c = REPRESENTATIVES[case]
    assert classify_case(F(a) ** 2, F(b) ** 2, F(c)) is case
    rng = np.random.default_rng(case.number + 20 * (case.family == "toroidal"))
    for _ in range(5):
        r = reduced_with_magnitudes(rng, F(a), F(b), F(c))
        assert classify_reduced(r) is case
        M = assemble_matrix(r).to_numpy()
        ss = sample_chart(r, resolution=8)
        assert len(ss) > 0
        for smp in ss.samples:
            eq, unit = surface_residual(a, b, c, smp.t)
            assert abs(eq) <= 1e-9 and abs(unit) <= 1e-12
            s = np.array(smp.spinor)
            assert abs(s @ M @ s) <= 1e-9 * (1 + np.linalg.norm(M, 2))
            assert abs(s @ s - 1) <= 1e-12


def test_caps_at_upper_boundary_degenerate_to_points():
    pts = {tuple(np.round(eval_t(ParamCase.YZ_CAPS, 1, 2, 3, ChartParams(alpha=al, second=h, sigma=sg)).t, 12))
           for al in (0.0, 1.0) for h in (0.0, 0.5, 1.0) for sg in (1, -1)}
    assert pts == {(1.0, 0.0, 0.0, 0.0), (-1.0, 0.0, 0.0, 0.0)}


def test_branch_consistency_on_domain_hole():
    # barrel: h = +-1 rows have w = 0 and both branches coincide there
    a, b, c = 1.0, 2.0, 0.0
    for al in np.linspace(0, 6, 13):
        for h in (-1.0, 1.0):
            tp = eval_t(ParamCase.Y_BARREL, a, b, c, ChartParams(alpha=al, second=h, wsign=1)).t
            tm = eval_t(ParamCase.Y_BARREL, a, b, c, ChartParams(alpha=al, second=h, wsign=-1)).t
            assert abs(tp[3]) <= 1e-9
            np.testing.assert_allclose(tp, tm, atol=1e-9)


def test_torus_radius_invariant():
    for a, c in ((1.0, 0.0), (2.0, 1.5), (3.0, -2.0)):
        for al in np.linspace(0, 6, 9):
            for be in np.linspace(0, 6, 9):
                t = eval_t(ParamCase.XY_ZW_TORUS, a, 0, c, ChartParams(alpha=al, second=be)).t
                assert abs(t[0] ** 2 + t[1] ** 2 - (a + c) / (2 * a)) <= 1e-12
                assert abs(t[2] ** 2 + t[3] ** 2 - (a - c) / (2 * a)) <= 1e-12


def test_eval_spinor_basis_vector_and_antipode():
    r = make_reduced((1, 0, 0), (0, 1, 0), (0, 1, 0), (0, 0, 1), 0)
    f = orthonormal_frame(r)
    np.testing.assert_allclose(eval_spinor(f, np.array([0, 0, 0, 1.0])), f.Q[:, 3])
    M = assemble_matrix(r).to_numpy()
    a = b = 1.0
    pt = eval_t(classify_reduced(r), a, b, 0.0, ChartParams(alpha=0.7, second=1.1))
    s, s_neg = np.array(eval_spinor(f, pt)), np.array(eval_spinor(f, -pt.t))
    np.testing.assert_allclose(s, -s_neg)
    assert abs(s @ M @ s) <= 1e-9 and abs(s_neg @ M @ s_neg) <= 1e-9


# -- sampling ----------------------------------------------------------------------


def test_sample_counts():
    rng = np.random.default_rng(30)
    pts = sample_chart(reduced_with_magnitudes(rng, F(1), F(2), F(-3)), resolution=8)
    assert len(pts) == 2
    torus = sample_chart(reduced_with_magnitudes(rng, F(2), F(0), F(1)), resolution=16)
    assert torus.case is ParamCase.XY_ZW_TORUS and len(torus) == 256
    ell = sample_chart(reduced_with_magnitudes(rng, F(1), F(2), F(-2)), resolution=8)
    assert ell.case is ParamCase.SEPARATE_ELLIPSOIDS
    assert [g.shape for g in ell.grids] == [(8, 8), (8, 8)] and len(ell) == 128
    caps = sample_chart(reduced_with_magnitudes(rng, F(1), F(2), F(2)), resolution=8)
    assert len(caps.grids) == 4 and len(caps) == 4 * 64
    circle = sample_chart(reduced_with_magnitudes(rng, F(0), F(2), F(2)), resolution=8)
    assert len(circle) == 8 and circle.grids[0].shape == (8, 1)


def test_sample_empty_and_improper():
    rng = np.random.default_rng(31)
    assert len(sample_chart(reduced_with_magnitudes(rng, F(1), F(2), F(10)))) == 0
    assert len(sample_chart(reduced_with_magnitudes(rng, F(0), F(2), F(-5)))) == 0
    imp = sample_chart(make_reduced(Z, Z, Z, Z, 1))
    assert len(imp) == 0 and imp.case is None
    with pytest.raises(ValueError):
        sample_chart(make_reduced(Z, Z, Z, Z, 1), resolution=1)


def test_sampling_deterministic():
    rng = np.random.default_rng(32)
    r = reduced_with_magnitudes(rng, F(3), F(1), F(1))
    a, b = sample_chart(r, resolution=6), sample_chart(r, resolution=6)
    np.testing.assert_array_equal(a.spinors(), b.spinors())
    assert [s.chart for s in a.samples] == [s.chart for s in b.samples]
