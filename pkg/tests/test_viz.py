from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spinquad.errors import AtPole, EmptyMesh
from spinquad.param import ParamCase, sample_chart
from spinquad.viz import (
    CSV_HEADER,
    ProjectionSpec,
    emit_mesh,
    inverse_stereographic,
    merge_meshes,
    read_obj_counts,
    samples_to_csv_rows,
    stereographic_project,
    to_obj,
    weld_domain_holes,
)

from _generators import rand_unit_spinors, reduced_with_magnitudes

F = Fraction
POLES = [f"{s}{a}" for s in "+-" for a in ("e12", "e23", "e31", "e0")]


def test_projection_examples():
    np.testing.assert_array_equal(stereographic_project((0, 0, 0, 1)), (0, 0, 0))
    np.testing.assert_array_equal(stereographic_project((1, 0, 0, 0)), (1, 0, 0))
    with pytest.raises(AtPole):
        stereographic_project((0, 0, 0, -1))
    with pytest.raises(ValueError):
        stereographic_project((0, 0, 0, 2))
    np.testing.assert_allclose(stereographic_project((1, 0, 0, 0), ProjectionSpec(scale=2.5)), (2.5, 0, 0))


def test_projection_spec_validation():
    assert ProjectionSpec("+e23").axis == 1 and ProjectionSpec("+e23").sign == 1
    with pytest.raises(ValueError):
        ProjectionSpec("e45")
    with pytest.raises(ValueError):
        ProjectionSpec("*e0")


@pytest.mark.parametrize("pole", POLES)
def test_round_trip_and_pole(pole):
    spec = ProjectionSpec(pole)
    rng = np.random.default_rng(50)
    for s in rand_unit_spinors(rng, 200):
        if np.linalg.norm(s - spec.pole_vector()) < 1e-3:
            continue
        np.testing.assert_allclose(inverse_stereographic(stereographic_project(s, spec), spec), s, atol=1e-9)
    with pytest.raises(AtPole):
        stereographic_project(spec.pole_vector(), spec)
    # the antipode maps to the origin
    np.testing.assert_allclose(stereographic_project(-spec.pole_vector(), spec), 0, atol=0)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_projection_preserves_incidence(seed):
    rng = np.random.default_rng(seed)
    s = rand_unit_spinors(rng, 1)[0]
    if s[3] < -0.5:  # stay away from the default pole
        s = -s
    t = s + rng.normal(size=4) * 1e-13
    t /= np.linalg.norm(t)
    assert np.linalg.norm(stereographic_project(s) - stereographic_project(t)) <= 1e-9


def sample(a, b, c, n, seed=51):
    return sample_chart(reduced_with_magnitudes(np.random.default_rng(seed), F(a), F(b), F(c)), resolution=n)


def test_emit_torus_counts():
    ss = sample(2, 0, 1, 16)
    mesh = emit_mesh(ss)
    assert mesh.n_vertices == 256 and len(mesh.faces) == 256
    assert all(len(f) == 4 for f in mesh.faces)
    counts = read_obj_counts(to_obj(mesh))
    assert counts["v"] == 256 and counts["f"] == 256 and counts["g"] == 1


def test_emit_ellipsoid_counts():
    ss = sample(1, 2, -2, 8)
    assert ss.case is ParamCase.SEPARATE_ELLIPSOIDS
    mesh = emit_mesh(ss)
    assert mesh.n_vertices == 2 * 8 * 8
    assert len(mesh.faces) == 2 * 8 * 7
    assert sorted(set(mesh.face_chart)) == ["pair-of-separate-ellipsoids.w+", "pair-of-separate-ellipsoids.w-"]


def test_emit_face_indices_valid_and_pole_dropped():
    ss = sample(1, 2, 1, 8)
    for pole in POLES:
        mesh = emit_mesh(ss, ProjectionSpec(pole))
        assert all(0 <= i < mesh.n_vertices for f in mesh.faces for i in f)
        assert np.isfinite(mesh.vertices).all()


def test_emit_drops_samples_at_pole():
    from spinquad.predicate import make_reduced

    # pair of points at s = (0,0,0,+-1); the default pole removes one of them
    ss = sample_chart(make_reduced((1, 0, 0), (1, 0, 0), (0, 1, 0), (0, 1, 0), -2), resolution=4)
    assert ss.case is ParamCase.PAIR_OF_POINTS
    assert emit_mesh(ss).n_vertices == 1
    assert emit_mesh(ss, ProjectionSpec("+e12")).n_vertices == 2


def test_emit_circle_and_points():
    mesh = emit_mesh(sample(0, 2, 2, 8))
    assert mesh.n_vertices == 8 and len(mesh.edges) == 8 and not mesh.faces
    assert read_obj_counts(to_obj(mesh))["l"] == 8
    pts = emit_mesh(sample(1, 2, -3, 8))
    assert pts.n_vertices == 2
    assert "\np " in to_obj(pts)


def test_emit_empty_raises():
    with pytest.raises(EmptyMesh):
        emit_mesh(sample(1, 2, 10, 8))


def test_weld_barrel_seams():
    ss = sample(1, 2, 0, 16)
    assert ss.case is ParamCase.Y_BARREL
    mesh = emit_mesh(ss)
    welded = weld_domain_holes(mesh, 1e-6)
    # rows h = -1 and h = +1 of both branches lie on the domain hole
    assert welded.merged_pairs == 2 * 16
    assert welded.n_vertices == mesh.n_vertices - 32
    assert all(0 <= i < welded.n_vertices for f in welded.faces for i in f)
    assert read_obj_counts(to_obj(welded))["v"] == welded.n_vertices


def test_weld_no_coincident_vertices_unchanged():
    mesh = emit_mesh(sample(1, 2, -2, 8))
    for eps in (1e-6, 1e-300):
        out = weld_domain_holes(mesh, eps)
        assert out.n_vertices == mesh.n_vertices and out.faces == mesh.faces
    with pytest.raises(ValueError):
        weld_domain_holes(mesh, 0.0)


def test_weld_keeps_different_predicates_apart():
    a = emit_mesh(sample(1, 2, 0, 8), prefix="p0:")
    b = emit_mesh(sample(1, 2, 0, 8), prefix="p1:")
    merged = merge_meshes([a, b])
    welded = weld_domain_holes(merged, 1e-6)
    assert welded.merged_pairs == 2 * weld_domain_holes(a, 1e-6).merged_pairs


def test_csv_rows():
    ss = sample(2, 0, 1, 4)
    rows = samples_to_csv_rows(ss, prefix="p3:")
    assert CSV_HEADER == "s12,s23,s31,s0,chart,alpha,beta_or_h"
    assert len(rows) == 16
    fields = rows[5].split(",")
    assert len(fields) == 7 and fields[4].startswith("p3:")
    s = np.array([float(v) for v in fields[:4]])
    np.testing.assert_array_equal(s, np.array(ss.samples[5].spinor))  # 17 digits round-trip
