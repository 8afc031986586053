import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
import shapely
from shapely.geometry import LineString, Point

from qdgraph.geometry import (densify, hausdorff_distance, min_distance,
                              point_polyline_distance, polyline_distance,
                              segment_distances)

# grid coordinates keep the shapely oracle away from subnormal inputs
coord = st.integers(-10000, 10000).map(lambda k: k / 1000)
point = st.builds(complex, coord, coord)
polyline = st.lists(point, min_size=2, max_size=8)


def _ls(v):
    return LineString([(z.real, z.imag) for z in v])


def test_segment_distance_examples():
    assert segment_distances(0, 2, 1 - 1j, 1 + 1j) == 0.0            # crossing at midpoints
    assert segment_distances(0, 1, 2, 3) == pytest.approx(1.0)
    assert segment_distances(0, 1, 0.5 + 1j, 0.5 + 2j) == pytest.approx(1.0)
    assert segment_distances(0, 0, 1j, 1j) == pytest.approx(1.0)    # degenerate segments


def test_crossing_without_shared_vertex_is_zero():
    A = np.array([-1, 1])
    B = np.array([-1j, 1j])
    assert polyline_distance(A, B) == 0.0
    assert min_distance([A], [B]) == 0.0


def test_min_distance_requires_nonempty():
    with pytest.raises(ValueError):
        min_distance([], [np.array([0, 1])])


@settings(max_examples=200)
@given(a=polyline, b=polyline)
def test_polyline_distance_matches_shapely(a, b):
    assert polyline_distance(a, b) == pytest.approx(_ls(a).distance(_ls(b)), abs=1e-9)


@settings(max_examples=200)
@given(p=point, a=polyline)
def test_point_distance_matches_shapely(p, a):
    want = _ls(a).distance(Point(p.real, p.imag))
    assert point_polyline_distance(p, a)[0] == pytest.approx(want, abs=1e-9)


@given(a=polyline, spacing=st.floats(0.05, 2))
def test_densify_keeps_vertices_and_spacing(a, spacing):
    d = densify(a, spacing)
    assert d[0] == a[0] and d[-1] == a[-1]
    assert np.all(np.abs(np.diff(d)) <= spacing * (1 + 1e-12))
    for z in a:
        assert np.min(np.abs(d - z)) == 0.0


def test_hausdorff_examples():
    seg = np.array([0, 1])
    assert hausdorff_distance(seg, np.array([0, 0.5, 1])) == pytest.approx(0, abs=1e-12)
    assert hausdorff_distance(seg, np.array([0j, 0.5 + 0.2j, 1])) == pytest.approx(0.2, rel=1e-6)
    assert hausdorff_distance(seg, np.array([0, 2])) == pytest.approx(1.0, rel=1e-6)


@settings(max_examples=50, deadline=None)
@given(a=polyline, b=polyline)
def test_hausdorff_matches_shapely(a, b):
    h = hausdorff_distance(a, b)
    want = shapely.hausdorff_distance(_ls(a), _ls(b), densify=0.001)
    ext = max(np.ptp(np.real(a + b)), np.ptp(np.imag(a + b)), 1e-9)
    assert h == pytest.approx(want, abs=2e-3 * ext + 1e-9)
    assert h == pytest.approx(hausdorff_distance(b, a), abs=1e-12)
