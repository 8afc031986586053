import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qdgraph.algebra import FactoredRational
from qdgraph.detector import (HomotopySignature, find_short_trajectory,
                              gamma_set, homotopy_signature,
                              orthogonal_obstruction)
from qdgraph.errors import (ArcThroughPole, NoNearbyRay, NotAZero,
                            ZerosCoincide)
from qdgraph.geometry import hausdorff_distance, min_distance
from qdgraph.tracer import critical_graph

from conftest import laguerre, quartic, segment_points

# regression constant: separation of the ray families from +i and -i
QUARTIC_GAP = 1.554


# ---------------------------------------------------------------- gamma sets

def test_gamma_set_quartic_three_rays():
    assert len(gamma_set(quartic(), 1j)) == 3


def test_gamma_set_laguerre_one_ray_reaches_nine():
    q, a, b = laguerre(3)
    rays = gamma_set(q, 1)
    assert len(rays) == 3
    assert sum(r.hits(9, 1e-9) for r in rays) >= 1


def test_gamma_set_rejects_pole():
    q, _, _ = laguerre(3)
    with pytest.raises(NotAZero):
        gamma_set(q, 0)


# ---------------------------------------------------------------- distances between ray families

def test_min_distance_shared_segment_is_zero():
    q = quartic()
    assert min_distance(gamma_set(q, -1), gamma_set(q, 1)) < 1e-12


def test_min_distance_quartic_gap():
    q = quartic()
    d = min_distance(gamma_set(q, 1j), gamma_set(q, -1j))
    assert d > 0.1
    assert d == pytest.approx(QUARTIC_GAP, abs=2e-3)


def test_min_distance_identical_sets():
    g = gamma_set(quartic(), 1j)
    assert min_distance(g, g) == 0.0


# ---------------------------------------------------------------- detection

def test_quartic_real_pair_found():
    rep = find_short_trajectory(quartic(), -1, 1)
    assert rep.found and rep.unbroken and rep.resolved
    assert rep.signature == HomotopySignature(())
    assert hausdorff_distance(rep.trajectory.vertices, segment_points(-1, 1)) < 1e-3


def test_quartic_imaginary_pair_absent():
    rep = find_short_trajectory(quartic(), 1j, -1j)
    assert not rep.found and rep.resolved
    assert rep.trajectory is None
    assert rep.distance > 0.1


@pytest.mark.parametrize("C", [0.5, 1, 3, -0.95, -0.95 + 0.1j])
def test_laguerre_found(C):
    q, a, b = laguerre(C)
    rep = find_short_trajectory(q, a, b)
    assert rep.found and rep.unbroken
    assert len(rep.signature.parities) == 1


def test_detector_errors():
    q = quartic()
    with pytest.raises(ZerosCoincide):
        find_short_trajectory(q, 1, 1)
    with pytest.raises(NotAZero):
        find_short_trajectory(q, 1, 0.5)


def test_broken_trajectory_detected():
    # q = -(z+1) z**2 (z-1) is positive on (-1, 1): the real segment is
    # horizontal but passes through the double zero at 0
    q = FactoredRational(-1.0, [(-1, 1), (0, 2), (1, 1)])
    g = critical_graph(q)
    assert g.connects(-1, 0) and g.connects(0, 1)
    rep = find_short_trajectory(q, -1, 1)
    # the rays from -1 stop at the double zero 0: connected only through it
    assert rep.found and rep.unbroken is False
    assert rep.trajectory.start == -1 and rep.trajectory.end == 1
    assert rep.trajectory.phi_length == pytest.approx(2 / 3, rel=1e-8)   # int |z| sqrt(1 - z^2)
    assert hausdorff_distance(rep.trajectory.vertices, segment_points(-1, 1)) < 1e-3


def test_report_json_shape():
    rep = find_short_trajectory(quartic(), -1, 1)
    obj = rep.to_json()
    assert obj["found"] is True and obj["signature"] == []
    obj = find_short_trajectory(quartic(), 1j, -1j).to_json()
    assert "trajectory" not in obj and obj["distance"] > 0.1


# ---------------------------------------------------------------- invariants

CASES = [(quartic(), -1, 1), (quartic(), 1j, -1j), (quartic(), 1, 1j)] + \
    [(laguerre(C)[0],) + laguerre(C)[1:] for C in (0.5, 3, -0.95 + 0.1j)]


@pytest.mark.parametrize("q, a, b", CASES)
def test_certification_consistency(q, a, b):
    rep = find_short_trajectory(q, a, b)
    if rep.found:
        assert rep.distance <= 2 * rep.hit_radius
        assert rep.trajectory is not None
    elif rep.resolved:
        assert rep.distance > 10 * rep.hit_radius
        assert rep.trajectory is None


@pytest.mark.parametrize("q, a, b", CASES)
def test_at_most_one_unbroken_connection(q, a, b):
    rays = [r for r in gamma_set(q, a) if r.hits(b, 1e-9)]
    if q.poles == []:
        assert len(rays) <= 1


def test_two_connections_have_different_signatures():
    # q = (z**2 - 1)/z**2: two trajectories join -1 and 1, one above and one below 0
    q = FactoredRational(1.0, [(1, 1), (-1, 1), (0, -2)])
    rays = [r for r in gamma_set(q, -1) if r.hits(1, 1e-9)]
    assert len(rays) == 2
    sigs = {homotopy_signature(np.append(r.vertices, 1), q.poles) for r in rays}
    assert len(sigs) == 2


def test_signature_examples():
    seg = [1, 9]
    assert homotopy_signature(seg, [0]) == HomotopySignature((0,))
    detour = [1, 0.5 - 1j, -1 - 1j, -1 + 1j, 9]
    assert homotopy_signature(detour, [0]) == HomotopySignature((1,))
    loop = [1, 2j, -1, -1j, 1, 9]
    s0 = homotopy_signature(seg, [0, 20])
    s1 = homotopy_signature(loop, [0, 20])
    assert s0.parities[0] != s1.parities[0] and s0.parities[1] == s1.parities[1]
    assert homotopy_signature([1, 2, 3j], []) == HomotopySignature(())


def test_signature_endpoint_on_cut_is_stable():
    # arc starting directly below the pole: the cut is nudged off the endpoint
    a = homotopy_signature([-2j, 1 - 2j, 1 + 1j], [0])
    b = homotopy_signature([-2j, -1 - 2j, -1 + 1j], [0])
    assert a != b


def test_signature_through_pole_raises():
    with pytest.raises(ArcThroughPole):
        homotopy_signature([-1, 1], [0])


@settings(max_examples=100, deadline=None)
@given(pts=st.lists(st.tuples(st.floats(-3, 3), st.floats(-3, 3)), min_size=2, max_size=8),
       where=st.lists(st.tuples(st.integers(0, 6), st.floats(0.01, 0.99)), max_size=6))
def test_signature_refinement_invariance(pts, where):
    v = np.array([complex(x, y) for x, y in pts])
    poles = [0.3 + 0.1j, -1.2 + 0.7j]
    try:
        base = homotopy_signature(v, poles)
    except ArcThroughPole:
        return
    w = list(v)
    for k, t in where:
        k = k % (len(w) - 1)
        w.insert(k + 1, w[k] + t * (w[k + 1] - w[k]))
    try:
        refined = homotopy_signature(w, poles)
    except ArcThroughPole:
        return
    assert refined == base


# ---------------------------------------------------------------- obstruction

def test_obstruction_vanishing_imaginary_part_when_connected():
    q, a, b = laguerre(3)
    w = orthogonal_obstruction(q, b, a)
    assert abs(w.imag) < 1e-6
    assert abs(abs(w.real) - 2 * math.pi) < 1e-6   # real part: period along the segment


def test_obstruction_nonzero_for_perturbed_zero():
    q = FactoredRational(-1.0, [(9, 1), (1 + 0.01j, 1), (0, -2)])
    rep = find_short_trajectory(q, 9, 1 + 0.01j)
    assert not rep.found
    w = orthogonal_obstruction(q, 9, 1 + 0.01j)
    assert abs(w.imag) > 1e-3


def test_obstruction_quartic_no_nearby_ray():
    with pytest.raises(NoNearbyRay):
        orthogonal_obstruction(quartic(), 1j, -1j)
