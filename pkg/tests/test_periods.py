import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from qdgraph.algebra import BranchState, CutBranch, FactoredRational
from qdgraph.detector import closed_arc, find_short_trajectory
from qdgraph.errors import (BranchNotClosed, ConditionABViolated, DegenerateC,
                            PoleOnPath)
from qdgraph.families import jacobi_zeros, laguerre_zeros
from qdgraph.periods import (OrientedArc, Side, circle, condition_check,
                             contour_integral_sqrt, encircling_contour,
                             integrate_sqrt, jacobi_quantization,
                             laguerre_quantization, two_sided_identity)

from conftest import jacobi, laguerre, quartic_f

TWO_PI_I = 2j * math.pi
# arc from i to -i through the right half plane, avoiding +-1
RIGHT_ARC = [1j, 2 + 1j, 2 - 1j, -1j]


def _abs_quartic_integral():
    return quad(lambda t: math.sqrt(1 - t ** 4), -1, 1, epsabs=1e-14)[0]


def detected_arc(q, a, b):
    rep = find_short_trajectory(q, a, b)
    assert rep.found
    tr = rep.trajectory
    target = b if abs(tr.start - a) < abs(tr.start - b) else a
    return OrientedArc(closed_arc(tr, target))


# ---------------------------------------------------------------- arcs

def test_oriented_arc_validation_and_json():
    with pytest.raises(ValueError):
        OrientedArc([1.0])
    with pytest.raises(ValueError):
        OrientedArc([0, 1, 1, 2])
    arc = OrientedArc([0, 1 + 1j, 2], "minus")
    assert OrientedArc.from_json(arc.to_json()) == arc
    rev = arc.reversed()
    assert rev.side is Side.PLUS and rev.vertices[0] == 2


# ---------------------------------------------------------------- integrals

def test_quartic_cut_plus_side_is_imaginary():
    val = integrate_sqrt(quartic_f(), OrientedArc([-1, 1], Side.PLUS))
    assert abs(val.real) < 1e-9
    assert abs(val.imag) == pytest.approx(_abs_quartic_integral(), rel=1e-10)


def test_unit_integrand():
    val = integrate_sqrt(FactoredRational(1.0, []), OrientedArc([0, 1 + 1j]))
    assert val == pytest.approx(1 + 1j, rel=1e-12)


def test_laguerre_condition_on_detected_trajectory():
    q, a, b = laguerre(3)
    arc = detected_arc(q, b, a)
    val = integrate_sqrt(q.negate(), arc)   # condition on R with q = -R
    assert abs(val.real) < 1e-8
    oracle = quad(lambda t: math.sqrt((t - 1) * (9 - t)) / t, 1, 9, epsabs=1e-13)[0]
    assert abs(val.imag) == pytest.approx(oracle, rel=1e-8)


def test_integrate_through_pole_raises():
    with pytest.raises(PoleOnPath):
        integrate_sqrt(laguerre(3)[0], OrientedArc([-1, 1]))


def test_side_antisymmetry_with_fixed_branch():
    f = quartic_f()
    br = CutBranch(f, [[-1, 1], RIGHT_ARC])
    for cut in ([-1, 1], RIGHT_ARC):
        p = integrate_sqrt(f, OrientedArc(cut, Side.PLUS), br)
        m = integrate_sqrt(f, OrientedArc(cut, Side.MINUS), br)
        assert p == pytest.approx(-m, rel=1e-8)


# ---------------------------------------------------------------- contours

def test_contour_quartic_big_circle_vanishes():
    assert abs(contour_integral_sqrt(quartic_f(), circle(0, 3))) < 1e-9


def test_contour_square_away_from_origin():
    f = FactoredRational(1.0, [(0, 2)])
    assert abs(contour_integral_sqrt(f, circle(2, 1))) < 1e-12


def test_contour_single_zero_not_closed():
    with pytest.raises(BranchNotClosed):
        contour_integral_sqrt(quartic_f(), circle(1, 0.5))


def test_contour_around_double_pole_gives_residue():
    # sqrt(-9/z**2 (z-1)(z-9) / ...) simplified: sqrt(1/z**2) = 1/z, oint = 2 pi i
    f = FactoredRational(1.0, [(0, -2)])
    val = contour_integral_sqrt(f, circle(0, 1), BranchState(1.0, 1.0))
    assert val == pytest.approx(TWO_PI_I, rel=1e-10)


_ELLIPSE_T = np.linspace(0, 2 * np.pi, 200)
_DEFORM_START = BranchState(1.5, cmath.sqrt(1.5 ** 4 - 1))
_DEFORM_BASE = contour_integral_sqrt(
    quartic_f(), OrientedArc(1.5 * np.cos(_ELLIPSE_T) + 0.5j * np.sin(_ELLIPSE_T)), _DEFORM_START)


@settings(max_examples=30, deadline=None)
@given(radii=st.lists(st.floats(0.85, 1.15), min_size=12, max_size=24))
def test_deformation_invariance(radii):
    # star-shaped loops through 1.5 around the pair +-1 only (+-i stay outside)
    t = 2 * np.pi * np.arange(len(radii)) / len(radii)
    r = np.asarray(radii)
    r[0] = 1.0
    loop = r * 1.5 * np.cos(t) + 0.5j * r * np.sin(t)
    val = contour_integral_sqrt(quartic_f(), OrientedArc(np.append(loop, loop[0])), _DEFORM_START)
    assert val == pytest.approx(_DEFORM_BASE, rel=1e-8, abs=1e-8)


def test_encircling_contour_is_counterclockwise():
    c = encircling_contour([-1, 1], 0.3)
    v = c.array
    area = 0.5 * np.sum(v.real[:-1] * v.imag[1:] - v.real[1:] * v.imag[:-1])
    assert area > 0 and c.closed


# ---------------------------------------------------------------- 2I identity

def test_two_sided_identity_quartic():
    lhs, rhs = two_sided_identity(quartic_f(), [[-1, 1], RIGHT_ARC], 0.3, leading_sqrt=1.0)
    assert abs(lhs - rhs) < 1e-7


def test_residue_identity_gives_zero_total():
    # the sum of the two loops is deformable to a large circle: res at infinity is 0
    lhs, rhs = two_sided_identity(quartic_f(), [[-1, 1], RIGHT_ARC], 0.3, leading_sqrt=1.0)
    assert abs(rhs) < 1e-7


# ---------------------------------------------------------------- quantization

@pytest.mark.parametrize("C", [0.5, 1, 2 + 1j])
def test_laguerre_segment_quantized(C):
    a, b = laguerre_zeros(C)
    res = laguerre_quantization(C, OrientedArc([b, a]))
    assert res.matched is not None
    assert abs(abs(res.matched) - 2 * math.pi) < 1e-12
    assert res.residual <= 1e-6


def test_laguerre_detour_doubles():
    C = 1
    a, b = laguerre_zeros(C)
    detour = OrientedArc([b, -0.5 - 0.5j, -0.5 + 0.5j, a])  # passes left of 0
    res = laguerre_quantization(C, detour)
    assert res.matched is not None
    assert abs(res.matched) == pytest.approx(2 * math.pi * abs(C + 1))


def test_laguerre_reversed_arc_same_value():
    a, b = laguerre_zeros(3)
    fwd = laguerre_quantization(3, OrientedArc([b, 5 + 1j, a]))
    back = laguerre_quantization(3, OrientedArc([a, 5 + 1j, b]))
    assert fwd.value == pytest.approx(back.value, rel=1e-10)


@pytest.mark.parametrize("C", [-1, 0])
def test_laguerre_degenerate(C):
    with pytest.raises(DegenerateC):
        laguerre_quantization(C, OrientedArc([1, 2]))


def test_jacobi_symmetric_segment():
    a, b = jacobi_zeros(1, 1)
    assert sorted([a.real, b.real]) == pytest.approx([-math.sqrt(3) / 2, math.sqrt(3) / 2])
    res = jacobi_quantization(1, 1, OrientedArc([b, a]))
    assert res.matched is not None and abs(abs(res.matched) - 2 * math.pi) < 1e-12
    assert res.endpoint_ok


@pytest.mark.parametrize("A, B", [(10, 10), (10 + 1j, 10), (2, 0.5)])
def test_jacobi_detected_arc_quantized(A, B):
    q, a, b = jacobi(A, B)
    res = jacobi_quantization(A, B, detected_arc(q, b, a))
    assert res.matched is not None and abs(abs(res.matched) - 2 * math.pi) < 1e-9
    if complex(A).imag == 0 and complex(B).imag == 0:
        assert res.endpoint_ok
        assert res.endpoint_values[0] == pytest.approx(2 * A)
        assert res.endpoint_values[1] == pytest.approx(-2 * B)


def test_jacobi_condition_violated():
    with pytest.raises(ConditionABViolated):
        jacobi_quantization(-1, 2, OrientedArc([0, 0.5]))


def test_quantization_json_has_admissible_set():
    a, b = laguerre_zeros(1)
    obj = laguerre_quantization(1, OrientedArc([b, a])).to_json()
    assert len(obj["admissible"]) == 4 and obj["matched"] is not None


@pytest.mark.slow
def test_quantization_residual_over_parameter_sample():
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(10):
        C = complex(rng.uniform(0.2, 4), rng.uniform(-1, 1))
        q, a, b = laguerre(C)
        res = laguerre_quantization(C, detected_arc(q, b, a))
        worst = max(worst, res.residual / q.scale)
    for _ in range(10):
        A = complex(rng.uniform(0.5, 10), rng.uniform(-1, 1))
        B = complex(rng.uniform(0.5, 10), 0)
        q, a, b = jacobi(A, B)
        res = jacobi_quantization(A, B, detected_arc(q, b, a))
        worst = max(worst, res.residual / q.scale)
    assert worst <= 1e-6


# ---------------------------------------------------------------- condition check

def test_condition_laguerre_segment_passes():
    for C in (0.5, 3):
        a, b = laguerre_zeros(C)
        assert condition_check(laguerre(C)[0].negate(), OrientedArc([b.real, a.real])).passes


def test_condition_trivial_cases():
    one = FactoredRational(1.0, [])
    assert not condition_check(one, OrientedArc([0, 1])).passes
    assert condition_check(one.negate(), OrientedArc([0, 1])).passes


def test_condition_quartic_right_arc_passes():
    # passes although no short trajectory joins +-i
    chk = condition_check(quartic_f(), OrientedArc(RIGHT_ARC))
    assert chk.passes
