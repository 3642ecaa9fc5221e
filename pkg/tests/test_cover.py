import cmath
import math

import numpy as np
import pytest

from abeldet.cover import (Arc, LevelCurve, Segment, XPath, branch_points, continue_branch,
                           y_fiber)
from abeldet.errors import InvalidParameter, ProximityError
from abeldet.polyring import BivarPoly, resultant_y

x, y = BivarPoly.x(), BivarPoly.y()
PERTURBED = x ** 3 + y ** 3 - 3 * x - 6 * y


def circle(center, radius, start=0.0, sweep=2 * math.pi):
    return XPath((Arc(center, radius, start, sweep),))


def match_sets(a, b):
    a, b = np.sort_complex(np.asarray(a)), list(b)
    worst = 0.0
    for z in a:
        i = int(np.argmin(np.abs(np.array(b) - z)))
        worst = max(worst, abs(b.pop(i) - z))
    return worst


# paths

def test_path_join_checked():
    with pytest.raises(InvalidParameter):
        XPath((Segment(0, 1), Segment(1.1, 2)))
    p = XPath((Segment(0, 1), Arc(0, 1, 0, math.pi)))
    assert abs(p.end + 1) < 1e-15
    assert abs(p.length - (1 + math.pi)) < 1e-14


def test_path_reverse_and_dict():
    p = XPath((Segment(0, 1), Arc(1.5, 0.5, math.pi, -math.pi)))
    r = p.reversed()
    assert r.start == p.end and r.end == p.start
    assert XPath.from_dict(p.to_dict()) == p
    assert abs(p.subdivided(3).length - p.length) < 1e-14
    assert circle(0, 1).is_closed and not p.is_closed


# fibers

def test_fiber_circle():
    f = y_fiber(x ** 2 + y ** 2, 1, 0)
    assert match_sets(f, [1, -1]) < 1e-12


def test_fiber_fermat_cube_roots():
    f = y_fiber(BivarPoly.fermat(2), 1, 0)
    assert match_sets(f, [cmath.exp(2j * math.pi * k / 3) for k in range(3)]) < 1e-12


@pytest.mark.parametrize("n", [1, 2, 3])
def test_fiber_at_branch_point(n):
    f = y_fiber(BivarPoly.fermat(n), 1, 1)
    assert len(f) == n + 1 and np.max(np.abs(f)) < 1e-4


def test_fiber_residual():
    curve = LevelCurve(PERTURBED, 0.7 + 0.2j)
    xs = np.linspace(-2, 2, 17) + 0.3j
    R = curve.fiber(xs)
    for xv, row in zip(xs, R):
        assert np.max(np.abs(curve.F(np.full(3, xv), row))) < 1e-12


# branch points

@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_fermat_branch_points(n):
    bp = branch_points(BivarPoly.fermat(n), 1)
    roots = [cmath.exp(2j * math.pi * k / (n + 1)) for k in range(n + 1)]
    assert len(bp.points) == n + 1
    assert match_sets(bp.points, roots) < 1e-6
    assert all(o == n + 1 for o in bp.orders)


def test_perturbed_branch_points():
    t = 0.4 + 0.1j
    bp = branch_points(PERTURBED, t)
    F = PERTURBED - t
    degree = len(np.trim_zeros(resultant_y(F, F.dy()), "b")) - 1
    assert degree == 6
    assert len(bp.points) == 6 and all(o == 2 for o in bp.orders)


def test_branch_points_move_continuously():
    t0, dt = 0.4 + 0.1j, 1e-6
    a = branch_points(PERTURBED, t0).points
    b = branch_points(PERTURBED, t0 + dt).points
    # derivative of the moving points, then a first-order prediction
    c = branch_points(PERTURBED, t0 + 2 * dt).points
    assert match_sets(a, b) < 1e-4 and match_sets(b, c) < 1e-4
    moved = [b[np.argmin(np.abs(b - z))] for z in a]
    pred = [2 * m - z for m, z in zip(moved, a)]
    assert match_sets(pred, c) < 1e-8


# continuation

def test_continue_explicit_branch():
    tr = continue_branch(x ** 2 + y ** 2, 1, XPath((Segment(0, 0.5),)), 1.0)
    assert abs(tr.y_end - math.sqrt(0.75)) < 1e-10


def test_samples_on_curve():
    h = PERTURBED
    t = 0.2
    path = XPath((Segment(0.1, 0.5 + 0.5j), Arc(0, abs(0.5 + 0.5j), math.pi / 4, math.pi / 2)))
    y0 = y_fiber(h, t, 0.1)[0]
    tr = continue_branch(h, t, path, y0)
    assert len(tr.samples) > 2
    for xv, yv in tr.samples:
        assert abs(h(xv, yv) - t) < 1e-10


def test_loop_without_branch_point_is_trivial():
    h = BivarPoly.fermat(2)
    path = circle(0, 0.5)
    for y0 in y_fiber(h, 1, 0.5):
        tr = continue_branch(h, 1, path, y0)
        assert abs(tr.y_end - y0) < 1e-10


def test_track_then_reverse():
    h = PERTURBED
    path = XPath((Segment(0, 1 + 1j), Segment(1 + 1j, -0.5 + 1.5j)))
    y0 = y_fiber(h, 0.3, 0)[1]
    fwd = continue_branch(h, 0.3, path, y0)
    back = continue_branch(h, 0.3, path.reversed(), fwd.y_end)
    assert abs(back.y_end - y0) <= 2 * (fwd.error + back.error) + 1e-14


@pytest.mark.parametrize("n", [1, 2, 3])
def test_puiseux_monodromy_at_one(n):
    # near x = 1, y**(n+1) ~ (n+1)(1-x); one counterclockwise turn multiplies y by eps
    h = BivarPoly.fermat(n)
    r = 0.05
    y0 = ((n + 1) * r) ** (1 / (n + 1))
    fib = y_fiber(h, 1, 1 - r)
    y0 = fib[np.argmin(np.abs(fib - y0))]
    tr = continue_branch(h, 1, circle(1, r, math.pi), y0)
    eps = cmath.exp(2j * math.pi / (n + 1))
    assert abs(tr.y_end - eps * y0) < 1e-9


def test_monodromy_is_permutation():
    h, t = PERTURBED, 0.3
    bp = branch_points(h, t)
    b = bp.points[0]
    gap = np.min(np.abs(bp.points[1:] - b))
    r = gap / 3
    fib = y_fiber(h, t, b + r)
    ends = [continue_branch(h, t, circle(b, r), y0).y_end for y0 in fib]
    assert match_sets(ends, fib) < 1e-9
    # a simple branch point swaps exactly two sheets
    moved = sum(abs(e - y0) > 1e-6 for e, y0 in zip(ends, fib))
    assert moved == 2


def test_proximity_error_through_branch_point():
    with pytest.raises(ProximityError) as info:
        continue_branch(x ** 2 + y ** 2, 1, XPath((Segment(0, 2),)), 1.0)
    assert info.value.branch_point is not None
    assert min(abs(info.value.branch_point - 1), abs(info.value.branch_point + 1)) < 1e-6


def test_bad_start_point():
    with pytest.raises(InvalidParameter):
        continue_branch(x ** 2 + y ** 2, 1, XPath((Segment(0, 0.5),)), 0.5)
