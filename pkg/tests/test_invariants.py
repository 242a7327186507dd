import dataclasses
import math

import numpy as np
import pytest

from cantorgap.errors import BudgetExceeded, DivergentRecursion, MismatchedSquares, TailBoundUnavailable
from cantorgap.geometry import Disk, OrientedSquare, RegionSet
from cantorgap.ifs import AffineMap, IfsSpec, affine_level
from cantorgap.interval import Interval
from cantorgap.invariants import (InvariantReport, Verdict, distortion, distortion_bounds, distortion_refine,
                                  gap_sigma, reduction_ratios, s_n, tail_depth, thickness, well_balanced)
from cantorgap.specfile import grid_spec

from conftest import UNIT, quadratic_map, random_general_spec

ONE = Interval(1.0, 1.0)


def small_general_spec():
    # r = 0.2 leaves room for the tail bound of the distortion refinement
    maps = [quadratic_map(0.05, -0.2, 0.003), quadratic_map(0.05j, 0.2, -0.002j)]
    return IfsSpec(UNIT, maps, 0.2)


def strip_spec():
    return IfsSpec(UNIT, [AffineMap(0.4, -0.25), AffineMap(0.4, 0.25)], 0.5)


# -- distortion -----------------------------------------------------------


def test_distortion_bounds_examples():
    assert distortion_bounds(grid_spec(3, 0.5)) == ONE
    D = distortion_bounds(random_general_spec(np.random.default_rng(0)))
    assert D.lo == 1.0 and D.hi == pytest.approx(6.75)
    spec = IfsSpec(UNIT, [quadratic_map(1e-4, -0.2, 0), quadratic_map(1e-4, 0.2, 0)], 1e-3)
    assert distortion_bounds(spec).hi == pytest.approx(1.0, abs=1e-2)


def test_s_n_affine_is_one():
    spec = grid_spec(2, 0.5)
    assert all(s_n(spec, n) == 1.0 for n in range(6))
    assert s_n(random_general_spec(np.random.default_rng(1)), 0) == 1.0


def test_s1_matches_dense_sampling():
    spec = random_general_spec(np.random.default_rng(4))
    g = np.linspace(-0.5, 0.5, 1000)
    pts = (g[:, None] + 1j * g[None, :]).ravel()
    dense = max(np.abs(m.deriv(pts)).max() / np.abs(m.deriv(pts)).min() for m in spec.maps)
    assert s_n(spec, 1) == pytest.approx(dense, rel=1e-2)
    assert s_n(spec, 1) <= dense * (1 + 1e-12)


def test_s_n_budget():
    with pytest.raises(BudgetExceeded):
        s_n(random_general_spec(np.random.default_rng(1)), 8, budget=1000)


def test_tail_depth_against_partial_products():
    a, R, eps = 0.5, 0.25, 0.1

    def tail(n):
        return math.prod(1 + (5 / R) * a**k for k in range(n, n + 200))

    expected = next(n for n in range(100) if tail(n) <= 1 + eps and a**n / R <= 0.05)
    assert expected == 9
    assert tail_depth(a, R, eps) == expected


def test_distortion_refine():
    assert distortion_refine(grid_spec(2, 0.5)) == ONE
    spec = small_general_spec()
    D0 = distortion_bounds(spec)
    D = distortion_refine(spec, 0.1)
    assert D0.contains(D)
    assert D.lo >= s_n(spec, 1) and D.hi < D0.hi
    assert distortion(spec) == D
    with pytest.raises(TailBoundUnavailable):
        distortion_refine(random_general_spec(np.random.default_rng(0)))


# -- reduction ratios and gap ----------------------------------------------


@pytest.mark.parametrize("N,r", [(2, 0.5), (5, 0.8), (30, 0.99)])
def test_grid_reduction_ratios(N, r):
    lam0, Lam0, lam, Lam = reduction_ratios(grid_spec(N, r), ONE)
    assert abs(lam0.lo - r / N) <= 1e-15 and lam0.is_point()
    assert Lam0.lo <= math.sqrt(2) * r / N <= Lam0.hi
    assert lam.contains(lam0) and Lam.contains(Lam0)


def test_strip_gap_contains_closed_form():
    # the limit set is a middle-strip Cantor set on the real segment |x| <= 5/12;
    # the farthest points of S are at height 1/2 above x = 0 or x = 1/2
    closed_form = math.sqrt(37) / 6
    for depth in (1, 2, 3):
        g = gap_sigma(strip_spec(), ONE, depth=depth)
        assert g.sigma0.lo <= closed_form <= g.sigma0.hi


def test_gap_refinement_is_monotone():
    spec = grid_spec(5, 0.8)
    h0 = spec.delta_S / 64
    prev = None
    for depth in (1, 2, 3):
        for h in (h0, h0 / 2, h0 / 4):
            g = gap_sigma(spec, ONE, h, depth)
            if prev is not None and prev[0] <= depth and prev[1] >= h:
                assert g.sigma0.lo >= prev[2].lo
                assert g.sigma0.hi <= prev[2].hi
            prev = (depth, h, g.sigma0)


def test_gap_lower_bound_from_escribed_disks_is_consistent():
    spec = grid_spec(4, 0.7)
    g = gap_sigma(spec, ONE, depth=3)
    A, B = affine_level(spec, 3)
    rs = RegionSet([Disk(b, abs(a) * spec.square.diameter) for a, b in zip(A, B)])
    t = np.linspace(-0.5, 0.5, 401) * spec.square.side
    brute = 2 * rs.distance((t[:, None] + 1j * t[None, :]).ravel()).max() / spec.delta_S
    assert brute <= g.sigma0.hi


def test_divergent_recursion():
    spec = random_general_spec(np.random.default_rng(0))
    with pytest.raises(DivergentRecursion):
        gap_sigma(spec, Interval(1.0, 100.0), depth=1)


# -- thickness ------------------------------------------------------------


def test_thickness_interval_identity():
    rep = thickness(grid_spec(6, 0.9), depth=2)
    recomputed = rep.lambda0 / (rep.D**5 * rep.sigma0.sqrt())
    assert rep.thickness == recomputed
    assert rep.D == ONE
    plain = rep.lambda0 / rep.sigma0.sqrt()
    assert plain.lo == pytest.approx(rep.thickness.lo, rel=1e-14)
    assert rep.lambda0.lo <= rep.Lambda0.hi


@pytest.mark.parametrize("c", [0.5, 3.7, 1e3])
def test_thickness_scale_invariance(c):
    base = grid_spec(5, 0.8)
    scaled = IfsSpec(OrientedSquare(0j, base.square.diameter * c),
                     [AffineMap(m.a, m.b * c) for m in base.maps], base.extension_ratio)
    r0, r1 = thickness(base, depth=2), thickness(scaled, depth=2)
    for name in ("lambda0", "Lambda0", "sigma0", "thickness"):
        a, b = getattr(r0, name), getattr(r1, name)
        assert b.lo == pytest.approx(a.lo, rel=1e-10)
        assert b.hi == pytest.approx(a.hi, rel=1e-10)


def test_general_thickness_report():
    rep = thickness(small_general_spec(), depth=2)
    assert rep.D.hi > 1.0
    assert rep.thickness.lo > 0
    assert rep.sigma.contains(rep.sigma0) or rep.sigma.hi >= rep.sigma0.hi


def test_report_json_roundtrip():
    rep = thickness(grid_spec(3, 0.6), depth=2)
    js = rep.to_json()
    assert set(js) == {"D", "lambda0", "Lambda0", "lambda", "Lambda", "sigma0", "sigma", "thickness",
                       "depth_used", "grid_used"}
    back = InvariantReport.from_json(js)
    assert back == rep


# -- well balanced ---------------------------------------------------------


def test_well_balanced_grid_examples(grid4, report61):
    r4 = thickness(grid4, depth=1)
    assert well_balanced(r4, r4) is Verdict.FAILED_CONDITION1
    assert well_balanced(report61, report61) is Verdict.CERTIFIED


def _fake(rep, **kw):
    return dataclasses.replace(rep, **{k: Interval(*v) for k, v in kw.items()})


def test_well_balanced_threshold_cases(report61):
    straddle = _fake(report61, sigma=(0.001, 0.03), Lambda=(0.01, 0.012))
    assert well_balanced(straddle, report61) is Verdict.UNKNOWN
    failing = _fake(report61, sigma=(0.04, 0.041), Lambda=(0.01, 0.012))
    assert well_balanced(report61, failing) is Verdict.FAILED_SUFFICIENT
    other = dataclasses.replace(report61, square=OrientedSquare(0j, 2.0))
    with pytest.raises(MismatchedSquares):
        well_balanced(report61, other)


def test_certified_implies_disks_contain_sons(grid61, report61):
    assert well_balanced(report61, report61) is Verdict.CERTIFIED
    S = grid61.square
    d = S.inscribed_diameter / (20 * report61.D.hi**2)
    rng = np.random.default_rng(0)
    room = S.half_side - d / 2
    centers = S.from_local(rng.uniform(-room, room, 1000) + 1j * rng.uniform(-room, room, 1000))
    sq = grid61.image_squares()
    b = np.array([s.center for s in sq])
    h = sq[0].half_side
    corners = np.array([1 + 1j, -1 + 1j, -1 - 1j, 1 - 1j]) * h
    verts = b[:, None] + corners[None, :]
    for c in centers:
        reach = np.abs(verts - c).max(axis=1)
        assert (reach <= d / 2).any()
    assert b.size == grid61.p
