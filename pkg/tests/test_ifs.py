import math

import numpy as np
import pytest

from cantorgap.errors import BudgetExceeded, DomainEscape, InvalidSpec
from cantorgap.geometry import OrientedSquare
from cantorgap.ifs import (AffineMap, IfsSpec, children, derivative_at, enumerate_depth, evaluate,
                           piece_budget, piece_of)
from cantorgap.interval import Interval
from cantorgap.invariants import distortion_bounds
from cantorgap.specfile import grid_spec

from conftest import UNIT, quadratic_map, random_general_spec

ONE = Interval(1.0, 1.0)


def cell_centers(n, side):
    k = (np.arange(n) + 0.5) / n - 0.5
    return [complex(x * side, y * side) for x in k for y in k]


# -- construction ---------------------------------------------------------


def test_spec_validation():
    S = UNIT
    with pytest.raises(InvalidSpec):
        IfsSpec(S, [AffineMap(0.3, 0)], 0.5)
    with pytest.raises(InvalidSpec):
        AffineMap(1.0, 0)
    with pytest.raises(InvalidSpec):  # sticks out of the square
        IfsSpec(S, [AffineMap(0.3, 0.45), AffineMap(0.3, -0.3)], 0.5)
    with pytest.raises(InvalidSpec):  # images overlap
        IfsSpec(S, [AffineMap(0.3, 0.05), AffineMap(0.3, -0.05)], 0.5)
    with pytest.raises(InvalidSpec):
        IfsSpec(OrientedSquare(0.1 + 0j, 1.0), [AffineMap(0.3, 0.2), AffineMap(0.3, -0.2)], 0.5)
    with pytest.raises(InvalidSpec):  # general map sending S' outside S
        IfsSpec(S, [quadratic_map(0.4, 0.3, 0.0), quadratic_map(0.1, -0.3, 0.0)], 0.5)


# -- evaluation -----------------------------------------------------------


def test_evaluate_examples():
    spec = IfsSpec(UNIT, [AffineMap(0.5, 0), AffineMap(0.2, 0.35)], 0.5)
    assert evaluate(spec, (), 0.3 + 0.1j) == 0.3 + 0.1j
    assert evaluate(spec, (0, 0), 1) == 0.25
    g = grid_spec(4, 0.99)
    for k, c in enumerate(cell_centers(4, g.square.side)):
        assert evaluate(g, (k,), 0) == pytest.approx(c, abs=1e-15)


def test_derivative_examples():
    spec = IfsSpec(UNIT, [AffineMap(0.3, -0.25), AffineMap(0.2j, 0.25)], 0.5)
    assert derivative_at(spec, (), 0.1) == 1
    assert derivative_at(spec, (0, 1), 0.1) == pytest.approx(0.06j)


def test_general_derivative_matches_finite_differences():
    spec = random_general_spec(np.random.default_rng(3))
    w, z, h = (0, 1, 1), 0.1 - 0.2j, 1e-5
    fd = (evaluate(spec, w, z + h) - evaluate(spec, w, z - h)) / (2 * h)
    d = derivative_at(spec, w, z)
    assert abs(fd - d) <= 1e-6 * abs(d)


def test_domain_escape():
    spec = random_general_spec(np.random.default_rng(0))
    with pytest.raises(DomainEscape):
        evaluate(spec, (0,), 10.0)


def test_word_convention_first_digit_applied_first():
    spec = random_general_spec(np.random.default_rng(5))
    I, z = (1, 0, 1), 0.05 + 0.1j
    for i in range(spec.p):
        # f_{iI} = f_I o f_i
        assert evaluate(spec, (i,) + I, z) == pytest.approx(evaluate(spec, I, spec.maps[i](z)), abs=1e-15)
    # Lemma-2.7 style lower bound on sons: delta(f_{iI}(S)) >= |f_I'(0)| delta(S_i) / D
    D = distortion_bounds(spec)
    P = piece_of(spec, I, D)
    for son in children(spec, P, D):
        Si = piece_of(spec, son.word[:1], D)
        theta = np.linspace(0, 2 * np.pi, 2000, endpoint=False)
        ring = spec.square.from_local(spec.square.half_side * np.exp(1j * theta)
                                      / np.maximum(np.abs(np.cos(theta)), np.abs(np.sin(theta))))
        img = np.array([evaluate(spec, son.word, z) for z in ring])
        true_delta = 2 * np.abs(img - son.center).min()
        assert true_delta >= abs(P.deriv) * Si.delta.lo / D.hi


# -- pieces ---------------------------------------------------------------


def test_piece_of_root_and_affine_sizes():
    spec = IfsSpec(OrientedSquare(0j, 1.0), [AffineMap(0.1, -0.2), AffineMap(0.1, 0.2)], 0.5)
    root = piece_of(spec, (), ONE)
    assert root.delta.lo == root.delta.hi == spec.square.diameter / math.sqrt(2)
    P = piece_of(spec, (0,), ONE)
    assert P.delta.lo == pytest.approx(0.1 / math.sqrt(2), rel=1e-15)
    assert P.Delta.lo == pytest.approx(0.1, rel=1e-15)
    assert P.polygon is not None and P.polygon.center == -0.2


def test_piece_rotation_follows_multiplier():
    a = 0.2 * np.exp(0.3j)
    spec = IfsSpec(UNIT, [AffineMap(a, -0.25), AffineMap(a, 0.25)], 0.5)
    assert piece_of(spec, (1,), ONE).polygon.rotation == pytest.approx(0.3)


def test_general_piece_width_ratio():
    spec = random_general_spec(np.random.default_rng(9))
    D = distortion_bounds(spec)
    assert D.hi == pytest.approx(6.75)
    P = piece_of(spec, (0, 1), D)
    assert P.delta.hi / P.delta.lo <= D.hi**2 * (1 + 1e-12)
    assert P.polygon is None


def test_affine_delta_is_product_of_multipliers():
    rng = np.random.default_rng(2)
    spec = grid_spec(3, 0.8)
    for _ in range(50):
        w = tuple(rng.integers(0, spec.p, rng.integers(1, 7)))
        P = piece_of(spec, w, ONE)
        expected = np.prod([abs(spec.maps[i].a) for i in w]) * spec.delta_S
        assert P.delta.lo == pytest.approx(expected, rel=1e-12)


def test_children_and_nesting():
    spec = grid_spec(4, 0.9)
    root = piece_of(spec, (), ONE)
    sons = children(spec, root, ONE)
    assert len(sons) == 16
    for son, c in zip(sons, cell_centers(4, spec.square.side)):
        assert son.center == pytest.approx(c, abs=1e-15)
        assert son.delta.hi < root.delta.hi
    rng = np.random.default_rng(0)
    for _ in range(30):
        w = tuple(rng.integers(0, 16, 3))
        P = piece_of(spec, w, ONE)
        for Q in children(spec, P, ONE):
            assert P.polygon.contains_square(Q.polygon, slack=1e-15)


def test_enumerate_depth_counts_and_budget(monkeypatch):
    spec = IfsSpec(UNIT, [AffineMap(0.2, -0.3), AffineMap(0.2, 0), AffineMap(0.2, 0.3)], 0.5)
    assert len(enumerate_depth(spec, 2, ONE)) == 9
    g = grid_spec(4, 0.99)
    pieces = enumerate_depth(g, 1, ONE)
    assert len(pieces) == 16 and all(P.polygon is not None for P in pieces)
    monkeypatch.setenv("CANTOR_GAP_BUDGET", "100")
    assert piece_budget() == 100
    with pytest.raises(BudgetExceeded):
        enumerate_depth(g, 2, ONE)


def test_piece_bounds_contain_true_sizes_for_general_maps():
    rng = np.random.default_rng(7)
    theta = np.linspace(0, 2 * np.pi, 4000, endpoint=False)
    unit_ring = np.exp(1j * theta) / np.maximum(np.abs(np.cos(theta)), np.abs(np.sin(theta)))
    for _ in range(100):
        spec = random_general_spec(rng)
        D = distortion_bounds(spec)
        w = tuple(int(i) for i in rng.integers(0, 2, rng.integers(1, 5)))
        P = piece_of(spec, w, D)
        # rays from the center of S to its boundary, pushed through f_I
        img = np.array([evaluate(spec, w, z) for z in spec.square.half_side * unit_ring])
        r = np.abs(img - P.center)
        delta_true, Delta_true = 2 * r.min(), 2 * r.max()
        assert P.delta.lo <= delta_true <= P.delta.hi
        assert P.Delta.lo <= Delta_true <= P.Delta.hi
