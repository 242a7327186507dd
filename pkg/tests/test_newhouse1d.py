import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cantorgap.errors import InvalidSpec, NoGaps, NonpositiveTau
from cantorgap.newhouse1d import (Cantor1D, Verdict1D, bridges_intersect, gap_lemma_1d, hausdorff_lower,
                                  middle_alpha, middle_thirds, tau)


@pytest.mark.parametrize("depth", [1, 4, 8])
def test_middle_thirds_thickness_is_one(depth):
    assert tau(middle_thirds(depth)) == 1


@pytest.mark.parametrize("alpha", [Fraction(1, 2), Fraction(1, 5), Fraction(3, 4)])
def test_middle_alpha_closed_form(alpha):
    assert tau(middle_alpha(alpha, 5)) == (1 - alpha) / (2 * alpha)


def test_single_gap():
    C = Cantor1D((Fraction(0), Fraction(1)), ((Fraction(1, 5), Fraction(1, 2)),))
    assert tau(C) == Fraction(2, 3)
    assert C.bridges() == [(0, Fraction(1, 5)), (Fraction(1, 2), 1)]


def test_shorter_gap_does_not_stop_a_bridge():
    # the bridge right of the long gap runs past the short one to the end
    C = Cantor1D((0, 10), ((2, 4), (5, 5.5)))
    assert tau(C) == pytest.approx(min(2 / 2, 0.5 / 0.5, 1 / 0.5))
    C = Cantor1D((0, 10), ((2, 4), (5, 5.5), (7, 7.25)))
    assert tau(C) == pytest.approx(min(1.0, 1.0, 2 / 0.25, 2.75 / 0.25, 1.5 / 0.5))


def test_validation():
    with pytest.raises(NoGaps):
        tau(Cantor1D((0, 1), ()))
    with pytest.raises(InvalidSpec):
        Cantor1D((0, 1), ((0.2, 0.5), (0.4, 0.6)))
    with pytest.raises(InvalidSpec):
        Cantor1D((0, 1), ((0, 0.5),))
    with pytest.raises(InvalidSpec):
        middle_alpha(1.5, 2)


@settings(max_examples=200, deadline=None)
@given(st.fractions(min_value=Fraction(1, 100), max_value=100),
       st.fractions(min_value=-100, max_value=100),
       st.integers(1, 5))
def test_thickness_is_affine_invariant(c, d, depth):
    C = middle_alpha(Fraction(2, 5), depth)
    assert tau(C.affine_image(c, d)) == tau(C)


def test_json_roundtrip():
    C = middle_alpha(0.5, 3)
    assert Cantor1D.from_json(C.to_json()) == C


def test_hausdorff_lower():
    assert hausdorff_lower(1) == pytest.approx(math.log(2) / math.log(3))
    assert hausdorff_lower(0.5) == pytest.approx(0.5)
    assert hausdorff_lower(math.inf) == 1.0
    vals = [hausdorff_lower(t) for t in (0.01, 0.1, 1, 10, 100)]
    assert all(a < b for a, b in zip(vals, vals[1:]))
    for bad in (0, -1.0):
        with pytest.raises(NonpositiveTau):
            hausdorff_lower(bad)


def test_gap_lemma_cases():
    C = middle_thirds(6)
    small = C.affine_image(Fraction(1, 10), Fraction(4, 10))
    assert gap_lemma_1d(small, C) is Verdict1D.K_IN_GAP_OF_L
    assert gap_lemma_1d(C, small) is Verdict1D.L_IN_GAP_OF_K
    far = C.affine_image(1, 5)
    assert gap_lemma_1d(C, far) is Verdict1D.K_IN_GAP_OF_L
    assert gap_lemma_1d(C, C.affine_image(1, Fraction(1, 7))) is Verdict1D.MUST_INTERSECT
    thin = middle_alpha(Fraction(4, 5), 6)
    assert gap_lemma_1d(thin, thin.affine_image(1, Fraction(1, 7))) is Verdict1D.INCONCLUSIVE


@settings(max_examples=100, deadline=None)
@given(st.fractions(min_value=Fraction(-99, 100), max_value=Fraction(99, 100)),
       st.fractions(min_value=Fraction(1, 2), max_value=2))
def test_must_intersect_implies_bridges_meet(shift, scale):
    K = middle_thirds(10)
    L = K.affine_image(scale, shift)
    if gap_lemma_1d(K, L) is Verdict1D.MUST_INTERSECT:
        assert bridges_intersect(K.bridges(), L.bridges())


def test_bridges_intersect_examples():
    assert bridges_intersect([(0, 1), (2, 3)], [(1, 1.5)])
    assert not bridges_intersect([(0, 1), (2, 3)], [(1.2, 1.8), (3.5, 4)])
    assert bridges_intersect([(0, 10)], [(-5, -1), (9, 12)])
