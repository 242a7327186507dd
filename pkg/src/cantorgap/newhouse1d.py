"""Thickness of Cantor sets on the line, the gap-lemma trichotomy and the
dimension bound that thickness gives.

A :class:`Cantor1D` is described by a bounding interval and a finite list of
removed open gaps.  Coordinates may be floats or :class:`fractions.Fraction`;
all routines stay exact for the latter.
"""

from __future__ import annotations

import bisect
import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import InvalidSpec, NoGaps, NonpositiveTau


@dataclass(frozen=True)
class Cantor1D:
    interval: tuple
    gaps: tuple

    def __post_init__(self):
        a, b = self.interval
        gaps = tuple(sorted((tuple(g) for g in self.gaps), key=lambda g: g[0]))
        object.__setattr__(self, "interval", (a, b))
        object.__setattr__(self, "gaps", gaps)
        if not a < b:
            raise InvalidSpec("bounding interval must have positive length")
        prev = a
        for lo, hi in gaps:
            if not lo < hi:
                raise InvalidSpec(f"empty gap ({lo}, {hi})")
            if lo < prev or hi > b:
                raise InvalidSpec(f"gap ({lo}, {hi}) overlaps another gap or leaves the interval")
            prev = hi
        if gaps and (gaps[0][0] == a or gaps[-1][1] == b):
            raise InvalidSpec("gaps must not touch the ends of the bounding interval")

    @classmethod
    def from_json(cls, d: dict) -> "Cantor1D":
        return cls(tuple(d["interval"]), tuple(tuple(g) for g in d["gaps"]))

    def to_json(self) -> dict:
        return {"interval": [float(x) for x in self.interval],
                "gaps": [[float(x) for x in g] for g in self.gaps]}

    def bridges(self) -> list[tuple]:
        """Closed intervals left after removing every listed gap."""
        out, left = [], self.interval[0]
        for lo, hi in self.gaps:
            out.append((left, lo))
            left = hi
        out.append((left, self.interval[1]))
        return out

    def affine_image(self, c, d) -> "Cantor1D":
        """Image under ``x -> c*x + d`` with ``c > 0``."""
        if not c > 0:
            raise InvalidSpec("scale factor must be positive")
        f = lambda x: c * x + d
        return Cantor1D((f(self.interval[0]), f(self.interval[1])),
                        tuple((f(lo), f(hi)) for lo, hi in self.gaps))


def middle_alpha(alpha, depth: int, interval=(0, 1)) -> Cantor1D:
    """The first ``depth`` generations of the middle-``alpha`` Cantor set."""
    if not 0 < alpha < 1:
        raise InvalidSpec("alpha must lie in (0, 1)")
    if depth < 1:
        raise InvalidSpec("depth must be at least 1")
    pieces = [tuple(interval)]
    gaps = []
    for _ in range(depth):
        nxt = []
        for a, b in pieces:
            L = b - a
            g0, g1 = a + (1 - alpha) / 2 * L, b - (1 - alpha) / 2 * L
            gaps.append((g0, g1))
            nxt += [(a, g0), (g1, b)]
        pieces = nxt
    return Cantor1D(tuple(interval), tuple(gaps))


def middle_thirds(depth: int, interval=(Fraction(0), Fraction(1))) -> Cantor1D:
    return middle_alpha(Fraction(1, 3), depth, interval)


def tau(C: Cantor1D):
    """Thickness over the listed gaps.

    For each gap ``I`` the two bridges run to the nearest gap at least as long
    as ``I``; the complement of the bounding interval counts as an infinitely
    long gap.
    """
    if not C.gaps:
        raise NoGaps("thickness needs at least one gap")
    a, b = C.interval
    gaps = C.gaps
    lengths = [hi - lo for lo, hi in gaps]
    best = None
    for k, (lo, hi) in enumerate(gaps):
        ell = lengths[k]
        left = a
        for j in range(k - 1, -1, -1):
            if lengths[j] >= ell:
                left = gaps[j][1]
                break
        right = b
        for j in range(k + 1, len(gaps)):
            if lengths[j] >= ell:
                right = gaps[j][0]
                break
        ratio = min(lo - left, right - hi) / ell
        best = ratio if best is None or ratio < best else best
    return best


class Verdict1D(str, enum.Enum):
    K_IN_GAP_OF_L = "K_in_gap_of_L"
    L_IN_GAP_OF_K = "L_in_gap_of_K"
    MUST_INTERSECT = "MustIntersect"
    INCONCLUSIVE = "Inconclusive"


def _inside_gap(inner: Cantor1D, outer: Cantor1D) -> bool:
    a, b = inner.interval
    lo, hi = outer.interval
    if b < lo or a > hi:
        return True
    return any(g0 < a and b < g1 for g0, g1 in outer.gaps)


def gap_lemma_1d(K: Cantor1D, L: Cantor1D) -> Verdict1D:
    if _inside_gap(K, L):
        return Verdict1D.K_IN_GAP_OF_L
    if _inside_gap(L, K):
        return Verdict1D.L_IN_GAP_OF_K
    if tau(K) * tau(L) >= 1:
        return Verdict1D.MUST_INTERSECT
    return Verdict1D.INCONCLUSIVE


def hausdorff_lower(t) -> float:
    if not t > 0:
        raise NonpositiveTau(f"thickness must be positive, got {t}")
    if math.isinf(t):
        return 1.0
    return math.log(2.0) / math.log(2.0 + 1.0 / float(t))


def bridges_intersect(A: Sequence[tuple], B: Sequence[tuple]) -> bool:
    """Whether two finite unions of closed intervals (each sorted) meet."""
    starts = [lo for lo, _ in B]
    for lo, hi in A:
        k = bisect.bisect_right(starts, hi)
        # the last interval of B starting at or before hi is the only candidate
        if k and B[k - 1][1] >= lo:
            return True
    return False
