"""Iterated function systems on a square, words and pieces.

A word ``(i1, ..., ik)`` (0-based map indices) denotes the composition
``f_ik o ... o f_i1``: the first digit is applied first.  The sons of the
piece ``f_I(S)`` are ``f_I(f_i(S))``, i.e. the word ``(i,) + I``.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np
from scipy.spatial import cKDTree

from .errors import BudgetExceeded, DomainEscape, InvalidSpec
from .geometry import OrientedSquare, overlap_exact_many
from .interval import Interval

Word = tuple[int, ...]

DEFAULT_BUDGET = 10**7


def piece_budget() -> int:
    env = os.environ.get("CANTOR_GAP_BUDGET")
    return int(float(env)) if env else DEFAULT_BUDGET


@dataclass(frozen=True)
class AffineMap:
    """The similarity ``z -> a*z + b``."""

    a: complex
    b: complex
    kind = "affine"

    def __post_init__(self):
        object.__setattr__(self, "a", complex(self.a))
        object.__setattr__(self, "b", complex(self.b))
        if not abs(self.a) < 1.0 or self.a == 0:
            raise InvalidSpec(f"affine multiplier must satisfy 0 < |a| < 1, got {self.a}")

    def __call__(self, z):
        return self.a * z + self.b

    def deriv(self, z):
        return self.a + 0 * z


@dataclass(frozen=True)
class GeneralMap:
    """Holomorphic contraction given by vectorised evaluators of f and f'.

    Univalence on the extension disk is declared by the caller, not proved.
    """

    f: Callable
    df: Callable
    label: str = "general"
    kind = "general"

    def __call__(self, z):
        return self.f(z)

    def deriv(self, z):
        return self.df(z)


ContractionMap = Union[AffineMap, GeneralMap]


@dataclass(frozen=True)
class IfsSpec:
    square: OrientedSquare
    maps: tuple
    extension_ratio: float
    require_disjoint: bool = field(default=True, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "maps", tuple(self.maps))
        if self.square.center != 0:
            raise InvalidSpec("the initial square must be centred at 0")
        if len(self.maps) < 2:
            raise InvalidSpec("an IFS needs at least two maps")
        if not 0.0 < self.extension_ratio < 1.0:
            raise InvalidSpec("extension_ratio must lie in (0, 1)")
        self._check_containment()
        if self.require_disjoint and self.all_affine:
            pairs = self.overlapping_images()
            if pairs:
                raise InvalidSpec(f"images of maps {pairs[0]} overlap")

    # -- basic properties -------------------------------------------------

    @property
    def p(self) -> int:
        return len(self.maps)

    @property
    def all_affine(self) -> bool:
        return all(m.kind == "affine" for m in self.maps)

    @property
    def delta_S(self) -> float:
        return self.square.inscribed_diameter

    @property
    def Delta_S(self) -> float:
        return self.square.diameter

    @property
    def extension_radius(self) -> float:
        return 0.5 * self.square.diameter / self.extension_ratio

    @property
    def multipliers(self) -> np.ndarray:
        return np.array([m.a for m in self.maps], dtype=complex)

    @property
    def translations(self) -> np.ndarray:
        return np.array([m.b for m in self.maps], dtype=complex)

    def image_squares(self) -> list[OrientedSquare]:
        if not self.all_affine:
            raise TypeError("image squares exist only for affine systems")
        S = self.square
        return [OrientedSquare(m.b, abs(m.a) * S.diameter, S.rotation + math.atan2(m.a.imag, m.a.real))
                for m in self.maps]

    # -- validation -------------------------------------------------------

    def _check_containment(self):
        S = self.square
        if self.all_affine:
            a, b = self.multipliers, self.translations
            corners = np.array([v for v in S.vertices()])
            img = a[:, None] * corners[None, :] + b[:, None]
            u = S.to_local(img)
            if not (np.maximum(np.abs(u.real), np.abs(u.imag)) < S.half_side).all():
                bad = int(np.argmax(np.maximum(np.abs(u.real), np.abs(u.imag)).max(axis=1)))
                raise InvalidSpec(f"image of map {bad} is not compactly inside the square")
            return
        # general maps: f_i(S') must sit inside S with a margin, checked on a
        # boundary sample of S'
        margin = 1e-6 * self.delta_S
        theta = np.linspace(0.0, 2 * np.pi, 512, endpoint=False)
        ring = self.extension_radius * np.exp(1j * theta)
        for k, m in enumerate(self.maps):
            u = S.to_local(np.asarray(m(ring) if m.kind == "general" else m(ring)))
            if not (np.maximum(np.abs(u.real), np.abs(u.imag)) < S.half_side - margin).all():
                raise InvalidSpec(f"map {k} does not send the extension disk into the square")

    def overlapping_images(self) -> list[tuple[int, int]]:
        sq = self.image_squares()
        c = np.array([s.center for s in sq])
        d = np.array([s.diameter for s in sq])
        rot = np.array([s.rotation for s in sq])
        tree = cKDTree(np.column_stack([c.real, c.imag]))
        pairs = tree.query_pairs(d.max(), output_type="ndarray")
        if len(pairs) == 0:
            return []
        i, j = pairs[:, 0], pairs[:, 1]
        hit = overlap_exact_many(c[i], d[i], rot[i], c[j], d[j], rot[j])
        return sorted((int(x), int(y)) for x, y in pairs[hit])


@dataclass(frozen=True)
class Piece:
    word: Word
    center: complex
    deriv: complex
    delta: Interval
    Delta: Interval
    polygon: Optional[OrientedSquare] = None

    @property
    def depth(self) -> int:
        return len(self.word)


# ---------------------------------------------------------------------------


def evaluate(spec: IfsSpec, w: Sequence[int], z: complex) -> complex:
    R = spec.extension_radius * (1 + 1e-12)
    z = complex(z)
    for i in w:
        if abs(z) > R:
            raise DomainEscape(f"point {z} left the extension disk")
        z = complex(spec.maps[i](z))
    return z


def derivative_at(spec: IfsSpec, w: Sequence[int], z: complex) -> complex:
    R = spec.extension_radius * (1 + 1e-12)
    z = complex(z)
    d = 1 + 0j
    for i in w:
        if abs(z) > R:
            raise DomainEscape(f"point {z} left the extension disk")
        m = spec.maps[i]
        d *= complex(m.deriv(z))
        z = complex(m(z))
    return d


def compose_affine(spec: IfsSpec, w: Sequence[int]) -> tuple[complex, complex]:
    a, b = 1 + 0j, 0j
    for i in w:
        m = spec.maps[i]
        a, b = m.a * a, m.a * b + m.b
    return a, b


def piece_of(spec: IfsSpec, w: Sequence[int], D: Interval) -> Piece:
    w = tuple(int(i) for i in w)
    S = spec.square
    if spec.all_affine:
        a, b = compose_affine(spec, w)
        poly = OrientedSquare(b, abs(a) * S.diameter, S.rotation + math.atan2(a.imag, a.real))
        return Piece(w, b, a, Interval.point(poly.inscribed_diameter), Interval.point(poly.diameter), poly)
    center = evaluate(spec, w, 0j)
    d = derivative_at(spec, w, 0j)
    k = abs(d)
    # mean value inequality: the sizes lie within a factor D of k * size(S)
    delta = Interval((k * spec.delta_S / D).lo, (k * spec.delta_S * D).hi)
    Delta = Interval((k * spec.Delta_S / D).lo, (k * spec.Delta_S * D).hi)
    return Piece(w, center, d, delta, Delta, None)


def children(spec: IfsSpec, P: Piece, D: Interval) -> list[Piece]:
    return [piece_of(spec, (i,) + P.word, D) for i in range(spec.p)]


def enumerate_depth(spec: IfsSpec, n: int, D: Interval, budget: Optional[int] = None) -> list[Piece]:
    budget = piece_budget() if budget is None else budget
    if spec.p ** n > budget:
        raise BudgetExceeded(f"{spec.p}^{n} pieces exceed the budget of {budget}")
    frontier: list[Word] = [()]
    for _ in range(n):
        frontier = [(i,) + w for i in range(spec.p) for w in frontier]
    return [piece_of(spec, w, D) for w in frontier]


def affine_level(spec: IfsSpec, n: int, budget: Optional[int] = None) -> tuple[np.ndarray, np.ndarray]:
    """Multipliers and translations of all ``f_I`` with ``|I| = n``.

    Entry ``k`` corresponds to the word ``np.unravel_index(k, (p,)*n)``.
    """
    budget = piece_budget() if budget is None else budget
    if spec.p ** n > budget:
        raise BudgetExceeded(f"{spec.p}^{n} pieces exceed the budget of {budget}")
    a_i, b_i = spec.multipliers, spec.translations
    A = np.ones(1, dtype=complex)
    B = np.zeros(1, dtype=complex)
    for _ in range(n):
        A, B = (A[None, :] * a_i[:, None]).ravel(), (A[None, :] * b_i[:, None] + B[None, :]).ravel()
    return A, B


def level_word(spec: IfsSpec, n: int, k: int) -> Word:
    return tuple(int(i) for i in np.unravel_index(k, (spec.p,) * n)) if n else ()
