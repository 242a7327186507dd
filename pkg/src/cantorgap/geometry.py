"""Planar primitives: points, disks, oriented squares, overlap tests and
certified largest-empty-disk enclosures.

Points are plain Python ``complex`` numbers (``z.real``, ``z.imag``); the
vectorised helpers accept numpy complex arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

import numpy as np
import shapely
from scipy.spatial import cKDTree

from .errors import DegenerateInput, EmptyRegionList, InvalidParams
from .interval import Interval

Point = complex

SQRT2 = math.sqrt(2.0)
# absolute outward slack applied to certified comparisons, relative to the
# diameter of the ambient square
CERT_SLACK = 1e-12


def dist(a: Point, b: Point) -> float:
    return abs(complex(a) - complex(b))


def _check_point(z: Point) -> complex:
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DegenerateInput(f"non-finite point {z!r}")
    return z


@dataclass(frozen=True)
class Disk:
    center: complex
    diameter: float

    def __post_init__(self):
        object.__setattr__(self, "center", _check_point(self.center))
        if not self.diameter > 0.0:
            raise DegenerateInput(f"disk diameter must be positive, got {self.diameter}")

    @property
    def radius(self) -> float:
        return 0.5 * self.diameter

    def contains_point(self, z: Point, slack: float = 0.0) -> bool:
        return abs(complex(z) - self.center) <= self.radius + slack

    def contains_disk(self, other: "Disk", slack: float = 0.0) -> bool:
        return abs(other.center - self.center) + other.radius <= self.radius + slack

    def intersects_disk(self, other: "Disk") -> bool:
        return abs(other.center - self.center) < self.radius + other.radius

    def scaled(self, factor: float) -> "Disk":
        return Disk(self.center, self.diameter * factor)


@dataclass(frozen=True)
class OrientedSquare:
    """Open square given by its center, its diagonal length and a rotation.

    The rotation is the angle of the first side direction with the real axis.
    """

    center: complex
    diameter: float
    rotation: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "center", _check_point(self.center))
        if not self.diameter > 0.0:
            raise DegenerateInput(f"square diameter must be positive, got {self.diameter}")

    @property
    def side(self) -> float:
        return self.diameter / SQRT2

    @property
    def half_side(self) -> float:
        return 0.5 * self.diameter / SQRT2

    @property
    def inscribed_diameter(self) -> float:
        return self.diameter / SQRT2

    @property
    def escribed_diameter(self) -> float:
        return self.diameter

    @property
    def frame(self) -> complex:
        return complex(math.cos(self.rotation), math.sin(self.rotation))

    def to_local(self, z):
        return (z - self.center) * self.frame.conjugate()

    def from_local(self, u):
        return self.center + u * self.frame

    def vertices(self) -> list[complex]:
        h = self.half_side
        return [self.from_local(complex(sx * h, sy * h)) for sx, sy in ((1, 1), (-1, 1), (-1, -1), (1, -1))]

    def contains_point(self, z: Point, slack: float = 0.0) -> bool:
        u = self.to_local(complex(z))
        h = self.half_side + slack
        return abs(u.real) <= h and abs(u.imag) <= h

    def contains_disk(self, disk: Disk, slack: float = 0.0) -> bool:
        u = self.to_local(disk.center)
        h = self.half_side + slack
        return abs(u.real) + disk.radius <= h and abs(u.imag) + disk.radius <= h

    def contains_square(self, other: "OrientedSquare", slack: float = 0.0) -> bool:
        return all(self.contains_point(v, slack) for v in other.vertices())

    def boundary_distance(self, z: Point) -> float:
        """Distance from an interior point to the boundary (0 outside)."""
        u = self.to_local(complex(z))
        return max(0.0, self.half_side - max(abs(u.real), abs(u.imag)))

    def inscribed_disk(self) -> Disk:
        return Disk(self.center, self.inscribed_diameter)

    def escribed_disk(self) -> Disk:
        return Disk(self.center, self.diameter)

    def middle_disk(self) -> Disk:
        return Disk(self.center, 0.5 * self.inscribed_diameter)

    def to_shapely(self):
        return shapely.Polygon([(v.real, v.imag) for v in self.vertices()])


Region = Union[OrientedSquare, Disk]


# ---------------------------------------------------------------------------
# Disk inside the intersection of a disk and a square


def _quarter_incircle(u: complex, radius: float, half_side: float) -> tuple[complex, float]:
    # quarter of the disk of center u turned towards the square's center
    sx = -1.0 if u.real > 0 else 1.0
    sy = -1.0 if u.imag > 0 else 1.0
    rin = radius * (2.0 - SQRT2) / 2.0
    return u + complex(sx * rin, sy * rin), rin


def _toward_center(u: complex, rho: float, half_side: float) -> tuple[complex, float]:
    norm = abs(u)
    if norm == 0.0:
        return 0j, min(half_side, rho)
    m = max(abs(u.real), abs(u.imag))
    s = (rho - half_side + m) / (m + norm)
    s = min(max(s, 0.0), 1.0)
    c = u * (1.0 - s)
    r = min(half_side - (1.0 - s) * m, rho - s * norm)
    return c, r


def quarter_disk_in_square(z: Point, z2: Point, S: OrientedSquare) -> Disk:
    """Disk contained in ``Gamma & S`` where ``Gamma`` is centered at ``z`` with
    ``z2`` on its boundary.

    Two explicit candidates are built: the incircle of the right triangle
    inscribed in a quarter of ``Gamma`` (after shrinking ``Gamma`` by
    ``2*sqrt(2)`` when it is large compared with ``S``), and the largest disk
    centred on the segment from ``z`` to the square's center.  The larger one is
    returned; its diameter is at least ``|z - z2| / (2*sqrt(2) + 2)``.
    """
    z, z2 = _check_point(z), _check_point(z2)
    rho = abs(z - z2)
    if rho == 0.0:
        raise DegenerateInput("z and z2 coincide")
    hs = S.half_side
    u = S.to_local(z)
    if max(abs(u.real), abs(u.imag)) > hs * (1 + 1e-12):
        raise DegenerateInput("z lies outside the square")
    # clamp points sitting on the boundary up to rounding
    u = complex(min(max(u.real, -hs), hs), min(max(u.imag, -hs), hs))
    quarter_radius = rho if rho <= hs else rho / (2.0 * SQRT2)
    c1, r1 = _quarter_incircle(u, quarter_radius, hs)
    c2, r2 = _toward_center(u, rho, hs)
    c, r = (c1, r1) if r1 >= r2 else (c2, r2)
    # shave one part in 1e12 so containment survives rounding
    return Disk(S.from_local(c), 2.0 * r * (1.0 - 1e-12))


def _circle_segment_points(center: complex, radius: float, a: complex, b: complex) -> list[complex]:
    d = b - a
    f = a - center
    A = (d * d.conjugate()).real
    B = 2.0 * (f * d.conjugate()).real
    C = (f * f.conjugate()).real - radius * radius
    disc = B * B - 4.0 * A * C
    if A == 0.0 or disc < 0.0:
        return []
    sq = math.sqrt(disc)
    out = []
    for t in ((-B - sq) / (2 * A), (-B + sq) / (2 * A)):
        if -1e-12 <= t <= 1.0 + 1e-12:
            out.append(a + min(max(t, 0.0), 1.0) * d)
    return out


def hep_disk(outer: Disk, piece: OrientedSquare) -> Disk:
    """Disk inside ``outer & piece`` for a square piece meeting both the
    concentric half-diameter disk of ``outer`` and the complement of ``outer``.

    For similarity pieces the result has diameter at least
    ``outer.diameter / 20`` (in fact ``/ 10``).
    """
    c, R = outer.center, outer.radius
    # point of the closed piece nearest to the center of ``outer``
    u = piece.to_local(c)
    hs = piece.half_side
    z1 = piece.from_local(complex(min(max(u.real, -hs), hs), min(max(u.imag, -hs), hs)))
    if abs(z1 - c) >= 0.5 * R:
        raise DegenerateInput("piece does not meet the inner half disk")
    if all(abs(v - c) < R for v in piece.vertices()):
        raise DegenerateInput("piece lies inside the outer disk")
    # nearest point of (boundary of outer) & closure(piece) to z1
    cands = []
    if abs(z1 - c) > 1e-12 * R:
        w = c + R * (z1 - c) / abs(z1 - c)
        if piece.contains_point(w, slack=1e-12 * piece.diameter):
            cands.append(w)
    else:
        # z1 is (numerically) c: every point of the circle is at distance R, and
        # the one towards a vertex outside the circle is in the piece by convexity
        v = max(piece.vertices(), key=lambda v: abs(v - c))
        cands.append(c + R * (v - c) / abs(v - c))
    if not cands:
        verts = piece.vertices()
        for k in range(4):
            cands.extend(_circle_segment_points(c, R, verts[k], verts[(k + 1) % 4]))
    if not cands:
        raise DegenerateInput("outer circle does not cross the piece")
    z3 = min(cands, key=lambda w: abs(w - z1))
    return quarter_disk_in_square(z1, z3, piece)


# ---------------------------------------------------------------------------
# Exact overlap of open squares (separating axes)


def _square_arrays(c, d, rot):
    c = np.asarray(c, dtype=complex)
    hs = np.asarray(d, dtype=float) / (2.0 * SQRT2)
    e = np.exp(1j * np.asarray(rot, dtype=float))
    return c, hs, e


def overlap_exact_many(ca, da, rota, cb, db, rotb) -> np.ndarray:
    """Vectorised separating-axis test for pairs of open squares."""
    ca, ha, ea = _square_arrays(ca, da, rota)
    cb, hb, eb = _square_arrays(cb, db, rotb)
    ca, ha, ea, cb, hb, eb = np.broadcast_arrays(ca, ha, ea, cb, hb, eb)
    delta = cb - ca
    ok = np.ones(delta.shape, dtype=bool)
    for axis, own_h in ((ea, ha), (1j * ea, ha), (eb, hb), (1j * eb, hb)):
        other_e = eb if own_h is ha else ea
        other_h = hb if own_h is ha else ha
        # projection radius of a square with frame ``other_e`` onto ``axis``
        cosang = np.abs((other_e * np.conj(axis)).real)
        sinang = np.abs((other_e * np.conj(axis)).imag)
        reach = own_h + other_h * (cosang + sinang)
        sep = np.abs((delta * np.conj(axis)).real)
        ok &= sep < reach
    return ok


def overlap_exact(A: OrientedSquare, B: OrientedSquare) -> bool:
    """True iff the open squares ``A`` and ``B`` intersect."""
    return bool(overlap_exact_many(A.center, A.diameter, A.rotation, B.center, B.diameter, B.rotation))


# ---------------------------------------------------------------------------
# Distance to a union of squares and disks


class RegionSet:
    """Array form of a list of squares and disks with exact point distances."""

    def __init__(self, regions: Iterable[Region] = (), *, sq_center=None, sq_half=None,
                 sq_rot=None, dk_center=None, dk_radius=None):
        sqs = [r for r in regions if isinstance(r, OrientedSquare)]
        dks = [r for r in regions if isinstance(r, Disk)]
        if sq_center is None:
            sq_center = [s.center for s in sqs]
            sq_half = [s.half_side for s in sqs]
            sq_rot = [s.rotation for s in sqs]
        if dk_center is None:
            dk_center = [d.center for d in dks]
            dk_radius = [d.radius for d in dks]
        self.sq_center = np.asarray(sq_center, dtype=complex).ravel()
        self.sq_half = np.broadcast_to(np.asarray(sq_half, dtype=float), self.sq_center.shape).copy()
        self.sq_frame = np.exp(-1j * np.broadcast_to(np.asarray(sq_rot, dtype=float), self.sq_center.shape))
        self.dk_center = np.asarray(dk_center, dtype=complex).ravel()
        self.dk_radius = np.broadcast_to(np.asarray(dk_radius, dtype=float), self.dk_center.shape).copy()
        if len(self) == 0:
            raise EmptyRegionList("no regions given")
        self._centers = np.concatenate([self.sq_center, self.dk_center])
        self._circ = np.concatenate([self.sq_half * SQRT2, self.dk_radius])
        self._tree = cKDTree(np.column_stack([self._centers.real, self._centers.imag]))

    def __len__(self) -> int:
        return self.sq_center.size + self.dk_center.size

    def _dist_to(self, pts: np.ndarray, idx: np.ndarray) -> np.ndarray:
        """Exact distances ``pts[k] -> region idx[k]`` (broadcasting)."""
        nsq = self.sq_center.size
        out = np.empty(np.broadcast(pts, idx).shape)
        pts, idx = np.broadcast_arrays(pts, idx)
        is_sq = idx < nsq
        if is_sq.any():
            j = idx[is_sq]
            u = (pts[is_sq] - self.sq_center[j]) * self.sq_frame[j]
            dx = np.maximum(np.abs(u.real) - self.sq_half[j], 0.0)
            dy = np.maximum(np.abs(u.imag) - self.sq_half[j], 0.0)
            out[is_sq] = np.hypot(dx, dy)
        if (~is_sq).any():
            j = idx[~is_sq] - nsq
            out[~is_sq] = np.maximum(np.abs(pts[~is_sq] - self.dk_center[j]) - self.dk_radius[j], 0.0)
        return out

    def distance(self, points) -> np.ndarray:
        """Exact distance from each point to the union of the regions."""
        pts = np.atleast_1d(np.asarray(points, dtype=complex)).ravel()
        if pts.size == 0:
            return np.zeros(0)
        n = len(self)
        k = min(8, n)
        xy = np.column_stack([pts.real, pts.imag])
        cd, ci = self._tree.query(xy, k=k)
        cd = cd.reshape(len(pts), k)
        ci = ci.reshape(len(pts), k)
        d = self._dist_to(pts[:, None], ci).min(axis=1)
        if k == n:
            return d
        # regions outside the k nearest centers can only be closer if their
        # center lies within d + (largest circumradius)
        unsure = np.nonzero(cd[:, -1] <= d + self._circ.max())[0]
        for m in unsure:
            cand = self._tree.query_ball_point(xy[m], d[m] + self._circ.max())
            if cand:
                d[m] = min(d[m], self._dist_to(pts[m], np.asarray(cand)).min())
        return d

    def buffered(self, t: float, quad_segs: int):
        """Shapely polygons inscribed in the ``t``-neighbourhoods of the regions."""
        polys = []
        if self.sq_center.size:
            frame = np.conj(self.sq_frame)
            corners = np.array([1 + 1j, -1 + 1j, -1 - 1j, 1 - 1j])
            v = self.sq_center[:, None] + self.sq_half[:, None] * corners[None, :] * frame[:, None]
            coords = np.stack([v.real, v.imag], axis=-1)
            sq = shapely.polygons(coords)
            polys.append(shapely.buffer(sq, t, quad_segs=quad_segs))
        if self.dk_center.size:
            pts = shapely.points(self.dk_center.real, self.dk_center.imag)
            polys.append(shapely.buffer(pts, self.dk_radius + t, quad_segs=quad_segs))
        return np.concatenate(polys)


# ---------------------------------------------------------------------------
# Largest empty disk


@dataclass(frozen=True)
class EmptyDiskResult:
    """Enclosure of ``2 * max_{z in S} dist(z, regions)`` and a witness point.

    ``witness`` attains the lower endpoint: ``2 * dist(witness, regions) == rho.lo``.
    """

    rho: Interval
    witness: complex
    grid_pitch: float
    # best point found by the h-independent cover stage, if it ran
    cover_witness: Optional[complex] = None


def _dyadic_grid(S: OrientedSquare, h: float) -> tuple[np.ndarray, int]:
    levels = max(0, math.ceil(math.log2(S.side / h)))
    n = 2 ** levels
    t = (np.arange(n + 1) / n - 0.5) * S.side
    X, Y = np.meshgrid(t, t, indexing="ij")
    return S.from_local(X + 1j * Y), n


def _grid_enclosure(S: OrientedSquare, rs: RegionSet, h: float):
    """Lipschitz enclosure of the max distance (radius units) on nested dyadic grids."""
    nodes, n = _dyadic_grid(S, h)
    vals = rs.distance(nodes.ravel()).reshape(nodes.shape)
    flat = int(np.argmax(vals))
    lo = float(vals.ravel()[flat])
    witness = complex(nodes.ravel()[flat])
    # every point of S is within pitch*sqrt(2)/2 of a node; the bound is taken
    # as a min over all coarser nested grids so refining never widens it
    hi = math.inf
    step = 1
    while step <= n:
        pitch = S.side * step / n
        hi = min(hi, float(vals[::step, ::step].max()) + pitch * SQRT2 / 2.0)
        step *= 2
    return lo, hi, witness, S.side / n


def _coverage_enclosure(S: OrientedSquare, rs: RegionSet, rtol: float, max_iter: int,
                        quad_segs: int = 4):
    """Bisection on t with the certificate ``S subset union of t-buffers``.

    Buffers are polygons inscribed in the true t-neighbourhoods, so a
    successful cover proves ``max dist <= t``.  Lower bounds only ever come
    from exact distance evaluations at explicit points.
    """
    probe, _ = _dyadic_grid(S, S.side / 64)
    vals = rs.distance(probe.ravel())
    k = int(np.argmax(vals))
    lo, witness = float(vals[k]), complex(probe.ravel()[k])
    hi = lo + (S.side / 64) * SQRT2 / 2.0
    S_poly = S.to_shapely()
    floor = CERT_SLACK * S.diameter
    for _ in range(max_iter):
        if hi <= floor or hi <= lo * (1.0 + rtol):
            break
        t = math.sqrt(lo * hi) if lo > 0 else hi / 8.0
        cover = shapely.union_all(rs.buffered(t, quad_segs))
        residual = S_poly.difference(cover)
        if residual.is_empty:
            hi = t
            continue
        parts = shapely.get_parts(residual)
        reps = np.concatenate([
            shapely.get_coordinates(shapely.point_on_surface(parts)),
            shapely.get_coordinates(shapely.centroid(parts)),
        ])
        pts = reps[:, 0] + 1j * reps[:, 1]
        pts = pts[[S.contains_point(p) for p in pts]]
        improved = False
        if pts.size:
            v = rs.distance(pts)
            j = int(np.argmax(v))
            if v[j] > lo:
                lo, witness = float(v[j]), complex(pts[j])
                improved = True
        if not improved:
            # residual consists of rounding slivers only; t stays uncertified
            break
    return lo, hi, witness


def empty_disk_search(S: OrientedSquare, regions, h: float, *, rtol: float = 1e-2,
                      max_iter: int = 40, coverage: bool = True) -> EmptyDiskResult:
    """Certified enclosure of ``rho = 2 * max_{z in S} dist(z, union(regions))``.

    ``regions`` is a sequence of squares/disks or a ready :class:`RegionSet`.
    The result combines a dyadic grid of pitch at most ``h`` (1-Lipschitz
    slack) with a buffered-cover certificate that does not depend on ``h``.
    """
    if not h > 0.0:
        raise InvalidParams("grid pitch h must be positive")
    rs = regions if isinstance(regions, RegionSet) else RegionSet(list(regions))
    lo, hi, witness, pitch = _grid_enclosure(S, rs, h)
    cw = None
    if coverage:
        clo, chi, cw = _coverage_enclosure(S, rs, rtol, max_iter)
        if clo > lo:
            lo, witness = clo, cw
        hi = min(hi, chi)
    hi = max(hi, lo) + CERT_SLACK * S.diameter
    return EmptyDiskResult(Interval(2.0 * lo, 2.0 * hi), witness, pitch, cw)


def largest_empty_disk(S: OrientedSquare, regions: Sequence[Region], h: float) -> Interval:
    """Enclosure of the diameter of the largest disk centred in ``S`` that misses
    every region."""
    return empty_disk_search(S, regions, h).rho
