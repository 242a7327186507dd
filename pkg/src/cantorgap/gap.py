"""Certificates that two dynamical Cantor sets intersect.

Two independent procedures are provided:

* :func:`intersect_constructive` follows the inductive construction of a
  sequence of points of ``K`` lying in middle inscribed disks of ever smaller
  pieces of ``L`` (similarity systems only);
* :func:`intersect_oracle` searches depth first for nested pairs of
  overlapping pieces, testing overlap exactly on polygons.

Deep pieces are far below float resolution in absolute coordinates, so every
test is carried out in the frame of the current ``L``-piece.  The relative
maps ``g_J^{-1} o f_I`` are composed in exact rational arithmetic and rounded
only once.
"""

from __future__ import annotations

import enum
import heapq
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
import shapely
from scipy.spatial import cKDTree

from .errors import (BudgetExceeded, CaseSelectionAmbiguous, ContainmentLost, HypothesisViolated,
                     MismatchedSquares)
from .geometry import SQRT2, Disk, OrientedSquare, RegionSet, _dyadic_grid, empty_disk_search, overlap_exact_many
from .ifs import IfsSpec, Word, piece_budget, piece_of
from .invariants import InvariantReport, Verdict, thickness, well_balanced

CERTIFIED = "CertifiedNonempty"
INCONCLUSIVE = "InconclusiveAtDepth"

# relative shrink applied to squares before an overlap is accepted, so that a
# float-rounded relative frame cannot manufacture an overlap
OVERLAP_MARGIN = 1e-9


class RobustVerdict(str, enum.Enum):
    ROBUST = "RobustIntersection"
    NOT_CERTIFIED = "NotCertified"


@dataclass(frozen=True)
class ChainLink:
    k_word: Word
    l_word: Word
    alpha_region: Disk
    overlap_witness: complex


@dataclass(frozen=True)
class IntersectionCertificate:
    chain: tuple
    final_diameter: float
    method: str
    verdict: str
    roles_swapped: bool = False

    @property
    def depth(self) -> int:
        return len(self.chain)

    def to_json(self) -> dict:
        return {
            "method": self.method,
            "verdict": self.verdict,
            "roles_swapped": self.roles_swapped,
            "chain": [
                {
                    "k_word": list(c.k_word),
                    "l_word": list(c.l_word),
                    "alpha_center": [c.alpha_region.center.real, c.alpha_region.center.imag],
                    "alpha_diameter": c.alpha_region.diameter,
                    "witness": [c.overlap_witness.real, c.overlap_witness.imag],
                }
                for c in self.chain
            ],
            "final_diameter": self.final_diameter,
        }


# ---------------------------------------------------------------------------
# Exact similarity maps z -> A z + B with Fraction coordinates

XC = tuple  # (Fraction re, Fraction im)


def _xc(z: complex) -> XC:
    return (Fraction(z.real), Fraction(z.imag))


def _mul(u: XC, v: XC) -> XC:
    return (u[0] * v[0] - u[1] * v[1], u[0] * v[1] + u[1] * v[0])


def _add(u: XC, v: XC) -> XC:
    return (u[0] + v[0], u[1] + v[1])


def _sub(u: XC, v: XC) -> XC:
    return (u[0] - v[0], u[1] - v[1])


def _div(u: XC, v: XC) -> XC:
    n = v[0] * v[0] + v[1] * v[1]
    return ((u[0] * v[0] + u[1] * v[1]) / n, (u[1] * v[0] - u[0] * v[1]) / n)


def _fl(u: XC) -> complex:
    return complex(float(u[0]), float(u[1]))


class ExactWords:
    """Exact maps ``f_I`` of an affine system, cached by word."""

    def __init__(self, spec: IfsSpec):
        self.spec = spec
        self.a = [_xc(m.a) for m in spec.maps]
        self.b = [_xc(m.b) for m in spec.maps]
        self._cache: dict = {(): ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(0)))}

    def __call__(self, w: Word):
        w = tuple(w)
        got = self._cache.get(w)
        if got is not None:
            return got
        A, B = self(w[1:])
        # f_{(i,)+I} = f_I o f_i
        i = w[0]
        out = (_mul(A, self.a[i]), _add(_mul(A, self.b[i]), B))
        if len(self._cache) < 200_000:
            self._cache[w] = out
        return out


def relative_map(EK: ExactWords, I: Word, EL: ExactWords, J: Word) -> tuple[complex, complex]:
    """Float coefficients of ``g_J^{-1} o f_I``, rounded once from exact values."""
    Af, Bf = EK(I)
    Ag, Bg = EL(J)
    return _fl(_div(Af, Ag)), _fl(_div(_sub(Bf, Bg), Ag))


def _abs_ratio(EK: ExactWords, I: Word, EL: ExactWords, J: Word) -> float:
    Af, _ = EK(I)
    Ag, _ = EL(J)
    return abs(_fl(_div(Af, Ag)))


def _to_global(EL: ExactWords, J: Word, z: complex) -> complex:
    A, B = EL(J)
    return _fl(_add(_mul(A, _xc(z)), B))


def _global_scale(EL: ExactWords, J: Word) -> float:
    A, _ = EL(J)
    return abs(_fl(A))


# ---------------------------------------------------------------------------
# Son arrays in a relative frame


@dataclass
class _Sons:
    center: np.ndarray
    diam: np.ndarray
    rot: np.ndarray


def _sons(spec: IfsSpec, A: complex = 1.0, B: complex = 0.0) -> _Sons:
    """Sons of the piece ``z -> A z + B`` applied to the square of ``spec``."""
    a, b = spec.multipliers, spec.translations
    S = spec.square
    return _Sons(B + A * b, np.abs(A * a) * S.diameter, S.rotation + np.angle(A * a))


def _square_vertices(c, diam, rot) -> np.ndarray:
    h = np.asarray(diam) / (2 * SQRT2)
    corners = np.array([1 + 1j, -1 + 1j, -1 - 1j, 1 - 1j])
    return np.asarray(c)[..., None] + (h * np.exp(1j * np.asarray(rot)))[..., None] * corners


def _overlap_witness(ca, da, ra, cb, db, rb) -> complex:
    pa = shapely.Polygon([(v.real, v.imag) for v in _square_vertices(ca, da, ra)])
    pb = shapely.Polygon([(v.real, v.imag) for v in _square_vertices(cb, db, rb)])
    p = pa.intersection(pb).representative_point()
    if p.is_empty:
        return 0.5 * (ca + cb)
    return complex(p.x, p.y)


# ---------------------------------------------------------------------------
# Oracle


def _check_same_square(K: IfsSpec, L: IfsSpec):
    a, b = K.square, L.square
    if not (a.center == b.center and math.isclose(a.diameter, b.diameter, rel_tol=1e-12)
            and math.isclose(a.rotation, b.rotation, abs_tol=1e-12)):
        raise MismatchedSquares("K and L must share the initial square")


def _pair_candidates(K: IfsSpec, L: IfsSpec, M: tuple[complex, complex], lsons: _Sons,
                     ltree: cKDTree, prefer: Optional[int]):
    ks = _sons(K, *M)
    radii = 0.5 * (ks.diam + lsons.diam.max())
    xy = np.column_stack([ks.center.real, ks.center.imag])
    hits = ltree.query_ball_point(xy, radii)
    ii = np.fromiter((i for i, h in enumerate(hits) for _ in h), dtype=np.int64)
    jj = np.fromiter((j for h in hits for j in h), dtype=np.int64)
    if ii.size == 0:
        return []
    shrink = 1.0 - OVERLAP_MARGIN
    ok = overlap_exact_many(ks.center[ii], ks.diam[ii] * shrink, ks.rot[ii],
                            lsons.center[jj], lsons.diam[jj] * shrink, lsons.rot[jj])
    ii, jj = ii[ok], jj[ok]
    gap = np.abs(ks.center[ii] - lsons.center[jj]) / (ks.diam[ii] + lsons.diam[jj])
    pref = np.zeros(ii.size) if prefer is None else (jj != prefer).astype(float)
    order = np.lexsort((jj, ii, gap, pref))
    return [(int(ii[k]), int(jj[k])) for k in order]


def intersect_oracle(K: IfsSpec, L: IfsSpec, max_depth: int = 10, *,
                     prefer_l_word: Optional[Sequence[int]] = None,
                     node_budget: Optional[int] = None,
                     tol: Optional[float] = None) -> IntersectionCertificate:
    """Depth-first search for a nested chain of overlapping piece pairs.

    Both pieces are split at every step.  Candidate son pairs are ordered by
    the normalised distance of their centers (deepest overlap first) with a
    lexicographic tie-break, so the result is deterministic.  When
    ``prefer_l_word`` is given the search follows that branch of ``L`` when it
    can.  For similarity systems a chain reaching ``max_depth`` whose final
    pieces are smaller than ``tol`` is reported as ``CertifiedNonempty``.
    """
    _check_same_square(K, L)
    budget = piece_budget() if node_budget is None else node_budget
    tol = 1e-6 * K.square.diameter if tol is None else tol
    if not (K.all_affine and L.all_affine):
        return _oracle_general(K, L, max_depth, budget)
    EK, EL = ExactWords(K), ExactWords(L)
    lsons = _sons(L)
    ltree = cKDTree(np.column_stack([lsons.center.real, lsons.center.imag]))
    hint = tuple(prefer_l_word) if prefer_l_word is not None else None

    def prefer_for(J: Word) -> Optional[int]:
        d = len(J) + 1
        if hint is None or len(hint) < d or hint[len(hint) - len(J):] != J:
            return None
        return hint[len(hint) - d]

    best: list = []
    path: list = []
    stack = [iter(_pair_candidates(K, L, ((1 + 0j), 0j), lsons, ltree, prefer_for(())))]
    words = [((), ())]
    expanded = 0
    while stack:
        nxt = next(stack[-1], None)
        if nxt is None:
            stack.pop()
            words.pop()
            if path:
                path.pop()
            continue
        i, j = nxt
        I0, J0 = words[-1]
        I, J = (i,) + I0, (j,) + J0
        path.append((I, J))
        if len(path) > len(best):
            best = list(path)
        if len(path) >= max_depth:
            break
        expanded += 1
        if expanded > budget:
            raise BudgetExceeded(f"oracle expanded more than {budget} piece pairs")
        M = relative_map(EK, I, EL, J)
        stack.append(iter(_pair_candidates(K, L, M, lsons, ltree, prefer_for(J))))
        words.append((I, J))
    chain = tuple(_oracle_link(K, L, EK, EL, I, J) for I, J in best)
    final = _final_diameter(K, L, EK, EL, best)
    ok = len(chain) >= max_depth and final <= tol
    return IntersectionCertificate(chain, final, "oracle", CERTIFIED if ok else INCONCLUSIVE)


def _final_diameter(K, L, EK, EL, chain) -> float:
    if not chain:
        return K.square.diameter
    I, J = chain[-1]
    return max(_global_scale(EK, I), _global_scale(EL, J)) * K.square.diameter


def _oracle_link(K, L, EK, EL, I, J) -> ChainLink:
    S = L.square
    A, B = relative_map(EK, I, EL, J)
    w = _overlap_witness(B, abs(A) * S.diameter, S.rotation + np.angle(A), 0j, S.diameter, S.rotation)
    # the overlap lies in the escribed disk of the smaller piece
    if abs(A) <= 1.0:
        c, d = B, abs(A) * S.diameter
    else:
        c, d = 0j, S.diameter
    s = _global_scale(EL, J)
    return ChainLink(I, J, Disk(_to_global(EL, J, c), d * s), _to_global(EL, J, w))


def _oracle_general(K: IfsSpec, L: IfsSpec, max_depth: int, budget: int) -> IntersectionCertificate:
    """Conservative search on escribed disks; never certifies."""
    from .invariants import distortion
    DK, DL = distortion(K), distortion(L)

    def pieces(spec, D, w):
        return [piece_of(spec, (i,) + w, D) for i in range(spec.p)]

    best: list = []
    path: list = []
    stack = [iter(_general_pairs(pieces(K, DK, ()), pieces(L, DL, ())))]
    expanded = 0
    while stack:
        nxt = next(stack[-1], None)
        if nxt is None:
            stack.pop()
            if path:
                path.pop()
            continue
        P, Q = nxt
        path.append((P, Q))
        if len(path) > len(best):
            best = list(path)
        if len(path) >= max_depth:
            break
        expanded += 1
        if expanded > budget:
            raise BudgetExceeded(f"oracle expanded more than {budget} piece pairs")
        stack.append(iter(_general_pairs(pieces(K, DK, P.word), pieces(L, DL, Q.word))))
    chain = tuple(
        ChainLink(P.word, Q.word, Disk(P.center, P.Delta.hi), 0.5 * (P.center + Q.center))
        for P, Q in best)
    final = max(best[-1][0].Delta.hi, best[-1][1].Delta.hi) if best else K.square.diameter
    return IntersectionCertificate(chain, final, "oracle", INCONCLUSIVE)


def _general_pairs(kp, lp):
    out = []
    for P in kp:
        for Q in lp:
            gap = abs(P.center - Q.center)
            if gap < 0.5 * (P.Delta.hi + Q.Delta.hi):
                out.append((gap / (P.Delta.hi + Q.Delta.hi), P.word, Q.word, P, Q))
    out.sort(key=lambda t: t[:3])
    return [(t[3], t[4]) for t in out]


# ---------------------------------------------------------------------------
# Robust intersection


def _reports(K, L, reports):
    if reports is None:
        return thickness(K, depth=1), thickness(L, depth=1)
    return reports


def robust_check(K: IfsSpec, L: IfsSpec,
                 reports: Optional[tuple[InvariantReport, InvariantReport]] = None) -> RobustVerdict:
    _check_same_square(K, L)
    rK, rL = _reports(K, L, reports)
    if well_balanced(rK, rL) is Verdict.CERTIFIED and rK.thickness.lo * rL.thickness.lo > 1.0:
        return RobustVerdict.ROBUST
    return RobustVerdict.NOT_CERTIFIED


# ---------------------------------------------------------------------------
# Constructive chain


@dataclass
class _LFrameData:
    """Quantities of ``L`` in the frame of its own initial square.

    By self-similarity they are the same for every piece ``P`` of ``L`` once
    pulled back to the square.
    """

    sons: _Sons
    son_delta: np.ndarray
    rho_lo: float
    rho_hi: float
    D2: float
    cdisks: Optional[tuple] = None  # (x, rho_tilde interval, diameters)


def _local_rho_lo(L: IfsSpec, witness: complex) -> float:
    # dist(z, L) >= min(dist(z, sons of P), dist(z, boundary of P)) for z in P
    S = L.square
    sons = RegionSet(L.image_squares())
    nodes, _ = _dyadic_grid(S, S.side / 128)
    pts = np.concatenate([nodes.ravel(), [witness]])
    bd = S.half_side - np.maximum(np.abs(S.to_local(pts).real), np.abs(S.to_local(pts).imag))
    return 2.0 * float(np.minimum(sons.distance(pts), np.maximum(bd, 0.0)).max())


def _lframe(L: IfsSpec, rep: InvariantReport) -> _LFrameData:
    sons = _sons(L)
    gap = rep.gap
    if gap is None:
        from .invariants import gap_sigma
        gap = gap_sigma(L, rep.D, depth=1)
    return _LFrameData(sons, sons.diam / SQRT2, _local_rho_lo(L, gap.witness), gap.rho.hi,
                       rep.D.hi ** 2)


def _c_disks(L: IfsSpec, fr: _LFrameData, tol: float = 1e-9):
    """Choose ``x`` and return ``(x, rho_tilde, diameters)`` for the disks C_j^x."""
    if fr.cdisks is not None:
        return fr.cdisks
    S = L.square
    h = S.side / 128

    def rho_tilde(x):
        diam = 0.5 * x * fr.son_delta
        disks = [Disk(c, d) for c, d in zip(fr.sons.center, diam)]
        return empty_disk_search(S, disks, h).rho, diam

    rt, diam = rho_tilde(1.0)
    x = 1.0
    if diam.max() > rt.lo:
        lo, hi = 0.0, 1.0
        while hi - lo > tol:
            x = 0.5 * (lo + hi)
            rt, diam = rho_tilde(x)
            if diam.max() <= rt.lo:
                lo = x
            else:
                hi = x
        x = lo
        rt, diam = rho_tilde(x)
    fr.cdisks = (x, rt, diam)
    return fr.cdisks


def _kpiece_in_disk(K: IfsSpec, M: tuple[complex, complex], word: Word, target: Disk,
                    budget: int) -> tuple[Word, tuple[complex, complex]]:
    """Best-first search below the K-piece ``(word, M)`` for a descendant
    contained in ``target`` (all in the current frame)."""
    a, b = K.multipliers, K.translations
    S = K.square
    heap = [(0.0, word, M)]
    seen = 0
    while heap:
        _, w, (A, B) = heapq.heappop(heap)
        seen += 1
        if seen > budget:
            break
        cA = A * a
        cent = B + A * b
        diam = np.abs(cA) * S.diameter
        verts = _square_vertices(cent, diam, S.rotation + np.angle(cA))
        far = np.abs(verts - target.center).max(axis=1)
        inside = np.nonzero(far <= target.radius * (1 - OVERLAP_MARGIN))[0]
        if inside.size:
            k = int(inside[np.argmin(np.abs(cent[inside] - target.center))])
            return (k,) + w, (cA[k], cent[k])
        near = np.abs(cent - target.center) - 0.5 * diam < target.radius
        for k in np.nonzero(near)[0]:
            heapq.heappush(heap, (float(abs(cent[k] - target.center)), (int(k),) + w, (cA[k], cent[k])))
    raise ContainmentLost("no piece of K found inside the target disk")


def intersect_constructive(K: IfsSpec, L: IfsSpec,
                           reports: Optional[tuple[InvariantReport, InvariantReport]] = None,
                           max_depth: int = 10, *, node_budget: int = 200_000) -> IntersectionCertificate:
    """Build ``alpha_n in K`` inside the middle inscribed disk of a piece of
    ``L_n`` for ``n = 1..max_depth``.

    Each link records a piece of ``K`` (a proxy for ``alpha_n``) contained in
    the disk ``alpha_region``, which lies in the middle inscribed disk of the
    ``L``-piece ``l_word``.  The ``L``-pieces are nested; the ``K``-pieces need
    not be, since ``alpha_{n+1}`` may differ from ``alpha_n``.
    """
    _check_same_square(K, L)
    if not (K.all_affine and L.all_affine):
        return IntersectionCertificate((), K.square.diameter, "constructive", INCONCLUSIVE)
    rK, rL = _reports(K, L, reports)
    wb = well_balanced(rK, rL)
    if wb is not Verdict.CERTIFIED:
        raise HypothesisViolated(f"well-balanced test returned {wb.value}")
    if rK.thickness.lo * rL.thickness.lo < 1.0:
        raise HypothesisViolated("thickness product is not certified to be at least 1")
    swapped = rK.sigma0.hi > rL.sigma0.hi
    if swapped:
        K, L, rK, rL = L, K, rL, rK
    S = L.square
    EK, EL = ExactWords(K), ExactWords(L)
    fr = _lframe(L, rL)
    max_son_delta = float(fr.son_delta.max())

    # alpha_0: a piece of K inside the middle inscribed disk of S
    W, _ = _kpiece_in_disk(K, (1 + 0j, 0j), (), S.middle_disk(), node_budget)
    J: Word = ()
    chain = []
    for _ in range(max_depth):
        # everything below is in the frame of P = g_J(S), where P is S
        case1 = fr.rho_lo >= max_son_delta
        case2 = fr.rho_hi < max_son_delta
        if not (case1 or case2):
            raise CaseSelectionAmbiguous(
                f"rho(P) in [{fr.rho_lo:.6g}, {fr.rho_hi:.6g}] straddles max son diameter {max_son_delta:.6g}")
        if case1:
            thr = (1 + 2 * SQRT2) * fr.D2 * fr.rho_hi
        else:
            x, rt, cdiam = _c_disks(L, fr)
            thr = 3.0 * rt.hi
        Qw, QM = _select_Q(K, EK, EL, W, J, thr, node_budget)
        Q = OrientedSquare(QM[1], abs(QM[0]) * S.diameter, S.rotation + float(np.angle(QM[0])))
        if case1:
            j = _son_inside(Q, fr)
            target = Disk(fr.sons.center[j], 0.5 * fr.son_delta[j])
        else:
            j = _cdisk_inside(Q, fr, cdiam)
            target = Disk(fr.sons.center[j], cdiam[j])
        W, WM = _kpiece_in_disk(K, QM, Qw, target, node_budget)
        s = _global_scale(EL, J)
        chain.append(ChainLink(
            W, (j,) + J,
            Disk(_to_global(EL, J, target.center), target.diameter * s),
            _to_global(EL, J, WM[1]),
        ))
        J = (j,) + J
    final = _global_scale(EL, J) * S.diameter
    return IntersectionCertificate(tuple(chain), final, "constructive", CERTIFIED, swapped)


def _select_Q(K: IfsSpec, EK: ExactWords, EL: ExactWords, W: Word, J: Word, thr: float,
              budget: int) -> tuple[Word, tuple[complex, complex]]:
    """Last piece with inscribed diameter ``>= thr`` in a decreasing sequence of
    K-pieces through ``alpha_n``: the ancestors of ``W`` followed by its
    descendants closest to the center of ``P``."""
    dS = K.square.inscribed_diameter
    for m in range(len(W), -1, -1):
        anc = W[len(W) - m:]
        if _abs_ratio(EK, anc, EL, J) * dS >= thr or m == 0:
            break
    if m < len(W):
        return anc, relative_map(EK, anc, EL, J)
    # W itself is large enough: descend towards the center of P
    w = W
    A, B = relative_map(EK, W, EL, J)
    a, b = K.multipliers, K.translations
    for _ in range(budget):
        cA, cent = A * a, B + A * b
        k = int(np.argmin(np.abs(cent)))
        if abs(cA[k]) * dS < thr:
            break
        w, A, B = (k,) + w, cA[k], cent[k]
    return w, (A, B)


def _son_inside(Q: OrientedSquare, fr: _LFrameData) -> int:
    ok = [j for j in range(fr.sons.center.size)
          if all(Q.contains_point(v) for v in _square_vertices(fr.sons.center[j], fr.sons.diam[j], fr.sons.rot[j]))]
    if not ok:
        raise ContainmentLost("no son of P lies inside Q")
    return min(ok, key=lambda j: (abs(fr.sons.center[j] - Q.center), j))


def _cdisk_inside(Q: OrientedSquare, fr: _LFrameData, cdiam: np.ndarray) -> int:
    u = Q.to_local(fr.sons.center)
    reach = np.maximum(np.abs(u.real), np.abs(u.imag)) + 0.5 * cdiam
    ok = np.nonzero(reach <= Q.half_side * (1 - OVERLAP_MARGIN))[0]
    if ok.size == 0:
        raise ContainmentLost("no disk C_j lies inside Q")
    return int(ok[np.argmin(np.abs(fr.sons.center[ok] - Q.center))])


# ---------------------------------------------------------------------------
# Replay and comparison


def replay_certificate(K: IfsSpec, L: IfsSpec, cert: IntersectionCertificate) -> bool:
    """Re-verify every link of a certificate from its words alone.

    Oracle chains: words nest, the two pieces of every link overlap, and the
    pieces shrink.  Constructive chains: ``L``-words nest and each ``K``-piece
    lies in the middle inscribed disk of its ``L``-piece.
    """
    if cert.roles_swapped:
        K, L = L, K
    EK, EL = ExactWords(K), ExactWords(L)
    S = L.square
    prevI: Word = ()
    prevJ: Word = ()
    prev_size = math.inf
    for link in cert.chain:
        I, J = tuple(link.k_word), tuple(link.l_word)
        if len(J) != len(prevJ) + 1 or J[1:] != prevJ:
            return False
        A, B = relative_map(EK, I, EL, J)
        if cert.method == "oracle":
            if len(I) != len(prevI) + 1 or I[1:] != prevI:
                return False
            if not overlap_exact_many(B, abs(A) * S.diameter, S.rotation + np.angle(A),
                                      0j, S.diameter, S.rotation):
                return False
            size = max(_global_scale(EK, I), _global_scale(EL, J))
            if not size < prev_size:
                return False
            prev_size = size
        else:
            verts = _square_vertices(B, abs(A) * S.diameter, S.rotation + np.angle(A))
            if not (np.abs(verts) <= 0.5 * S.inscribed_diameter * 0.5).all():
                return False
        prevI, prevJ = I, J
    return True


def final_regions_overlap(a: IntersectionCertificate, b: IntersectionCertificate) -> bool:
    """Whether the last ``L``-pieces of two certificates on the same pair meet.

    Pieces of a system with disjoint first-level images meet exactly when one
    word is a suffix of the other.
    """
    if not a.chain or not b.chain or a.roles_swapped != b.roles_swapped:
        return False
    u, v = tuple(a.chain[-1].l_word), tuple(b.chain[-1].l_word)
    short, long_ = (u, v) if len(u) <= len(v) else (v, u)
    return long_[len(long_) - len(short):] == short
