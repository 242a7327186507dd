"""Certified distortion, reduction ratios, gap, thickness and the
well-balanced test for a single IFS or a pair of them."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import (BudgetExceeded, DivergentRecursion, InvalidParams, MismatchedSquares,
                     TailBoundUnavailable)
from .geometry import Disk, OrientedSquare, RegionSet, _dyadic_grid, empty_disk_search
from .ifs import IfsSpec, affine_level, enumerate_depth, piece_budget, piece_of
from .interval import Interval, imax, imin

__all__ = [
    "Interval", "InvariantReport", "GapEstimate", "Verdict", "distortion_bounds", "s_n",
    "tail_depth", "distortion_refine", "distortion", "reduction_ratios", "gap_sigma",
    "thickness", "well_balanced",
]

ONE = Interval(1.0, 1.0)
# cap on the number of pieces used for the brute-force lower bound of the gap
LOWER_BOUND_PIECES = 2**17


def default_grid(spec: IfsSpec) -> float:
    return spec.delta_S / 512


# ---------------------------------------------------------------------------
# Distortion


def koebe_upper(r: float) -> float:
    return min((1 + r) ** 3 / (1 - r), (1 + r) / (1 - r) ** 3)


def distortion_bounds(spec: IfsSpec) -> Interval:
    if spec.all_affine:
        return ONE
    r = spec.extension_ratio
    return Interval(1.0, math.nextafter(koebe_upper(r), math.inf))


def _sample_points(spec: IfsSpec, grid: int) -> np.ndarray:
    S = spec.square
    t = (np.arange(grid) / (grid - 1) - 0.5) * S.side
    X, Y = np.meshgrid(t, t)
    inner = (X + 1j * Y).ravel()
    s = np.linspace(-0.5, 0.5, 16 * grid, endpoint=False) * S.side
    h = 0.5 * S.side
    ring = np.concatenate([s + 1j * (-h), h + 1j * s, -s + 1j * h, -h - 1j * s])
    return S.from_local(np.concatenate([inner, ring]))


def s_n(spec: IfsSpec, n: int, grid: int = 17, budget: Optional[int] = None) -> float:
    """Sampled lower estimate of ``max_{|I|=n} max |f_I'(z) / f_I'(z')|``."""
    if spec.all_affine or n == 0:
        return 1.0
    budget = piece_budget() if budget is None else budget
    pts = _sample_points(spec, grid)
    if spec.p ** n * pts.size > budget:
        raise BudgetExceeded(f"s_n with p={spec.p}, n={n} exceeds the budget")
    Z = pts[None, :]
    Dv = np.ones_like(Z)
    for _ in range(n):
        Dv = np.concatenate([Dv * np.asarray(m.deriv(Z)) for m in spec.maps])
        Z = np.concatenate([np.asarray(m(Z)) for m in spec.maps])
    mod = np.abs(Dv)
    return float((mod.max(axis=1) / mod.min(axis=1)).max())


def tail_depth(a: float, R: float, eps: float, Delta: float = 1.0) -> int:
    """Smallest n with ``prod_{k>=n} (1 + 5 a^k Delta / R) <= 1 + eps``.

    Also requires ``a^n Delta / R <= 0.05``, where the Koebe factor
    ``(1+x)/(1-x)^3`` is dominated by ``1 + 5x``.
    """
    if not (0 < a < 1 and R > 0 and eps > 0):
        raise InvalidParams("need 0 < a < 1, R > 0, eps > 0")
    c = Delta / R
    target = math.log1p(eps)

    def log_tail(n: int) -> float:
        total, k = 0.0, n
        while True:
            x = 5 * c * a**k
            total += math.log1p(x)
            if x < 1e-18:
                return total
            k += 1

    n = 0
    while c * a**n > 0.05 or log_tail(n) > target:
        n += 1
    return n


def _koebe_radius(spec: IfsSpec, D0: Interval) -> tuple[float, float]:
    S = spec.square
    a = 0.0
    R = math.inf
    for i in range(spec.p):
        P = piece_of(spec, (i,), D0)
        a = max(a, P.Delta.hi / spec.Delta_S)
        R = min(R, S.boundary_distance(P.center) - 0.5 * P.Delta.hi)
    return a, R


def distortion_refine(spec: IfsSpec, eps: float = 0.1, grid: int = 17,
                      budget: Optional[int] = None) -> Interval:
    if spec.all_affine:
        return ONE
    D0 = distortion_bounds(spec)
    a, R = _koebe_radius(spec, D0)
    if R <= 0 or a >= 1:
        raise TailBoundUnavailable(f"no usable tail bound (a={a:.4g}, R={R:.4g})")
    n_eps = tail_depth(a, R, eps, spec.Delta_S)
    samples = [s_n(spec, n, grid, budget) for n in range(n_eps + 1)]
    lo = max(samples)
    hi = max(lo, math.nextafter(samples[-1] * (1 + eps), math.inf))
    return Interval(lo, hi).intersect(D0) if lo <= D0.hi else Interval(D0.hi, D0.hi)


def distortion(spec: IfsSpec, eps: float = 0.1) -> Interval:
    """Closed-form Koebe bound, tightened by the finite-depth refinement when
    the budget allows it."""
    D0 = distortion_bounds(spec)
    if spec.all_affine:
        return D0
    try:
        return D0.intersect(distortion_refine(spec, eps))
    except (TailBoundUnavailable, BudgetExceeded):
        return D0


# ---------------------------------------------------------------------------
# Reduction ratios and gap


def reduction_ratios(spec: IfsSpec, D: Interval):
    """Return ``(lambda0, Lambda0, lambda, Lambda)`` as intervals."""
    if spec.all_affine:
        k = np.abs(spec.multipliers)
        lam0 = Interval.point(float(k.min()))
        Lam0 = Interval.point(float(k.max())) * math.sqrt(2.0)
        Lam0 = Interval(math.nextafter(Lam0.lo, -math.inf), Lam0.hi)
    else:
        pieces = [piece_of(spec, (i,), D) for i in range(spec.p)]
        lam0 = imin(*[P.delta / spec.delta_S for P in pieces])
        Lam0 = imax(*[P.Delta / spec.delta_S for P in pieces])
    D2 = D**2
    return lam0, Lam0, lam0 / D2, Lam0 * D2


@dataclass(frozen=True)
class GapEstimate:
    sigma0: Interval
    rho: Interval
    rho_hat1: Interval
    contraction: Interval
    witness: complex
    depth_used: int
    grid_used: float


def _inner_regions(spec: IfsSpec, D: Interval):
    if spec.all_affine:
        return spec.image_squares()
    out = []
    for i in range(spec.p):
        P = piece_of(spec, (i,), D)
        out.append(Disk(P.center, P.delta.lo))
    return out


def _outer_regions(spec: IfsSpec, n: int, D: Interval) -> RegionSet:
    S = spec.square
    if spec.all_affine:
        A, B = affine_level(spec, n)
        return RegionSet(sq_center=B, sq_half=np.abs(A) * S.half_side,
                         sq_rot=S.rotation + np.angle(A), dk_center=[], dk_radius=[])
    pieces = enumerate_depth(spec, n, D)
    return RegionSet([Disk(P.center, P.Delta.hi) for P in pieces])


def gap_sigma(spec: IfsSpec, D: Interval, h: Optional[float] = None, depth: int = 3) -> GapEstimate:
    """Enclosure of the normalised gap ``rho(S) / delta(S)``.

    Upper bound: ``rho(S) <= rho1 / (1 - L)`` where ``rho1`` is the largest
    empty disk against the depth-1 pieces and ``L`` bounds the Lipschitz
    constants of the maps on ``S``.  Lower bound: exact distances from sample
    points to the depth-``n`` pieces, which enclose the limit set.
    """
    h = default_grid(spec) if h is None else h
    if not h > 0:
        raise InvalidParams("grid pitch must be positive")
    S = spec.square
    res = empty_disk_search(S, _inner_regions(spec, D), h)
    if spec.all_affine:
        L = Interval.point(float(np.abs(spec.multipliers).max()))
    else:
        k = max(abs(piece_of(spec, (i,), D).deriv) for i in range(spec.p))
        L = D * k
    if L.hi >= 1.0:
        raise DivergentRecursion(f"contraction bound {L.hi} is not below 1")
    rho_hi = (Interval.point(res.rho.hi) / (ONE - L)).hi

    cap = min(piece_budget(), LOWER_BOUND_PIECES)
    n_used = 1
    while n_used < depth and spec.p ** (n_used + 1) <= cap:
        n_used += 1
    rho_lo = res.rho.lo
    witness = res.witness
    if n_used > 1 or not spec.all_affine:
        outer = _outer_regions(spec, n_used, D)
        nodes, _ = _dyadic_grid(S, h)
        extra = [res.witness] + ([res.cover_witness] if res.cover_witness is not None else [])
        cand = np.concatenate([nodes.ravel(), extra])
        vals = outer.distance(cand)
        j = int(np.argmax(vals))
        if 2.0 * vals[j] > rho_lo or not spec.all_affine:
            rho_lo, witness = 2.0 * float(vals[j]), complex(cand[j])
    rho_lo = min(rho_lo, rho_hi)
    rho = Interval(rho_lo, rho_hi)
    sigma0 = rho / spec.delta_S
    return GapEstimate(sigma0, rho, res.rho, L, witness, n_used, res.grid_pitch)


# ---------------------------------------------------------------------------
# Thickness


@dataclass(frozen=True)
class InvariantReport:
    D: Interval
    lambda0: Interval
    Lambda0: Interval
    lambda_: Interval
    Lambda: Interval
    sigma0: Interval
    sigma: Interval
    thickness: Interval
    depth_used: int
    grid_used: float
    square: Optional[OrientedSquare] = field(default=None, compare=False)
    gap: Optional[GapEstimate] = field(default=None, compare=False, repr=False)

    FIELDS = ("D", "lambda0", "Lambda0", "lambda", "Lambda", "sigma0", "sigma", "thickness")

    def to_json(self) -> dict:
        out = {}
        for name in self.FIELDS:
            out[name] = getattr(self, "lambda_" if name == "lambda" else name).as_dict()
        out["depth_used"] = self.depth_used
        out["grid_used"] = self.grid_used
        return out

    @classmethod
    def from_json(cls, d: dict) -> "InvariantReport":
        vals = {("lambda_" if k == "lambda" else k): Interval.from_dict(d[k]) for k in cls.FIELDS}
        return cls(**vals, depth_used=int(d["depth_used"]), grid_used=float(d["grid_used"]))


def thickness_from(lambda0: Interval, D: Interval, sigma0: Interval) -> Interval:
    return lambda0 / (D**5 * sigma0.sqrt())


def thickness(spec: IfsSpec, depth: int = 3, h: Optional[float] = None,
              D: Optional[Interval] = None) -> InvariantReport:
    D = distortion(spec) if D is None else D
    lam0, Lam0, lam, Lam = reduction_ratios(spec, D)
    gap = gap_sigma(spec, D, h, depth)
    sigma = gap.sigma0 * D**2
    t = thickness_from(lam0, D, gap.sigma0)
    return InvariantReport(D, lam0, Lam0, lam, Lam, gap.sigma0, sigma, t, gap.depth_used,
                           gap.grid_used, spec.square, gap)


# ---------------------------------------------------------------------------
# Well balanced


class Verdict(str, enum.Enum):
    CERTIFIED = "Certified"
    FAILED_CONDITION1 = "FailedCondition1"
    FAILED_SUFFICIENT = "FailedSufficientCondition"
    UNKNOWN = "Unknown"


WB_THRESHOLD = 1.0 / 20.0


def _same_square(a: Optional[OrientedSquare], b: Optional[OrientedSquare]) -> bool:
    if a is None or b is None:
        return True
    return (abs(a.center - b.center) <= 1e-12 * a.diameter
            and abs(a.diameter - b.diameter) <= 1e-12 * a.diameter
            and abs(a.rotation - b.rotation) <= 1e-12)


def well_balanced(reportK: InvariantReport, reportL: InvariantReport) -> Verdict:
    """Decide the well-balanced condition through its robust sufficient test.

    Thresholds are compared against interval endpoints: upper endpoints to
    certify, lower endpoints to refute.
    """
    if not _same_square(reportK.square, reportL.square):
        raise MismatchedSquares("reports refer to different initial squares")
    K, L = reportK, reportL
    if max(K.Lambda.lo, L.Lambda.lo) >= WB_THRESHOLD:
        return Verdict.FAILED_CONDITION1

    def bound(D: Interval) -> Interval:
        return ONE / (20.0 * D**2)

    lhsK, lhsL = K.sigma + 2.0 * K.Lambda, L.sigma + 2.0 * L.Lambda
    rhsK, rhsL = bound(L.D), bound(K.D)
    cond1 = max(K.Lambda.hi, L.Lambda.hi) < WB_THRESHOLD
    if cond1 and lhsK.hi < rhsK.lo and lhsL.hi < rhsL.lo:
        return Verdict.CERTIFIED
    if cond1 and (lhsK.lo >= rhsK.hi or lhsL.lo >= rhsL.hi):
        return Verdict.FAILED_SUFFICIENT
    return Verdict.UNKNOWN
