"""JSON spec files, the regular grid family and random perturbations."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import jsonschema
import numpy as np
from scipy.spatial import cKDTree

from .errors import ContainmentLost, InvalidParams, InvalidSpec
from .geometry import OrientedSquare, overlap_exact_many
from .ifs import AffineMap, IfsSpec

_PAIR = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}

SPEC_SCHEMA = {
    "type": "object",
    "required": ["square", "extension_ratio", "maps"],
    "additionalProperties": False,
    "properties": {
        "square": {
            "type": "object",
            "required": ["center", "diameter"],
            "additionalProperties": False,
            "properties": {
                "center": _PAIR,
                "diameter": {"type": "number", "exclusiveMinimum": 0},
                "rotation": {"type": "number"},
            },
        },
        "extension_ratio": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
        "maps": {
            "type": "array",
            "minItems": 2,
            "items": {
                "type": "object",
                "required": ["type", "a", "b"],
                "additionalProperties": False,
                "properties": {"type": {"const": "affine"}, "a": _PAIR, "b": _PAIR},
            },
        },
    },
}

_INTERVAL = {
    "type": "object", "required": ["lo", "hi"],
    "properties": {"lo": {"type": ["number", "null"]}, "hi": {"type": ["number", "null"]}},
}

REPORT_SCHEMA = {
    "type": "object",
    "required": ["D", "lambda0", "Lambda0", "lambda", "Lambda", "sigma0", "sigma", "thickness",
                 "depth_used", "grid_used"],
    "properties": {
        **{k: _INTERVAL for k in ("D", "lambda0", "Lambda0", "lambda", "Lambda", "sigma0", "sigma", "thickness")},
        "depth_used": {"type": "integer", "minimum": 0},
        "grid_used": {"type": "number", "exclusiveMinimum": 0},
    },
}

CERTIFICATE_SCHEMA = {
    "type": "object",
    "required": ["method", "verdict", "chain", "final_diameter"],
    "properties": {
        "method": {"enum": ["constructive", "oracle"]},
        "verdict": {"enum": ["CertifiedNonempty", "InconclusiveAtDepth"]},
        "roles_swapped": {"type": "boolean"},
        "final_diameter": {"type": "number"},
        "chain": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["k_word", "l_word", "alpha_center", "alpha_diameter", "witness"],
                "properties": {
                    "k_word": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                    "l_word": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                    "alpha_center": _PAIR,
                    "alpha_diameter": {"type": "number"},
                    "witness": _PAIR,
                },
            },
        },
    },
}


def _c(pair) -> complex:
    return complex(pair[0], pair[1])


def spec_from_json(d: dict) -> IfsSpec:
    try:
        jsonschema.validate(d, SPEC_SCHEMA)
    except jsonschema.ValidationError as e:
        raise InvalidSpec(f"spec file: {e.message}") from None
    sq = d["square"]
    c = _c(sq["center"])
    maps = []
    for m in d["maps"]:
        a, b = _c(m["a"]), _c(m["b"])
        # move the square to the origin by conjugating with a translation
        maps.append(AffineMap(a, a * c + b - c if c else b))
    square = OrientedSquare(0j, float(sq["diameter"]), float(sq.get("rotation", 0.0)))
    return IfsSpec(square, maps, float(d["extension_ratio"]))


def spec_to_json(spec: IfsSpec) -> dict:
    if not spec.all_affine:
        raise InvalidSpec("only affine systems have a file format")
    sq = {"center": [spec.square.center.real, spec.square.center.imag], "diameter": spec.square.diameter}
    if spec.square.rotation:
        sq["rotation"] = spec.square.rotation
    return {
        "square": sq,
        "extension_ratio": spec.extension_ratio,
        "maps": [{"type": "affine", "a": [m.a.real, m.a.imag], "b": [m.b.real, m.b.imag]} for m in spec.maps],
    }


def load_spec(path) -> IfsSpec:
    with open(path) as fh:
        return spec_from_json(json.load(fh))


def save_spec(spec: IfsSpec, path) -> None:
    Path(path).write_text(json.dumps(spec_to_json(spec), indent=1) + "\n")


# ---------------------------------------------------------------------------


def smallest_extension_ratio(square: OrientedSquare, maps) -> float:
    """Smallest ``r`` with ``f_i(S') inside S`` for every map, ``S'`` the disk
    of radius ``diameter / (2 r)``; ``inf`` when no ``r < 1`` works."""
    need = 0.0
    for m in maps:
        bd = square.boundary_distance(m.b)
        if bd <= 0:
            return math.inf
        need = max(need, abs(m.a) * square.diameter / (2.0 * bd))
    return need


FALLBACK_EXTENSION_RATIO = 0.5


def grid_spec(n: int, r: float, diameter: float = 1.0) -> IfsSpec:
    """``n*n`` homotheties of ratio ``r/n`` onto the cells of a regular lattice
    in the square of the given diameter centred at 0."""
    if not (isinstance(n, (int, np.integer)) and n >= 2):
        raise InvalidParams("n must be an integer >= 2")
    if not 0.0 < r < 1.0:
        raise InvalidParams("r must lie in (0, 1)")
    S = OrientedSquare(0j, diameter)
    side = S.side
    k = (np.arange(n) + 0.5) / n - 0.5
    maps = [AffineMap(r / n, complex(x * side, y * side)) for x in k for y in k]
    ext = smallest_extension_ratio(S, maps) * (1 + 1e-9)
    return IfsSpec(S, maps, ext if ext < 1.0 else FALLBACK_EXTENSION_RATIO)


# ---------------------------------------------------------------------------
# Perturbations


def _disk_noise(rng: np.random.Generator, scale: float) -> complex:
    # uniform on the closed disk of radius ``scale``
    rad = scale * math.sqrt(rng.random())
    ang = 2 * math.pi * rng.random()
    return complex(rad * math.cos(ang), rad * math.sin(ang))


@dataclass(frozen=True)
class Perturbed:
    spec: IfsSpec
    rejected: int


def perturb_spec(spec: IfsSpec, eta: float, rng: np.random.Generator, max_tries: int = 100) -> Perturbed:
    """Move every translation by at most ``eta * delta(S)`` and every multiplier
    by at most ``eta / 10``, resampling a map whose image would leave the square
    or meet another image.  ``ContainmentLost`` is raised when a map cannot be
    placed in ``max_tries`` draws."""
    if eta < 0:
        raise InvalidParams("eta must be non-negative")
    if not spec.all_affine:
        raise InvalidSpec("perturbations are implemented for affine systems")
    S = spec.square
    a = spec.multipliers.copy()
    b = spec.translations.copy()
    if eta == 0:
        return Perturbed(spec, 0)
    diam = np.abs(a) * S.diameter
    tree = cKDTree(np.column_stack([b.real, b.imag]))
    reach = diam.max() + 2 * eta * S.diameter
    corners = np.array(S.vertices())
    rejected = 0
    for i in range(spec.p):
        nbrs = np.array([j for j in tree.query_ball_point([b[i].real, b[i].imag], reach) if j != i], dtype=int)
        for _ in range(max_tries):
            ai = a[i] + _disk_noise(rng, eta / 10)
            bi = b[i] + _disk_noise(rng, eta * S.inscribed_diameter)
            if not 0 < abs(ai) < 1:
                rejected += 1
                continue
            u = S.to_local(ai * corners + bi)
            inside = (np.maximum(np.abs(u.real), np.abs(u.imag)) < S.half_side).all()
            clash = nbrs.size and overlap_exact_many(
                bi, abs(ai) * S.diameter, S.rotation + np.angle(ai),
                b[nbrs], np.abs(a[nbrs]) * S.diameter, S.rotation + np.angle(a[nbrs])).any()
            if inside and not clash:
                a[i], b[i] = ai, bi
                break
            rejected += 1
        else:
            raise ContainmentLost(f"map {i} could not be perturbed within the square after {max_tries} draws")
    maps = [AffineMap(x, y) for x, y in zip(a, b)]
    return Perturbed(IfsSpec(S, maps, spec.extension_ratio), rejected)


@dataclass(frozen=True)
class DriftSummary:
    eta: float
    samples: int
    drift_mid: float
    drift_endpoints: float
    rejected: int


def thickness_drift(spec: IfsSpec, eta: float, samples: int, seed: int, depth: int = 1,
                    h: Optional[float] = None, base=None) -> DriftSummary:
    """Largest change of the thickness enclosure over random perturbations."""
    from .invariants import thickness
    rng = np.random.default_rng(seed)
    t0 = (base or thickness(spec, depth=depth, h=h)).thickness
    dm = de = 0.0
    rej = 0
    for _ in range(samples):
        P = perturb_spec(spec, eta, rng)
        rej += P.rejected
        t = thickness(P.spec, depth=depth, h=h).thickness
        dm = max(dm, abs(t.mid - t0.mid))
        de = max(de, abs(t.lo - t0.lo), abs(t.hi - t0.hi))
    return DriftSummary(eta, samples, dm, de, rej)
