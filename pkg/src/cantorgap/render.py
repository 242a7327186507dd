"""Deterministic SVG pictures of the depth-n pieces."""

from __future__ import annotations

from typing import Optional

from .ifs import IfsSpec, affine_level, enumerate_depth, piece_budget
from .invariants import distortion

SIZE = 512


def _fmt(x: float) -> str:
    s = f"{x:.6f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def render_svg(spec: IfsSpec, depth: int, budget: Optional[int] = None) -> str:
    """Initial square plus every depth-``depth`` piece: polygons for similarity
    systems and escribed disks otherwise."""
    S = spec.square
    budget = piece_budget() if budget is None else budget
    R = 0.5 * S.diameter
    scale = SIZE / (2 * R)

    def xy(z: complex) -> tuple[str, str]:
        # y axis points down in SVG
        return _fmt((z.real + R) * scale), _fmt((R - z.imag) * scale)

    def poly(verts, style: str) -> str:
        pts = " ".join(",".join(xy(v)) for v in verts)
        return f'<polygon points="{pts}" {style}/>'

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}">',
        poly(S.vertices(), 'fill="none" stroke="black" stroke-width="1"'),
    ]
    if depth > 0:
        if spec.all_affine:
            A, B = affine_level(spec, depth, budget)
            h = S.half_side
            corners = [complex(1, 1), complex(-1, 1), complex(-1, -1), complex(1, -1)]
            fr = S.frame
            for a, b in zip(A, B):
                out.append(poly([b + a * fr * h * c for c in corners], 'fill="black"'))
        else:
            D = distortion(spec)
            for P in enumerate_depth(spec, depth, D, budget):
                cx, cy = xy(P.center)
                r = _fmt(0.5 * P.Delta.hi * scale)
                out.append(f'<circle cx="{cx}" cy="{cy}" r="{r}" fill="none" stroke="black"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def element_count(svg: str) -> int:
    return svg.count("<polygon") + svg.count("<circle")
