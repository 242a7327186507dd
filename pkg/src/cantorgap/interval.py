"""Closed real intervals with outward rounding.

Every arithmetic result is widened by one ulp in each direction with
``math.nextafter``, so the true value of an expression evaluated on members
of the operands is always a member of the result.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

Number = Union[int, float]


def _down(x: float) -> float:
    return math.nextafter(x, -math.inf) if math.isfinite(x) else x


def _up(x: float) -> float:
    return math.nextafter(x, math.inf) if math.isfinite(x) else x


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if math.isnan(lo) or math.isnan(hi):
            raise ValueError("interval endpoints must not be NaN")
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, x: Number) -> "Interval":
        return cls(x, x)

    @classmethod
    def around(cls, x: Number, slack: float) -> "Interval":
        return cls(_down(x - slack), _up(x + slack))

    @staticmethod
    def coerce(x: "Interval | Number") -> "Interval":
        return x if isinstance(x, Interval) else Interval(x, x)

    @property
    def mid(self) -> float:
        if not math.isfinite(self.hi):
            return self.hi
        return 0.5 * (self.lo + self.hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def is_point(self) -> bool:
        return self.lo == self.hi

    def __contains__(self, x: Number) -> bool:
        return self.lo <= x <= self.hi

    def contains(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def intersect(self, other: "Interval") -> "Interval":
        return Interval(max(self.lo, other.lo), min(self.hi, other.hi))

    def hull(self, other: "Interval") -> "Interval":
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))

    def __add__(self, other):
        o = Interval.coerce(other)
        return Interval(_down(self.lo + o.lo), _up(self.hi + o.hi))

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other):
        o = Interval.coerce(other)
        return Interval(_down(self.lo - o.hi), _up(self.hi - o.lo))

    def __rsub__(self, other):
        return Interval.coerce(other) - self

    def __mul__(self, other):
        o = Interval.coerce(other)
        prods = []
        for a in (self.lo, self.hi):
            for b in (o.lo, o.hi):
                # 0 * inf counts as 0 for enclosure purposes
                prods.append(0.0 if a == 0.0 or b == 0.0 else a * b)
        return Interval(_down(min(prods)), _up(max(prods)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = Interval.coerce(other)
        if o.lo <= 0.0 <= o.hi:
            if o.lo == 0.0 and o.hi > 0.0 and self.lo >= 0.0:
                return Interval(_down(self.lo / o.hi), math.inf)
            raise ZeroDivisionError(f"division by interval containing zero: {o}")
        return self * Interval(_down(1.0 / o.hi), _up(1.0 / o.lo))

    def __rtruediv__(self, other):
        return Interval.coerce(other) / self

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers are supported")
        if n == 0:
            return Interval(1.0, 1.0)
        if self.lo >= 0.0:
            lo, hi = self.lo, self.hi
            out_lo, out_hi = 1.0, 1.0
            for _ in range(n):
                out_lo = _down(out_lo * lo)
                out_hi = _up(out_hi * hi)
            return Interval(out_lo, out_hi)
        out = Interval(1.0, 1.0)
        for _ in range(n):
            out = out * self
        return out

    def sqrt(self) -> "Interval":
        if self.hi < 0.0:
            raise ValueError("sqrt of a negative interval")
        lo = max(self.lo, 0.0)
        return Interval(max(_down(math.sqrt(lo)), 0.0), _up(math.sqrt(self.hi)))

    def as_dict(self) -> dict:
        return {"lo": _json_float(self.lo), "hi": _json_float(self.hi)}

    @classmethod
    def from_dict(cls, d: dict) -> "Interval":
        lo = -math.inf if d["lo"] is None else d["lo"]
        hi = math.inf if d["hi"] is None else d["hi"]
        return cls(lo, hi)

    def __repr__(self) -> str:
        return f"[{self.lo:.10g}, {self.hi:.10g}]"


def _json_float(x: float):
    # JSON has no infinity; unbounded endpoints are written as null
    return x if math.isfinite(x) else None


def imin(*xs: Interval) -> Interval:
    return Interval(min(x.lo for x in xs), min(x.hi for x in xs))


def imax(*xs: Interval) -> Interval:
    return Interval(max(x.lo for x in xs), max(x.hi for x in xs))
