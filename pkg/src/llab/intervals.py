"""Finite disjoint unions of open intervals on the real line.

Endpoints are plain floats and open/closed distinctions are ignored: every
quantity computed downstream (lengths, weighted measures, integrals) is
insensitive to boundary points.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence


@dataclass(frozen=True, order=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not self.lo < self.hi:
            raise ValueError(f"interval needs lo < hi, got ({self.lo}, {self.hi})")

    @property
    def length(self) -> float:
        return self.hi - self.lo

    def intersects(self, other: "Interval") -> bool:
        return self.lo < other.hi and other.lo < self.hi


@dataclass(frozen=True)
class IntervalUnion:
    """Ordered, pairwise separated intervals.  Build via :func:`normalize`."""

    parts: tuple[Interval, ...]

    def __iter__(self):
        return iter(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __bool__(self) -> bool:
        return bool(self.parts)

    @property
    def measure(self) -> float:
        return sum(p.length for p in self.parts)

    def to_json(self) -> str:
        return json.dumps([[p.lo, p.hi] for p in self.parts])

    @staticmethod
    def from_json(text: str) -> "IntervalUnion":
        return normalize([tuple(pair) for pair in json.loads(text)])


EMPTY = IntervalUnion(())


def _as_pairs(raw: Iterable) -> list[tuple[float, float]]:
    pairs = []
    for item in raw:
        if isinstance(item, Interval):
            pairs.append((item.lo, item.hi))
        else:
            lo, hi = item
            pairs.append((float(lo), float(hi)))
    return pairs


def normalize(raw: Iterable) -> IntervalUnion:
    """Merge overlapping or abutting intervals; drop degenerate ones.

    Accepts Interval objects or (lo, hi) pairs with lo <= hi.
    """
    pairs = _as_pairs(raw)
    for lo, hi in pairs:
        if lo > hi:
            raise ValueError(f"raw interval needs lo <= hi, got ({lo}, {hi})")
    pairs = sorted(p for p in pairs if p[0] < p[1])
    merged: list[tuple[float, float]] = []
    for lo, hi in pairs:
        if merged and lo <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
        else:
            merged.append((lo, hi))
    return IntervalUnion(tuple(Interval(lo, hi) for lo, hi in merged))


def union(*unions: IntervalUnion) -> IntervalUnion:
    parts: list[Interval] = []
    for u in unions:
        parts.extend(u.parts)
    return normalize(parts)


def measure(u: IntervalUnion) -> float:
    return u.measure


def intersect(u: IntervalUnion, v: IntervalUnion) -> IntervalUnion:
    out = []
    for a in u.parts:
        for b in v.parts:
            lo, hi = max(a.lo, b.lo), min(a.hi, b.hi)
            if lo < hi:
                out.append((lo, hi))
    return normalize(out)


def difference(u: IntervalUnion, v: IntervalUnion) -> IntervalUnion:
    """Points of u not in v (up to boundary points)."""
    out: list[tuple[float, float]] = []
    for a in u.parts:
        cursor = a.lo
        for b in v.parts:
            if b.hi <= cursor:
                continue
            if b.lo >= a.hi:
                break
            if b.lo > cursor:
                out.append((cursor, b.lo))
            cursor = max(cursor, b.hi)
            if cursor >= a.hi:
                break
        if cursor < a.hi:
            out.append((cursor, a.hi))
    return normalize(out)


def contains(u: IntervalUnion, v: IntervalUnion) -> bool:
    """True iff v is a subset of u up to a null set."""
    return difference(v, u).measure == 0.0


def singleton(lo: float, hi: float) -> IntervalUnion:
    return normalize([(lo, hi)])


def endpoints(u: IntervalUnion) -> list[float]:
    out: list[float] = []
    for p in u.parts:
        out.append(p.lo)
        out.append(p.hi)
    return out


def parse_union(text: str) -> IntervalUnion:
    """Parse 'a,b;c,d' (or JSON '[[a,b],...]') into an interval union."""
    text = text.strip()
    if text.startswith("["):
        return IntervalUnion.from_json(text)
    pairs: list[Sequence[float]] = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        lo, hi = chunk.split(",")
        pairs.append((float(lo), float(hi)))
    return normalize(pairs)
