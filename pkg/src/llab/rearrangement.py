"""Weighted distribution functions, decreasing rearrangements, and the
strong/weak Lorentz quasi-norms, exact on step functions."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

from .errors import ConfigurationError
from .intervals import Interval, IntervalUnion, normalize, union
from .weights import WeightModel

_CROSSCHECK_RTOL = 1e-10


@dataclass(frozen=True)
class StepFunction:
    """Finitely-valued positive function: sum of value * indicator(region).

    Regions are pairwise disjoint; equal-value pieces are merged on
    construction so the level structure is canonical.
    """

    pieces: tuple[tuple[IntervalUnion, float], ...]

    def __post_init__(self) -> None:
        for region, value in self.pieces:
            if value <= 0.0:
                raise ValueError("step values must be strictly positive")
            if not region:
                raise ValueError("step regions must be nonempty")
        values = [v for _, v in self.pieces]
        if len(set(values)) != len(values):
            raise ValueError("equal-value pieces must be merged (use make_step)")

    @property
    def support(self) -> IntervalUnion:
        return union(*(region for region, _ in self.pieces))

    def endpoints(self) -> list[float]:
        out: set[float] = set()
        for region, _ in self.pieces:
            for part in region.parts:
                out.add(part.lo)
                out.add(part.hi)
        return sorted(out)

    def value_at(self, x: float) -> float:
        for region, value in self.pieces:
            for part in region.parts:
                if part.lo < x < part.hi:
                    return value
        return 0.0

    def scaled(self, c: float) -> "StepFunction":
        if c <= 0.0:
            raise ValueError("scaling factor must be positive")
        return StepFunction(tuple((r, c * v) for r, v in self.pieces))

    def to_json(self) -> str:
        return json.dumps(
            [
                {"region": [[p.lo, p.hi] for p in region.parts], "value": value}
                for region, value in self.pieces
            ]
        )

    @staticmethod
    def from_json(text: str) -> "StepFunction":
        obj = json.loads(text)
        return make_step([(normalize(item["region"]), float(item["value"])) for item in obj])


def _as_union(region) -> IntervalUnion:
    if isinstance(region, IntervalUnion):
        return region
    if isinstance(region, Interval):
        return IntervalUnion((region,))
    if region and not isinstance(region[0], (tuple, list, Interval)):
        region = [region]  # a bare (lo, hi) pair
    return normalize(region)


def make_step(pieces: Sequence[tuple[IntervalUnion, float]]) -> StepFunction:
    """Build a StepFunction, merging equal-value pieces and checking disjointness.

    Regions may be IntervalUnions, Intervals, (lo, hi) pairs, or lists of pairs.
    """
    by_value: dict[float, list[IntervalUnion]] = {}
    for region, value in pieces:
        region = _as_union(region)
        if region:
            by_value.setdefault(float(value), []).append(region)
    merged = tuple(
        (union(*regions), value) for value, regions in sorted(by_value.items(), reverse=True)
    )
    total = sum(region.measure for region, _ in merged)
    if merged:
        overall = union(*(region for region, _ in merged))
        if not math.isclose(total, overall.measure, rel_tol=1e-12, abs_tol=0.0):
            raise ValueError("step regions must be pairwise disjoint")
    return StepFunction(merged)


def indicator(region: IntervalUnion, value: float = 1.0) -> StepFunction:
    return make_step([(region, value)])


@dataclass(frozen=True)
class DecreasingStep:
    """Right-continuous non-increasing step on [0, inf): values[i] on
    [breakpoints[i], breakpoints[i+1]), zero past the last breakpoint."""

    breakpoints: tuple[float, ...]  # 0 = t0 < t1 < ... < tn
    values: tuple[float, ...]  # v1 > v2 > ... > vn > 0

    def __post_init__(self) -> None:
        if len(self.breakpoints) != len(self.values) + 1:
            raise ValueError("need one more breakpoint than values")
        if self.breakpoints and self.breakpoints[0] != 0.0:
            raise ValueError("breakpoints must start at 0")
        for a, b in zip(self.breakpoints, self.breakpoints[1:]):
            if not a < b:
                raise ValueError("breakpoints must be strictly increasing")
        for a, b in zip(self.values, self.values[1:]):
            if not a > b:
                raise ValueError("values must be strictly decreasing")
        if self.values and self.values[-1] <= 0.0:
            raise ValueError("values must be positive")

    def __call__(self, t: float) -> float:
        if t < 0.0:
            raise ValueError("decreasing steps live on [0, inf)")
        for (lo, hi), v in zip(zip(self.breakpoints, self.breakpoints[1:]), self.values):
            if lo <= t < hi:
                return v
        return 0.0


def distribution(f: StepFunction, u: WeightModel, s: float) -> float:
    """u-measure of the strict superlevel set {|f| > s}."""
    if s < 0.0:
        raise ValueError("levels are nonnegative")
    return sum(u.weight_of_set(region) for region, value in f.pieces if value > s)


def superlevel(f: StepFunction, s: float) -> IntervalUnion:
    regions = [region for region, value in f.pieces if value > s]
    return union(*regions) if regions else normalize([])


def rearrange(f: StepFunction, u: WeightModel) -> DecreasingStep:
    """Decreasing rearrangement of f with respect to the measure u(x)dx."""
    ranked = sorted(f.pieces, key=lambda rv: -rv[1])
    breakpoints = [0.0]
    values = []
    acc = 0.0
    for region, value in ranked:
        mass = u.weight_of_set(region)
        if mass <= 0.0:
            continue
        acc += mass
        breakpoints.append(acc)
        values.append(value)
    return DecreasingStep(tuple(breakpoints), tuple(values))


def _norm_terms(f: StepFunction, u: WeightModel, w: WeightModel, p: float):
    g = rearrange(f, u)
    Ws = [w.primitive(t) for t in g.breakpoints]
    direct = sum(
        v**p * (Ws[i + 1] - Ws[i]) for i, v in enumerate(g.values)
    )
    vs = list(g.values) + [0.0]
    layer = sum(
        (vs[i] ** p - vs[i + 1] ** p) * Ws[i + 1] for i in range(len(g.values))
    )
    return direct, layer, g, Ws


def lorentz_norm(f: StepFunction, u: WeightModel, w: WeightModel, p: float) -> float:
    """Quasi-norm (integral of (f*_u)^p w)^(1/p), exact via the primitive.

    Internally cross-checks the direct sum against the layer-cake form.
    """
    if w.domain_kind != "half_line":
        raise ConfigurationError("lorentz_norm needs w on the half-line")
    if p <= 0.0:
        raise ValueError("p must be positive")
    direct, layer, _, _ = _norm_terms(f, u, w, p)
    if direct > 0.0 and abs(direct - layer) > _CROSSCHECK_RTOL * direct:
        raise ConfigurationError(
            f"layer-cake cross-check failed: {direct!r} vs {layer!r}"
        )
    return direct ** (1.0 / p)


def weak_lorentz_norm(f: StepFunction, u: WeightModel, w: WeightModel, p: float) -> float:
    """sup_t f*_u(t) W^{1/p}(t): attained among left limits at breakpoints."""
    if w.domain_kind != "half_line":
        raise ConfigurationError("weak_lorentz_norm needs w on the half-line")
    if p <= 0.0:
        raise ValueError("p must be positive")
    _, _, g, Ws = _norm_terms(f, u, w, p)
    best = 0.0
    for i, v in enumerate(g.values):
        best = max(best, v * Ws[i + 1] ** (1.0 / p))
    return best


def decreasing_lp_norm(g: DecreasingStep, w: WeightModel, p: float) -> float:
    """L^p(w) norm of a decreasing step on the half-line."""
    Ws = [w.primitive(t) for t in g.breakpoints]
    return sum(v**p * (Ws[i + 1] - Ws[i]) for i, v in enumerate(g.values)) ** (1.0 / p)


def decreasing_weak_norm(g: DecreasingStep, w: WeightModel, p: float) -> float:
    Ws = [w.primitive(t) for t in g.breakpoints]
    return max((v * Ws[i + 1] ** (1.0 / p) for i, v in enumerate(g.values)), default=0.0)
