"""Covering construction, extremal test functions, and weak-type certificates.

The extremal function for a union of intervals S inside an interval I is
defined through its level sets: every superlevel set {f >= lam} is a disjoint
union of intervals each meeting S in exact proportion lam.  It is represented
here as a recursion tree (per-component interpolation leaves plus an outer
function on the merged blocks), and all queries (evaluation, level sets,
integrals) are answered exactly from that tree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from scipy.integrate import quad

from .boyd import Configuration
from .errors import PreconditionError
from .intervals import Interval, IntervalUnion, contains, normalize, union
from .weights import WeightModel

_REL_TOL = 1e-9


# -- covering construction --------------------------------------------------


def cover(I: Interval, S: IntervalUnion, t: float) -> list[Interval]:
    """Disjoint intervals I_n covering S inside I with t |S ∩ I_n| = |I_n|."""
    if not S:
        raise PreconditionError("cover needs a nonempty set")
    if not contains(IntervalUnion((I,)), S):
        raise PreconditionError("cover needs S within I")
    limit = I.length / S.measure
    if t < 1.0 - 1e-12 or t > limit * (1.0 + 1e-12):
        raise PreconditionError(f"cover needs t in [1, |I|/|S|], got {t}")
    t = min(max(t, 1.0), limit)
    out: list[Interval] = []
    _cover_rec(I.lo, I.hi, list(S.parts), t, out)
    return out


def _cover_rec(A: float, B: float, comps: list[Interval], t: float, out: list[Interval]) -> None:
    if not comps:
        return
    total = sum(c.length for c in comps)
    a1 = comps[0].lo
    if B - t * total <= a1:
        out.append(Interval(B - t * total, B))
        return
    # first block: walk the gaps after a1 for the root of t|S ∩ (a1, c)| = c - a1
    cum = 0.0
    cpos = None
    split = 0
    for k, comp in enumerate(comps):
        cum += comp.length
        nxt = comps[k + 1].lo if k + 1 < len(comps) else B
        cand = a1 + t * cum
        if cand >= comp.hi and cand <= nxt:
            cpos, split = cand, k + 1
            break
    if cpos is None:  # numerically pinned at the far end
        cpos, split = a1 + t * cum, len(comps)
    out.append(Interval(a1, cpos))
    rest = [c for c in comps[split:] if c.hi > cpos]
    if rest and rest[0].lo < cpos:
        rest[0] = Interval(cpos, rest[0].hi)
    _cover_rec(cpos, B, rest, t, out)


# -- extremal functions -----------------------------------------------------


@dataclass(frozen=True)
class _Leaf:
    """Single component (b, c) inside I = (a, d); level interval at lam is
    obtained by splitting the two side gaps in equal proportion."""

    a: float
    b: float
    c: float
    d: float

    @property
    def s_len(self) -> float:
        return self.c - self.b

    @property
    def i_len(self) -> float:
        return self.d - self.a

    def level_interval(self, lam: float) -> tuple[float, float]:
        if lam >= 1.0:
            return self.b, self.c
        gap = self.i_len - self.s_len
        theta = (self.s_len / lam - self.s_len) / gap
        theta = min(max(theta, 0.0), 1.0)
        return self.b - theta * (self.b - self.a), self.c + theta * (self.d - self.c)

    def value_at(self, x: float) -> float:
        if self.b <= x <= self.c:
            return 1.0
        if x < self.a or x > self.d:
            return 0.0
        if x < self.b:
            theta = (self.b - x) / (self.b - self.a)
        else:
            theta = (x - self.c) / (self.d - self.c)
        gap = self.i_len - self.s_len
        return self.s_len / (theta * gap + self.s_len)


class ExtremalFunction:
    """The level-set-proportional function for S inside I.  Use
    :func:`build_extremal`."""

    def __init__(
        self,
        base_interval: Interval,
        base_set: IntervalUnion,
        leaves: tuple[_Leaf, ...],
        lam0: Optional[float],
        blocks: tuple[Interval, ...],
        outer: Optional["ExtremalFunction"],
        constant: bool,
    ):
        self.base_interval = base_interval
        self.base_set = base_set
        self.floor = base_set.measure / base_interval.length
        self._leaves = leaves
        self._lam0 = lam0
        self._blocks = blocks
        self._outer = outer
        self._constant = constant

    # -- queries ------------------------------------------------------------

    def level_set(self, lam: float) -> IntervalUnion:
        """{x : f(x) >= lam} as a disjoint union of intervals."""
        if lam > 1.0:
            return normalize([])
        if self._constant or lam <= self.floor:
            return IntervalUnion((self.base_interval,))
        if self._lam0 is None or lam >= self._lam0:
            return normalize([leaf.level_interval(lam) for leaf in self._leaves])
        assert self._outer is not None
        return self._outer.level_set(lam / self._lam0)

    def evaluate(self, x: float) -> float:
        I = self.base_interval
        if x < I.lo or x > I.hi:
            return 0.0
        if x == I.lo or x == I.hi:
            return max(self.floor, max(leaf.value_at(x) for leaf in self._leaves)) if self._leaves else self.floor
        if self._constant:
            return 1.0
        if self._lam0 is None:
            return max(self.floor, self._leaves[0].value_at(x))
        for block in self._blocks:
            if block.lo <= x <= block.hi:
                return max(self.floor, max(leaf.value_at(x) for leaf in self._leaves))
        assert self._outer is not None
        return max(self.floor, self._lam0 * self._outer.evaluate(x))

    def mean_value(self) -> float:
        """Mean of f over I: (1 + log s)/s with s = |I|/|S|, from the exact
        distribution |{f >= lam}| = |S|/lam on [floor, 1]."""
        if self._constant:
            return 1.0
        return self.floor * (1.0 + math.log(1.0 / self.floor))

    def integral(self) -> float:
        return self.mean_value() * self.base_interval.length


def build_extremal(I: Interval, S: IntervalUnion) -> ExtremalFunction:
    """Construct the extremal function for S = union of intervals inside I."""
    if not S:
        raise PreconditionError("extremal function needs a nonempty set")
    if not contains(IntervalUnion((I,)), S):
        raise PreconditionError("extremal function needs S within I")
    if S.measure >= I.length * (1.0 - 1e-15):
        return ExtremalFunction(I, IntervalUnion((I,)), (), None, (), None, constant=True)

    comps = S.parts
    leaves = tuple(_Leaf(I.lo, c.lo, c.hi, I.hi) for c in comps)
    floor = S.measure / I.length
    if len(comps) == 1:
        return ExtremalFunction(I, S, leaves, None, (), None, constant=False)

    # lam0: largest level at which two adjacent per-component intervals touch.
    lam0 = floor
    for left, right in zip(leaves, leaves[1:]):
        gap = right.b - left.c
        P = (left.d - left.c) * left.s_len / (left.i_len - left.s_len)
        Q = (right.b - right.a) * right.s_len / (right.i_len - right.s_len)
        xi = 1.0 + gap / (P + Q)
        lam0 = max(lam0, 1.0 / xi)

    if lam0 <= floor * (1.0 + 1e-12):
        # the per-component intervals only meet when they fill I exactly
        return ExtremalFunction(I, S, leaves, floor, (I,), None, constant=False)

    raw = [leaf.level_interval(lam0) for leaf in leaves]
    merged: list[tuple[float, float]] = []
    tol = 1e-12 * I.length
    for lo, hi in raw:
        if merged and lo <= merged[-1][1] + tol:
            merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
        else:
            merged.append((lo, hi))
    if len(merged) >= len(comps):
        # force the closest pair together: lam0 is a touching level
        gaps = [merged[i + 1][0] - merged[i][1] for i in range(len(merged) - 1)]
        i = gaps.index(min(gaps))
        merged[i] = (merged[i][0], merged[i + 1][1])
        del merged[i + 1]
    blocks = tuple(Interval(lo, hi) for lo, hi in merged)
    outer = build_extremal(I, IntervalUnion(blocks))
    return ExtremalFunction(I, S, leaves, lam0, blocks, outer, constant=False)


def level_set(F: ExtremalFunction, lam: float) -> IntervalUnion:
    return F.level_set(lam)


def evaluate(F: ExtremalFunction, x: float) -> float:
    return F.evaluate(x)


def mean_value(F: ExtremalFunction) -> float:
    return F.mean_value()


class ExtremalSum:
    """Sum of extremal functions with pairwise disjoint base intervals."""

    def __init__(self, summands: Sequence[ExtremalFunction]):
        ordered = sorted(summands, key=lambda F: F.base_interval.lo)
        for a, b in zip(ordered, ordered[1:]):
            if a.base_interval.hi > b.base_interval.lo:
                raise PreconditionError("extremal summands must have disjoint supports")
        self.summands = tuple(ordered)

    def level_set(self, lam: float) -> IntervalUnion:
        return union(*(F.level_set(lam) for F in self.summands))

    def evaluate(self, x: float) -> float:
        return sum(F.evaluate(x) for F in self.summands)

    def support(self) -> IntervalUnion:
        return normalize([F.base_interval for F in self.summands])


# -- weak-type certificate --------------------------------------------------


@dataclass(frozen=True)
class WeakTypeCertificate:
    p: float
    s: float
    family: Configuration
    threshold: float
    test_norm: float
    superset_mass: float
    lower_bound: float
    log_bound_constant: float  # test_norm^p / ((1 + log s) W(u(union S)))

    def as_dict(self) -> dict:
        return {
            "p": self.p,
            "s": self.s,
            "threshold": self.threshold,
            "test_norm": self.test_norm,
            "superset_mass": self.superset_mass,
            "lower_bound": self.lower_bound,
            "log_bound_constant": self.log_bound_constant,
            "pairs": [
                {"I": [I.lo, I.hi], "S": [[c.lo, c.hi] for c in S.parts]}
                for I, S in self.family.pairs
            ],
        }


def test_function_norm_p(
    u: WeightModel, w: WeightModel, p: float, total: ExtremalSum, s: float
) -> float:
    """p-th power of the Lorentz quasi-norm of the summed extremal function,
    by the layer-cake form; the flat part below 1/s is closed form and the
    remaining level-set integral is evaluated by adaptive quadrature."""
    sup_mass = sum(
        u.weight_of_set(IntervalUnion((F.base_interval,))) for F in total.summands
    )
    flat = s**-p * w.primitive(sup_mass)

    def integrand(lam: float) -> float:
        mass = sum(u.weight_of_set(F.level_set(lam)) for F in total.summands)
        return p * lam ** (p - 1.0) * w.primitive(mass)

    middle, _ = quad(integrand, 1.0 / s, 1.0, limit=200, epsabs=1e-12, epsrel=1e-11)
    return flat + middle


def weak_type_lower_bound(
    u: WeightModel, w: WeightModel, p: float, family: Configuration
) -> WeakTypeCertificate:
    """Operator-norm lower bound for the weak-type maximal inequality.

    The mean of each summand over its interval is (1 + log s)/s, so the whole
    union of the I_j sits inside {Mf > (1 + log s)/(2s)}; comparing the weak
    norm of that superlevel set with the test-function norm gives the bound.
    """
    s = family.ratio
    if s <= 1.0:
        raise PreconditionError("certificate needs ratio s > 1")
    if p <= 1.0:
        raise PreconditionError("certificate machinery targets p > 1")
    summands = [build_extremal(I, S) for I, S in family.pairs]
    total = ExtremalSum(summands)
    test_norm = test_function_norm_p(u, w, p, total, s) ** (1.0 / p)
    threshold = (1.0 + math.log(s)) / (2.0 * s)
    superset_mass = w.primitive(
        sum(u.weight_of_set(IntervalUnion((I,))) for I, _ in family.pairs)
    )
    subset_mass = w.primitive(sum(u.weight_of_set(S) for _, S in family.pairs))
    lower_bound = superset_mass ** (1.0 / p) * threshold / test_norm
    return WeakTypeCertificate(
        p=p,
        s=s,
        family=family,
        threshold=threshold,
        test_norm=test_norm,
        superset_mass=superset_mass,
        lower_bound=lower_bound,
        log_bound_constant=test_norm**p / ((1.0 + math.log(s)) * subset_mass),
    )


def wbar_u_bound_from_weak(C_weak: float, p: float, s: float) -> float:
    """Upper bound on the joint index function at s implied by a weak-type
    operator norm C_weak, with the constants of the proof chain tracked
    explicitly: W(u(union I)) <= C^p (2s/(1+log s))^p ||f||^p and
    ||f||^p <= (1 + log s) W(u(union S))."""
    if C_weak <= 0.0 or s <= 1.0:
        raise PreconditionError("bound needs C_weak > 0 and s > 1")
    return C_weak**p * 2.0**p * (1.0 + math.log(s)) ** (1.0 - p) * s**p
