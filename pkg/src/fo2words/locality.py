"""Closures, neighborhoods, interval windows and spread-out position sets.

Positions of the infinite predicate graph are glued by two mechanisms:
edges of the finite-degree predicates, and the interval closure of the
order.  The r-neighborhood V(i, r) combines both: the 0-neighborhood is
the closed span of all edges straddling i, and each further level closes
the union of the previous level over the current span.  Every V(i, r) is
a finite integer interval containing i.

Neighborhood endpoints are computed in closed form when every predicate
carries monotone straddle bounds (the catalogue's arithmetic predicates
do); otherwise a memoized scan is used.  Intervals are kept as (lo, hi)
pairs so that far positions with huge spans stay cheap; materializing an
interval is guarded by an explicit size budget.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .predicates import PredicateInterpretation, Signature


class LocalityError(ValueError):
    pass


class CeilingExceeded(RuntimeError):
    """A position scan hit its configured ceiling before succeeding."""


INTERVAL_BUDGET = 10**6
DEFAULT_CEILING = 10**6


@dataclass(frozen=True)
class Interval:
    lo: int
    hi: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise LocalityError(f"inverted interval bounds [{self.lo}, {self.hi}]")

    def __contains__(self, x: int) -> bool:
        return self.lo <= x <= self.hi

    def __len__(self) -> int:
        return self.hi - self.lo + 1

    def members(self, budget: int = INTERVAL_BUDGET) -> range:
        if len(self) > budget:
            raise LocalityError(f"interval of size {len(self)} exceeds the budget {budget}")
        return range(self.lo, self.hi + 1)

    def union_span(self, other: "Interval") -> "Interval":
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))


def closure(positions: Iterable[int]) -> Interval:
    """The integer interval [min, max] of a nonempty finite set."""
    positions = list(positions)
    if not positions:
        raise LocalityError("closure of the empty set is undefined")
    return Interval(min(positions), max(positions))


class NeighborGraph:
    """Adjacency over the naturals induced by finite-degree predicates."""

    def __init__(self, preds: Iterable[PredicateInterpretation]):
        preds = tuple(preds)
        for p in preds:
            if p.arity != 2:
                raise LocalityError(f"{p.name}: neighbor graphs need binary predicates")
            if not p.uniform:
                raise LocalityError(f"{p.name}: neighbor graphs need uniform predicates")
            if p.neighbor_oracle is None:
                raise LocalityError(f"{p.name}: missing neighbor oracle")
        self.preds = preds
        self.analytic = all(p.straddle is not None and p.monotone_straddle for p in preds)
        self._v0_cache: dict = {}
        self._v_cache: dict = {}

    @classmethod
    def from_signature(cls, sig: Signature, skip: tuple = ("less",)) -> "NeighborGraph":
        return cls(p for p in sig if p.name not in skip)

    def adjacency(self, k: int) -> tuple:
        out: set = set()
        for p in self.preds:
            out.update(p.neighbor_oracle(k))
        return tuple(sorted(out))

    # -- neighborhoods

    def v0(self, i: int) -> Interval:
        got = self._v0_cache.get(i)
        if got is None:
            lo = hi = i
            for p in self.preds:
                if p.straddle is not None:
                    plo, phi = p.straddle(i)
                    lo, hi = min(lo, plo), max(hi, phi)
                else:
                    plo, phi = self._scan_straddle(p, i)
                    lo, hi = min(lo, plo), max(hi, phi)
            got = Interval(lo, hi)
            self._v0_cache[i] = got
        return got

    @staticmethod
    def _scan_straddle(p: PredicateInterpretation, i: int) -> tuple:
        lo = hi = i
        for j in range(0, i + 1):
            nbrs = p.neighbor_oracle(j)
            if nbrs and nbrs[-1] >= i:
                lo = min(lo, j)
                hi = max(hi, max(n for n in nbrs if n >= i))
        return lo, hi

    def neighborhood(self, i: int, r: int) -> Interval:
        if i < 0 or r < 0:
            raise LocalityError("positions and radii are naturals")
        key = (i, r)
        got = self._v_cache.get(key)
        if got is not None:
            return got
        if r == 0:
            got = self.v0(i)
        elif self.analytic:
            base = self.v0(i)
            got = Interval(self._lo(base.lo, r - 1), self._hi(base.hi, r - 1))
        else:
            base = self.v0(i)
            lo, hi = base.lo, base.hi
            for j in base.members():
                inner = self.neighborhood(j, r - 1)
                lo, hi = min(lo, inner.lo), max(hi, inner.hi)
            got = Interval(lo, hi)
        self._v_cache[key] = got
        return got

    def _lo(self, i: int, r: int) -> int:
        # with monotone straddles, min over a span is attained at its left end
        for _ in range(r + 1):
            i = self.v0(i).lo
        return i

    def _hi(self, i: int, r: int) -> int:
        for _ in range(r + 1):
            i = self.v0(i).hi
        return i


def neighborhood(graph: NeighborGraph, i: int, r: int) -> Interval:
    """V(i, r): a finite interval containing i, monotone in r."""
    return graph.neighborhood(i, r)


def min_reach(graph: NeighborGraph, i: int, s: int) -> int:
    """Leftmost position of the s-neighborhood of i; tends to infinity."""
    return graph.neighborhood(i, s).lo


# ---------------------------------------------------------------------------
# Extractions


@dataclass(frozen=True)
class Extraction:
    positions: tuple
    radius: int
    well_typed: bool = False

    def __post_init__(self):
        if list(self.positions) != sorted(set(self.positions)):
            raise LocalityError("extraction positions must be strictly increasing")


def validate_extraction(graph: NeighborGraph, positions: Iterable[int], s: int) -> bool:
    """Pairwise: neighborhoods disjoint and separated by at least one integer."""
    positions = sorted(positions)
    vs = [graph.neighborhood(i, s) for i in positions]
    for a in range(len(vs)):
        for b in range(a + 1, len(vs)):
            if not (vs[a].hi + 1 < vs[b].lo or vs[b].hi + 1 < vs[a].lo):
                return False
    return True


def find_extraction(graph: NeighborGraph, p: int, s: int,
                    ceiling: int = DEFAULT_CEILING) -> Extraction:
    """Greedy left-to-right scan for p positions with disjoint, separated
    s-neighborhoods.  Success is guaranteed in principle; the ceiling turns
    a bad oracle or an undersized search into a loud error."""
    if p < 1:
        raise LocalityError("need at least one position")
    out: list = []
    prev_hi: Optional[int] = None
    pos = 0
    while len(out) < p:
        if pos > ceiling:
            raise CeilingExceeded(
                f"no extraction of size {p} found below position {ceiling} "
                f"(found {len(out)}: {out})")
        if prev_hi is not None and graph.analytic:
            pos = _first_reach_above(graph, s, prev_hi + 1, pos, ceiling)
            if pos is None:
                raise CeilingExceeded(
                    f"no position below {ceiling} with {s}-reach beyond {prev_hi + 1}")
        v = graph.neighborhood(pos, s)
        if prev_hi is None or v.lo > prev_hi + 1:
            out.append(pos)
            prev_hi = v.hi
            pos += 1
        else:
            pos += 1
    ext = Extraction(tuple(out), s)
    assert validate_extraction(graph, ext.positions, s)
    return ext


def _first_reach_above(graph: NeighborGraph, s: int, target: int, start: int,
                       ceiling: int) -> Optional[int]:
    """Smallest pos >= start with min V(pos, s) > target (monotone graphs)."""
    if graph.neighborhood(start, s).lo > target:
        return start
    lo, hi = start, start + 1
    while graph.neighborhood(hi, s).lo <= target:
        lo, hi = hi, hi * 2
        if lo > ceiling:
            return None
    while lo < hi - 1:
        mid = (lo + hi) // 2
        if graph.neighborhood(mid, s).lo > target:
            hi = mid
        else:
            lo = mid
    return hi


def find_min_reach_witness(graph: NeighborGraph, bound: int, s: int,
                           ceiling: int = DEFAULT_CEILING) -> int:
    """Some position i <= ceiling with min V(i, s) > bound."""
    if graph.analytic:
        got = _first_reach_above(graph, s, bound, 0, ceiling)
        if got is not None:
            return got
    else:
        for i in range(ceiling + 1):
            if graph.neighborhood(i, s).lo > bound:
                return i
    raise CeilingExceeded(f"no position below {ceiling} with {s}-reach beyond {bound}")


def random_extraction_triple(graph: NeighborGraph, s: int, rng,
                             base_bound: int = 24, jitter: int = 12,
                             ceiling: int = 10**300) -> tuple:
    """A pseudorandom valid s-extraction triple: start anywhere small, then
    walk right past each neighborhood with a random overshoot.

    Fast-growing predicates push the bignum positions past the ceiling for
    large starts, so the start bound shrinks on repeated failure."""
    bound = base_bound
    for attempt in range(96):
        if attempt and attempt % 8 == 0:
            bound = max(1, bound // 2)
        a = rng.randrange(0, bound + 1)
        try:
            b = _next_clear(graph, a, s, rng.randrange(0, jitter + 1), ceiling)
            c = _next_clear(graph, b, s, rng.randrange(0, jitter + 1), ceiling)
        except CeilingExceeded:
            continue
        if validate_extraction(graph, (a, b, c), s):
            return (a, b, c)
    raise CeilingExceeded(f"no random {s}-extraction triple found below {ceiling}")


def _next_clear(graph: NeighborGraph, prev: int, s: int, overshoot: int,
                ceiling: int, max_bits: int = 2048) -> int:
    target = graph.neighborhood(prev, s).hi + 1
    if target.bit_length() > max_bits:
        raise CeilingExceeded(f"reach target needs {target.bit_length()} bits")
    if graph.analytic:
        base = _first_reach_above(graph, s, target, prev + 1, ceiling)
        if base is None:
            raise CeilingExceeded(f"no position below {ceiling} clears {target}")
        return base + overshoot  # monotone reach: anything to the right stays clear
    pos = prev + 1
    found = 0
    while pos <= ceiling:
        if graph.neighborhood(pos, s).lo > target:
            if found >= overshoot:
                return pos
            found += 1
        pos += 1
    raise CeilingExceeded(f"no position below {ceiling} clears {target}")


# ---------------------------------------------------------------------------
# Windows around extraction triples


def start_window(graph: NeighborGraph, i: int, i_plus: int, s: int) -> Interval:
    """Positions from min V(i, s) up to just before min V(i_plus, s)."""
    lo = graph.neighborhood(i, s).lo
    hi = graph.neighborhood(i_plus, s).lo - 1
    if lo > hi:
        raise LocalityError(
            f"start window inverted for ({i}, {i_plus}) at radius {s}: not an extraction")
    return Interval(lo, hi)


def round_window(graph: NeighborGraph, i_minus: int, i_plus: int, r: int, s: int) -> Interval:
    """The round-r corridor: strictly between the (s-r)-neighborhoods of the
    flanking positions."""
    if not 0 <= r <= s:
        raise LocalityError(f"round index {r} outside 0..{s}")
    lo = graph.neighborhood(i_minus, s - r).hi + 1
    hi = graph.neighborhood(i_plus, s - r).lo - 1
    if lo > hi:
        raise LocalityError(
            f"round window inverted for ({i_minus}, {i_plus}) at ({r}, {s}): not an extraction")
    return Interval(lo, hi)


def segment_identity_check(graph: NeighborGraph, triple: tuple, r: int, s: int) -> bool:
    """The two adjacent start windows around the center tile the same span as
    the left neighborhood plus the corridor (set equality; expected True)."""
    i_minus, i, i_plus = triple
    j1 = start_window(graph, i_minus, i, s - r)
    j2 = start_window(graph, i, i_plus, s - r)
    left = graph.neighborhood(i_minus, s - r)
    corridor = round_window(graph, i_minus, i_plus, r, s)
    lhs = _normalize_union([j1, j2])
    rhs = _normalize_union([Interval(left.lo, left.hi), corridor])
    return lhs == rhs


def _normalize_union(intervals: list) -> tuple:
    spans = sorted((iv.lo, iv.hi) for iv in intervals)
    merged: list = []
    for lo, hi in spans:
        if merged and lo <= merged[-1][1] + 1:
            merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
        else:
            merged.append((lo, hi))
    return tuple(merged)
