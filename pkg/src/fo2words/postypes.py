"""Position and triple types, the triple equivalence, and typed extractions.

A position's level-0 type records its order relation to the triple's
center and the self-loop bits of every predicate; level r+1 collects,
over the round-(r) corridor, the pair (cross-relation bits, level-r type)
of every corridor position.  A triple's type at level L is the pair of
type sets over its start window and over the center neighborhood; two
triples are equivalent when these types agree at every level up to the
radius.  Equivalence is decided by type equality (sufficient for the
constrained games; the games themselves stay available as a test oracle).

Types over wide corridors are computed without visiting every pair: a
position's cross-relation bits are all-false outside its own adjacency
list, so one pass builds the inner-type array with per-type position
indexes, and each position then needs only its neighbors plus left/right
presence counts (vectorized searchsorted over the indexes).
"""

from __future__ import annotations

from typing import Callable, Optional, Sequence

import numpy as np

from .locality import (
    Extraction,
    Interval,
    LocalityError,
    NeighborGraph,
    find_extraction,
    neighborhood,
    round_window,
    start_window,
    validate_extraction,
)
from .predicates import Signature


class TypeError_(ValueError):
    pass


# windows wider than this are refused (loud failure, not thrash)
TYPE_SCAN_BUDGET = 4_000_000


class WorkMeter:
    """Cumulative cell budget shared across type computations, so a search
    over many triples fails loudly instead of grinding."""

    def __init__(self, cells: int):
        self.left = cells

    def spend(self, cells: int) -> None:
        self.left -= cells
        if self.left < 0:
            raise LocalityError("type-scan work budget exhausted")


class TripleContext:
    """Per-(triple, radius) workspace with level-indexed type arrays."""

    def __init__(self, graph: NeighborGraph, sig: Signature, triple: tuple, s: int,
                 budget: int = TYPE_SCAN_BUDGET, meter: Optional[WorkMeter] = None):
        if len(triple) != 3 or not triple[0] < triple[1] < triple[2]:
            raise TypeError_(f"not an increasing triple: {triple}")
        if not validate_extraction(graph, triple, s):
            raise TypeError_(f"{triple} is not a valid {s}-extraction")
        self.graph = graph
        self.preds = tuple(p for p in sig if p.name != "less")
        for p in self.preds:
            if p.relation is None:
                raise TypeError_(f"{p.name}: types need uniform predicates")
        self.triple = triple
        self.s = s
        self.budget = budget
        self.meter = meter
        self._corridors: dict = {}
        self._levels: dict = {}

    def _spend(self, cells: int) -> None:
        if self.meter is not None:
            self.meter.spend(cells)

    def corridor(self, r: int) -> Interval:
        got = self._corridors.get(r)
        if got is None:
            i_minus, _, i_plus = self.triple
            got = round_window(self.graph, i_minus, i_plus, r, self.s)
            self._corridors[r] = got
        return got

    # -- type values

    def level0(self, x: int) -> tuple:
        i = self.triple[1]
        bits = [1 if x < i else 0, 1 if x > i else 0]
        for p in self.preds:
            bits.append(1 if p.relation((x, x)) else 0)
        return tuple(bits)

    def _cross(self, x: int, y: int) -> tuple:
        bits = [1 if x < y else 0, 1 if x > y else 0]
        for p in self.preds:
            bits.append(1 if p.relation((x, y)) else 0)
            bits.append(1 if p.relation((y, x)) else 0)
        return tuple(bits)

    class _Level:
        __slots__ = ("lo", "hi", "ids", "types", "positions_by_type")

        def __init__(self, lo, hi, ids, types, positions_by_type):
            self.lo = lo
            self.hi = hi
            self.ids = ids  # numpy int32, offset-indexed
            self.types = types  # id -> type value
            self.positions_by_type = positions_by_type  # id -> sorted numpy array

    def _level_array(self, r: int) -> "_Level":
        got = self._levels.get(r)
        if got is not None:
            return got
        corr = self.corridor(r)
        if len(corr) > self.budget:
            raise LocalityError(
                f"corridor of size {len(corr)} exceeds the type-scan budget {self.budget}")
        self._spend(len(corr))
        lo, hi = corr.lo, corr.hi
        count = hi - lo + 1
        if r == 0:
            i = self.triple[1]
            ys = np.arange(lo, hi + 1, dtype=np.int64)
            codes = (ys < i).astype(np.int64) + 2 * (ys > i)
            weight = 4
            for p in self.preds:
                rel = p.relation
                bits = np.fromiter((rel((int(y), int(y))) for y in range(lo, hi + 1)),
                                   dtype=np.int64, count=count)
                codes += weight * bits
                weight *= 2
            distinct, ids = np.unique(codes, return_inverse=True)
            ids = ids.astype(np.int32)
            types = [self._decode0(int(code)) for code in distinct]
        else:
            taus = self._tau_batch(range(lo, hi + 1), r)
            ids = np.empty(count, dtype=np.int32)
            id_of: dict = {}
            types = []
            for off, t in enumerate(taus):
                tid = id_of.get(t)
                if tid is None:
                    tid = len(types)
                    id_of[t] = tid
                    types.append(t)
                ids[off] = tid
        positions_by_type = [lo + np.flatnonzero(ids == tid) for tid in range(len(types))]
        got = self._Level(lo, hi, ids, types, positions_by_type)
        self._levels[r] = got
        return got

    def _decode0(self, code: int) -> tuple:
        bits = []
        for _ in range(len(self.preds) + 2):
            bits.append(code & 1)
            code >>= 1
        return tuple(bits)

    def _tau_batch(self, xs, r: int) -> list:
        """Level-r types for every x in xs, using the level-(r-1) array."""
        level = self._level_array(r - 1)
        t = len(self.preds)
        left_c = (0, 1) + (0,) * (2 * t)
        right_c = (1, 0) + (0,) * (2 * t)
        ntypes = len(level.types)
        xs_arr = np.fromiter(xs, dtype=np.int64)
        count = len(xs_arr)
        n_left = np.empty((ntypes, count), dtype=np.int64)
        n_right = np.empty((ntypes, count), dtype=np.int64)
        pres_left = np.zeros(count, dtype=np.int64)
        pres_right = np.zeros(count, dtype=np.int64)
        for tid in range(ntypes):
            pos = level.positions_by_type[tid]
            li = np.searchsorted(pos, xs_arr, side="left")
            ri = np.searchsorted(pos, xs_arr, side="right")
            n_left[tid] = li
            n_right[tid] = len(pos) - ri
            pres_left |= (li > 0).astype(np.int64) << tid
            pres_right |= (n_right[tid] > 0).astype(np.int64) << tid
        out = []
        cache: dict = {}
        adjacency = self.graph.adjacency
        ids, lo, hi, types = level.ids, level.lo, level.hi, level.types
        pres_left_l = pres_left.tolist()
        pres_right_l = pres_right.tolist()
        xs_list = xs_arr.tolist()
        for idx in range(count):
            x = xs_list[idx]
            special = [y for y in adjacency(x) if lo <= y <= hi]
            if lo <= x <= hi and x not in special:
                special.append(x)
                special.sort()
            left_bits = pres_left_l[idx]
            right_bits = pres_right_l[idx]
            fp_special = []
            for y in special:
                tid = int(ids[y - lo])
                fp_special.append((y - x, tid))
                # a special may be the only carrier of its type on its side
                if y < x and left_bits >> tid & 1:
                    nl = int(n_left[tid][idx]) - sum(
                        1 for y2 in special if y2 < x and ids[y2 - lo] == tid)
                    if nl == 0:
                        left_bits &= ~(1 << tid)
                elif y > x and right_bits >> tid & 1:
                    nr = int(n_right[tid][idx]) - sum(
                        1 for y2 in special if y2 > x and ids[y2 - lo] == tid)
                    if nr == 0:
                        right_bits &= ~(1 << tid)
            fingerprint = (left_bits, right_bits, tuple(fp_special))
            tau = cache.get(fingerprint)
            if tau is None:
                pairs = set()
                for y in special:
                    pairs.add((self._cross(x, y), types[int(ids[y - lo])]))
                for tid in range(ntypes):
                    if left_bits >> tid & 1:
                        pairs.add((left_c, types[tid]))
                    if right_bits >> tid & 1:
                        pairs.add((right_c, types[tid]))
                tau = frozenset(pairs)
                cache[fingerprint] = tau
            out.append(tau)
        return out

    def tau(self, x: int, r: int):
        if r == 0:
            return self.level0(x)
        return self._tau_batch([x], r)[0]

    def tau_window(self, window: Interval, r: int) -> frozenset:
        if len(window) > self.budget:
            raise LocalityError(
                f"window of size {len(window)} exceeds the type-scan budget {self.budget}")
        self._spend(len(window))
        if r == 0:
            return frozenset(self.level0(x) for x in window.members(self.budget))
        return frozenset(self._tau_batch(range(window.lo, window.hi + 1), r))

    def in_corridor(self, x: int, r: int) -> bool:
        return x in self.corridor(r)


# ---------------------------------------------------------------------------
# Public operations


def position_type(graph: NeighborGraph, sig: Signature, triple: tuple, x: int,
                  r: int, s: int, strict: bool = False):
    """The level-r type of x relative to the triple.

    The recursion is total in x; with ``strict`` the round-(r) corridor
    membership is enforced instead (positions the constrained games could
    actually reach).
    """
    ctx = TripleContext(graph, sig, triple, s)
    if strict and not ctx.in_corridor(x, r):
        raise TypeError_(f"position {x} outside the round-{r} corridor")
    return ctx.tau(x, r)


def triple_type(graph: NeighborGraph, sig: Signature, triple: tuple,
                s_prime: int, s: int, ctx: Optional[TripleContext] = None) -> tuple:
    """(types over the start window, types over the center neighborhood)."""
    if not 0 <= s_prime <= s:
        raise TypeError_(f"level {s_prime} outside 0..{s}")
    if ctx is None:
        ctx = TripleContext(graph, sig, triple, s)
    _, i, i_plus = triple
    j = start_window(graph, i, i_plus, s_prime)
    v = neighborhood(graph, i, s)
    left = ctx.tau_window(j, s_prime)
    right = ctx.tau_window(Interval(v.lo, v.hi), s_prime)
    return (left, right)


def type_vector(graph: NeighborGraph, sig: Signature, triple: tuple, s: int,
                meter: Optional[WorkMeter] = None) -> tuple:
    """All levels 0..s at once; the coloring used for typed extractions."""
    ctx = TripleContext(graph, sig, triple, s, meter=meter)
    return tuple(triple_type(graph, sig, triple, sp, s, ctx=ctx) for sp in range(s + 1))


def equivalent(graph: NeighborGraph, sig: Signature, a: tuple, b: tuple, s: int) -> bool:
    """Type-based triple equivalence: equal types at every level up to s."""
    return type_vector(graph, sig, a, s) == type_vector(graph, sig, b, s)


# ---------------------------------------------------------------------------
# Canonical serialization (golden-file friendly)


def type_to_text(t) -> str:
    if isinstance(t, tuple) and all(isinstance(b, int) for b in t):
        return "(" + ",".join(str(b) for b in t) + ")"
    if isinstance(t, frozenset):
        inner = sorted(type_to_text(e) for e in t)
        return "{" + ";".join(inner) + "}"
    if isinstance(t, tuple):
        return "[" + "|".join(type_to_text(e) for e in t) + "]"
    raise TypeError_(f"not a type value: {t!r}")


# ---------------------------------------------------------------------------
# Monochromatic subsets and typed extractions


def find_monochromatic_subset(universe: Sequence, color_of: Callable, p: int) -> Optional[tuple]:
    """A p-subset of the ordered universe all of whose increasing triples
    share one color, or None when the universe is exhausted.

    Desk-scale subset search with pruning; any p elements satisfy p < 3
    vacuously.
    """
    universe = list(universe)
    if p <= 2:
        return tuple(universe[:p]) if len(universe) >= p else None
    if len(universe) < p:
        return None

    def extend(chosen: list, start: int, target):
        if len(chosen) == p:
            return tuple(chosen)
        remaining = p - len(chosen)
        for idx in range(start, len(universe) - remaining + 1):
            cand = universe[idx]
            tgt = target
            ok = True
            for a in range(len(chosen)):
                for b in range(a + 1, len(chosen)):
                    c = color_of(chosen[a], chosen[b], cand)
                    if tgt is None:
                        tgt = c
                    elif c != tgt:
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                continue
            got = extend(chosen + [cand], idx + 1, tgt)
            if got is not None:
                return got
        return None

    return extend([], 0, None)


def well_typed_extraction(graph: NeighborGraph, sig: Signature, p: int, s: int,
                          ceiling: int = 10**6, max_universe: int = 64,
                          work_budget: int = 120_000_000,
                          color_cache: Optional[dict] = None,
                          meter: Optional[WorkMeter] = None) -> Extraction:
    """An s-extraction of size p whose increasing triples all share the same
    type vector.

    Pipeline: grow a plain extraction, color its triples by their full
    type vector, and search for a monochromatic p-subset.  The work budget
    caps the total cells scanned over all colorings, so a search whose
    universe keeps growing fails loudly instead of grinding; callers doing
    several searches over one graph may share the cache and the meter.
    """
    if p < 1:
        raise TypeError_("need at least one position")
    colors = color_cache if color_cache is not None else {}
    if meter is None:
        meter = WorkMeter(work_budget)

    def color_of(a, b, c):
        key = (s, a, b, c)
        got = colors.get(key)
        if got is None:
            got = type_vector(graph, sig, (a, b, c), s, meter=meter)
            colors[key] = got
        return got

    size = max(p, 3)
    while size <= max_universe:
        ext = find_extraction(graph, size, s, ceiling=ceiling)
        if p < 3:
            return Extraction(ext.positions[:p], s, well_typed=True)
        sub = find_monochromatic_subset(ext.positions, color_of, p)
        if sub is not None:
            assert validate_extraction(graph, sub, s)
            return Extraction(sub, s, well_typed=True)
        size += 1
    raise LocalityError(
        f"no well-typed extraction of size {p} within a universe of {max_universe}")
