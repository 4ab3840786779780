"""Two-pebble games with round and alternation budgets, solved exactly.

The game: Spoiler opens each round by placing a pebble on one word,
Duplicator answers on the other; from round three on, the pair placed two
rounds ago is removed first.  Spoiler may switch words at most m times
(the first move charges nothing) and wins as soon as the two live pebble
pairs induce non-isomorphic substructures; Duplicator wins by surviving
all s rounds.  Optional per-round windows confine both players, which is
how the triple-equivalence games are expressed.

Solving is exact backward induction with memoization, plus two
optimizations that never change values: the last remaining round is
decided by comparing relational profile sets, and for pure-order
signatures states are canonicalized by capping uniform letter runs
between pebbles (validated against the plain solver in tests).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Optional

from .predicates import PredicateInterpretation, Signature, builtin, signature

SPOILER = "spoiler"
DUPLICATOR = "duplicator"
U, V = "u", "v"


class IllegalMove(ValueError):
    pass


class ResourceGuard(RuntimeError):
    pass


DEFAULT_SOLVE_BUDGET = 10**8


VECTOR_KEYSET_THRESHOLD = 1 << 16

_POSITION_BITS_CACHE: dict = {}


def _position_bits(p: PredicateInterpretation, n: int, unary: bool):
    """Self-membership bits of a predicate over all positions of a length,
    cached across solver instances (shared, write-once entries)."""
    import numpy as np

    key = (p.name, unary, n)
    got = _POSITION_BITS_CACHE.get(key)
    if got is None:
        if unary:
            got = np.fromiter((p.membership((z,), n) for z in range(n)),
                              dtype=np.int64, count=n)
        else:
            got = np.fromiter((p.membership((z, z), n) for z in range(n)),
                              dtype=np.int64, count=n)
        _POSITION_BITS_CACHE[key] = got
    return got


def estimate_cost(spec: "GameSpec") -> int:
    """Work estimate honoring the per-round windows: expanded rounds pay the
    window product, the final round is linear (profile-set shortcut)."""
    sizes = [
        (len(spec.window(U, r)), len(spec.window(V, r)))
        for r in range(1, spec.rounds + 1)
    ]
    cost = sizes[-1][0] + sizes[-1][1]
    for a, b in sizes[:-1]:
        cost += max(1, a) * max(1, b)
    return cost


@dataclass(frozen=True)
class Window:
    """Inclusive integer interval of allowed positions; empty when lo > hi."""

    lo: int
    hi: int

    def __contains__(self, x: int) -> bool:
        return self.lo <= x <= self.hi

    def __iter__(self) -> Iterator[int]:
        return iter(range(self.lo, self.hi + 1))

    def __len__(self) -> int:
        return max(0, self.hi - self.lo + 1)


def _full_window(word: str) -> Window:
    return Window(0, len(word) - 1)


@dataclass(frozen=True)
class GameSpec:
    u: str
    v: str
    rounds: int
    alternations: Optional[int]  # None = unbounded word switches
    sig: Signature
    start_u: Optional[Window] = None
    start_v: Optional[Window] = None
    windows_u: Optional[tuple] = None  # index r-2 holds the window for round r >= 2
    windows_v: Optional[tuple] = None

    def __post_init__(self):
        if self.rounds < 1:
            raise ValueError("a game needs at least one round")
        if self.alternations is not None and self.alternations < 0:
            raise ValueError("negative alternation budget")

    def window(self, side: str, round_index: int) -> Window:
        word = self.u if side == U else self.v
        if round_index == 1:
            start = self.start_u if side == U else self.start_v
            return start if start is not None else _full_window(word)
        ws = self.windows_u if side == U else self.windows_v
        if ws is not None and round_index - 2 < len(ws):
            return ws[round_index - 2]
        return _full_window(word)


@dataclass(frozen=True)
class GameState:
    prev: Optional[tuple]  # (u position, v position) from round r-1
    cur: Optional[tuple]  # pair from round r
    rounds_used: int
    alts_used: int
    last_side: Optional[str]

    @classmethod
    def initial(cls) -> "GameState":
        return cls(None, None, 0, 0, None)

    def pairs(self) -> tuple:
        return tuple(p for p in (self.prev, self.cur) if p is not None)


def advance(state: GameState, side: str, pair: tuple) -> GameState:
    switched = state.last_side is not None and side != state.last_side
    return GameState(
        prev=state.cur,
        cur=pair,
        rounds_used=state.rounds_used + 1,
        alts_used=state.alts_used + (1 if switched else 0),
        last_side=side,
    )


# ---------------------------------------------------------------------------
# Partial isomorphism


def is_partial_iso(state: GameState, spec: GameSpec) -> bool:
    """Letters and every signature predicate (all argument orders, repeats
    included) agree between the pebbled u-positions and v-positions."""
    pairs = state.pairs()
    nu, nv = len(spec.u), len(spec.v)
    for (iu, iv) in pairs:
        if spec.u[iu] != spec.v[iv]:
            return False
    for p in spec.sig:
        if p.arity == 1:
            for (iu, iv) in pairs:
                if p.membership((iu,), nu) != p.membership((iv,), nv):
                    return False
        else:
            for (au, av) in pairs:
                for (bu, bv) in pairs:
                    if p.membership((au, bu), nu) != p.membership((av, bv), nv):
                        return False
    return True


# ---------------------------------------------------------------------------
# Solver


class Solver:
    """Exact backward-induction solver for one GameSpec."""

    def __init__(self, spec: GameSpec, budget: int = DEFAULT_SOLVE_BUDGET):
        cost = estimate_cost(spec)
        if cost > budget:
            raise ResourceGuard(
                f"estimated game size {cost} exceeds the solve budget {budget}")
        self.spec = spec
        self._memo: dict = {}
        self._keysets: dict = {}
        self._keymaps: dict = {}
        binary = [p for p in spec.sig if p.arity == 2]
        unary = [p for p in spec.sig if p.arity == 1]
        self._binary = tuple(binary)
        self._unary = tuple(unary)
        self._canonical = (
            spec.sig.names() == ("less",)
            and spec.start_u is None
            and spec.start_v is None
            and not spec.windows_u
            and not spec.windows_v
        )

    # -- state bookkeeping

    def _alts_left(self, state: GameState):
        m = self.spec.alternations
        return None if m is None else m - state.alts_used

    def _sides(self, state: GameState) -> tuple:
        if state.last_side is None:
            return (U, V)
        left = self._alts_left(state)
        if left is None or left > 0:
            return (U, V)
        return (state.last_side,)

    def _key(self, state: GameState):
        left = self._alts_left(state)
        if self._canonical:
            rounds_left = self.spec.rounds - state.rounds_used
            return ("c", rounds_left, left, state.last_side,
                    _order_struct(self.spec.u, state, 0, 1 << rounds_left),
                    _order_struct(self.spec.v, state, 1, 1 << rounds_left))
        return (state.prev, state.cur, state.rounds_used, left, state.last_side)

    # -- incremental isomorphism: combos touching the new pair only

    def _new_pair_iso(self, kept: Optional[tuple], new: tuple) -> bool:
        spec = self.spec
        zu, zv = new
        if spec.u[zu] != spec.v[zv]:
            return False
        nu, nv = len(spec.u), len(spec.v)
        for p in self._unary:
            if p.membership((zu,), nu) != p.membership((zv,), nv):
                return False
        for p in self._binary:
            if p.membership((zu, zu), nu) != p.membership((zv, zv), nv):
                return False
            if kept is not None:
                ku, kv = kept
                if p.membership((zu, ku), nu) != p.membership((zv, kv), nv):
                    return False
                if p.membership((ku, zu), nu) != p.membership((kv, zv), nv):
                    return False
        return True

    # -- final-round profile machinery

    def _pos_key(self, side: str, z: int, kept_pos: Optional[int]):
        word = self.spec.u if side == U else self.spec.v
        n = len(word)
        if kept_pos is None:
            # packed int; must stay aligned with the vectorized path
            code = ord(word[z])
            for p in self._unary:
                code = code * 2 + p.membership((z,), n)
            for p in self._binary:
                code = code * 2 + p.membership((z, z), n)
            return code
        bits = [word[z]]
        for p in self._unary:
            bits.append(p.membership((z,), n))
        for p in self._binary:
            bits.append(p.membership((z, z), n))
            bits.append(p.membership((z, kept_pos), n))
            bits.append(p.membership((kept_pos, z), n))
        return tuple(bits)

    def _keyset(self, side: str, kept_pos: Optional[int], round_index: int) -> frozenset:
        ck = (side, kept_pos, round_index)
        ks = self._keysets.get(ck)
        if ks is None:
            win = self.spec.window(side, round_index)
            if kept_pos is None and len(win) > VECTOR_KEYSET_THRESHOLD:
                ks = self._keyset_vectorized(side, win)
            if ks is None:
                ks = frozenset(self._pos_key(side, z, kept_pos) for z in win)
            self._keysets[ck] = ks
        return ks

    def _codes(self, side: str, win: Window):
        """Vectorized packed profile codes over a window, or None."""
        import numpy as np

        word = self.spec.u if side == U else self.spec.v
        try:
            letters = np.frombuffer(word.encode("latin-1"), dtype=np.uint8)
        except UnicodeEncodeError:
            return None
        n = len(word)
        codes = letters[win.lo: win.hi + 1].astype(np.int64)
        for p in self._unary:
            bits = _position_bits(p, n, unary=True)
            codes = codes * 2 + bits[win.lo: win.hi + 1]
        for p in self._binary:
            bits = _position_bits(p, n, unary=False)
            codes = codes * 2 + bits[win.lo: win.hi + 1]
        return codes

    def _keyset_vectorized(self, side: str, win: Window) -> Optional[frozenset]:
        import numpy as np

        codes = self._codes(side, win)
        if codes is None:
            return None
        return frozenset(int(c) for c in np.unique(codes))

    def first_winning_final_move(self, state: GameState) -> Optional[tuple]:
        """Smallest winning Spoiler move with one round left (u before v)."""
        import numpy as np

        r = state.rounds_used + 1
        kept = state.cur
        ku = kept[0] if kept else None
        kv = kept[1] if kept else None
        sides = self._sides(state)
        for side in (U, V):
            if side not in sides:
                continue
            kp, other, other_kp = (ku, V, kv) if side == U else (kv, U, ku)
            win = self.spec.window(side, r)
            if not len(win):
                continue
            other_keys = self._keyset(other, other_kp, r)
            if kp is None and len(win) > VECTOR_KEYSET_THRESHOLD:
                codes = self._codes(side, win)
                if codes is not None:
                    misses = np.flatnonzero(
                        ~np.isin(codes, np.fromiter(other_keys, dtype=np.int64,
                                                    count=len(other_keys))))
                    if len(misses):
                        return (side, win.lo + int(misses[0]))
                    continue
            for z in win:
                if self._pos_key(side, z, kp) not in other_keys:
                    return (side, z)
        return None

    def _keymap(self, side: str, kept_pos: Optional[int], round_index: int) -> dict:
        """key -> smallest window position realizing it."""
        ck = (side, kept_pos, round_index)
        km = self._keymaps.get(ck)
        if km is None:
            km = {}
            win = self.spec.window(side, round_index)
            for z in win:
                km.setdefault(self._pos_key(side, z, kept_pos), z)
            self._keymaps[ck] = km
        return km

    def _final_value(self, state: GameState) -> bool:
        """Spoiler-wins with exactly one round remaining."""
        r = state.rounds_used + 1
        kept = state.cur
        ku = kept[0] if kept else None
        kv = kept[1] if kept else None
        for side in self._sides(state):
            mine = self._keyset(U, ku, r) if side == U else self._keyset(V, kv, r)
            other = self._keyset(V, kv, r) if side == U else self._keyset(U, ku, r)
            if not mine <= other:
                return True
        return False

    # -- main recursion

    def spoiler_wins(self, state: Optional[GameState] = None) -> bool:
        state = state or GameState.initial()
        if state.pairs() and not is_partial_iso(state, self.spec):
            return True
        return self._value(state)

    def _value(self, state: GameState) -> bool:
        """Value below an isomorphic (or empty) configuration."""
        rounds_left = self.spec.rounds - state.rounds_used
        if rounds_left <= 0:
            return False
        if rounds_left == 1:
            return self._final_value(state)
        key = self._key(state)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        result = False
        r = state.rounds_used + 1
        kept = state.cur
        for side in self._sides(state):
            my_win = self.spec.window(side, r)
            their_win = self.spec.window(V if side == U else U, r)
            replies = list(their_win)
            for z in my_win:
                if not replies:
                    result = True
                    break
                all_lose = True
                # mirror reply first: it usually survives, pruning the scan
                ordered = replies
                if z in their_win and replies[0] != z:
                    ordered = [z] + replies
                for w in ordered:
                    pair = (z, w) if side == U else (w, z)
                    if not self._new_pair_iso(kept, pair):
                        continue  # reply loses instantly; keep checking others
                    child = advance(state, side, pair)
                    if not self._value(child):
                        all_lose = False
                        break
                if all_lose:
                    result = True
                    break
            if result:
                break
        self._memo[key] = result
        return result

    # -- move-level values (shared by strategies, hints, sessions)

    def spoiler_move_wins(self, state: GameState, side: str, z: int) -> bool:
        r = state.rounds_used + 1
        if side not in self._sides(state):
            return False
        their = self.spec.window(V if side == U else U, r)
        kept = state.cur
        found_survivor = False
        for w in their:
            pair = (z, w) if side == U else (w, z)
            if not self._new_pair_iso(kept, pair):
                continue
            child = advance(state, side, pair)
            if not self._value(child):
                found_survivor = True
                break
        return not found_survivor

    def duplicator_reply_survives(self, state: GameState, side: str, z: int, w: int) -> bool:
        pair = (z, w) if side == U else (w, z)
        if not self._new_pair_iso(state.cur, pair):
            return False
        return not self._value(advance(state, side, pair))


def _order_struct(word: str, state: GameState, coord: int, cap: int) -> tuple:
    """Canonical gap structure of one word for pure-order signatures."""
    marks: dict = {}
    if state.prev is not None:
        marks.setdefault(state.prev[coord], []).append("p")
    if state.cur is not None:
        marks.setdefault(state.cur[coord], []).append("c")
    cuts = sorted(marks)
    out = []
    start = 0
    for pos in cuts:
        out.append(_capped_rle(word[start:pos], cap))
        out.append((tuple(sorted(marks[pos])), word[pos]))
        start = pos + 1
    out.append(_capped_rle(word[start:], cap))
    return tuple(out)


def _capped_rle(segment: str, cap: int) -> tuple:
    out = []
    for ch, group in itertools.groupby(segment):
        out.append((ch, min(sum(1 for _ in group), cap)))
    return tuple(out)


# ---------------------------------------------------------------------------
# Strategies


class Strategy:
    """A deterministic move recipe for one role of one spec."""

    role: str

    def propose(self, state: GameState, pending: Optional[tuple] = None,
                history: tuple = ()) -> tuple:
        """Return (side, position); ``pending`` is Spoiler's placed move when
        this strategy answers for Duplicator.  ``history`` carries the
        completed rounds as (side, pair) entries for strategies whose moves
        depend on the line of play, not just the live pebbles."""
        raise NotImplementedError


class SolvedStrategy(Strategy):
    """Moves recomputed on demand from the solver's value function, with the
    smallest (u before v, then position) winning/surviving move chosen."""

    def __init__(self, solver: Solver, role: str):
        self.solver = solver
        self.role = role
        self.spec = solver.spec

    def propose(self, state: GameState, pending: Optional[tuple] = None,
                history: tuple = ()) -> tuple:
        r = state.rounds_used + 1
        if self.role == SPOILER:
            if pending is not None:
                raise IllegalMove("spoiler strategy asked to reply")
            if self.spec.rounds - state.rounds_used == 1:
                move = self.solver.first_winning_final_move(state)
                if move is not None:
                    return move
            best_legal = None
            for side in (U, V):
                if side not in self.solver._sides(state):
                    continue
                for z in self.spec.window(side, r):
                    if best_legal is None:
                        best_legal = (side, z)
                    if self.solver.spoiler_move_wins(state, side, z):
                        return (side, z)
            if best_legal is None:
                raise IllegalMove("no legal spoiler move")
            return best_legal
        if pending is None:
            raise IllegalMove("duplicator strategy needs spoiler's move")
        side, z = pending
        reply_side = V if side == U else U
        best_legal = None
        for w in self.spec.window(reply_side, r):
            if best_legal is None:
                best_legal = (reply_side, w)
            if self.solver.duplicator_reply_survives(state, side, z, w):
                return (reply_side, w)
        if best_legal is None:
            raise IllegalMove("no legal duplicator reply")
        return best_legal


@dataclass
class SolveResult:
    winner: str
    strategy: Strategy
    solver: Solver


def solve(spec: GameSpec, budget: int = DEFAULT_SOLVE_BUDGET) -> SolveResult:
    """Exact winner plus a witnessing strategy for that winner."""
    solver = Solver(spec, budget=budget)
    winner = SPOILER if solver.spoiler_wins() else DUPLICATOR
    return SolveResult(winner=winner, strategy=SolvedStrategy(solver, winner), solver=solver)


def replay_validate(spec: GameSpec, strategy: Strategy, budget: int = DEFAULT_SOLVE_BUDGET) -> bool:
    """Exhaustively replays all opposing move sequences; True iff the
    strategy's role wins every line of play."""
    cost = (max(1, len(spec.u)) * max(1, len(spec.v))) ** min(spec.rounds, 3)
    if cost > budget:
        raise ResourceGuard(f"replay tree of ~{cost} leaves exceeds the budget")
    wins_for_spoiler = strategy.role == SPOILER

    def walk(state: GameState, history: tuple) -> bool:
        if state.pairs() and not is_partial_iso(state, spec):
            return wins_for_spoiler
        if state.rounds_used >= spec.rounds:
            return not wins_for_spoiler
        r = state.rounds_used + 1
        sides = _legal_sides(spec, state)
        if strategy.role == SPOILER:
            if not sides:
                return False
            side, z = strategy.propose(state, history=history)
            if side not in sides or z not in spec.window(side, r):
                raise IllegalMove(f"strategy proposed illegal move {(side, z)}")
            reply_side = V if side == U else U
            replies = list(spec.window(reply_side, r))
            if not replies:
                return True
            for w in replies:
                pair = (z, w) if side == U else (w, z)
                if not walk(advance(state, side, pair), history + ((side, pair),)):
                    return False
            return True
        # duplicator strategy: all spoiler moves branch
        if not sides:
            return True
        for side in sides:
            reply_side = V if side == U else U
            if not len(spec.window(reply_side, r)):
                if len(spec.window(side, r)):
                    return False  # duplicator stuck
                continue
            for z in spec.window(side, r):
                rs, w = strategy.propose(state, pending=(side, z), history=history)
                if rs != reply_side or w not in spec.window(reply_side, r):
                    raise IllegalMove(f"strategy proposed illegal reply {(rs, w)}")
                pair = (z, w) if side == U else (w, z)
                if not walk(advance(state, side, pair), history + ((side, pair),)):
                    return False
        return True

    return walk(GameState.initial(), ())


def _legal_sides(spec: GameSpec, state: GameState) -> tuple:
    if state.last_side is None:
        sides = (U, V)
    elif spec.alternations is None or state.alts_used < spec.alternations:
        sides = (U, V)
    else:
        sides = (state.last_side,)
    return tuple(s for s in sides if len(spec.window(s, state.rounds_used + 1)))


def strategy_table(spec: GameSpec, strategy: Strategy, cap: int = 50000) -> list:
    """Materialized state -> move rows for every line of play the strategy
    can reach, for strategy files; capped for sanity."""
    rows: list = []
    seen: set = set()

    def fmt(state: GameState) -> str:
        return (f"prev={state.prev} cur={state.cur} r={state.rounds_used} "
                f"alt={state.alts_used} last={state.last_side}")

    def wander(state: GameState, history: tuple) -> None:
        if len(rows) >= cap:
            return
        if state.pairs() and not is_partial_iso(state, spec):
            return
        if state.rounds_used >= spec.rounds:
            return
        r = state.rounds_used + 1
        sides = _legal_sides(spec, state)
        if strategy.role == SPOILER:
            if not sides:
                return
            key = (fmt(state), history)
            if key in seen:
                return
            seen.add(key)
            side, z = strategy.propose(state, history=history)
            rows.append(f"{fmt(state)}\t{side}\t{z}")
            reply_side = V if side == U else U
            for w in spec.window(reply_side, r):
                pair = (z, w) if side == U else (w, z)
                wander(advance(state, side, pair), history + ((side, pair),))
        else:
            for side in sides:
                reply_side = V if side == U else U
                if not len(spec.window(reply_side, r)):
                    continue
                for z in spec.window(side, r):
                    key = (fmt(state), side, z)
                    if key in seen:
                        continue
                    seen.add(key)
                    rs, w = strategy.propose(state, pending=(side, z), history=history)
                    rows.append(f"{fmt(state)} pending=({side},{z})\t{rs}\t{w}")
                    pair = (z, w) if side == U else (w, z)
                    wander(advance(state, side, pair), history + ((side, pair),))

    wander(GameState.initial(), ())
    return rows


# ---------------------------------------------------------------------------
# Constrained specs (triple-equivalence games)


def constrained_spec(triple_u: tuple, triple_v: tuple, s_prime: int, variant: int,
                     sig: Signature, graph=None) -> GameSpec:
    """Game whose words are uniform 'a' with 'b' at the triple centers and
    whose moves are confined to the start/round windows around the triples.

    variant 1 starts in the inter-minimum segment right of the center;
    variant 2 starts inside the center's neighborhood.  Spoiler may switch
    words freely (unbounded alternations).
    """
    from .locality import NeighborGraph, neighborhood, start_window, round_window, validate_extraction

    if graph is None:
        graph = NeighborGraph.from_signature(sig)
    if s_prime < 1:
        raise ValueError("constrained games need at least one round")
    for t in (triple_u, triple_v):
        if not validate_extraction(graph, t, s_prime):
            raise IllegalMove(f"triple {t} is not an {s_prime}-extraction")
    iu_m, iu, iu_p = triple_u
    jv_m, jv, jv_p = triple_v
    len_u = neighborhood(graph, iu_p, 0).lo
    len_v = neighborhood(graph, jv_p, 0).lo
    word_u = _marked_word(len_u, iu)
    word_v = _marked_word(len_v, jv)
    if variant == 1:
        su = start_window(graph, iu, iu_p, s_prime)
        sv = start_window(graph, jv, jv_p, s_prime)
    elif variant == 2:
        nu = neighborhood(graph, iu, s_prime)
        nv = neighborhood(graph, jv, s_prime)
        su, sv = Window(nu.lo, nu.hi), Window(nv.lo, nv.hi)
    else:
        raise ValueError("variant must be 1 or 2")
    wins_u = tuple(
        _as_window(round_window(graph, iu_m, iu_p, r, s_prime)) for r in range(2, s_prime + 1)
    )
    wins_v = tuple(
        _as_window(round_window(graph, jv_m, jv_p, r, s_prime)) for r in range(2, s_prime + 1)
    )
    game_sig = sig if sig.has("less") else signature(builtin("less"), *sig.preds)
    return GameSpec(
        u=word_u,
        v=word_v,
        rounds=s_prime,
        alternations=None,
        sig=game_sig,
        start_u=_as_window(su),
        start_v=_as_window(sv),
        windows_u=wins_u,
        windows_v=wins_v,
    )


def _as_window(iv) -> Window:
    return Window(iv.lo, iv.hi)


def _marked_word(length: int, center: int, filler: str = "a", mark: str = "b") -> str:
    if center >= length:
        length = center + 1
    return filler * center + mark + filler * (length - center - 1)


# ---------------------------------------------------------------------------
# Interactive sessions


@dataclass
class GameSession:
    """Single-writer interactive game; engine play is solver-backed."""

    spec: GameSpec
    state: GameState = field(default_factory=GameState.initial)
    pending: Optional[tuple] = None  # spoiler's placed (side, pos) awaiting reply
    winner: Optional[str] = None
    reason: Optional[str] = None
    _solver: Optional[Solver] = None

    def solver(self) -> Solver:
        if self._solver is None:
            self._solver = Solver(self.spec)
        return self._solver

    @property
    def turn(self) -> str:
        return DUPLICATOR if self.pending is not None else SPOILER

    def legal_window(self, side: str) -> Window:
        return self.spec.window(side, self.state.rounds_used + 1)

    def apply_move(self, role: str, side: str, position: int) -> None:
        if self.winner is not None:
            raise IllegalMove("game is over")
        if role != self.turn:
            raise IllegalMove(f"not {role}'s turn")
        r = self.state.rounds_used + 1
        if role == SPOILER:
            if side not in _legal_sides(self.spec, self.state):
                raise IllegalMove("alternation budget exhausted for that word")
            if position not in self.spec.window(side, r):
                raise IllegalMove("position outside the allowed set")
            self.pending = (side, position)
            reply_side = V if side == U else U
            if not len(self.spec.window(reply_side, r)):
                self.winner, self.reason = SPOILER, "duplicator has no legal reply"
            return
        sp_side, sp_pos = self.pending
        expected = V if sp_side == U else U
        if side != expected:
            raise IllegalMove(f"duplicator must answer on the {expected} word")
        if position not in self.spec.window(side, r):
            raise IllegalMove("position outside the allowed set")
        pair = (sp_pos, position) if sp_side == U else (position, sp_pos)
        self.state = advance(self.state, sp_side, pair)
        self.pending = None
        if not is_partial_iso(self.state, self.spec):
            self.winner, self.reason = SPOILER, "pebbled substructures are not isomorphic"
        elif self.state.rounds_used >= self.spec.rounds:
            self.winner, self.reason = DUPLICATOR, "all rounds survived"

    def hint(self) -> tuple:
        """(side, position, winning) for the player to move."""
        if self.winner is not None:
            raise IllegalMove("game is over")
        solver = self.solver()
        if self.turn == SPOILER:
            strat = SolvedStrategy(solver, SPOILER)
            side, pos = strat.propose(self.state)
            return side, pos, solver.spoiler_move_wins(self.state, side, pos)
        strat = SolvedStrategy(solver, DUPLICATOR)
        side, pos = strat.propose(self.state, pending=self.pending)
        sp_side, sp_pos = self.pending
        winning = solver.duplicator_reply_survives(self.state, sp_side, sp_pos, pos)
        return side, pos, winning

    def engine_move(self) -> tuple:
        side, pos, _ = self.hint()
        role = self.turn
        self.apply_move(role, side, pos)
        return side, pos
