"""Order-collapse constructions for neutral-letter languages.

Three machines live here:

* ``collapse_to_finite_degree`` rewrites a two-variable formula over
  arbitrary numerical predicates into one over order, generated
  finite-degree predicates and the three most-significant-bit pairings.
  Quantifiers are relativized to the window whose elements have exactly
  one power-of-two position strictly above them; each window element x
  encodes four input positions x + k*msb(x) for k in -1, 0, 1, 2, and
  atoms are rewritten accordingly.  Semantically the output simulates the
  input on the word padded with neutral letters up to twice the top
  power, so it agrees with the input exactly on neutral-letter languages.

* ``pad_with_neutral`` dilutes a word so that adjacent input letters are
  out of reach within a round budget (successor becomes useless).

* ``build_padded_pair`` and ``translate_strategy`` re-seat two words on a
  well-typed extraction and translate a Spoiler win over order plus
  finite-degree predicates on the padded pair into a Spoiler win over
  order and successor on the originals, by the four-case back-and-forth
  simulation.  Replies are found by solving the windowed continuation
  games; any failure of the construction's induction hypothesis is
  reported as a simulation-invariant violation with round and case.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional

from . import formula as F
from .efgame import (
    SPOILER,
    U,
    V,
    GameSpec,
    GameState,
    Solver,
    Strategy,
    Window,
    advance,
    is_partial_iso,
)
from .evaluator import evaluate
from .locality import Extraction, NeighborGraph, neighborhood, round_window
from .postypes import well_typed_extraction
from .predicates import PredicateInterpretation, Signature, builtin, signature


class CollapseError(ValueError):
    pass


class SimulationInvariantError(RuntimeError):
    """The back-and-forth induction failed at a concrete round and case."""

    def __init__(self, round_index: int, case: int, detail: str):
        super().__init__(f"round {round_index}, case {case}: {detail}")
        self.round_index = round_index
        self.case = case


# ---------------------------------------------------------------------------
# Formula rewriting


@dataclass
class TransformResult:
    formula: F.Formula
    environment: Signature


_OFFSETS = (-1, 0, 1, 2)
_MSB_NAME = {-1: "msb0", 1: "msb10", 2: "msb11"}


def _unit(x: int) -> int:
    return 1 << (x.bit_length() - 1)


def _window_membership(var: str, other: str) -> F.Formula:
    """Exactly one power-of-two position strictly above var."""
    pow2 = lambda v: F.PredAtom("pow2diag", (v, v))  # noqa: E731
    above = F.Exists(other, F.And((F.PredAtom("less", (var, other)), pow2(other))))
    two_above = F.Exists(
        other,
        F.And((
            F.PredAtom("less", (var, other)),
            pow2(other),
            F.Exists(var, F.And((F.PredAtom("less", (other, var)), pow2(var)))),
        )),
    )
    return F.And((above, F.Not(two_above)))


def _q_name(base: str, ks: tuple) -> str:
    tag = "_".join(("m1" if k == -1 else str(k)) for k in ks)
    return f"q{tag}__{base}"


def _make_q(p: PredicateInterpretation, ks: tuple) -> PredicateInterpretation:
    """Offset-composed copy of p, restricted to same-magnitude arguments.

    Membership holds when the arguments share a power-of-two window and p
    holds of the encoded positions at the window's doubled length.
    """
    arity = len(ks)

    def rel(tup, _p=p, _ks=ks):
        us = [_unit(t) if t >= 1 else 0 for t in tup]
        if 0 in us or len(set(us)) != 1:
            return False
        u = us[0]
        sims = tuple(t + k * u for t, k in zip(tup, _ks))
        return _p.membership(sims, 4 * u)

    return PredicateInterpretation(
        name=_q_name(p.name, ks),
        arity=arity,
        uniform=True,
        query=lambda tup, n, _r=rel: _r(tup),
        relation=rel,
    )


def collapse_to_finite_degree(f: F.Formula, c: str, alphabet: Iterable[str],
                              sig: Signature) -> TransformResult:
    """Rewrite a closed two-variable formula over arbitrary predicates into
    one over {less, pow2diag, msb0, msb10, msb11} plus generated
    finite-degree predicates, agreeing with f on every word whenever c is a
    neutral letter of f's language.

    Words of length at most two degenerate the window scheme and are
    matched exactly by a hard-coded short-word disjunct.
    """
    alphabet = tuple(alphabet)
    if c not in alphabet:
        raise CollapseError(f"neutral letter {c!r} not in alphabet")
    if not F.is_closed(f):
        raise CollapseError("formula must be closed")
    mets = F.metrics(f)
    if not mets.is_two_variable:
        raise CollapseError(f"formula uses {mets.variable_count} variables")

    vars_ = sorted(F.variables(f))
    if not vars_:
        vars_ = ["x", "y"]
    elif len(vars_) == 1:
        vars_.append("y" if vars_[0] != "y" else "x")
    v1, v2 = vars_[0], vars_[1]
    other_of = {v1: v2, v2: v1}

    generated: dict = {}
    guards: dict = {}

    def q_for(name: str, ks: tuple) -> str:
        p = sig.get(name)
        qname = _q_name(name, ks)
        if qname not in generated:
            generated[qname] = _make_q(p, ks)
        return qname

    def guard_for(var: str) -> F.Formula:
        # one shared node per variable so table evaluation can reuse it
        got = guards.get(var)
        if got is None:
            got = _window_membership(var, other_of[var])
            guards[var] = got
        return got

    def rewrite(node: F.Formula, offs: dict) -> F.Formula:
        if isinstance(node, (F.TrueAtom, F.FalseAtom)):
            return node
        if isinstance(node, F.Not):
            return F.Not(rewrite(node.child, offs))
        if isinstance(node, F.And):
            return F.And(tuple(rewrite(ch, offs) for ch in node.children))
        if isinstance(node, F.Or):
            return F.Or(tuple(rewrite(ch, offs) for ch in node.children))
        if isinstance(node, F.Exists):
            parts = []
            for k in _OFFSETS:
                body = rewrite(node.child, {**offs, node.var: k})
                parts.append(F.Exists(node.var, F.And((guard_for(node.var), body))))
            return F.Or(tuple(parts))
        if isinstance(node, F.Forall):
            parts = []
            for k in _OFFSETS:
                body = rewrite(node.child, {**offs, node.var: k})
                parts.append(F.Forall(node.var, F.Or((F.Not(guard_for(node.var)), body))))
            return F.And(tuple(parts))
        if isinstance(node, F.LetterAtom):
            k = offs[node.var]
            if k == 0:
                return node
            other = other_of[node.var]
            msb = F.PredAtom(_MSB_NAME[k], (node.var, other))
            reach = F.Exists(other, F.And((msb, F.LetterAtom(node.letter, other))))
            if node.letter == c:
                offword = F.Forall(other, F.Not(msb))
                return F.Or((reach, offword))
            return reach
        if isinstance(node, F.PredAtom):
            ks = tuple(offs[v] for v in node.args)
            if node.name == "less" and len(node.args) == 2:
                if ks[0] == ks[1]:
                    return node
                return F.TRUE if ks[0] < ks[1] else F.FALSE
            return F.PredAtom(q_for(node.name, ks), node.args)
        raise TypeError(f"not a formula node: {node!r}")

    main = rewrite(f, {})

    less = F.PredAtom("less", (v1, v2))
    has_two = F.Exists(v1, F.Exists(v2, less))
    has_three = F.Exists(v1, F.And((
        F.Exists(v2, F.PredAtom("less", (v2, v1))),
        F.Exists(v2, F.PredAtom("less", (v1, v2))),
    )))

    small_parts = []
    if evaluate(f, "", sig):
        small_parts.append(F.Not(F.Exists(v1, F.TRUE)))
    only_one = F.And((F.Exists(v1, F.TRUE), F.Not(has_two)))
    for (d,) in itertools.product(alphabet):
        if evaluate(f, d, sig):
            small_parts.append(F.And((only_one, F.Exists(v1, F.LetterAtom(d, v1)))))
    for d, e in itertools.product(alphabet, repeat=2):
        if evaluate(f, d + e, sig):
            shape = F.Exists(v1, F.And((
                F.LetterAtom(d, v1),
                F.Exists(v2, F.And((less, F.LetterAtom(e, v2)))),
            )))
            small_parts.append(F.And((has_two, shape)))
    small = F.Or(tuple(small_parts)) if small_parts else F.FALSE

    out = F.Or((
        F.And((F.Not(has_three), small)),
        F.And((has_three, main)),
    ))

    env = [builtin("less"), builtin("pow2diag"), builtin("msb0"),
           builtin("msb10"), builtin("msb11")]
    env.extend(generated.values())
    result = TransformResult(formula=out, environment=Signature(tuple(env)))
    assert F.metrics(out).is_two_variable
    return result


# ---------------------------------------------------------------------------
# Neutral-letter padding


def pad_with_neutral(u: str, s: int, c: str) -> str:
    """Insert 2s neutral letters between positions, and at both ends."""
    if s < 0:
        raise CollapseError("round count must be a natural")
    pad = c * (2 * s)
    return pad + "".join(ch + pad for ch in u)


# ---------------------------------------------------------------------------
# Padded pairs on well-typed extractions


@dataclass(frozen=True)
class PaddedPair:
    u: str
    v: str
    u_prime: str
    v_prime: str
    placement_u: tuple  # position of u[i] inside u_prime
    placement_v: tuple
    extraction: Extraction
    neutral: str
    radius: int  # the s the extraction was built for

    @property
    def length(self) -> int:
        return len(self.u_prime)

    def flank_u(self, k: int) -> int:
        return self._flank(self.placement_u, k)

    def flank_v(self, k: int) -> int:
        return self._flank(self.placement_v, k)

    def _flank(self, placements: tuple, k: int) -> int:
        if k < 0:
            return self.extraction.positions[0]
        if k >= len(placements):
            return self.extraction.positions[-1]
        return placements[k]


def build_padded_pair(u: str, v: str, c: str, s: int, sig: Signature,
                      graph: Optional[NeighborGraph] = None,
                      ceiling: int = 10**6,
                      extraction: Optional[Extraction] = None) -> PaddedPair:
    """Re-seat u and v on a well-typed s-extraction, neutral letters
    everywhere else, first and last letters aligned.

    A precomputed well-typed extraction of the right size may be passed in
    (they are expensive for arithmetic predicates and reusable across word
    pairs of equal maximum length).
    """
    if not u or not v:
        raise CollapseError("both words must be nonempty")
    if c in u or c in v:
        raise CollapseError("the originals may not contain the neutral letter")
    if graph is None:
        graph = NeighborGraph.from_signature(sig)
    p = max(len(u), len(v)) + 1
    if extraction is None:
        ext = well_typed_extraction(graph, sig, p + 1, s, ceiling=ceiling)
    else:
        ext = extraction
        if len(ext.positions) != p + 1 or ext.radius != s or not ext.well_typed:
            raise CollapseError("supplied extraction does not fit this pair")
    xs = ext.positions  # i_0 < ... < i_p
    n = neighborhood(graph, xs[-1], s).hi

    slots = xs[1:-1]  # p - 1 = max(|u|, |v|) interior anchors
    place_u = _choose_slots(slots, len(u))
    place_v = _choose_slots(slots, len(v))
    u_prime = _seat(u, place_u, n, c)
    v_prime = _seat(v, place_v, n, c)
    pair = PaddedPair(u=u, v=v, u_prime=u_prime, v_prime=v_prime,
                      placement_u=place_u, placement_v=place_v,
                      extraction=ext, neutral=c, radius=s)
    assert place_u[0] == place_v[0]
    if min(len(u), len(v)) >= 2 or len(u) == len(v):
        assert place_u[-1] == place_v[-1]
    return pair


def _choose_slots(slots: tuple, length: int) -> tuple:
    # first letters always share a slot; last letters too, except that a
    # one-letter word against a longer one cannot satisfy both
    if length > len(slots):
        raise CollapseError("extraction too small for the word")
    if length == len(slots):
        return tuple(slots)
    if length == 1:
        return (slots[0],)
    return tuple(slots[: length - 1]) + (slots[-1],)


def _seat(word: str, placements: tuple, n: int, c: str) -> str:
    out = [c] * n
    for ch, pos in zip(word, placements):
        out[pos] = ch
    return "".join(out)


# ---------------------------------------------------------------------------
# Strategy translation


@dataclass(frozen=True)
class TraceRow:
    round_index: int
    case: int
    side: str
    i_prime: Optional[int]
    j_prime: Optional[int]
    i: Optional[int]
    j: Optional[int]

    def as_tsv(self) -> str:
        blank = lambda x: "-" if x is None else str(x)  # noqa: E731
        return "\t".join([str(self.round_index), str(self.case), self.side,
                          blank(self.i_prime), blank(self.j_prime),
                          blank(self.i), blank(self.j)])


class TreeStrategy(Strategy):
    """Spoiler strategy keyed by the line of play (history of advances)."""

    def __init__(self, moves: dict):
        self.role = SPOILER
        self._moves = moves

    def propose(self, state: GameState, pending: Optional[tuple] = None,
                history: tuple = ()) -> tuple:
        try:
            return self._moves[history]
        except KeyError:
            raise CollapseError(f"strategy has no move for this line: {history}") from None


@dataclass
class TranslationResult:
    strategy: TreeStrategy
    trace: tuple  # TraceRow per simulated round, depth-first over branches
    uv_spec: GameSpec


def translate_strategy(pair: PaddedPair, prime_strategy: Strategy, s: int,
                       m: Optional[int], sig: Signature,
                       graph: Optional[NeighborGraph] = None) -> TranslationResult:
    """Simulate the order+predicates win on the padded pair and emit a
    Spoiler strategy over order and successor on the originals."""
    if graph is None:
        graph = NeighborGraph.from_signature(sig)
    translator = _Translator(pair, prime_strategy, s, m, sig, graph)
    translator.run()
    uv_sig = signature(builtin("less"), builtin("succ"))
    uv_spec = GameSpec(u=pair.u, v=pair.v, rounds=s, alternations=m, sig=uv_sig)
    return TranslationResult(strategy=TreeStrategy(translator.moves),
                             trace=tuple(translator.trace), uv_spec=uv_spec)


class _Translator:
    def __init__(self, pair, prime_strategy, s, m, sig, graph):
        self.pair = pair
        self.prime_strategy = prime_strategy
        self.s = s
        self.graph = graph
        game_sig = sig if sig.has("less") else signature(builtin("less"), *sig.preds)
        self.prime_spec = GameSpec(u=pair.u_prime, v=pair.v_prime, rounds=s,
                                   alternations=m, sig=game_sig)
        uv_sig = signature(builtin("less"), builtin("succ"))
        self.uv_spec = GameSpec(u=pair.u, v=pair.v, rounds=s, alternations=m, sig=uv_sig)
        self.moves: dict = {}
        self.trace: list = []
        self._zone_solvers: dict = {}
        self._boundaries: dict = {}

    # -- geometry helpers

    def _flank(self, side: str, k: int) -> int:
        return self.pair.flank_u(k) if side == U else self.pair.flank_v(k)

    def _word_len(self, side: str) -> int:
        return len(self.pair.u if side == U else self.pair.v)

    def _boundary_list(self, side: str, level: int) -> list:
        key = (side, level)
        got = self._boundaries.get(key)
        if got is None:
            count = self._word_len(side)
            got = [neighborhood(self.graph, self._flank(side, k), level).lo
                   for k in range(count + 1)]
            self._boundaries[key] = got
        return got

    def _segment_window(self, side: str, k: int, level: int) -> Window:
        lo = neighborhood(self.graph, self._flank(side, k), level).lo
        hi = neighborhood(self.graph, self._flank(side, k + 1), level).lo - 1
        return Window(lo, hi)

    def _corridor(self, side: str, k: int, r: int) -> Window:
        iv = round_window(self.graph, self._flank(side, k - 1), self._flank(side, k + 1),
                          r, self.s)
        return Window(iv.lo, iv.hi)

    def _zone_solver(self, uv_k: int, uv_l: int) -> Solver:
        key = (uv_k, uv_l)
        got = self._zone_solvers.get(key)
        if got is None:
            wins_u = tuple(self._corridor(U, uv_k, r) for r in range(2, self.s + 1))
            wins_v = tuple(self._corridor(V, uv_l, r) for r in range(2, self.s + 1))
            spec = GameSpec(u=self.pair.u_prime, v=self.pair.v_prime, rounds=self.s,
                            alternations=None, sig=self.prime_spec.sig,
                            start_u=self._corridor(U, uv_k, 1),
                            start_v=self._corridor(V, uv_l, 1),
                            windows_u=wins_u, windows_v=wins_v)
            got = Solver(spec)
            self._zone_solvers[key] = got
        return got

    def _locally_equivalent(self, x: int, y: int, uv_k: int, uv_l: int, q: int) -> bool:
        """Duplicator wins the windowed continuation from pebbles (x, y)
        placed at round q around the anchored zone pair."""
        solver = self._zone_solver(uv_k, uv_l)
        state = GameState(prev=None, cur=(x, y), rounds_used=q, alts_used=0, last_side=None)
        return not solver.spoiler_wins(state)

    # -- the simulation

    def run(self) -> None:
        self._simulate(GameState.initial(), GameState.initial(), None, None, ())

    def _simulate(self, prime: GameState, uv: GameState, uv_k, uv_l, history: tuple) -> None:
        q = prime.rounds_used + 1
        if q > self.s:
            raise SimulationInvariantError(
                self.s, 0, "padded game exhausted with the original game still alive")
        side, z = self.prime_strategy.propose(prime, history=())
        case, data = self._classify(side, z, uv_k, uv_l, q, uv_started=uv.cur is not None)
        if case == 1:
            self._case_fresh(side, z, data, prime, uv, uv_k, uv_l, q, history, variantV=False)
        elif case == 2:
            self._case_fresh(side, z, data, prime, uv, uv_k, uv_l, q, history, variantV=True)
        elif case == 3:
            self._case_corridor(side, z, prime, uv, uv_k, uv_l, q, history)
        else:
            self._case_extremal(side, z, prime, uv, uv_k, uv_l, q, history)

    def _classify(self, side: str, z: int, uv_k, uv_l, q: int, uv_started: bool):
        level = self.s - q + 1
        cidx = uv_k if side == U else uv_l
        if uv_started:
            corridor = self._corridor(side, cidx, q)
            if z in corridor:
                return 3, None
        bs = self._boundary_list(side, level)
        top = neighborhood(self.graph, self.pair.extraction.positions[-1], level).lo
        if z < bs[0] or z >= top:
            return 4, None
        k = max(idx for idx in range(len(bs)) if z >= bs[idx])
        if uv_started and k == cidx:
            raise SimulationInvariantError(
                q, 3, f"position {z} in the center segment escaped the corridor")
        if uv_started and k == cidx - 1:
            return 2, k
        return 1, k

    def _record(self, history: tuple, move: tuple) -> None:
        existing = self.moves.get(history)
        if existing is not None and existing != move:
            raise SimulationInvariantError(
                0, 0, f"conflicting moves for one line of play: {existing} vs {move}")
        self.moves[history] = move

    def _case_fresh(self, side, z, k, prime, uv, uv_k, uv_l, q, history, variantV):
        case_no = 2 if variantV else 1
        uv_word_other = self.pair.v if side == U else self.pair.u
        other = V if side == U else U
        uv_move_pos = k
        self._record(history, (side, uv_move_pos))
        level = self.s - q + 1
        any_survivor = False
        for reply in range(len(uv_word_other)):
            pair_uv = (uv_move_pos, reply) if side == U else (reply, uv_move_pos)
            uv_child = advance(uv, side, pair_uv)
            hist_child = history + ((side, pair_uv),)
            if not is_partial_iso(uv_child, self.uv_spec):
                continue  # Spoiler wins this line of the original game
            new_k = uv_move_pos if side == U else reply
            new_l = reply if side == U else uv_move_pos
            cand_center = reply
            if variantV:
                win = neighborhood(self.graph, self._flank(other, cand_center), level)
                candidates = Window(win.lo, win.hi)
            else:
                candidates = self._segment_window(other, cand_center, level)
            y = self._find_reply(side, z, candidates, new_k, new_l, q, prime)
            if y is None:
                raise SimulationInvariantError(
                    q, case_no,
                    f"no locally equivalent reply to {z} in {candidates} "
                    f"around zones ({new_k}, {new_l})")
            pair_prime = (z, y) if side == U else (y, z)
            prime_child = advance(prime, side, pair_prime)
            any_survivor = True
            self._trace(q, case_no, side, pair_prime, pair_uv)
            self._simulate(prime_child, uv_child, new_k, new_l, hist_child)
        if not any_survivor:
            solo = (z, None) if side == U else (None, z)
            self.trace.append(TraceRow(round_index=q, case=case_no, side=side,
                                       i_prime=solo[0], j_prime=solo[1],
                                       i=uv_move_pos if side == U else None,
                                       j=uv_move_pos if side == V else None))

    def _case_corridor(self, side, z, prime, uv, uv_k, uv_l, q, history):
        other = V if side == U else U
        candidates = self._corridor(other, uv_l if side == U else uv_k, q)
        y = self._find_reply(side, z, candidates, uv_k, uv_l, q, prime)
        if y is None:
            raise SimulationInvariantError(
                q, 3, f"no locally equivalent corridor reply to {z} in {candidates}")
        pair_prime = (z, y) if side == U else (y, z)
        prime_child = advance(prime, side, pair_prime)
        self._trace(q, 3, side, pair_prime,
                    uv.cur if uv.cur is not None else None)
        self._simulate(prime_child, uv, uv_k, uv_l, history)

    def _case_extremal(self, side, z, prime, uv, uv_k, uv_l, q, history):
        pair_prime = (z, z)
        prime_child = advance(prime, side, pair_prime)
        if not is_partial_iso(prime_child, self.prime_spec):
            raise SimulationInvariantError(
                q, 4, f"mirrored extremal reply at {z} broke the padded configuration")
        self._trace(q, 4, side, pair_prime, uv.cur if uv.cur is not None else None)
        self._simulate(prime_child, uv, uv_k, uv_l, history)

    def _find_reply(self, side, z, candidates: Window, uv_k, uv_l, q,
                    prime: GameState) -> Optional[int]:
        """First candidate (nearest the mirrored offset) that keeps the padded
        configuration isomorphic and is locally equivalent to z."""
        other = V if side == U else U
        anchor_mine = self._flank(side, uv_k if side == U else uv_l)
        anchor_other = self._flank(other, uv_l if side == U else uv_k)
        target = anchor_other + (z - anchor_mine)
        for y in _spiral(candidates, target):
            pair_prime = (z, y) if side == U else (y, z)
            child = advance(prime, side, pair_prime)
            if not is_partial_iso(child, self.prime_spec):
                continue
            x_u, y_v = pair_prime
            if self._locally_equivalent(x_u, y_v, uv_k, uv_l, q):
                return y
        return None

    def _trace(self, q, case, side, pair_prime, pair_uv):
        i = j = None
        if pair_uv is not None:
            i, j = pair_uv
        self.trace.append(TraceRow(round_index=q, case=case, side=side,
                                   i_prime=pair_prime[0], j_prime=pair_prime[1],
                                   i=i, j=j))


def _spiral(window: Window, center: int):
    """Window members by distance from center, lazily, nearest first."""
    start = min(max(center, window.lo), window.hi)
    yield start
    step = 1
    lo_done = hi_done = False
    while not (lo_done and hi_done):
        down, up = start - step, start + step
        if down >= window.lo:
            yield down
        else:
            lo_done = True
        if up <= window.hi:
            yield up
        else:
            hi_done = True
        step += 1
