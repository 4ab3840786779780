import dataclasses
import itertools
import random

import pytest

from fo2words import efgame as G
from fo2words import predicates as P

LESS = P.parse_signature("less")
LESS_SUCC = P.parse_signature("less+succ")


def spec(u, v, s, m, sig=LESS, **kw):
    return G.GameSpec(u=u, v=v, rounds=s, alternations=m, sig=sig, **kw)


def test_is_partial_iso_examples():
    ok = G.GameState(prev=None, cur=(0, 0), rounds_used=1, alts_used=0, last_side="u")
    assert G.is_partial_iso(ok, spec("ab", "ab", 1, 0))
    assert not G.is_partial_iso(ok, spec("ab", "ba", 1, 0))
    flipped = G.GameState(prev=(1, 0), cur=(0, 1), rounds_used=2, alts_used=0,
                          last_side="u")
    assert not G.is_partial_iso(flipped, spec("ab", "ba", 2, 0))


def test_solve_examples():
    assert G.solve(spec("ab", "ba", 2, 0)).winner == G.SPOILER
    assert G.solve(spec("ab", "ba", 1, 0)).winner == G.DUPLICATOR
    assert G.solve(spec("ab", "ab", 3, 1)).winner == G.DUPLICATOR


def test_empty_words():
    assert G.solve(spec("", "", 1, 0)).winner == G.DUPLICATOR
    assert G.solve(spec("a", "", 1, 0)).winner == G.SPOILER
    assert G.solve(spec("", "a", 2, 1)).winner == G.SPOILER


def test_alternation_budget_matters():
    # u = abab vs v = baba: with order only and one round Duplicator copies
    win0 = G.solve(spec("ab", "ba", 2, 0)).winner
    win_unbounded = G.solve(spec("ab", "ba", 2, None)).winner
    assert win0 == win_unbounded == G.SPOILER
    # aa vs a: spotting the doubled letter needs both rounds on one word
    assert G.solve(spec("aa", "a", 2, 0)).winner == G.SPOILER


ALL_WORDS_3 = ["".join(t) for L in range(4) for t in itertools.product("ab", repeat=L)]


def test_copycat_and_determinacy():
    rng = random.Random(9)
    for _ in range(60):
        w = rng.choice(ALL_WORDS_3)
        s = rng.randint(1, 3)
        m = rng.choice([0, 1, None])
        assert G.solve(spec(w, w, s, m)).winner == G.DUPLICATOR


def test_resource_monotonicity():
    rng = random.Random(10)
    words = [w for w in ALL_WORDS_3 if w]
    for _ in range(40):
        u, v = rng.choice(words), rng.choice(words)
        s, m = rng.randint(1, 2), rng.randint(0, 1)
        if G.solve(spec(u, v, s, m)).winner == G.SPOILER:
            assert G.solve(spec(u, v, s + 1, m)).winner == G.SPOILER
            assert G.solve(spec(u, v, s, m + 1)).winner == G.SPOILER


def test_strategy_replay_small_corpus():
    rng = random.Random(11)
    words = [w for w in ALL_WORDS_3 if w]
    for _ in range(50):
        u, v = rng.choice(words), rng.choice(words)
        s = rng.randint(1, 3)
        m = rng.choice([0, 1, 2])
        sig = rng.choice([LESS, LESS_SUCC])
        res = G.solve(spec(u, v, s, m, sig))
        assert G.replay_validate(spec(u, v, s, m, sig), res.strategy)


def test_canonical_solver_matches_plain():
    # the order-only run-capping canonicalization is validated dual-route
    less_alias = dataclasses.replace(P.builtin("less"), name="before")
    plain_sig = P.signature(less_alias)
    rng = random.Random(12)
    words = ["".join(t) for L in range(7) for t in itertools.product("ac", repeat=L)]
    for _ in range(150):
        u, v = rng.choice(words), rng.choice(words)
        s = rng.randint(1, 3)
        m = rng.choice([0, 1, None])
        fast = G.solve(spec(u, v, s, m, LESS)).winner
        slow = G.solve(spec(u, v, s, m, plain_sig)).winner
        assert fast == slow, (u, v, s, m)


def test_budget_guard():
    with pytest.raises(G.ResourceGuard):
        G.solve(spec("ab" * 600, "ba" * 600, 3, 1), budget=10**4)


def test_windows_confine_moves():
    sp = spec("aaaa", "aaaa", 1, 0,
              start_u=G.Window(1, 2), start_v=G.Window(3, 3))
    sess = G.GameSession(spec=sp)
    with pytest.raises(G.IllegalMove):
        sess.apply_move(G.SPOILER, "u", 0)
    sess.apply_move(G.SPOILER, "u", 2)
    with pytest.raises(G.IllegalMove):
        sess.apply_move(G.DUPLICATOR, "v", 0)
    sess.apply_move(G.DUPLICATOR, "v", 3)
    assert sess.winner == G.DUPLICATOR  # one round survived


def test_session_mechanics():
    sess = G.GameSession(spec=spec("ab", "ba", 2, 0))
    assert sess.turn == G.SPOILER
    with pytest.raises(G.IllegalMove):
        sess.apply_move(G.DUPLICATOR, "v", 0)
    sess.apply_move(G.SPOILER, "u", 0)
    assert sess.turn == G.DUPLICATOR
    with pytest.raises(G.IllegalMove):
        sess.apply_move(G.DUPLICATOR, "u", 1)  # must answer on the other word
    sess.apply_move(G.DUPLICATOR, "v", 1)  # letter a: survives round 1
    assert sess.winner is None
    # spoiler hint must be certified winning here (he wins this spec)
    side, pos, winning = sess.hint()
    assert winning
    sess.apply_move(G.SPOILER, side, pos)
    reply_side = "v" if side == "u" else "u"
    replies = list(sess.spec.window(reply_side, 2))
    sess.apply_move(G.DUPLICATOR, reply_side, replies[0])
    assert sess.winner == G.SPOILER
    with pytest.raises(G.IllegalMove):
        sess.apply_move(G.SPOILER, "u", 0)  # game over


def test_duplicator_letter_mismatch_loses():
    sess = G.GameSession(spec=spec("ab", "ba", 2, 1))
    sess.apply_move(G.SPOILER, "u", 0)
    sess.apply_move(G.DUPLICATOR, "v", 0)  # a vs b
    assert sess.winner == G.SPOILER
    assert "isomorphic" in sess.reason


def test_alternation_budget_enforced_in_session():
    sess = G.GameSession(spec=spec("ab", "ab", 3, 0))
    sess.apply_move(G.SPOILER, "u", 0)
    sess.apply_move(G.DUPLICATOR, "v", 0)
    with pytest.raises(G.IllegalMove):
        sess.apply_move(G.SPOILER, "v", 1)  # switching words needs budget


def test_engine_move_plays_reasonably():
    sess = G.GameSession(spec=spec("ab", "ab", 2, 1))
    sess.apply_move(G.SPOILER, "u", 0)
    sess.engine_move()  # engine answers as duplicator
    assert sess.state.rounds_used == 1
    assert sess.winner is None  # copycat position survives


def test_constrained_spec_identical_triples():
    sig = P.parse_signature("eq")
    cs = G.constrained_spec((0, 2, 4), (0, 2, 4), 1, 1, sig)
    assert G.solve(cs).winner == G.DUPLICATOR
    cs2 = G.constrained_spec((0, 2, 4), (10, 12, 14), 1, 2, sig)
    assert G.solve(cs2).winner == G.DUPLICATOR


def test_constrained_spec_word_length():
    from fo2words.locality import NeighborGraph, neighborhood

    sig = P.parse_signature("eq")
    graph = NeighborGraph.from_signature(sig)
    cs = G.constrained_spec((0, 2, 4), (10, 12, 14), 1, 1, sig, graph=graph)
    assert len(cs.u) == neighborhood(graph, 4, 0).lo
    assert cs.u[2] == "b" and set(cs.u) <= {"a", "b"}


def test_constrained_spec_rejects_bad_triples():
    sig = P.parse_signature("eq")
    with pytest.raises(G.IllegalMove):
        G.constrained_spec((0, 1, 2), (0, 1, 2), 1, 1, sig)  # not separated


def test_strategy_table_contains_moves():
    res = G.solve(spec("ab", "ba", 2, 0))
    rows = G.strategy_table(spec("ab", "ba", 2, 0), res.strategy)
    assert rows and all("\t" in r for r in rows)
