import itertools
import random

import pytest

from fo2words import collapse as C
from fo2words import efgame as G
from fo2words import formula as F
from fo2words import locality as L
from fo2words import predicates as P
from fo2words.evaluator import TableEvaluator, evaluate, words_upto

LESS = P.parse_signature("less")


def test_pad_examples():
    assert C.pad_with_neutral("ab", 1, "c") == "ccaccbcc"
    assert C.pad_with_neutral("", 2, "c") == "cccc"
    assert C.pad_with_neutral("a", 0, "c") == "a"


def test_pad_positions():
    u = "abc"
    s = 2
    padded = C.pad_with_neutral(u, s, "z")
    assert len(padded) == len(u) + 2 * s * (len(u) + 1)
    for i, ch in enumerate(u):
        assert padded[2 * s + i * (2 * s + 1)] == ch


def test_pad_preserves_neutral_language_membership():
    contains_two_a = F.parse("E x. a(x) & (E y. x < y & a(y))")
    te = TableEvaluator(LESS)
    for w in words_upto(("a", "c"), 4):
        for s in (1, 2, 3):
            assert te.evaluate(contains_two_a, w) == te.evaluate(
                contains_two_a, C.pad_with_neutral(w, s, "c"))


# -- formula rewriting


def transform_eval(f, sig, word, alphabet=("a", "c")):
    result = C.collapse_to_finite_degree(f, "c", alphabet, sig)
    return TableEvaluator(result.environment).evaluate(result.formula, word)


def test_transform_rejects_bad_inputs():
    with pytest.raises(C.CollapseError):
        C.collapse_to_finite_degree(F.parse("a(x)"), "c", ("a", "c"), LESS)
    with pytest.raises(C.CollapseError):
        C.collapse_to_finite_degree(
            F.parse("E x. E y. E z. x < y & y < z"), "c", ("a", "c"), LESS)
    with pytest.raises(C.CollapseError):
        C.collapse_to_finite_degree(F.parse("true"), "q", ("a", "c"), LESS)


def test_transform_output_shape():
    f = F.parse("E x. a(x)")
    result = C.collapse_to_finite_degree(f, "c", ("a", "c"), LESS)
    met = F.metrics(result.formula)
    assert met.is_two_variable
    names = set(result.environment.names())
    assert {"less", "pow2diag", "msb0", "msb10", "msb11"} <= names
    for pname in F.predicate_names(result.formula):
        assert result.environment.has(pname)


def test_transform_simple_agreement():
    f = F.parse("E x. a(x)")
    te = TableEvaluator(LESS)
    for w in words_upto(("a", "c"), 9):
        assert transform_eval(f, LESS, w) == te.evaluate(f, w), w


def test_transform_true_false():
    for text in ("true", "false"):
        f = F.parse(text)
        for w in ["", "c", "ac", "ccacc", "a" * 12]:
            assert transform_eval(f, LESS, w) == evaluate(f, w, LESS)


def test_transform_simulates_word_padded_to_next_window():
    """The rewrite is exactly the original evaluated on the word extended
    with neutral letters to twice the top power-of-two position, even for
    non-neutral languages and length-indexed predicates."""
    maxsum = P.builtin("maxsum")
    sig = P.Signature((P.builtin("less"), maxsum))
    f = F.parse("E x. a(x) & (E y. maxsum(x, y) & a(y))")
    result = C.collapse_to_finite_degree(f, "c", ("a", "c"), sig)
    te = TableEvaluator(result.environment)
    orig = TableEvaluator(sig)
    rng = random.Random(3)
    for _ in range(160):
        n = rng.randint(3, 24)
        w = "".join(rng.choice("ac") for _ in range(n))
        p_star = 1 << (n - 1).bit_length() - 1 if n > 1 else 1
        # largest power-of-two position strictly below n
        p_star = 1
        while p_star * 2 <= n - 1:
            p_star *= 2
        padded = w + "c" * (2 * p_star - n)
        assert te.evaluate(result.formula, w) == orig.evaluate(f, padded), w


def test_transform_random_predicate_agreement():
    import dataclasses

    r = dataclasses.replace(P.builtin("rand:41:0.08"), name="rnd41")
    sig = P.Signature((P.builtin("less"), r))
    f = F.parse("E x. a(x) & (E y. x < y & rnd41(x, y) & a(y))")
    result = C.collapse_to_finite_degree(f, "c", ("a", "c"), sig)
    te = TableEvaluator(result.environment)
    orig = TableEvaluator(sig)
    rng = random.Random(8)
    # the language is guarded by non-neutral letters, so trailing padding
    # is invisible and the rewrite agrees exactly
    words = list(words_upto(("a", "c"), 8))
    words += ["".join(rng.choice("ac") for _ in range(rng.randint(9, 26)))
              for _ in range(150)]
    for w in words:
        assert te.evaluate(result.formula, w) == orig.evaluate(f, w), w


def test_transform_universal_and_negation():
    f = F.parse("A x. !a(x) | (E y. x < y & a(y))")
    te = TableEvaluator(LESS)
    for w in words_upto(("a", "c"), 8):
        assert transform_eval(f, LESS, w) == te.evaluate(f, w), w


# -- padded pairs


EQ = P.parse_signature("eq")


def test_build_padded_pair_symmetric():
    pair = C.build_padded_pair("ab", "ab", "c", 0, EQ)
    assert pair.u_prime == pair.v_prime
    assert pair.placement_u == pair.placement_v


def test_build_padded_pair_same_length_same_slots():
    pair = C.build_padded_pair("ab", "ba", "c", 1, EQ)
    assert pair.placement_u == pair.placement_v
    assert len(pair.u_prime) == len(pair.v_prime)


def test_build_padded_pair_alignment_and_letters():
    pair = C.build_padded_pair("aab", "ba", "c", 0, EQ)
    assert pair.placement_u[0] == pair.placement_v[0]
    assert pair.placement_u[-1] == pair.placement_v[-1]
    for i, ch in enumerate("aab"):
        assert pair.u_prime[pair.placement_u[i]] == ch
    for j, ch in enumerate("ba"):
        assert pair.v_prime[pair.placement_v[j]] == ch
    neutral_positions = set(range(len(pair.u_prime))) - set(pair.placement_u)
    assert all(pair.u_prime[k] == "c" for k in neutral_positions)
    # placements sit on the extraction, strictly inside the sentinels
    xs = pair.extraction.positions
    assert set(pair.placement_u) <= set(xs[1:-1])


def test_build_padded_pair_membership_preserved():
    contains_b = F.parse("E x. b(x)")
    sig = P.parse_signature("less")
    te = TableEvaluator(sig)
    for (u, v) in [("ab", "ba"), ("a", "b"), ("abb", "b")]:
        pair = C.build_padded_pair(u, v, "c", 0, EQ)
        assert te.evaluate(contains_b, u) == te.evaluate(contains_b, pair.u_prime)
        assert te.evaluate(contains_b, v) == te.evaluate(contains_b, pair.v_prime)


def test_build_padded_pair_rejects():
    with pytest.raises(C.CollapseError):
        C.build_padded_pair("", "a", "c", 0, EQ)
    with pytest.raises(C.CollapseError):
        C.build_padded_pair("ac", "a", "c", 0, EQ)


# -- strategy translation


def run_pipeline(u, v, s, signame):
    sig = P.parse_signature(signame)
    graph = L.NeighborGraph.from_signature(sig)
    pair = C.build_padded_pair(u, v, "c", s, sig, graph=graph, ceiling=10**8)
    prime_sig = P.signature(P.builtin("less"), *sig.preds)
    spec = G.GameSpec(u=pair.u_prime, v=pair.v_prime, rounds=s, alternations=s,
                      sig=prime_sig)
    res = G.solve(spec)
    if res.winner != G.SPOILER:
        return None
    tr = C.translate_strategy(pair, res.strategy, s, s, sig, graph=graph)
    return tr


def test_translate_eq_small_matrix():
    words = ["".join(t) for k in (1, 2) for t in itertools.product("ab", repeat=k)]
    ran = 0
    for u in words:
        for v in words:
            for s in (1, 2):
                tr = run_pipeline(u, v, s, "eq")
                if tr is None:
                    continue
                ran += 1
                assert G.replay_validate(tr.uv_spec, tr.strategy), (u, v, s)
    assert ran >= 10


def test_translate_trace_format():
    tr = run_pipeline("ab", "ba", 2, "eq")
    assert tr is not None
    assert tr.trace
    for row in tr.trace:
        cols = row.as_tsv().split("\t")
        assert len(cols) == 7
        assert cols[1] in {"1", "2", "3", "4"}
        assert cols[2] in {"u", "v"}


def test_translate_no_predicates_identityish():
    # without extra predicates the padded win comes from order structure
    # alone and the translation preserves the winner
    sig = P.Signature(())
    graph = L.NeighborGraph([])
    pair = C.build_padded_pair("ab", "b", "c", 1, sig, graph=graph)
    prime_sig = P.parse_signature("less")
    spec = G.GameSpec(u=pair.u_prime, v=pair.v_prime, rounds=2, alternations=2,
                      sig=prime_sig)
    res = G.solve(spec)
    assert res.winner == G.SPOILER
    tr = C.translate_strategy(pair, res.strategy, 2, 2, sig, graph=graph)
    assert G.replay_validate(tr.uv_spec, tr.strategy)


def test_translate_extremal_prefix_keeps_uv_idle():
    """A Spoiler opening on an extremal padded position must leave the
    original game untouched (mirror reply, case 4)."""
    sig = P.parse_signature("eq")
    graph = L.NeighborGraph.from_signature(sig)
    pair = C.build_padded_pair("ab", "ba", "c", 3, sig, graph=graph)

    class ExtremalFirst(G.Strategy):
        role = G.SPOILER

        def __init__(self, inner):
            self.inner = inner

        def propose(self, state, pending=None, history=()):
            if state.rounds_used == 0:
                return ("u", 0)  # below every window: extremal
            return self.inner.propose(state, pending=pending, history=history)

    prime_sig = P.signature(P.builtin("less"), *sig.preds)
    spec = G.GameSpec(u=pair.u_prime, v=pair.v_prime, rounds=3, alternations=3,
                      sig=prime_sig)
    res = G.solve(spec)
    assert res.winner == G.SPOILER
    # position 0 is extremal here: it lies below the first start window
    assert 0 < L.neighborhood(graph, pair.placement_u[0], 3).lo
    tr = C.translate_strategy(pair, ExtremalFirst(res.strategy), 3, 3, sig,
                              graph=graph)
    first = tr.trace[0]
    assert first.case == 4
    assert first.i is None and first.j is None  # original game has not started
    assert G.replay_validate(tr.uv_spec, tr.strategy)


def test_simulation_invariant_violation_reported():
    """A deliberately wrong premise strategy trips the invariant check with
    round and case attached."""
    sig = P.parse_signature("eq")
    graph = L.NeighborGraph.from_signature(sig)
    pair = C.build_padded_pair("ab", "ab", "c", 1, sig, graph=graph)

    class Stubborn(G.Strategy):
        role = G.SPOILER

        def propose(self, state, pending=None, history=()):
            return ("u", pair.placement_u[0])  # u' and v' are equal words

    with pytest.raises(C.SimulationInvariantError) as err:
        C.translate_strategy(pair, Stubborn(), 1, 1, sig, graph=graph)
    assert err.value.round_index >= 1
