import pytest

from fo2words import predicates as P


def test_msb_examples():
    msb0, msb10, msb11 = P.builtin("msb0"), P.builtin("msb10"), P.builtin("msb11")
    assert msb0.relation((5, 1))  # floor(log 5) = 2 and 5 - 4 = 1
    assert not msb0.relation((5, 2))
    assert msb10.relation((5, 9))
    assert msb11.relation((5, 13))
    assert not msb0.relation((0, 0))  # undefined at zero: no pair


def test_msb_closed_forms_window():
    msb0, msb10, msb11 = P.builtin("msb0"), P.builtin("msb10"), P.builtin("msb11")
    for x in range(1, 4096):
        top = 1 << (x.bit_length() - 1)
        assert msb0.relation((x, x - top))
        assert msb10.relation((x, x + top))
        assert msb11.relation((x, x + 2 * top))


def test_linmul_degree_examples():
    lin = P.builtin("linmul:2")
    assert P.degree(lin, 3) == 1
    assert lin.neighbor_oracle(3) == (6,)
    assert P.degree(lin, 4) == 2
    assert lin.neighbor_oracle(4) == (2, 8)


def test_less_has_no_oracle():
    less = P.builtin("less")
    with pytest.raises(P.PredicateError):
        P.degree(less, 3)


def test_bit_and_tbit():
    bit, tbit = P.builtin("bit"), P.builtin("tbit")
    assert bit.relation((5, 0)) and bit.relation((5, 2)) and not bit.relation((5, 1))
    # tbit reads the (y - x)-th bit of x; false when y < x
    assert tbit.relation((5, 5))  # bit 0 of 5
    assert tbit.relation((5, 7))  # bit 2 of 5
    assert not tbit.relation((5, 6))
    assert not tbit.relation((5, 4))


def test_diagonal_encoding():
    pow2 = P.builtin("pow2diag")
    assert pow2.relation((4, 4))
    assert not pow2.relation((4, 5))
    assert P.degree(pow2, 3) == 0
    assert P.degree(pow2, 8) == 1

    evens = P.diagonal_predicate(lambda x: x % 2 == 0, name="evens")
    assert evens.relation((2, 2)) and not evens.relation((2, 4))
    assert evens.neighbor_oracle(3) == ()


def test_builtin_errors():
    with pytest.raises(P.PredicateError):
        P.builtin("linmul:0")
    with pytest.raises(P.PredicateError):
        P.builtin("nosuchpredicate")
    with pytest.raises(P.PredicateError):
        P.builtin("less:3")


def test_plus3_and_maxsum():
    plus3 = P.builtin("plus3")
    assert plus3.relation((4, 7)) and not plus3.relation((4, 6))
    maxsum = P.builtin("maxsum")
    assert not maxsum.uniform
    assert maxsum.membership((1, 3), 5)
    assert not maxsum.membership((1, 3), 6)


def test_relation_file(tmp_path):
    path = tmp_path / "rel.txt"
    path.write_text("0 1\n2 4\n2 4\n", encoding="utf-8")
    p = P.from_relation_file(str(path))
    assert p.relation((2, 4))
    assert not p.relation((4, 2))
    assert P.degree(p, 4) == 1
    assert p.neighbor_oracle(4) == (2,)

    empty = tmp_path / "empty.txt"
    empty.write_text("", encoding="utf-8")
    q = P.from_relation_file(str(empty))
    assert not q.relation((0, 0))
    assert q.neighbor_oracle(7) == ()

    bad = tmp_path / "bad.txt"
    bad.write_text("1 2 3\n", encoding="utf-8")
    with pytest.raises(P.PredicateError):
        P.from_relation_file(str(bad))


def test_monadic_file(tmp_path):
    path = tmp_path / "set.txt"
    path.write_text("1\n2\n4\n8\n", encoding="utf-8")
    p = P.builtin(f"diag:{path}")
    assert p.relation((4, 4)) and not p.relation((3, 3))


def test_rand_deterministic():
    a = P.builtin("rand:7:0.5")
    b = P.builtin("rand:7:0.5")
    picks = [(x, y) for x in range(10) for y in range(10)]
    assert [a.relation(t) for t in picks] == [b.relation(t) for t in picks]
    c = P.builtin("rand:8:0.5")
    assert [a.relation(t) for t in picks] != [c.relation(t) for t in picks]
    assert 10 < sum(a.relation(t) for t in picks) < 90


def test_uniform_truncation():
    for name in ("less", "succ", "eq", "bit", "tbit", "msb0", "linmul:3", "power:2"):
        p = P.builtin(name)
        for n1 in (4, 8, 16, 32):
            for n2 in (4, 8, 16, 32):
                bound = min(n1, n2)
                for x in range(bound):
                    for y in range(bound):
                        assert p.membership((x, y), n1) == p.membership((x, y), n2)


FINITE_DEGREE = ("succ", "eq", "tbit", "pow2diag", "linmul:2", "linmul:3", "power:2")


@pytest.mark.parametrize("name", FINITE_DEGREE)
def test_neighbor_oracle_sound_and_complete_on_window(name):
    p = P.builtin(name)
    for k in range(64):
        brute = {j for j in range(4096) if p.relation((k, j)) or p.relation((j, k))}
        oracle = set(p.neighbor_oracle(k))
        assert brute == {j for j in oracle if j < 4096}
        # nothing beyond the claimed set: scan a band past the oracle maximum
        top = max(oracle, default=k) + 64
        for j in range(4096, min(top, 8192)):
            assert (p.relation((k, j)) or p.relation((j, k))) == (j in oracle)


@pytest.mark.parametrize("name", FINITE_DEGREE)
def test_straddle_matches_brute_force(name):
    p = P.builtin(name)
    for i in range(80):
        lo = hi = i
        for x in range(0, i + 1):
            for y in p.neighbor_oracle(x):
                if x <= i <= y:
                    lo, hi = min(lo, x), max(hi, y)
        assert p.straddle(i) == (lo, hi)


def test_signature_duplicate_names():
    with pytest.raises(P.PredicateError):
        P.signature(P.builtin("eq"), P.builtin("eq"))


def test_parse_signature():
    sig = P.parse_signature("less+linmul:2")
    assert sig.names() == ("less", "linmul:2")
    assert P.parse_signature("").names() == ()
