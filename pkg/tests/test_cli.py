import json

from click.testing import CliRunner

from fo2words.cli import main

F1 = "E x. a(x) & (E y. x < y & b(y) & (E x. y < x & c(x)))\n"


def run(*args, **kw):
    return CliRunner().invoke(main, list(args), **kw)


def test_eval_true_false(tmp_path):
    f = tmp_path / "f1.fo"
    f.write_text(F1, encoding="utf-8")
    res = run("eval", str(f), "abc", "--sig", "less")
    assert res.exit_code == 0 and res.output.strip() == "true"
    res = run("eval", str(f), "", "--sig", "less")
    assert res.exit_code == 0 and res.output.strip() == "false"


def test_eval_unknown_predicate_exit_2(tmp_path):
    f = tmp_path / "bad.fo"
    f.write_text("E x. mystery(x, x)\n", encoding="utf-8")
    res = run("eval", str(f), "abc", "--sig", "less")
    assert res.exit_code == 2
    assert "mystery" in res.output


def test_eval_syntax_error_exit_2(tmp_path):
    f = tmp_path / "syn.fo"
    f.write_text("E x. a(x\n", encoding="utf-8")
    res = run("eval", str(f), "abc")
    assert res.exit_code == 2
    assert "offset" in res.output


def test_game_solve(tmp_path):
    res = run("game", "ab", "ba", "2", "0", "--sig", "less")
    assert res.exit_code == 0 and res.output.strip() == "Spoiler"
    res = run("game", "ab", "ab", "3", "1", "--sig", "less")
    assert res.exit_code == 0 and res.output.strip() == "Duplicator"


def test_game_solve_writes_strategy(tmp_path):
    out = tmp_path / "strategy.tsv"
    res = run("game", "ab", "ba", "2", "0", "--sig", "less", "--out", str(out))
    assert res.exit_code == 0
    text = out.read_text(encoding="utf-8")
    assert "# winner spoiler" in text
    assert "\t" in text.splitlines()[2]


def test_game_play_loop():
    # scripted session: illegal move re-prompts without crashing, then quit
    res = run("game", "ab", "ba", "2", "0", "--mode", "play", "--role", "spoiler",
              input="u 9\nu 0\nquit\n")
    assert res.exit_code == 0
    assert "illegal" in res.output


def test_game_play_hint_and_win():
    res = run("game", "a", "b", "1", "0", "--mode", "play", "--role", "spoiler",
              input="hint\nu 0\n")
    assert res.exit_code == 0
    assert "hint:" in res.output
    assert "winner: spoiler" in res.output


def test_extract():
    res = run("extract", "--p", "4", "--s", "0", "--sig", "eq")
    assert res.exit_code == 0
    assert res.output.strip() == "0 2 4 6"


def test_types():
    res = run("types", "--sig", "eq", "--s", "0",
              "--triple", "0,2,4", "--triple", "10,12,14")
    assert res.exit_code == 0
    assert "all equivalent: True" in res.output


def test_transform_roundtrip(tmp_path):
    f = tmp_path / "f.fo"
    f.write_text("E x. a(x)\n", encoding="utf-8")
    outdir = tmp_path / "env"
    res = run("transform", str(f), "--sig", "less", "--alphabet", "ac",
              "--neutral", "c", "--out", str(outdir), "--check-upto", "7")
    assert res.exit_code == 0, res.output
    assert (outdir / "formula.fo").exists()
    manifest = json.loads((outdir / "environment.json").read_text(encoding="utf-8"))
    assert "msb0" in manifest["predicates"]
    assert "agreement up to 7: True" in res.output


def test_check_collapse_prop2():
    res = run("check-collapse", "--suite", "prop2", "--param", "max_word_len=2")
    assert res.exit_code == 0, res.output
    summary = json.loads(res.output.strip().splitlines()[-1])
    assert summary["violations"] == 0


def test_check_collapse_unknown_suite():
    res = run("check-collapse", "--suite", "nope")
    assert res.exit_code == 2
