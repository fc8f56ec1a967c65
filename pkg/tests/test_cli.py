"""End-to-end tests for the command-line front end.

All invocations go through ``mpcmatch.cli.main`` in-process; stdout is
captured with capsys and files go through tmp_path.  Exit-code contract:
0 success, 1 usage/precondition error, 2 budget violation under --strict.
"""

import json

import numpy as np
import pytest

from mpcmatch import cli
from mpcmatch.cli import CliError, main, parse_pattern, wildcard_class
from mpcmatch.fft_engine import fft_local
from mpcmatch.oracles import naive_plus_spans, naive_star
from mpcmatch.wildcard_star import split_subpatterns


def run_cli(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# --------------------------------------------------------------------------
# Pattern escape parsing (pure helpers).
# --------------------------------------------------------------------------

def test_parse_pattern_escapes():
    pat, lits = parse_pattern(r"a\?b\*c\+d\\e?")
    assert pat == b"a?b*c+d\\e?"
    assert lits == frozenset({2, 4, 6})  # escaped ? * + are literal; \\ is not
    assert parse_pattern("plain") == (b"plain", frozenset())


def test_parse_pattern_rejects_unknown_escape():
    with pytest.raises(CliError):
        parse_pattern(r"a\x")
    with pytest.raises(CliError):
        parse_pattern("tail\\")


def test_wildcard_class_inference():
    assert wildcard_class(b"abc", frozenset()) == "exact"
    assert wildcard_class(b"a?c", frozenset()) == "q"
    assert wildcard_class(b"a+c", frozenset()) == "plus"
    assert wildcard_class(b"a?b+c*", frozenset()) == "star"
    # fully escaped wildcards are literals, so the class falls back
    assert wildcard_class(b"a?c", frozenset({2})) == "exact"
    assert wildcard_class(b"a*b?", frozenset({2})) == "q"


# --------------------------------------------------------------------------
# match subcommand.
# --------------------------------------------------------------------------

def test_match_question_worked_example(capsys):
    code, out, _ = run_cli(["match", "--mode", "q", "--text-inline",
                            "abracadabra", "--pattern", "a?a"], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["matches"] == [4, 6]
    assert report["metrics"]["rounds"] == 5
    assert (report["n"], report["m"]) == (11, 3)
    assert report["metrics"]["violations"] == []


def test_match_exact_pattern_equals_text(capsys):
    code, out, _ = run_cli(["match", "--mode", "exact", "--text-inline",
                            "hello", "--pattern", "hello"], capsys)
    assert code == 0
    assert json.loads(out)["matches"] == [1]


def test_match_exact_treats_wildcard_bytes_literally(capsys):
    code, out, _ = run_cli(["match", "--mode", "exact", "--text-inline",
                            "a?b", "--pattern", r"\?"], capsys)
    assert code == 0
    assert json.loads(out)["matches"] == [2]


def test_match_escaped_question_is_literal(capsys):
    code, out, _ = run_cli(["match", "--mode", "q", "--text-inline",
                            "axa?a", "--pattern", r"a\?a"], capsys)
    assert code == 0
    assert json.loads(out)["matches"] == [3]


def test_match_star_modes_agree(capsys):
    for mode in ("star-dp", "star-nonprefix"):
        code, out, _ = run_cli(["match", "--mode", mode, "--text-inline",
                                "abracadabra", "--pattern", "*cad*",
                                "--verify"], capsys)
        assert code == 0
        report = json.loads(out)
        assert report["decision"] is True
        assert report["oracle_checked"] is True


def test_match_text_from_file(tmp_path, capsys):
    path = tmp_path / "text.bin"
    path.write_bytes(b"mississippi")
    code, out, _ = run_cli(["match", "--mode", "exact", "--text", str(path),
                            "--pattern", "issi", "--verify"], capsys)
    assert code == 0
    assert json.loads(out)["matches"] == [2, 5]


def test_match_plus_report_and_verify(capsys):
    code, out, _ = run_cli(["match", "--mode", "plus", "--text-inline",
                            "aabcccddad", "--pattern", "ab+ccc+",
                            "--verify"], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["oracle_checked"] is True
    spans = {(a["min_start"], a["min_end"]) for a in report["alignments"]}
    assert (2, 6) in spans


def test_match_star_dp_pattern_over_budget_exits_1(capsys):
    code, _, err = run_cli(["match", "--mode", "star-dp", "--text-inline",
                            "aaaa", "--pattern", "aaa", "--slack-c", "1",
                            "--slack-log-exp", "0"], capsys)
    assert code == 1
    assert "budget" in err


def test_match_strict_budget_violation_exits_2(capsys):
    code, _, err = run_cli(["match", "--mode", "q", "--text-inline",
                            "abracadabra", "--pattern", "a?a", "--strict",
                            "--slack-c", "1", "--slack-log-exp", "0"], capsys)
    assert code == 2
    assert "budget violation" in err


def test_match_empty_pattern_exits_1(capsys):
    code, _, err = run_cli(["match", "--mode", "exact", "--text-inline",
                            "abc", "--pattern", ""], capsys)
    assert code == 1
    assert "error" in err


def test_match_missing_arguments_exit_1(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["match", "--mode", "exact", "--pattern", "a"])
    assert exc.value.code == 1
    capsys.readouterr()


def test_json_report_round_trips_byte_identical(tmp_path, capsys):
    path = tmp_path / "report.json"
    code, out, _ = run_cli(["match", "--mode", "q", "--text-inline",
                            "abracadabra", "--pattern", "?bra",
                            "--json", str(path)], capsys)
    assert code == 0
    assert out == ""  # report went to the file
    text = path.read_text()
    assert json.dumps(json.loads(text), sort_keys=True, indent=2) + "\n" == text


# --------------------------------------------------------------------------
# oracle subcommand.
# --------------------------------------------------------------------------

def test_oracle_exact_and_question(capsys):
    code, out, _ = run_cli(["oracle", "--text-inline", "banana",
                            "--pattern", "ana"], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["class"] == "exact"
    assert report["matches"] == [2, 4]

    code, out, _ = run_cli(["oracle", "--text-inline", "banana",
                            "--pattern", "a?a"], capsys)
    assert json.loads(out)["matches"] == [2, 4]


def test_oracle_plus_spans_worked_example(capsys):
    code, out, _ = run_cli(["oracle", "--text-inline", "bookkeeper",
                            "--pattern", "oo+k+ee+"], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["class"] == "plus"
    assert [2, 7] in report["spans"]
    expected = sorted(naive_plus_spans(b"bookkeeper", b"oo+k+ee+"))
    assert report["spans"] == [list(se) for se in expected]

    code, out, _ = run_cli(["oracle", "--text-inline", "bookkeeper",
                            "--pattern", "oo+kee+"], capsys)
    assert json.loads(out)["spans"] == []


def test_oracle_star_decision(capsys):
    code, out, _ = run_cli(["oracle", "--text-inline", "abracadabra",
                            "--pattern", "abr*ra"], capsys)
    assert json.loads(out)["decision"] is True
    code, out, _ = run_cli(["oracle", "--text-inline", "abracadabra",
                            "--pattern", "*z*"], capsys)
    assert json.loads(out)["decision"] is False


def test_match_mode_oracle_matches_subcommand(capsys):
    code, out1, _ = run_cli(["match", "--mode", "oracle", "--text-inline",
                             "banana", "--pattern", "ana"], capsys)
    assert code == 0
    _, out2, _ = run_cli(["oracle", "--text-inline", "banana",
                          "--pattern", "ana"], capsys)
    assert out1 == out2


# --------------------------------------------------------------------------
# gen subcommand.
# --------------------------------------------------------------------------

def test_gen_periodic_worked_example(capsys):
    code, out, _ = run_cli(["gen", "--kind", "periodic", "--n", "8",
                            "--period", "2"], capsys)
    assert code == 0
    assert out == "abababab\n"
    code, out, _ = run_cli(["gen", "--kind", "periodic", "--n", "7",
                            "--period", "3"], capsys)
    assert out == "abcabca\n"


def test_gen_random_seed_determinism(tmp_path, capsys):
    paths = [tmp_path / name for name in ("a.txt", "b.txt", "c.txt")]
    for path in paths[:2]:
        code, _, _ = run_cli(["gen", "--kind", "random", "--n", "64",
                              "--seed", "9", "--out", str(path)], capsys)
        assert code == 0
    run_cli(["gen", "--kind", "random", "--n", "64", "--seed", "10",
             "--out", str(paths[2])], capsys)
    blobs = [p.read_bytes() for p in paths]
    assert blobs[0] == blobs[1]
    assert blobs[0] != blobs[2]
    assert len(blobs[0]) == 64 and set(blobs[0]) <= set(b"ab")


def test_gen_adversarial_plus_emits_valid_pattern(tmp_path, capsys):
    out = tmp_path / "t.txt"
    code, _, _ = run_cli(["gen", "--kind", "adversarial-plus", "--n", "50",
                          "--seed", "3", "--out", str(out)], capsys)
    assert code == 0
    text = out.read_bytes()
    pattern = (tmp_path / "t.txt.pattern").read_bytes()
    assert len(text) == 50
    # the pattern is drawn from the text's leading runs, so it occurs at 1
    spans = naive_plus_spans(text, pattern)
    assert any(s == 1 for s, _ in spans)


def test_gen_prefix_free_star_pattern_is_prefix_free(tmp_path, capsys):
    out = tmp_path / "t.txt"
    code, _, _ = run_cli(["gen", "--kind", "prefix-free-star", "--n", "96",
                          "--seed", "11", "--out", str(out),
                          "--pattern-out", str(tmp_path / "p.txt")], capsys)
    assert code == 0
    text = out.read_bytes()
    pattern = (tmp_path / "p.txt").read_bytes()
    sp = split_subpatterns(pattern)
    subs = sp.subpatterns
    for i in range(len(subs)):
        for j in range(len(subs)):
            if i != j:
                assert not subs[j].startswith(subs[i])
    assert naive_star(text, pattern) is True  # planted occurrence


# --------------------------------------------------------------------------
# bench subcommand.
# --------------------------------------------------------------------------

def test_bench_empty_mode_set_is_header_only(capsys):
    code, out, _ = run_cli(["bench"], capsys)
    assert code == 0
    assert out == "mode,n,x,rounds,peak_memory,peak_receive,wall_time\n"


def test_bench_rows_have_pinned_round_counts(capsys):
    code, out, _ = run_cli(["bench", "--modes", "exact,q,plus", "--sizes",
                            "128", "--x-values", "0.5"], capsys)
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "mode,n,x,rounds,peak_memory,peak_receive,wall_time"
    rows = [line.split(",") for line in lines[1:]]
    assert [(r[0], r[1], r[2], r[3]) for r in rows] == [
        ("exact", "128", "0.5", "3"),
        ("q", "128", "0.5", "5"),
        ("plus", "128", "0.5", "6"),
    ]
    for r in rows:
        assert int(r[4]) > 0 and int(r[5]) > 0 and float(r[6]) >= 0.0


def test_bench_rejects_unknown_mode(capsys):
    code, _, err = run_cli(["bench", "--modes", "quantum"], capsys)
    assert code == 1
    assert "unknown bench mode" in err


# --------------------------------------------------------------------------
# fft subcommand.
# --------------------------------------------------------------------------

def _parse_pairs(out: str) -> np.ndarray:
    vals = [float(tok) for tok in out.split()]
    return np.array(vals[0::2]) + 1j * np.array(vals[1::2])


def test_fft_forward_matches_local_engine(tmp_path, capsys):
    data = tmp_path / "in.txt"
    data.write_text("1 0 2 0 3 0 4 0\n")
    code, out, _ = run_cli(["fft", "--input", str(data)], capsys)
    assert code == 0
    got = _parse_pairs(out)
    want = fft_local([1, 2, 3, 4])
    assert np.max(np.abs(got - want)) < 1e-9


def test_fft_inverse_round_trips(tmp_path, capsys):
    rng = np.random.default_rng(5)
    v = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    data = tmp_path / "in.txt"
    data.write_text(" ".join(f"{z.real:.17g} {z.imag:.17g}" for z in v))
    code, fwd, _ = run_cli(["fft", "--input", str(data)], capsys)
    assert code == 0
    back = tmp_path / "fwd.txt"
    back.write_text(fwd)
    code, inv, _ = run_cli(["fft", "--inverse", "--input", str(back)], capsys)
    assert code == 0
    assert np.max(np.abs(_parse_pairs(inv) - v)) < 1e-9


def test_fft_rejects_bad_input(tmp_path, capsys):
    data = tmp_path / "in.txt"
    data.write_text("1 0 2\n")  # odd token count
    code, _, err = run_cli(["fft", "--input", str(data)], capsys)
    assert code == 1 and "pairs" in err
    data.write_text("1 0 2 0 3 0\n")  # 3 pairs: not a power of two
    code, _, err = run_cli(["fft", "--input", str(data)], capsys)
    assert code == 1 and "power of two" in err
