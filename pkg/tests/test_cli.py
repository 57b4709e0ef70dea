import pydot
import pytest

from sdtlearn.cli import main
from sdtlearn.dataset import parse_dataset
from sdtlearn.equivalence import isomorphic
from sdtlearn.fixtures import G0, G1
from sdtlearn.transducer import format_sdt, parse_sdt


@pytest.fixture
def g1(tmp_path):
    path = tmp_path / "g1.sdt"
    path.write_text(format_sdt(G1), encoding="utf-8")
    return path


def report(text):
    return dict(line.split(": ", 1) for line in text.splitlines() if ": " in line)


def test_gen_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.sdt", tmp_path / "b.sdt"
    assert main(["gen", "--states", "3", "--seed", "4", "--out", str(a)]) == 0
    assert main(["gen", "--states", "3", "--seed", "4", "--out", str(b)]) == 0
    assert a.read_text() == b.read_text()
    assert len(parse_sdt(a.read_text()).states) == 3
    assert report(capsys.readouterr().out)["states"] == "3"


def test_gen_to_stdout(capsys):
    assert main(["gen", "--states", "2"]) == 0
    captured = capsys.readouterr()
    parse_sdt(captured.out)
    assert "states: 2" in captured.err


def test_gen_usage_errors(capsys):
    assert main(["gen", "--states", "0"]) == 2
    assert main(["gen", "--states", "2", "--inalpha", "a#"]) == 2
    assert main(["gen", "--states", "2", "--pair-cap", "-1"]) == 2


def test_pairs(g1, capsys):
    assert main(["pairs", str(g1), "--max-len", "1"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines() == ["-\t-", "a\tA", "a\tB"]


def test_pairs_cap(g1, capsys):
    assert main(["pairs", str(g1), "--max-len", "6", "--pair-cap", "3"]) == 1


def test_learn_round_trip(g1, tmp_path, capsys):
    data, learned = tmp_path / "d.tsv", tmp_path / "h.sdt"
    assert main(["pairs", str(g1), "--out", str(data)]) == 0
    assert main(["learn", str(data), str(g1), "--out", str(learned)]) == 0
    r = report(capsys.readouterr().out)
    assert r["equivalent"] == "true" and r["counterexample"] == "none"
    assert isomorphic(parse_sdt(learned.read_text()), G1)


def test_learn_budget(g1, tmp_path, capsys):
    data = tmp_path / "d.tsv"
    main(["pairs", str(g1), "--out", str(data)])
    capsys.readouterr()
    assert main(["learn", str(data), str(g1), "--query-budget", "0"]) == 1
    r = report(capsys.readouterr().out)
    assert r["error"].startswith("BudgetExhausted")
    assert r["translation_queries"] == "0"


def test_learn_bad_dataset(g1, tmp_path):
    bad = tmp_path / "bad.tsv"
    bad.write_text("a\tZ\n")
    assert main(["learn", str(bad), str(g1)]) == 2


def test_cs(g1, tmp_path, capsys):
    out = tmp_path / "cs.tsv"
    assert main(["cs", str(g1), "--out", str(out)]) == 0
    D = parse_dataset(out.read_text(), G1.input_alphabet, G1.output_alphabet)
    r = report(capsys.readouterr().out)
    assert int(r["cs"]) == len(D)
    assert {"n0", "n1", "n2"} <= set(r)


def test_equiv(g1, tmp_path, capsys):
    g0 = tmp_path / "g0.sdt"
    g0.write_text(format_sdt(G0))
    assert main(["equiv", str(g0), str(g1), "--depth", "2"]) == 0
    r = report(capsys.readouterr().out)
    assert r["equivalent"] == "false" and r["counterexample"] == "aa"
    assert main(["equiv", str(g1), str(g1)]) == 0
    r = report(capsys.readouterr().out)
    assert r["isomorphic"] == "true" and r["equivalent"] == "true"


def test_canon(g1, tmp_path, capsys):
    out = tmp_path / "c.sdt"
    assert main(["canon", str(g1), "--out", str(out)]) == 0
    assert isomorphic(parse_sdt(out.read_text()), G1)
    assert report(capsys.readouterr().out)["stable"] == "true"


def test_dot(g1, capsys):
    assert main(["dot", str(g1)]) == 0
    assert pydot.graph_from_dot_data(capsys.readouterr().out)


def test_unreadable_inputs(tmp_path, capsys):
    assert main(["dot", str(tmp_path / "missing.sdt")]) == 2
    broken = tmp_path / "broken.sdt"
    broken.write_text("inalpha a\nnonsense\n")
    assert main(["cs", str(broken)]) == 2
    assert "line 2" in capsys.readouterr().err


def test_missing_subcommand():
    with pytest.raises(SystemExit) as err:
        main([])
    assert err.value.code == 2
