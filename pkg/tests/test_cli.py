import json
import subprocess
import sys

import pytest

from zeroprod.catalog import read_catalog, validate_record
from zeroprod.cli import _poly_str, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def last_json(out):
    return json.loads(out.strip().splitlines()[-1])


def test_shortest_inline(capsys):
    code, out, _ = run(capsys, "shortest", "--q", "2", "--gen", "1,0;0,0", "--gen", "1,1;1,0",
                       "--count-minimal", "--json")
    assert code == 0
    assert last_json(out) == {"mortal": True, "shortest_length": 4, "witness": [0, 1, 1, 0],
                              "semigroup_size": 13, "minimal_word_count": 1, "truncated": False}


def test_shortest_extension_field(capsys):
    code, out, _ = run(capsys, "shortest", "--q", "4", "--gen", "1,0;0,0", "--gen", "1,1;1,0")
    assert code == 0 and last_json(out)["shortest_length"] == 4


def test_construct_emit_roundtrip(capsys, tmp_path):
    path = tmp_path / "g.json"
    code, out, _ = run(capsys, "construct", "--min-length", "10", "--emit", str(path), "--json")
    d = last_json(out)
    assert code == 0 and (d["p"], d["shortest_length"]) == (89, 12)
    code, out, _ = run(capsys, "shortest", "--generators", str(path), "--json")
    assert code == 0
    res = last_json(out)
    assert res["shortest_length"] == 12 and res["witness"] == [0] + [1] * 10 + [0]


def test_rank(capsys):
    assert run(capsys, "rank", "--p", "11")[1].strip() == "10"
    code, out, _ = run(capsys, "rank", "--p", "89", "--json")
    assert last_json(out) == {"p": 89, "alpha": 11}
    assert run(capsys, "rank", "--p", "91")[0] == 2


def test_rys_writes_catalog(capsys, tmp_path):
    cat = tmp_path / "cat.jsonl"
    code, out, _ = run(capsys, "rys", "--n", "2", "--q", "2", "--k-max", "all", "--json",
                       "--catalog", str(cat), "--reproducible")
    d = last_json(out)
    assert code == 0 and (d["value"], d["mode"], d["sets_examined"]) == (4, "exact", 65535)
    assert "elapsed" not in d
    recs = read_catalog(cat)
    assert len(recs) == 1
    validate_record(recs[0])
    assert recs[0]["kind"] == "rys" and recs[0]["payload"]["value"] == 4


def test_rys_default_catalog(capsys, tmp_path, monkeypatch):
    target = tmp_path / "default.jsonl"
    monkeypatch.setenv("ZEROPROD_CATALOG", str(target))
    run(capsys, "rys", "--n", "2", "--q", "2", "--k-max", "1")
    assert len(read_catalog(target)) == 1
    run(capsys, "rys", "--n", "2", "--q", "2", "--k-max", "1", "--no-catalog")
    assert len(read_catalog(target)) == 1


def test_rys_text(capsys, tmp_path):
    code, out, _ = run(capsys, "rys", "--n", "2", "--q", "2", "--k-max", "2", "--no-catalog")
    assert code == 0 and out.startswith("Rys(2,2) >= 4")


def test_verify(capsys, tmp_path):
    cat = tmp_path / "v.jsonl"
    code, out, _ = run(capsys, "verify", "lemma", "--q", "2", "--catalog", str(cat))
    d = last_json(out)
    assert code == 0 and d["passed"] and d["cases_checked"] == 2560
    validate_record(read_catalog(cat)[0])
    assert run(capsys, "verify", "corollary", "--q", "2")[0] == 0
    assert run(capsys, "verify", "shape", "--q", "2")[0] == 0
    assert run(capsys, "verify", "lemma", "--q", "5")[0] == 2


def test_field(capsys):
    code, out, _ = run(capsys, "field", "--p", "2", "--e", "2", "--json", "--show-table")
    d = last_json(out)
    assert d["modulus"] == [1, 1, 1] and d["q"] == 4
    assert d["mul"][2][2] == 3
    code, out, _ = run(capsys, "field", "--p", "3", "--e", "2")
    assert "x^2 + 1" in out
    assert run(capsys, "field", "--p", "4")[0] == 2


def test_poly_str():
    assert _poly_str([1, 1, 1]) == "x^2 + x + 1"
    assert _poly_str([2, 0, 1]) == "x^2 + 2"


@pytest.mark.parametrize("argv, fragment", [
    (["shortest", "--q", "3", "--gen", "1,x;0,0"], "'x'"),
    (["shortest", "--q", "3"], "need --q"),
    (["shortest", "--q", "3", "--gen", "1,0;0,1", "--gen", "1,0,0;0,1,0;0,0,1"], "different sizes"),
    (["construct", "--min-length", "93"], "--min-length"),
    (["field", "--p", "6"], "prime"),
])
def test_usage_errors(capsys, argv, fragment):
    code, _, err = run(capsys, *argv)
    assert code == 2 and fragment in err


def test_bad_generator_file(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"q": 3, "generators": [[[1, 5], [0, 0]]]}))
    code, _, err = run(capsys, "shortest", "--generators", str(path))
    assert code == 2 and "bad.json" in err
    path.write_text(json.dumps({"p": 3}))
    assert run(capsys, "shortest", "--generators", str(path))[0] == 2


def test_budget_exit(capsys):
    code, _, err = run(capsys, "shortest", "--q", "11", "--gen", "1,0;0,0", "--gen", "1,1;1,0",
                       "--max-states", "20")
    assert code == 3 and "max_states" in err


def test_counterexample_exit(capsys, monkeypatch):
    import zeroprod.cli as cli
    from zeroprod.verify import verify_lemma_abc
    monkeypatch.setattr(cli, "verify_lemma_abc",
                        lambda q, **kw: verify_lemma_abc(q, conclusion="and"))
    assert run(capsys, "verify", "lemma", "--q", "2")[0] == 1


def test_module_entry_and_version():
    out = subprocess.run([sys.executable, "-m", "zeroprod", "--version"],
                         capture_output=True, text=True, check=True).stdout
    assert out.startswith("zeroprod 0.1.0 (catalog schema 1, kernels ")
