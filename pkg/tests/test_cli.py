from __future__ import annotations

import json
import shutil

import numpy as np

from genplateau import corpus
from genplateau.cli import main
from genplateau.space import SpaceDesc
from genplateau.walsh import GenFunction

PARAMS = corpus.corpus_root() / "params"


def run(capsys, *argv):
    rc = main(list(argv))
    out = capsys.readouterr().out
    return rc, (json.loads(out) if out.strip() else None)


def write_function(path, f):
    path.write_text(json.dumps(f.to_dict()))
    return str(path)


def test_construct_writes_function_and_report(tmp_path, capsys):
    rc, _ = run(capsys, "construct", "--theorem", "T1", "--params", str(PARAMS / "ex1.json"), "--out", str(tmp_path))
    assert rc == 0
    rep = json.loads((tmp_path / "report.json").read_text())
    assert rep["schema"] == "genplateau.report/1" and rep["verification"][0]["s"] == 1
    f = GenFunction.from_dict(json.loads((tmp_path / "function.json").read_text()))
    assert f.n == 4 and f.p == 3


def test_construct_then_verify_and_spectrum(tmp_path, capsys):
    run(capsys, "construct", "--params", str(PARAMS / "ex2.json"), "--out", str(tmp_path))
    rc, rep = run(capsys, "verify", str(tmp_path / "function.json"))
    assert rc == 0 and rep["plateaued"] and rep["parseval"] and rep["classification"]["s"] == 2
    rc, spec = run(capsys, "spectrum", str(tmp_path / "function.json"))
    assert rc == 0 and len(spec["spectrum"]["values"]) == 16


def test_verify_random_table_is_negative(tmp_path, capsys):
    V = SpaceDesc.vector(3, 3)
    tab = np.zeros(27, dtype=np.int64)
    tab[0] = 1
    rc, rep = run(capsys, "verify", write_function(tmp_path / "r.json", GenFunction(V, 1, tab)))
    assert rc == 1
    assert rep["plateaued"] is False and rep["detail"]["error"] == "not_plateaued"


def test_usage_errors(tmp_path, capsys):
    assert run(capsys, "reproduce", "--example", "12")[0] == 2
    assert run(capsys, "reproduce")[0] == 2
    assert run(capsys, "verify", str(tmp_path / "missing.json"))[0] == 2
    assert run(capsys, "construct", "--theorem", "T2", "--params", str(PARAMS / "ex1.json"))[0] == 2
    assert main(["bogus"]) == 2
    capsys.readouterr()
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"theorem": "T1", "p": 3}))
    rc, rep = run(capsys, "construct", "--params", str(bad))
    assert rc == 2 and rep["error"] == "usage"


def test_precondition_failure_exit_code(tmp_path, capsys):
    doc = json.loads((PARAMS / "ex1.json").read_text())
    doc["M"] = [[1, 1, 0, 0], [1, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
    path = tmp_path / "singular.json"
    path.write_text(json.dumps(doc))
    rc, rep = run(capsys, "construct", "--params", str(path))
    assert rc == 3 and rep["error"] == "precondition"


def test_size_guard(capsys):
    rc, rep = run(capsys, "construct", "--params", str(PARAMS / "ex8.json"))
    assert rc == 3 and rep["error"] == "size_guard"
    rc, rep = run(capsys, "construct", "--params", str(PARAMS / "ex1.json"), "--max-domain", "10")
    assert rc == 3 and rep["error"] == "size_guard"


def test_reproduce_is_idempotent(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["reproduce", "--example", "3", "--out", str(a)]) == 0
    assert main(["reproduce", "--example", "3", "--out", str(b)]) == 0
    capsys.readouterr()
    for name in ("example3.json", "example3_report.json"):
        assert (a / name).read_bytes() == (b / name).read_bytes()
    rep = json.loads((a / "example3_report.json").read_text())
    assert rep["ok"] and rep["digest_match"]


def test_construct_is_idempotent(capsys):
    first = (main(["construct", "--params", str(PARAMS / "ex6.json")]), capsys.readouterr().out)
    second = (main(["construct", "--params", str(PARAMS / "ex6.json")]), capsys.readouterr().out)
    assert first == second and first[0] == 0


def test_reproduce_honours_corpus_env(tmp_path, monkeypatch, capsys):
    root = tmp_path / "corpus"
    shutil.copytree(corpus.corpus_root(), root)
    exp = json.loads((root / "expected.json").read_text())
    exp["2"]["sha256"] = "f" * 64
    (root / "expected.json").write_text(json.dumps(exp))
    monkeypatch.setenv("GENPLATEAU_CORPUS", str(root))
    rc, rep = run(capsys, "reproduce", "--example", "2")
    assert rc == 1 and rep["digest_match"] is False


def test_analyze_report(tmp_path, capsys):
    run(capsys, "construct", "--params", str(PARAMS / "ex10.json"), "--out", str(tmp_path))
    rc, rep = run(capsys, "analyze", str(tmp_path / "function.json"))
    assert rc == 0
    assert rep["partially_bent"] is False and rep["wrp"]["member"] and rep["wrp"]["h_exp"] == 2
    assert rep["nonquadratic_witness"] is not None


def test_t5_request_runs_c3_file(tmp_path, capsys):
    rc, _ = run(capsys, "construct", "--theorem", "T5", "--params", str(PARAMS / "ex9.json"), "--out", str(tmp_path))
    assert rc == 0
    rep = json.loads((tmp_path / "report.json").read_text())
    assert rep["verification"][0]["regularity"] == "non_weakly_regular"
