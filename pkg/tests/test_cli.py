import json
import shutil
import subprocess
import sys

import pytest

from quartwist import henn
from quartwist.cli import MAX_BOUND, main
from quartwist.exactfield import build_tower


def run(args, capsys):
    code = main(args)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture(scope="module")
def files(tmp_path_factory):
    d = tmp_path_factory.mktemp("twists")
    paths = {}
    for name, tag, params in [("fd23", "fermat-diagonal", {"a": "2", "b": "3"}),
                              ("fd11", "fermat-diagonal", {"a": "1", "b": "1"})]:
        p = d / (name + ".json")
        assert main(["gen", tag, json.dumps(params), "--out", str(p)]) == 0
        paths[name] = p
    return d, paths


def test_gen_and_verify(files, capsys):
    _, paths = files
    code, out, _ = run(["verify", str(paths["fd23"])], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["iso_ok"] and rep["rational_ok"] and rep["cocycle_ok"]


def test_gen_is_byte_stable(capsys):
    args = ["gen", "fermat-diagonal", '{"a":"2","b":"3"}']
    _, a, _ = run(args, capsys)
    _, b, _ = run(args, capsys)
    assert a == b and json.loads(a)["case"] == "fermat-diagonal"


def test_case_iv_relation(capsys):
    ok = '{"a":"1","b":"2","m":"1","a1":"3","a2":"1","q":"2"}'
    bad = '{"a":"1","b":"2","m":"2","a1":"3","a2":"1","q":"2"}'
    assert run(["gen", "case-iv", ok], capsys)[0] == 0
    code, _, err = run(["gen", "case-iv", bad], capsys)
    assert code == 2 and "q^3" in err


def test_corrupted_coefficient(files, capsys):
    d, paths = files
    obj = json.loads(paths["fd23"].read_text())
    T = build_tower(obj["tower"])
    obj["curve"]["coeffs"][0]["val"] = (T.gen("i") * 2).to_json()
    p = d / "bad.json"
    p.write_text(json.dumps(obj))
    code, _, err = run(["verify", str(p)], capsys)
    assert code == 1 and "x^4 y^0 z^0" in err


def test_missing_galois(files, capsys):
    d, paths = files
    obj = json.loads(paths["fd23"].read_text())
    obj["galois"] = None
    p = d / "nogal.json"
    p.write_text(json.dumps(obj))
    code, out, _ = run(["verify", str(p)], capsys)
    assert code == 1 and json.loads(out)["cocycle"] == "skipped"
    assert run(["verify", str(p), "--allow-no-galois"], capsys)[0] == 0


def test_equiv(files, capsys):
    _, paths = files
    assert run(["equiv", str(paths["fd23"]), str(paths["fd23"])], capsys)[0] == 0
    code, out, _ = run(["equiv", str(paths["fd23"]), str(paths["fd11"])], capsys)
    assert code == 1


def test_equiv_case_one(tmp_path, capsys):
    # both twists must share a tower; m = 8 only needs sqrt 2, the same tower as m = 2
    ps = []
    for m in ("2", "8"):
        p = tmp_path / ("m%s.json" % m)
        params = dict(henn.SAMPLE_PARAMS["I"], m=m)
        assert main(["gen", "case-i", json.dumps(params), "--out", str(p)]) == 0
        ps.append(str(p))
    code, out, _ = run(["equiv"] + ps, capsys)
    assert code == 0 and "N" in json.loads(out)["witness"]


def test_equiv_unrelated_towers(tmp_path, capsys):
    ps = []
    for a in ("2", "5"):
        p = tmp_path / ("fd%s.json" % a)
        main(["gen", "fermat-diagonal", json.dumps({"a": a, "b": "1"}), "--out", str(p)])
        ps.append(str(p))
    assert run(["equiv"] + ps, capsys)[0] == 3


def test_io_errors(tmp_path, capsys):
    assert run(["verify", str(tmp_path / "nope.json")], capsys)[0] == 4
    p = tmp_path / "garbage.json"
    p.write_text("{not json")
    assert run(["verify", str(p)], capsys)[0] == 4
    assert run(["gen", "fermat-diagonal", "{oops"], capsys)[0] == 4


def test_parameter_errors(capsys):
    assert run(["gen", "no-such-case", "{}"], capsys)[0] == 2
    assert run(["gen", "fermat-diagonal", '{"a":"0","b":"1"}'], capsys)[0] == 2
    assert run(["data", "no-such-table"], capsys)[0] == 2
    assert run(["catalog", "case-i", str(MAX_BOUND + 1)], capsys)[0] == 2


def test_tower_limit(monkeypatch, capsys):
    monkeypatch.setenv("QUARTWIST_MAX_TOWER_DEGREE", "8")
    assert run(["gen", "fermat-diagonal", '{"a":"2","b":"3"}'], capsys)[0] == 3


def test_data_tables(capsys):
    code, out, _ = run(["data", "klein-pairs"], capsys)
    assert code == 0 and len(json.loads(out)) == 11
    code, out, _ = run(["data", "henn-aut"], capsys)
    assert len(json.loads(out)) == 12
    code, out, _ = run(["data", "fermat-nondiagonal-pairs"], capsys)
    rows = json.loads(out)
    assert len(rows) == 9 and all("disc" in r for r in rows)


def test_catalog_case_i(tmp_path, capsys):
    p = tmp_path / "cat.json"
    assert main(["catalog", "case-i", "10", "--out", str(p)]) == 0
    entries = json.loads(p.read_text())
    ms = [int(e["twist"]["twist_params"]["m"]) for e in entries]
    assert sorted(ms) == sorted(m for m in range(-10, 11) if m and all(m % (k * k) for k in
                                                                        range(2, 4)))
    assert all(e["report"]["iso_ok"] and e["report"]["rational_ok"] for e in entries)
    assert entries[0]["fingerprint"]["label"] == "C2 = <2,1>"


def test_catalog_case_ix(capsys):
    code, out, _ = run(["catalog", "case-ix", "--bound", "5"], capsys)
    entries = json.loads(out)
    assert code == 0 and len(entries) == 5
    assert all("all k-bar-isomorphic" in e["notes"] for e in entries)


def test_catalog_fermat_diagonal(capsys):
    code, out, _ = run(["catalog", "fermat-diagonal", "3"], capsys)
    entries = json.loads(out)
    assert code == 0 and len(entries) == 18
    from quartwist.verify import fermat_diagonal_equivalent
    pairs = [(e["twist"]["twist_params"]["a"], e["twist"]["twist_params"]["b"]) for e in entries]
    for n, p in enumerate(pairs):
        for q in pairs[n + 1:]:
            assert not fermat_diagonal_equivalent(*p, *q)


@pytest.mark.skipif(shutil.which("quartwist") is None, reason="console script not installed")
def test_console_script():
    r = subprocess.run(["quartwist", "data", "exit-codes"], capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["3"].startswith("tower error")


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "quartwist", "data", "no-such"],
                       capture_output=True, text=True)
    assert r.returncode == 2
