import csv
import io
import json

import jsonschema
import pytest

from zerosum import Group, Sequence
from zerosum.cli import main
from zerosum.constructions import kubertin_lower_bound
from zerosum.schema import load_schema, names


def run(argv, tmp_path=None, env_cache=True):
    out = io.StringIO()
    if tmp_path is not None and env_cache:
        argv = ["--cache", str(tmp_path / "cache.jsonl"), *argv]
    code = main(argv, out=out)
    return code, out.getvalue()


def run_json(argv, schema, tmp_path=None):
    code, text = run(argv, tmp_path)
    data = json.loads(text)
    jsonschema.validate(data, load_schema(schema))
    return code, data


def test_schemas_are_valid():
    for name in names():
        jsonschema.Draft202012Validator.check_schema(load_schema(name))
    with pytest.raises(KeyError):
        load_schema("nope")


def test_construct_kubertin_verify(tmp_path):
    code, data = run_json(["construct", "--kubertin", "--n", "3", "--r", "2", "--k", "1", "--verify"],
                          "construction", tmp_path)
    assert code == 0
    assert data["claim"] == {"no_zero_sum_of_length": 3, "verified": True}
    assert sum(item["count"] for item in data["items"]) == (1 + 2) * 3 - 2 - 1


def test_construct_other_modes(tmp_path):
    code, data = run_json(["construct", "--lower", "--group", "2^2", "--k", "2", "--verify"], "construction", tmp_path)
    assert code == 0 and data["claim"]["verified"]
    code, data = run_json(["construct", "--cap", "--r", "3"], "construction", tmp_path)
    assert code == 0 and "verified" not in data["claim"]
    code, data = run_json(["construct", "--egz", "--group", "2^3", "--verify"], "construction", tmp_path)
    assert code == 0
    code, _ = run(["construct", "--kubertin", "--n", "3"], tmp_path)
    assert code == 2


def test_constant(tmp_path):
    code, data = run_json(["constant", "--group", "5^3", "--L", "30"], "record", tmp_path)
    assert code == 0 and (data["value"], data["status"]) == (42, "theorem")
    code, data = run_json(["constant", "--group", "2^3"], "record", tmp_path)
    assert data["kind"] == "D" and data["value"] == 4
    code, data = run_json(["constant", "--group", "3^2", "--L", "3", "--compute"], "record", tmp_path)
    assert (data["value"], data["status"]) == (9, "computed")
    # the cache now answers without --compute
    code, data = run_json(["constant", "--group", "3^2", "--L", "3"], "record", tmp_path)
    assert data["status"] == "computed"


def test_ntheory():
    code, data = run_json(["ntheory", "--n", "200", "--r", "7"], "ntheory")
    assert code == 0
    assert (data["M"], data["p_n_r"], data["omega"], data["P"]) == (25, 25, 2, 5)
    assert run(["ntheory", "--n", "1", "--r", "2"])[0] == 2


def test_census_csv():
    code, text = run(["census", "--x", "10", "--x", "1000", "--y", "2"])
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(text)))
    assert rows[0]["count_E"] == "2" and rows[0]["ratio"] == ""
    code, text = run(["census", "--x", "10000", "--A", "2", "--eps", "0.1"])
    row = next(csv.DictReader(io.StringIO(text)))
    assert float(row["exponent"]) == pytest.approx(0.6)
    assert run(["census", "--x", "10"])[0] == 2


def test_find_and_verify(tmp_path):
    G = Group.parse("3^2")
    S = Sequence.from_coords(G, [(1, 0)] * 3 + [(0, 1)])
    path = tmp_path / "s.json"
    path.write_text(S.dumps())
    code, cert = run_json(["find", "--input", str(path), "--L", "3"], "certificate", tmp_path)
    assert code == 0 and cert["verified"]
    cpath = tmp_path / "cert.json"
    cpath.write_text(json.dumps(cert))
    code, res = run_json(["verify", "--input", str(cpath)], "verify_result", tmp_path)
    assert code == 0 and res["ok"]
    cert["target_length"] = 2
    cpath.write_text(json.dumps(cert))
    code, res = run_json(["verify", "--input", str(cpath)], "verify_result", tmp_path)
    assert code == 1 and not res["ok"]

    K = kubertin_lower_bound(3, 2, 1)
    path.write_text(K.dumps())
    code, data = run_json(["find", "--input", str(path), "--L", "3"], "not_found", tmp_path)
    assert code == 3 and data["found"] is False


def test_verify_construction_claim(tmp_path):
    code, text = run(["construct", "--kubertin", "--n", "2", "--r", "2", "--k", "1"], tmp_path)
    path = tmp_path / "c.json"
    path.write_text(text)
    code, res = run_json(["verify", "--input", str(path)], "verify_result", tmp_path)
    assert code == 0 and res["ok"]
    data = json.loads(text)
    data["claim"]["no_zero_sum_of_length"] = 1
    path.write_text(json.dumps(data))
    assert run(["verify", "--input", str(path)], tmp_path)[0] == 1


def test_davenport(tmp_path):
    code, data = run_json(["davenport", "--group", "3^2"], "extremal", tmp_path)
    assert code == 0 and data["value"] == 5 and data["target_length"] is None
    code, data = run_json(["davenport", "--group", "9^2"], "davenport_registry", tmp_path)
    assert code == 0 and data["value"] == 17
    code, data = run_json(["davenport", "--group", "2,6,6"], "error", tmp_path)
    assert code == 4


def test_s_and_resource_cap(tmp_path):
    code, data = run_json(["s", "--group", "2^3", "--L", "4"], "extremal", tmp_path)
    assert code == 0 and data["value"] == 7
    code, data = run_json(["s", "--group", "2^7", "--L", "2"], "error", tmp_path)
    assert code == 4
    code, data = run_json(["--max-group-order", "4", "s", "--group", "2^3", "--L", "2"], "error", tmp_path)
    assert code == 4


def test_lift_and_peel(tmp_path):
    code, cert = run_json(["lift", "--n", "2", "--p", "3", "--m", "1", "--r", "1", "--k", "3", "--seed", "7"],
                          "certificate", tmp_path)
    assert code == 0 and cert["verified"] and cert["target_length"] == 18
    code, cert = run_json(["peel", "--q", "2", "--r", "3", "--k", "5"], "certificate", tmp_path)
    assert code == 0 and cert["verified"] and cert["target_length"] == 10
    path = tmp_path / "s.json"
    path.write_text(Sequence.power(Group.parse("2^3").zero, 12).dumps())
    assert run(["peel", "--q", "2", "--r", "3", "--k", "5", "--input", str(path)], tmp_path)[0] == 2


def test_bound(tmp_path):
    code, data = run_json(["bound", "--n", "12", "--r", "3", "--k", "6"], "bound", tmp_path)
    assert code == 0
    assert data["bound_value"] == 118
    assert set(data) >= {"exact_sources", "bound_value", "corollary3_value"}
    code, data = run_json(["--c", "0.5", "bound", "--n", "30", "--r", "3", "--k", "1"], "bound", tmp_path)
    assert data["c"] == 0.5


def test_selfcheck(tmp_path):
    code, data = run_json(["selfcheck"], "selfcheck", tmp_path)
    assert code == 0 and data["ok"] and data["contradictions"] == 0


def test_deterministic(tmp_path):
    argv = ["lift", "--n", "2", "--p", "2", "--m", "1", "--r", "2", "--k", "4", "--seed", "3"]
    assert run(argv, tmp_path) == run(argv, tmp_path)
    argv = ["constant", "--group", "6^3", "--L", "36"]
    assert run(argv, tmp_path) == run(argv, tmp_path)


def test_env_cache(tmp_path, monkeypatch):
    path = tmp_path / "env.jsonl"
    monkeypatch.setenv("ZS_CACHE", str(path))
    assert run(["s", "--group", "3", "--L", "3"])[0] == 0
    assert json.loads(path.read_text().splitlines()[0])["value"] == 5


def test_usage_errors(capsys):
    assert run([])[0] == 2
    assert run(["nosuch"])[0] == 2
    assert run(["constant", "--group", "x^y", "--L", "3"])[0] == 2
    assert run(["--help"])[0] == 0
    assert "--max-group-order" in capsys.readouterr().out
