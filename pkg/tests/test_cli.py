import json

import pytest

from wallcross.cli import InputError, RunConfig, main


def run_cli(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_factorize_pentagon(capsys):
    payload = json.dumps({
        "order": 8,
        "walls_in": [{"slope": [0, 1], "coeffs": {"1": "1"}},
                     {"slope": [1, 0], "coeffs": {"1": "1"}}],
    })
    code, out, _ = run_cli(capsys, ["factorize", "--json", payload])
    assert code == 0
    doc = json.loads(out)
    assert doc["factors"] == [
        {"slope": [1, 0], "coeffs": {"1": "1"}},
        {"slope": [1, 1], "coeffs": {"1": "1"}},
        {"slope": [0, 1], "coeffs": {"1": "1"}},
    ]


def test_gauss_bonnet_sphere(capsys):
    payload = json.dumps({"singularities": ["focus-focus"] * 24, "genus": 0})
    code, out, _ = run_cli(capsys, ["gauss-bonnet", "--json", payload])
    assert code == 0
    doc = json.loads(out)
    assert doc["total"] == "2" and doc["euler_characteristic"] == "2"
    assert doc["passed"] is True


def test_gauss_bonnet_failure_exit_code(capsys):
    payload = json.dumps({"singularities": ["focus-focus"] * 23, "genus": 0})
    code, out, _ = run_cli(capsys, ["gauss-bonnet", "--json", payload])
    assert code == 1
    assert json.loads(out)["passed"] is False


def test_malformed_json_exit_code(capsys):
    code, _, err = run_cli(capsys, ["gauss-bonnet", "--json", "{broken"])
    assert code == 2
    assert "line" in err and "column" in err


def test_monodromy_compose(capsys):
    payload = json.dumps({"loop": [
        {"A": [[1, 1], [0, 1]], "b": ["0", "0"]},
        {"A": [[1, 1], [0, 1]], "b": ["1/2", "0"]},
    ]})
    code, out, _ = run_cli(capsys, ["monodromy", "--json", payload])
    assert code == 0
    doc = json.loads(out)
    assert doc["A"] == [[1, 2], [0, 1]]
    assert doc["b"] == ["1/2", "0"]


def test_tropical_json_and_figure(capsys, tmp_path):
    payload = json.dumps({
        "dim": 1,
        "ring": {"laurent_t": 16},
        "terms": [{"exp": [0], "coeff": {"t": [[1, "1"]], "T": 16}},
                  {"exp": [1], "coeff": {"t": [[0, "1"]], "T": 16}},
                  {"exp": [2], "coeff": {"t": [[0, "1"]], "T": 16}}],
    })
    code, out, _ = run_cli(capsys, ["tropical", "--json", payload])
    assert code == 0
    doc = json.loads(out)
    assert {"constant": "1", "linear": [0]} in doc["pieces"]
    assert len(doc["pieces"]) == 3
    fig = tmp_path / "trop.svg"
    code, out, _ = run_cli(capsys, ["tropical", "--json", payload, "--emit", "svg",
                                    "--out", str(fig)])
    assert code == 0
    assert fig.exists() and fig.read_text().lstrip().startswith("<?xml")


def test_scatter_json_and_figure(capsys, tmp_path):
    seeds = json.dumps([{"point": ["1", "0"], "beta": [0, 1]},
                        {"point": ["0", "1"], "beta": [1, 0]}])
    code, out, _ = run_cli(capsys, ["scatter", "--singular-points", seeds,
                                    "--window", "0,4,0,4", "-C", "3", "-k", "6",
                                    "--check"])
    assert code == 0
    doc = json.loads(out)
    assert len(doc["events"]) == 1
    assert doc["checks"]["vertex_consistency"] is True
    assert doc["checks"]["kaffine_invariance"] is True
    fig = tmp_path / "diagram.svg"
    code, out, _ = run_cli(capsys, ["scatter", "--singular-points", seeds,
                                    "--window", "0,4,0,4", "-C", "3", "-k", "6",
                                    "--emit", "svg", "--out", str(fig)])
    assert code == 0
    summary = json.loads(out)
    assert fig.exists()
    assert (tmp_path / "diagram.csv").exists()
    assert (tmp_path / "diagram.json").exists()
    assert summary["events"] == 1


def test_check_all_fast_deterministic(capsys):
    argv = ["check-all", "--fast", "--seed", "3", "-k", "5", "--format", "json"]
    code1, out1, _ = run_cli(capsys, argv)
    code2, out2, _ = run_cli(capsys, argv)
    assert code1 == code2 == 0
    assert out1 == out2
    doc = json.loads(out1)
    assert doc["passed"] is True
    assert len(doc["checks"]) == 8


def test_run_config_validation():
    with pytest.raises(InputError):
        RunConfig(subcommand="scatter", series_order=0)
    with pytest.raises(InputError):
        RunConfig(subcommand="scatter", order_cutoff=0)
    with pytest.raises(InputError):
        RunConfig(subcommand="scatter", truncation=0)
