import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from syntaxirl import io
from syntaxirl.cli import load_config, main
from syntaxirl.errors import InputError
from syntaxirl.irl import IrlResult

ROOT = Path(__file__).resolve().parents[1]
FIXTURE = ROOT / "fixtures" / "fixture.toml"
DATA = Path(__file__).parent / "data"


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def staged(tmp_path, capsys):
    """Graph, corpus and split written by the individual subcommands."""
    g, t = tmp_path / "graph.json", tmp_path / "traces.jsonl"
    assert run(["gen-grid", "--width", 6, "--height", 5, "--out", g], capsys)[0] == 0
    assert run(["gen-traces", "--graph", g, "--count", 400, "--seed", 3, "--out", t], capsys)[0] == 0
    code, _, _ = run(["split", "--in", t, "--train", 300, "--test", 100, "--seed", 3,
                      "--out-train", tmp_path / "train.jsonl", "--out-test", tmp_path / "test.jsonl"], capsys)
    assert code == 0
    return tmp_path


def n_records(path):
    return len(Path(path).read_text().splitlines()) - 1


def test_corpus_and_split_sizes(staged):
    assert n_records(staged / "traces.jsonl") == 400
    assert n_records(staged / "train.jsonl") == 300
    assert n_records(staged / "test.jsonl") == 100
    assert io.load_traces(staged / "train.jsonl").role == "train"


def test_bad_split_exit_2(staged, capsys):
    code, _, err = run(["split", "--in", staged / "traces.jsonl", "--train", 300, "--test", 99, "--seed", 1,
                        "--out-train", staged / "a", "--out-test", staged / "b"], capsys)
    assert code == 2
    detail = json.loads(err)
    assert detail["error"] == "BadSplit"


def test_usage_errors_exit_2(capsys):
    for argv in ([], ["frobnicate"], ["gen-grid", "--width", "x", "--height", 2, "--out", "g"]):
        code, _, err = run(argv, capsys)
        assert code == 2
        assert set(json.loads(err)) >= {"error", "message"}


def test_missing_file_exit_2(tmp_path, capsys):
    code, _, err = run(["syntax", "--graph", tmp_path / "nope.json", "--out", tmp_path / "m.csv"], capsys)
    assert code == 2 and json.loads(err)["error"] == "InputError"


def test_syntax_train_evaluate(staged, capsys):
    g = staged / "graph.json"
    assert run(["syntax", "--graph", g, "--radius", 2, "--out", staged / "metrics.csv"], capsys)[0] == 0
    code, out, _ = run(["train", "--graph", g, "--traces", staged / "train.jsonl", "--iters", 40, "--eta0", 1.0,
                        "--decay", 0.97, "--seed", 3, "--out", staged / "model.json", "--history", staged / "history.csv"], capsys)
    assert code == 0 and "grad_l1" in out
    model = io.read_json(staged / "model.json")
    assert set(model) == {"theta", "svf", "horizon", "seed", "config"}
    assert model["seed"] == 3 and model["config"]["features"] == "one-hot"
    assert sum(model["svf"]) == pytest.approx(model["horizon"] + 1, abs=1e-9)
    history = (staged / "history.csv").read_text().splitlines()
    assert history[0] == "iter,grad_l1,learning_rate" and len(history) == 41
    assert len(io.load_history(staged / "history.csv")) == 40
    code, out, _ = run(["evaluate", "--graph", g, "--metrics", staged / "metrics.csv", "--model", staged / "model.json",
                        "--test", staged / "test.jsonl", "--out", staged / "report.json"], capsys)
    assert code == 0
    report = io.read_json(staged / "report.json")
    assert set(report) == {"pearson_syntax", "pearson_irl", "n_nodes_used", "per_node"}
    assert [r["node_id"] for r in report["per_node"]] == list(range(30))
    assert f"{report['pearson_irl']:.6f}" in out


def test_custom_feature_matrix(staged, capsys):
    feats = staged / "features.csv"
    rng = np.random.default_rng(0)
    np.savetxt(feats, rng.normal(size=(30, 3)), delimiter=",")
    code, _, _ = run(["train", "--graph", staged / "graph.json", "--traces", staged / "train.jsonl", "--iters", 5,
                      "--features", feats, "--out", staged / "m.json", "--history", staged / "h.csv"], capsys)
    assert code == 0
    assert len(io.read_json(staged / "m.json")["theta"]) == 3


def test_numerical_failure_exit_3(staged, capsys):
    code, _, err = run(["train", "--graph", staged / "graph.json", "--traces", staged / "train.jsonl", "--iters", 5,
                        "--eta0", 1e308, "--decay", 1.0, "--out", staged / "m.json", "--history", staged / "h.csv"], capsys)
    assert code == 3
    detail = json.loads(err)
    assert detail["error"] == "NumericalOverflow" and detail["iteration"] >= 2


def test_degenerate_correlation_exit_3(staged, capsys):
    g = staged / "graph.json"
    run(["syntax", "--graph", g, "--out", staged / "metrics.csv"], capsys)
    svf = [1.0] * 30
    io.write_json(staged / "flat.json", {"theta": [0.0] * 30, "svf": svf, "horizon": 29, "seed": 0, "config": {}})
    code, _, err = run(["evaluate", "--graph", g, "--metrics", staged / "metrics.csv", "--model", staged / "flat.json",
                        "--test", staged / "test.jsonl", "--out", staged / "r.json"], capsys)
    assert code == 3 and json.loads(err)["error"] == "DegenerateInput"


def test_graph_mismatch_exit_2(staged, capsys):
    other = staged / "other.json"
    run(["gen-grid", "--width", 5, "--height", 6, "--out", other], capsys)
    code, _, err = run(["train", "--graph", other, "--traces", staged / "train.jsonl", "--out", staged / "m.json",
                        "--history", staged / "h.csv"], capsys)
    assert code == 2 and json.loads(err)["error"] == "GraphMismatch"


def test_import_osm(tmp_path, capsys):
    out = tmp_path / "osm.json"
    assert run(["import-osm", "--in", DATA / "small.osm", "--out", out], capsys)[0] == 0
    g = io.load_graph(out)
    assert g.node_count == 5 and g.coords is not None
    code, _, err = run(["import-osm", "--in", DATA / "missing.osm", "--out", out], capsys)
    assert code == 2


def test_config_loading(tmp_path):
    cfg = load_config(FIXTURE)
    assert (cfg.count, cfg.train_count, cfg.test_count, cfg.seed, cfg.radius) == (400, 300, 100, 1, 2)
    assert (cfg.iterations, cfg.eta0, cfg.decay) == (100, 1.0, 0.97)
    assert Path(cfg.graph_path) == FIXTURE.parent / "grid12.json"
    bad = tmp_path / "bad.toml"
    bad.write_text("[corpus]\ncuont = 3\n")
    with pytest.raises(InputError) as info:
        load_config(bad)
    assert "cuont" in str(info.value)


def test_pipeline_artifacts_round_trip(tmp_path, capsys):
    code, out, _ = run(["pipeline", "--config", FIXTURE, "--output-dir", tmp_path / "run"], capsys)
    assert code == 0
    d = tmp_path / "run"
    for name in ("graph.json", "traces.jsonl", "train.jsonl", "test.jsonl", "metrics.csv", "model.json", "history.csv", "report.json"):
        data = (d / name).read_bytes()
        assert data.endswith(b"\n") and b"\r" not in data
    g = io.load_graph(d / "graph.json")
    assert g == io.load_graph(FIXTURE.parent / "grid12.json")
    assert len(io.load_traces(d / "traces.jsonl")) == 400
    assert io.metrics_to_text(io.load_metrics(d / "metrics.csv")) == (d / "metrics.csv").read_text()
    result = IrlResult.from_dict(io.read_json(d / "model.json"))
    assert len(result.svf) == 144
    assert io.history_to_text(io.load_history(d / "history.csv")) == (d / "history.csv").read_text()
    # re-serializing the parsed model gives the same bytes
    doc = io.read_json(d / "model.json")
    assert io.dumps(doc) + "\n" == (d / "model.json").read_text()


def test_pipeline_flag_override_validation(tmp_path, capsys):
    code, _, err = run(["pipeline", "--config", FIXTURE, "--output-dir", tmp_path, "--test", 99], capsys)
    assert code == 2


def test_module_entry_point(tmp_path):
    argv = [sys.executable, "-m", "syntaxirl", "gen-grid", "--width", "2", "--height", "2", "--out", str(tmp_path / "g.json")]
    proc = subprocess.run(argv, capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert io.load_graph(tmp_path / "g.json").node_count == 4
