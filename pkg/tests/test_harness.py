import json
import subprocess
import sys

import pytest

from agfrac import (ExperimentConfig, ReceivedWord, SeedStream, build_instance,
                    corrupt, describe, fractional_decode, run_experiment)
from agfrac.harness import CSV_COLUMNS, render_csv, render_sidecar, run_trial

F81_CONFIG = {
    "field": "3^2",
    "curve": {"model": "hermitian", "q0": 3},
    "extension_degree": 2,
    "beta": 6,
    "partition": {"z": "x", "parts": [[0, 1, 2]]},
    "decoder": "fractional",
    "error_model": "uniform",
    "weights": [0, 2, 4],
    "trials": 5,
    "seed": 424242,
}

F729_CONFIG = {
    "field": "3^2",
    "curve": {"model": "hermitian", "q0": 3},
    "extension_degree": 3,
    "beta": 6,
    "partition": {"z": "x", "parts": [[0, 1], [2]]},
    "decoder": "interleaved",
    "error_model": "common-positions",
    "weights": [3],
    "trials": 3,
    "seed": 7,
    "locator_excess": 5,
    "include_baseline": False,
}


def test_seed_stream_is_deterministic_and_distinct():
    a = SeedStream(1, "x")
    b = SeedStream(1, "x")
    assert [a.below(1000) for _ in range(20)] == [b.below(1000) for _ in range(20)]
    assert SeedStream(1, "x").below(10 ** 9) != SeedStream(2, "x").below(10 ** 9)
    draw = SeedStream(5).distinct(10, 27)
    assert len(set(draw)) == 10 and all(0 <= v < 27 for v in draw)
    with pytest.raises(ValueError):
        SeedStream(5).distinct(28, 27)


def test_corrupt_weight_and_models(f81):
    ext = f81.ext
    word = [0] * f81.spec.n
    assert corrupt(word, 0, ext, SeedStream(1)) == word
    full = corrupt(word, f81.spec.n, ext, SeedStream(2))
    assert all(a != b for a, b in zip(full, word))
    rng = SeedStream(3)
    for k in range(1000):
        weight = rng.below(f81.spec.n + 1)
        w = corrupt(word, weight, ext, SeedStream(3, k))
        assert sum(1 for a, b in zip(w, word) if a != b) == weight
    with pytest.raises(ValueError):
        corrupt(word, f81.spec.n + 1, ext, SeedStream(4))
    with pytest.raises(ValueError):
        corrupt(word, 1, ext, SeedStream(5), model="common-positions")


def test_corrupt_common_positions_hits_every_row(f729):
    from agfrac import project_received
    spec, ext = f729.spec, f729.ext
    clean = [0] * spec.n
    pi0 = project_received(spec, clean)
    for k in range(20):
        w = corrupt(clean, 5, ext, SeedStream(11, k), model="common-positions",
                    spec=spec)
        pi = project_received(spec, w)
        errored = [i for i in range(spec.n) if w[i] != 0]
        for t in range(spec.m):
            hit = [i for i in range(spec.n) if pi[t][i] != pi0[t][i]]
            assert hit == errored


def test_received_word_counters(f81):
    spec = f81.spec
    word = [0] * spec.n
    rw = ReceivedWord(word, spec)
    assert rw.downloaded_symbols == 0
    pi = rw.project()
    assert rw.downloaded_symbols == spec.m * spec.n == 27
    fractional_decode(spec, pi)
    assert rw.downloaded_symbols == 27          # decoding reads nothing more
    rw2 = ReceivedWord(word, spec)
    rw2.read_full()
    assert rw2.downloaded_symbols == spec.l * spec.n == 54


def test_config_parsing_and_validation():
    config = ExperimentConfig.from_dict(dict(F81_CONFIG))
    config.validate()
    echo = config.to_dict()
    assert ExperimentConfig.from_dict({k: v for k, v in echo.items()
                                       if v is not None}).to_dict() == echo
    ranged = ExperimentConfig.from_dict(
        {**{k: v for k, v in F81_CONFIG.items() if k != "weights"},
         "weight_range": [0, 3]})
    assert ranged.weights == [0, 1, 2, 3]
    with pytest.raises(ValueError, match="trials"):
        ExperimentConfig.from_dict({**F81_CONFIG, "trials": 0}).validate()
    with pytest.raises(ValueError, match="unknown config keys"):
        ExperimentConfig.from_dict({**F81_CONFIG, "bogus": 1})
    with pytest.raises(ValueError, match="missing config keys"):
        ExperimentConfig.from_dict({"field": "3^2"})
    with pytest.raises(ValueError, match="decoder"):
        ExperimentConfig.from_dict({**F81_CONFIG, "decoder": "magic"}).validate()


def test_build_instance_cross_checks():
    with pytest.raises(ValueError, match="does not match"):
        build_instance(ExperimentConfig.from_dict({**F81_CONFIG, "field": "2^2"}))
    with pytest.raises(ValueError, match="beyond the code length"):
        build_instance(ExperimentConfig.from_dict({**F81_CONFIG, "weights": [28]}))


def test_describe_mentions_radii_and_fraction():
    text = describe(ExperimentConfig.from_dict(dict(F81_CONFIG)))
    assert "designed = 6" in text and "half-distance = 5" in text
    assert "guaranteed = 4" in text
    assert "27 of 54" in text and "fraction 1/2" in text


def test_run_trial_outcomes_and_downloads():
    inst = build_instance(ExperimentConfig.from_dict(dict(F81_CONFIG)))
    rec = run_trial(inst, "fractional", 4, 0)
    assert rec.outcome == "success"
    assert rec.downloaded_symbols == 27
    assert len(rec.positions) == 4 and rec.wall_time > 0
    rec = run_trial(inst, "baseline", 4, 0)
    assert rec.outcome == "success"
    assert rec.downloaded_symbols == 54


def test_run_experiment_deterministic_output(tmp_path):
    config = ExperimentConfig.from_dict(dict(F81_CONFIG))
    rows1 = run_experiment(config, out_csv=tmp_path / "a.csv", out_json=tmp_path / "a.json")
    rows2 = run_experiment(config, out_csv=tmp_path / "b.csv", out_json=tmp_path / "b.json")
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()
    assert rows1 == rows2
    text = (tmp_path / "a.csv").read_text()
    assert text.splitlines()[0] == ",".join(CSV_COLUMNS)
    sidecar = json.loads((tmp_path / "a.json").read_text())
    assert sidecar["config"]["seed"] == 424242
    # guaranteed-radius weights decode perfectly; baseline downloads l*n
    for row in rows1:
        assert row["successes"] == row["trials"]
        if row["decoder"] == "fractional":
            assert row["downloaded_symbols"] == 27 and row["fraction"] == "0.500000"
        else:
            assert row["downloaded_symbols"] == 54 and row["fraction"] == "1.000000"


def test_run_experiment_interleaved_common_positions():
    rows = run_experiment(ExperimentConfig.from_dict(dict(F729_CONFIG)))
    assert len(rows) == 1
    assert rows[0]["decoder"] == "interleaved"
    assert rows[0]["successes"] == rows[0]["trials"]
    assert rows[0]["downloaded_symbols"] == 54


def test_render_helpers_stable():
    config = ExperimentConfig.from_dict(dict(F81_CONFIG))
    assert render_sidecar(config) == render_sidecar(config)
    rows = [{c: 0 for c in CSV_COLUMNS}]
    assert render_csv(rows).splitlines()[0] == ",".join(CSV_COLUMNS)


CLI = [sys.executable, "-m", "agfrac.cli"]


def test_cli_round_trip(tmp_path):
    config_path = tmp_path / "config.json"
    config_path.write_text(json.dumps(F81_CONFIG))

    out = subprocess.run(CLI + ["describe", "--config", str(config_path)],
                         capture_output=True, text=True)
    assert out.returncode == 0 and "guaranteed = 4" in out.stdout

    out = subprocess.run(CLI + ["encode", "--config", str(config_path), "--seed", "3"],
                         capture_output=True, text=True)
    assert out.returncode == 0
    word = json.loads(out.stdout)["codeword"]
    word_path = tmp_path / "word.json"
    word_path.write_text(json.dumps(word))

    out = subprocess.run(CLI + ["corrupt", "--config", str(config_path),
                                "--word", str(word_path), "--weight", "3",
                                "--seed", "5"],
                         capture_output=True, text=True)
    assert out.returncode == 0
    received = json.loads(out.stdout)["received"]
    received_path = tmp_path / "received.json"
    received_path.write_text(json.dumps(received))

    out = subprocess.run(CLI + ["decode-fractional", "--config", str(config_path),
                                "--word", str(received_path)],
                         capture_output=True, text=True)
    assert out.returncode == 0
    payload = json.loads(out.stdout)
    assert payload["status"] == "success"
    assert payload["codeword"] == word
    assert payload["downloaded_symbols"] == 27

    out_csv = tmp_path / "results.csv"
    out = subprocess.run(CLI + ["experiment", "--config", str(config_path),
                                "--out", str(out_csv)],
                         capture_output=True, text=True)
    assert out.returncode == 0
    assert out_csv.exists() and (tmp_path / "results.json").exists()


def test_cli_validation_exit_code(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({**F81_CONFIG, "decoder": "nope"}))
    out = subprocess.run(CLI + ["describe", "--config", str(bad)],
                         capture_output=True, text=True)
    assert out.returncode == 1
    out = subprocess.run(CLI + ["describe", "--config", str(tmp_path / "absent.json")],
                         capture_output=True, text=True)
    assert out.returncode == 2
