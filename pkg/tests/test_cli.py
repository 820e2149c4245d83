import csv
import io
import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from molluni.cli import EXIT_NUMERICAL, EXIT_USAGE, EXIT_VALIDATION, build_parser, main
from molluni.streams import DEFAULT_SEED, SEED_ENV_VAR

GOLDEN = Path(__file__).parent / "golden"

# cheap, deterministic commands whose full output is pinned in tests/golden
GOLDEN_CASES = {
    "dist_logistic_cdf.csv": ["dist", "--scale", "0.01,0.1", "--eval", "cdf", "--at=-0.5,0,0.5,1.2", "--format", "csv"],
    "dist_laplace_moment.json": ["dist", "--family", "laplace", "--scale", "0.1", "--eval", "moment", "--order", "4", "--central", "--format", "json"],
    "ddist_table_m10_l05.csv": ["ddist", "--m", "10", "--lambda", "0.5"],
    "kurtosis_curve.csv": ["kurtosis-curve", "--points", "5"],
    "ar1_sweep_c001.csv": ["ar1-sweep", "--c", "0.01"],
    "ar1_analyze.json": ["ar1-analyze", "--a", "0.15", "--b", "0.5", "--max-lag", "3"],
    "sample_normal.csv": ["sample", "--family", "normal", "--scale", "0.1", "--count", "20", "--seed", "7"],
    "glm_example2_small.json": ["glm-example2", "--runs", "20", "--seed", "42"],
}


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def read_csv(text):
    return list(csv.reader(io.StringIO(text)))


def test_dist_cdf_example(capsys):
    code, out, _ = run(["dist", "--family", "logistic", "--scale", "0.1", "--eval", "cdf", "--at", "0.5"], capsys)
    assert code == 0
    assert out == "0.5\n"


def test_dist_default_scales(capsys):
    code, out, _ = run(["dist", "--eval", "kurtosis", "--format", "csv"], capsys)
    rows = read_csv(out)
    assert rows[0] == ["scale", "quantity", "value"]
    assert [float(r[0]) for r in rows[1:]] == [0.01, 0.02, 0.05, 0.1]


def test_dist_qf_and_moment(capsys):
    _, out, _ = run(["dist", "--family", "normal", "--scale", "0.2", "--eval", "qf", "--at", "0.5"], capsys)
    assert float(out) == pytest.approx(0.5, abs=1e-12)
    _, out, _ = run(["dist", "--family", "laplace", "--scale", "0.1", "--eval", "moment", "--order", "4", "--central"], capsys)
    assert float(out) == pytest.approx(0.0249, rel=1e-14)


def test_ddist_table_schema(capsys):
    code, out, _ = run(["ddist"], capsys)
    rows = read_csv(out)
    assert code == 0
    assert rows[0] == ["y", "probability"]
    ys = [int(r[0]) for r in rows[1:]]
    assert ys == list(range(-10, 21))
    assert sum(float(r[1]) for r in rows[1:]) == pytest.approx(1.0, abs=1e-9)


def test_kurtosis_curve_schema(capsys):
    _, out, _ = run(["kurtosis-curve", "--family", "laplace", "--points", "50"], capsys)
    rows = read_csv(out)
    assert rows[0] == ["family", "variance", "kurtosis"]
    assert rows[1] == ["laplace", "0", "1.8"]
    assert len(rows) == 52


def test_glm_example2_json_and_per_run(tmp_path, capsys):
    per_run = tmp_path / "runs.csv"
    out_path = tmp_path / "summary.json"
    code, out, _ = run(
        ["glm-example2", "--seed", "42", "--runs", "30", "--per-run", str(per_run), "--out", str(out_path)], capsys
    )
    assert code == 0
    assert out.startswith("glm-example2 seed=42 runs=30") and out.count("\n") == 1
    payload = json.loads(out_path.read_text())
    assert list(payload) == ["mean_alpha", "mean_beta", "runs_nonpositive", "mean_violations", "runs", "seed"]
    assert payload["runs"] == 30 and payload["seed"] == 42
    rows = read_csv(per_run.read_text())
    assert rows[0] == ["run", "alpha_hat", "beta_hat", "violations"]
    assert len(rows) == 31
    mean_alpha = sum(float(r[1]) for r in rows[1:]) / 30
    assert mean_alpha == pytest.approx(payload["mean_alpha"], rel=1e-14)


def test_ar1_sweep_rows(capsys):
    _, out, _ = run(["ar1-sweep", "--n", "30", "--c", "0.01,0.1", "--target-mean", "0.3"], capsys)
    rows = read_csv(out)
    assert rows[0] == ["c", "b", "mean_norm", "pacf1", "pacf2"]
    assert len(rows) == 1 + 2 * 19


def test_ar1_analyze_json(capsys):
    _, out, _ = run(["ar1-analyze", "--a", "0.15", "--b", "0.5"], capsys)
    payload = json.loads(out)
    for key in ("a", "b", "c", "n", "mean", "mean_norm", "variance", "acf", "pacf", "stationary"):
        assert key in payload
    assert len(payload["pacf"]) == 2


def test_sample_csv(capsys):
    _, out, _ = run(["sample", "--scale", "0.1", "--count", "5"], capsys)
    rows = read_csv(out)
    assert rows[0] == ["value"] and len(rows) == 6


@pytest.mark.parametrize(
    "argv,parameter",
    [
        (["dist", "--scale", "0", "--eval", "kurtosis"], "scale"),
        (["dist", "--scale", "0.1", "--eval", "qf", "--at", "1.5"], "at"),
        (["dist", "--scale", "0.1", "--eval", "pdf"], "at"),
        (["ddist", "--m", "1"], "m"),
        (["ddist", "--lambda", "-1"], "lambda"),
        (["glm-example2", "--c", "-0.01", "--runs", "2"], "c"),
        (["ar1-sweep", "--c", "0"], "c"),
        (["ar1-analyze", "--a", "0.1", "--b", "0.2", "--max-lag", "1"], "max-lag"),
        (["sample", "--scale", "0.1", "--count", "0"], "count"),
    ],
)
def test_validation_errors_name_the_parameter(argv, parameter, capsys):
    code, out, err = run(argv, capsys)
    assert code == EXIT_VALIDATION
    assert out == ""
    payload = json.loads(err.strip().splitlines()[-1])
    assert payload["error"] == "validation"
    assert payload["parameter"] == parameter


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate"],
        ["dist", "--scale", "0.1", "--eval", "cdf", "--at", "0.5", "--unknown-flag"],
        ["dist", "--scale", "abc", "--eval", "cdf"],
        ["ar1-analyze", "--a", "0.1"],
        ["sample", "--scale", "0.1", "--seed", "-3"],
        ["dist", "--eval", "median"],
    ],
)
def test_usage_errors(argv, capsys):
    code, _, err = run(argv, capsys)
    assert code == EXIT_USAGE
    assert json.loads(err.strip().splitlines()[-1])["error"] == "usage"


def test_numerical_failure_exit_code(capsys):
    # the Skellam truncation budget is exceeded for huge lambda
    code, _, err = run(["ddist", "--lambda", "1e7"], capsys)
    assert code == EXIT_NUMERICAL
    assert json.loads(err)["error"] == "numerical"


def test_help_lists_every_flag(capsys):
    parser = build_parser()
    sub = next(a for a in parser._actions if a.dest == "command")
    for name, p in sub.choices.items():
        text = p.format_help()
        for action in p._actions:
            for flag in action.option_strings:
                assert flag in text, (name, flag)
    assert main(["dist", "--help"]) == 0


def test_help_exit_code(capsys):
    assert main(["--help"]) == 0
    assert "glm-example2" in capsys.readouterr().out


@pytest.mark.parametrize("name", sorted(GOLDEN_CASES))
def test_golden_outputs(name, capsys, monkeypatch):
    monkeypatch.delenv(SEED_ENV_VAR, raising=False)
    code, out, _ = run(GOLDEN_CASES[name], capsys)
    assert code == 0
    assert out == (GOLDEN / name).read_text()


@pytest.mark.parametrize("name", sorted(GOLDEN_CASES))
def test_reruns_are_byte_identical(name, tmp_path, capsys, monkeypatch):
    monkeypatch.delenv(SEED_ENV_VAR, raising=False)
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(GOLDEN_CASES[name] + ["--out", str(a)]) == 0
    assert main(GOLDEN_CASES[name] + ["--out", str(b)]) == 0
    capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize(
    "argv",
    [
        ["glm-example2", "--runs", "60", "--seed", "5"],
        ["ar1-sweep", "--c", "0.01,0.1"],
    ],
)
def test_parallel_matches_serial(argv, capsys):
    _, serial, _ = run(argv, capsys)
    _, parallel, _ = run(argv + ["--jobs", "3"], capsys)
    assert serial == parallel


def test_seed_environment_override(capsys, monkeypatch):
    argv = ["sample", "--scale", "0.1", "--count", "8"]
    monkeypatch.delenv(SEED_ENV_VAR, raising=False)
    _, default, _ = run(argv, capsys)
    _, explicit, _ = run(argv + ["--seed", str(DEFAULT_SEED)], capsys)
    assert default == explicit
    monkeypatch.setenv(SEED_ENV_VAR, "99")
    _, env, _ = run(argv, capsys)
    _, explicit99, _ = run(argv + ["--seed", "99"], capsys)
    assert env == explicit99 != default
    monkeypatch.setenv(SEED_ENV_VAR, "not-a-seed")
    code, _, _ = run(argv, capsys)
    assert code == EXIT_VALIDATION


def test_console_entry_point_subprocess(tmp_path):
    env = {k: v for k, v in os.environ.items() if k != SEED_ENV_VAR}
    cmd = [sys.executable, "-m", "molluni", "dist", "--scale", "0.1", "--eval", "cdf", "--at", "0.5"]
    res = subprocess.run(cmd, capture_output=True, text=True, env=env, check=False)
    assert res.returncode == 0
    assert res.stdout == "0.5\n"
