"""End-to-end command-line checks (subprocess level)."""

import json
import os
import subprocess
import sys

import pytest

QUICK_CONFIG = {"t_points": 11}


def run_cli(args, cwd, env_extra=None):
    env = dict(os.environ)
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        [sys.executable, "-m", "kzring.cli", *args],
        cwd=cwd, env=env, capture_output=True, text=True,
    )


def write_config(tmp_path, name, **fields):
    data = dict(QUICK_CONFIG)
    data.update(fields)
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def test_para_subcommand_writes_tables(tmp_path):
    cfg = write_config(tmp_path, "c.json")
    proc = run_cli(["para", "--config", cfg, "--out", "out"], cwd=tmp_path)
    assert proc.returncode == 0, proc.stderr
    assert (tmp_path / "out" / "para_para.csv").exists()
    assert (tmp_path / "out" / "para.gp").exists()
    listed = [line for line in proc.stdout.splitlines() if line.endswith(".csv")]
    assert listed


def test_dia_subcommand_emits_ensemble(tmp_path):
    cfg = write_config(tmp_path, "c.json")
    proc = run_cli(["dia", "--config", cfg, "--out", "out"], cwd=tmp_path)
    assert proc.returncode == 0, proc.stderr
    ens = tmp_path / "out" / "dia_dia_ensemble.json"
    assert ens.exists()
    data = json.loads(ens.read_text())
    assert len(data["directions"]) == 2


def test_seed_override_changes_the_ensemble(tmp_path):
    cfg = write_config(tmp_path, "c.json")
    for seed, out in ((1, "a"), (2, "b")):
        proc = run_cli(
            ["dia", "--config", cfg, "--seed", str(seed), "--out", out],
            cwd=tmp_path,
        )
        assert proc.returncode == 0, proc.stderr
    a = (tmp_path / "a" / "dia_dia_ensemble.json").read_text()
    b = (tmp_path / "b" / "dia_dia_ensemble.json").read_text()
    assert a != b


def test_repeated_runs_are_byte_identical(tmp_path):
    cfg = write_config(tmp_path, "c.json")
    for out in ("a", "b"):
        proc = run_cli(["compare", "--config", cfg, "--out", out], cwd=tmp_path)
        assert proc.returncode == 0, proc.stderr
    for name in ("compare_para.csv", "compare_dia.csv", "compare_difference.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_env_var_sets_the_output_directory(tmp_path):
    cfg = write_config(tmp_path, "c.json")
    proc = run_cli(
        ["para", "--config", cfg], cwd=tmp_path,
        env_extra={"KZRING_OUT": "envout"},
    )
    assert proc.returncode == 0, proc.stderr
    assert (tmp_path / "envout" / "para_para.csv").exists()


def test_unknown_config_key_exits_two(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"no_such_field": 3}')
    proc = run_cli(["para", "--config", str(path), "--out", "x"], cwd=tmp_path)
    assert proc.returncode == 2
    assert "no_such_field" in proc.stderr


def test_invalid_physics_exits_two(tmp_path):
    cfg = write_config(tmp_path, "bad.json", g=0.9)
    proc = run_cli(["para", "--config", cfg, "--out", "x"], cwd=tmp_path)
    assert proc.returncode == 2
    assert "error:" in proc.stderr


def test_unwritable_output_exits_one(tmp_path):
    cfg = write_config(tmp_path, "c.json")
    proc = run_cli(
        ["para", "--config", cfg, "--out", "/proc/nowhere/sub"], cwd=tmp_path
    )
    assert proc.returncode == 1


def test_bad_preset_name_exits_two(tmp_path):
    proc = run_cli(["preset", "fig9"], cwd=tmp_path)
    assert proc.returncode == 2


def test_oracle_check_passes_and_prints_verdicts(tmp_path):
    proc = run_cli(["oracle-check", "--out", "out"], cwd=tmp_path)
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout.count("pass") >= 4
    assert (tmp_path / "out" / "oracle-check_oracle.csv").exists()
