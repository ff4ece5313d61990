"""Command-line behavior: verbs, exit codes, report stability."""

import os
import subprocess
import sys

import pytest

from asyncdec import BitVec, GeneratorFn, parallel_fn
from asyncdec.frontend import format_system, format_truth_table, parse_system, parse_truth_table
from asyncdec.frontend.checks import diagonal_example


def cli(*args, env=None):
    full_env = dict(os.environ)
    if env:
        full_env.update(env)
    return subprocess.run(
        [sys.executable, "-m", "asyncdec", *args],
        capture_output=True,
        text=True,
        env=full_env,
    )


@pytest.fixture
def workdir(tmp_path):
    (tmp_path / "delay.eq").write_text("x1' = u1\n")
    (tmp_path / "pair.eq").write_text("x1' = u1\nx2' = !x2\n")
    (tmp_path / "step.sig").write_text("n=1 init=0 H=10 events=(0,1)\n")
    (tmp_path / "fire1.rho").write_text("n=1 H=10 events=(1,1)\n")
    phi = GeneratorFn.identity(1, 1)
    (tmp_path / "id.tt").write_text(format_truth_table(phi))
    (tmp_path / "diag.sys").write_text(format_system(diagonal_example()))
    return tmp_path


def test_analyze_reports_partition(workdir):
    result = cli("analyze", "--phi", str(workdir / "pair.eq"), "--out", str(workdir / "report.kv"))
    assert result.returncode == 0
    assert "finest partition: {1} | {2}" in result.stdout
    doc = (workdir / "report.kv").read_text()
    assert "partition.blocks=1|2" in doc
    assert "depends.2.2=1" in doc


def test_simulate_prints_trajectory(workdir):
    result = cli(
        "simulate",
        "--phi", str(workdir / "delay.eq"),
        "--init", "0",
        "--input", str(workdir / "step.sig"),
        "--rho", str(workdir / "fire1.rho"),
    )
    assert result.returncode == 0
    assert "k=-1 omega=0" in result.stdout
    assert "k=0 t=1 omega=1" in result.stdout
    assert "signal: n=1 init=0 H=10 events=(1,1)" in result.stdout


def test_simulate_horizon_truncates(workdir):
    (workdir / "long.rho").write_text("n=1 H=20 events=(1,1);(15,1)\n")
    result = cli(
        "simulate",
        "--phi", str(workdir / "delay.eq"),
        "--init", "0",
        "--input", str(workdir / "step.sig"),
        "--rho", str(workdir / "long.rho"),
        "--horizon", "10",
    )
    assert result.returncode == 0
    assert "k=1" not in result.stdout


def test_simulate_horizon_mismatch_is_input_error(workdir):
    (workdir / "long.rho").write_text("n=1 H=20 events=(1,1)\n")
    result = cli(
        "simulate",
        "--phi", str(workdir / "delay.eq"),
        "--init", "0",
        "--input", str(workdir / "step.sig"),
        "--rho", str(workdir / "long.rho"),
    )
    assert result.returncode == 2


def test_compose_tables(workdir):
    out = workdir / "par.tt"
    result = cli(
        "compose", str(workdir / "id.tt"), str(workdir / "id.tt"), "--out", str(out)
    )
    assert result.returncode == 0
    phi = parse_truth_table(out.read_text())
    assert phi == parallel_fn(GeneratorFn.identity(1, 1), GeneratorFn.identity(1, 1))


def test_decompose_diagonal_reports_strict_subset(workdir):
    result = cli(
        "decompose",
        "--system", str(workdir / "diag.sys"),
        "--block", "1",
        "--emit", str(workdir / "diag"),
        "--out", str(workdir / "dec.kv"),
    )
    assert result.returncode == 0
    assert "status: strict-subset" in result.stdout
    assert "phi0 product form: no" in result.stdout
    doc = (workdir / "dec.kv").read_text()
    assert "status=strict-subset" in doc
    for k in (1, 2):
        factor = parse_system((workdir / f"diag.factor{k}.sys").read_text())
        assert factor.n == 1


def test_decompose_default_iterates_finest_partition(workdir):
    sys_text = format_system(diagonal_example())
    (workdir / "d2.sys").write_text(sys_text)
    result = cli("decompose", "--system", str(workdir / "d2.sys"))
    assert result.returncode == 0
    assert "finest partition: {1} | {2}" in result.stdout
    assert "overall:" in result.stdout


def test_decompose_coupled_block_is_violation(workdir):
    # a swap system: block {1} is not separated
    from asyncdec import RegularSystem, round_robin, unit_step

    u = unit_step(0, 10)
    swap = GeneratorFn.from_function(
        2, 1, lambda mu, lam: BitVec.from_bits([mu.bit(2), mu.bit(1)])
    )
    phi0 = {u: frozenset([BitVec.from_string("00")])}
    pi = {(BitVec.from_string("00"), u): frozenset([round_robin(2, (1,), 10)])}
    (workdir / "swap.sys").write_text(format_system(RegularSystem(swap, (u,), phi0, pi)))
    result = cli("decompose", "--system", str(workdir / "swap.sys"), "--block", "1")
    assert result.returncode == 1
    assert "violation" in result.stderr


def test_missing_file_is_input_error():
    result = cli("analyze", "--phi", "no-such-file.eq")
    assert result.returncode == 2
    assert "error" in result.stderr


def test_size_limit_env_override(workdir):
    result = cli(
        "analyze", "--phi", str(workdir / "pair.eq"), env={"ASYNC_DEC_SIZE_LIMIT": "2"}
    )
    assert result.returncode == 2
    assert "limit" in result.stderr


def test_verify_example1_deterministic():
    first = cli("verify", "--thm", "example1", "--seed", "3")
    second = cli("verify", "--thm", "example1", "--seed", "3")
    assert first.returncode == 0
    assert first.stdout == second.stdout
    assert "overall: PASS" in first.stdout


def test_verify_stamp_adds_line():
    result = cli("verify", "--thm", "example1", "--stamp")
    assert result.returncode == 0
    assert "stamp:" in result.stdout
