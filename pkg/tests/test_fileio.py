"""File formats: lossless round trips and named format violations."""

import random

import pytest

from asyncdec import BitVec, GeneratorFn, ProgressiveFunction, RegularSystem, Signal, unit_step
from asyncdec.frontend import (
    BundleError,
    DuplicateRowError,
    MalformedRowError,
    MissingRowError,
    OrderingError,
    WidthInconsistencyError,
    format_system,
    format_truth_table,
    parse_rho,
    parse_signal,
    parse_system,
    parse_truth_table,
)
from asyncdec.frontend.checks import rand_fn, rand_system

bv = BitVec.from_string


def test_truth_table_roundtrip():
    rng = random.Random(1)
    for _ in range(10):
        phi = rand_fn(rng, rng.randint(1, 3), rng.randint(0, 2))
        assert parse_truth_table(format_truth_table(phi)) == phi


def test_truth_table_m0_rows_have_no_lambda_field():
    phi = GeneratorFn.identity(1)
    text = format_truth_table(phi)
    assert "0 -> 0" in text and "1 -> 1" in text
    assert parse_truth_table(text) == phi


def test_missing_row_names_the_point():
    phi = GeneratorFn.identity(1, 1)
    lines = format_truth_table(phi).strip().splitlines()
    with pytest.raises(MissingRowError) as err:
        parse_truth_table("\n".join(lines[:-1]))
    assert "mu=1" in str(err.value) and "lam=1" in str(err.value)


def test_duplicate_row_rejected():
    phi = GeneratorFn.identity(1)
    text = format_truth_table(phi) + "0 -> 0\n"
    with pytest.raises(DuplicateRowError):
        parse_truth_table(text)


def test_malformed_row():
    with pytest.raises(MalformedRowError):
        parse_truth_table("n=1 m=0\n0 => 0\n1 -> 1")


def test_width_inconsistency():
    with pytest.raises(WidthInconsistencyError):
        parse_truth_table("n=1 m=0\n00 -> 0\n1 -> 1")


def test_signal_line_roundtrip():
    x = Signal(2, bv("10"), ((0, bv("11")), (4, bv("01"))), 9)
    assert parse_signal(str(x)) == x


def test_signal_empty_events():
    x = parse_signal("n=1 init=1 H=5 events=")
    assert x == Signal.constant(bv("1"), 5)


def test_signal_ordering_error():
    with pytest.raises(OrderingError):
        parse_signal("n=1 init=0 H=9 events=(3,1);(2,0)")


def test_signal_event_beyond_horizon():
    with pytest.raises(OrderingError):
        parse_signal("n=1 init=0 H=2 events=(5,1)")


def test_rho_line_roundtrip():
    r = ProgressiveFunction(2, ((1, bv("10")), (3, bv("11"))), 9)
    assert parse_rho(str(r)) == r


def test_rho_line_must_not_carry_init():
    with pytest.raises(MalformedRowError):
        parse_rho("n=1 init=0 H=9 events=(1,1)")
    with pytest.raises(MalformedRowError):
        parse_signal("n=1 H=9 events=(1,1)")


def test_negative_ticks_allowed():
    x = parse_signal("n=1 init=0 H=5 events=(-3,1);(0,0)")
    assert x.value_at(-3) == bv("1")


def test_system_bundle_roundtrip():
    rng = random.Random(5)
    for _ in range(6):
        phi = rand_fn(rng, 2, 1)
        sys_ = rand_system(rng, phi, 12, n_inputs=2)
        assert parse_system(format_system(sys_)) == sys_


def test_system_bundle_phi_by_reference(tmp_path):
    phi = GeneratorFn.identity(1, 1)
    (tmp_path / "phi.tt").write_text(format_truth_table(phi))
    bundle = """
[phi]
file=phi.tt
[inputs]
step = n=1 init=0 H=8 events=(0,1)
[phi0]
step: 0
[pi]
0 @ step: r0
[rho r0]
n=1 H=8 events=(1,1)
"""
    sys_ = parse_system(bundle, base_dir=str(tmp_path))
    assert sys_.phi == phi
    assert sys_.inputs == (unit_step(0, 8),)


def test_bundle_unknown_input():
    bundle = """
[phi]
n=1 m=1
0 0 -> 0
1 0 -> 1
0 1 -> 0
1 1 -> 1
[inputs]
step = n=1 init=0 H=8 events=(0,1)
[phi0]
other: 0
[pi]
0 @ step: r0
[rho r0]
n=1 H=8 events=(1,1)
"""
    with pytest.raises(BundleError):
        parse_system(bundle)


def test_bundle_unknown_schedule():
    bundle = """
[phi]
n=1 m=1
0 0 -> 0
1 0 -> 1
0 1 -> 0
1 1 -> 1
[inputs]
step = n=1 init=0 H=8 events=(0,1)
[phi0]
step: 0
[pi]
0 @ step: missing
"""
    with pytest.raises(BundleError):
        parse_system(bundle)


def test_bundle_missing_section():
    with pytest.raises(BundleError):
        parse_system("[phi]\nn=1 m=0\n0 -> 0\n1 -> 1\n")
