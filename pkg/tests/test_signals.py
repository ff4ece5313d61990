"""Signal algebra: evaluation, products, projections, canonical equality."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from asyncdec import (
    BitVec,
    CoordinateError,
    HorizonExceeded,
    HorizonMismatch,
    ProgressiveFunction,
    Signal,
    SignalSet,
    canonicalize,
    initial_value,
    interleave_rho,
    is_prefix_progressive,
    permute_signal,
    product_rho,
    product_set,
    product_signal,
    project_signal,
    round_robin,
    unit_step,
    value_at,
)

bv = BitVec.from_string


def sig(width, init, events, horizon):
    return Signal(width, bv(init), tuple((t, bv(v)) for t, v in events), horizon)


def rho(width, events, horizon):
    return ProgressiveFunction(width, tuple((t, bv(v)) for t, v in events), horizon)


# -- strategies -----------------------------------------------------------


@st.composite
def signals(draw, max_width=3, horizon=12):
    width = draw(st.integers(1, max_width))
    ticks = draw(st.lists(st.integers(-3, horizon), unique=True, max_size=6).map(sorted))
    events = tuple(
        (t, BitVec(width, draw(st.integers(0, (1 << width) - 1)))) for t in ticks
    )
    init = BitVec(width, draw(st.integers(0, (1 << width) - 1)))
    return Signal(width, init, events, horizon)


@st.composite
def rhos(draw, max_width=3, horizon=12):
    width = draw(st.integers(1, max_width))
    ticks = draw(st.lists(st.integers(1, horizon), unique=True, max_size=6).map(sorted))
    events = tuple(
        (t, BitVec(width, draw(st.integers(0, (1 << width) - 1)))) for t in ticks
    )
    return ProgressiveFunction(width, events, horizon)


# -- value_at -------------------------------------------------------------


def test_value_at_constant():
    x = Signal.constant(bv("0"), 10)
    for t in range(-5, 11):
        assert value_at(x, t) == bv("0")


def test_value_at_step():
    x = unit_step(0, 10)
    assert x.value_at(-1) == bv("0")
    assert x.value_at(0) == bv("1")


def test_value_at_interval_partition():
    # hand evaluation: 0 before 2, 1 on [2,5), 0 from 5
    x = sig(1, "0", [(2, "1"), (5, "0")], 10)
    assert x.value_at(4) == bv("1")
    assert x.value_at(1) == bv("0")
    assert x.value_at(5) == bv("0")


def test_value_at_right_continuous_at_events():
    x = sig(2, "00", [(1, "10"), (4, "01")], 10)
    for t, v in x.events:
        assert x.value_at(t) == v


def test_value_at_beyond_horizon():
    x = unit_step(0, 10)
    with pytest.raises(HorizonExceeded):
        x.value_at(11)


# -- initial_value --------------------------------------------------------


def test_initial_value_readout():
    assert initial_value(Signal.constant(bv("1"), 5)) == bv("1")
    assert initial_value(unit_step(0, 5)) == bv("0")
    assert initial_value(sig(2, "10", [(3, "01")], 5)) == bv("10")


# -- canonicalize ---------------------------------------------------------


def test_canonicalize_drops_redundant_events():
    x = sig(1, "0", [(1, "0"), (2, "1")], 10)
    c = canonicalize(x)
    assert c.events == ((2, bv("1")),)
    for t in range(-2, 11):
        assert c.value_at(t) == x.value_at(t)


def test_canonicalize_idempotent_on_canonical_input():
    x = sig(1, "0", [(2, "1")], 10)
    assert canonicalize(x).events == x.events


def test_canonicalize_constant_with_noop_event():
    x = sig(1, "1", [(3, "1")], 10)
    assert canonicalize(x).events == ()


@given(signals())
@settings(max_examples=200)
def test_canonicalize_preserves_value_and_is_idempotent(x):
    c = x.canonical()
    assert c.canonical().events == c.events
    for t in range(-4, x.horizon + 1):
        assert c.value_at(t) == x.value_at(t)
    assert c == x  # canonical equality


# -- products and projections ---------------------------------------------


def test_product_of_constants():
    x = Signal.constant(bv("0"), 10)
    y = Signal.constant(bv("1"), 10)
    assert product_signal(x, y) == Signal.constant(bv("01"), 10)


def test_product_merges_grids():
    x = unit_step(0, 10)
    y = unit_step(2, 10)
    p = product_signal(x, y)
    assert p.initial == bv("00")
    assert p.events == ((0, bv("10")), (2, bv("11")))


def test_product_project_roundtrip():
    a = sig(2, "01", [(1, "11"), (4, "00")], 10)
    b = sig(1, "1", [(2, "0")], 10)
    p = product_signal(a, b)
    assert project_signal(p, range(1, 3)) == a.canonical()
    assert project_signal(p, (3,)) == b.canonical()


def test_product_horizon_mismatch():
    with pytest.raises(HorizonMismatch):
        product_signal(unit_step(0, 10), unit_step(0, 11))


def test_project_single_coordinate():
    x = sig(3, "010", [(2, "110")], 10)
    assert project_signal(x, (2,)) == sig(1, "1", [], 10)


def test_project_constant_stays_constant():
    x = Signal.constant(bv("101"), 8)
    assert project_signal(x, (1, 3)) == Signal.constant(bv("11"), 8)


def test_project_bad_range():
    x = Signal.constant(bv("10"), 8)
    with pytest.raises(CoordinateError):
        project_signal(x, (0, 1))
    with pytest.raises(CoordinateError):
        project_signal(x, ())


@given(signals(), signals())
@settings(max_examples=150)
def test_product_pointwise_and_projection_recovers_factors(a, b):
    p = product_signal(a, b)
    for t in range(-4, a.horizon + 1):
        assert p.value_at(t) == a.value_at(t).concat(b.value_at(t))
    assert project_signal(p, range(1, a.width + 1)) == a
    assert project_signal(p, range(a.width + 1, a.width + b.width + 1)) == b


def test_permute_signal_roundtrip():
    x = sig(3, "010", [(1, "110"), (3, "001")], 10)
    perm = (3, 1, 2)
    inverse = (2, 3, 1)
    assert permute_signal(permute_signal(x, perm), inverse) == x


# -- signal sets ----------------------------------------------------------


def test_product_set_singletons():
    a = SignalSet.of([unit_step(0, 10)])
    b = SignalSet.of([unit_step(2, 10)])
    p = product_set(a, b)
    assert len(p) == 1
    assert product_signal(unit_step(0, 10), unit_step(2, 10)) in p


def test_product_set_cardinality():
    xs = SignalSet.of([unit_step(k, 10) for k in (0, 1)])
    ys = SignalSet.of([unit_step(k, 10) for k in (2, 3, 4)])
    assert len(product_set(xs, ys)) == 6


def test_product_set_with_constant_preserves_size():
    xs = SignalSet.of([unit_step(k, 10) for k in (0, 1)])
    c = SignalSet.of([Signal.constant(bv("1"), 10)])
    assert len(product_set(xs, c)) == len(xs)


def test_signal_set_deduplicates_canonical_equals():
    raw = sig(1, "0", [(1, "0"), (2, "1")], 10)
    canon = sig(1, "0", [(2, "1")], 10)
    assert len(SignalSet.of([raw, canon])) == 1


# -- schedule products ----------------------------------------------------


def test_product_rho_merged_grid_with_zero_padding():
    a = rho(1, [(1, "1"), (3, "1")], 10)
    b = rho(1, [(2, "1"), (3, "1")], 10)
    p = product_rho(a, b)
    assert p.events == ((1, bv("10")), (2, bv("01")), (3, bv("11")))


def test_product_rho_shared_grid_concatenates():
    a = rho(2, [(1, "10"), (2, "01")], 10)
    b = rho(1, [(1, "1"), (2, "1")], 10)
    p = product_rho(a, b)
    assert p.events == ((1, bv("101")), (2, bv("011")))


def test_product_rho_preserves_progressiveness():
    a = rho(2, [(1, "11")], 10)
    b = rho(1, [(4, "1")], 10)
    assert product_rho(a, b).is_prefix_progressive()


@given(rhos(), rhos())
@settings(max_examples=150)
def test_product_rho_restriction_recovers_canonical_factor(a, b):
    p = product_rho(a, b)
    assert p.restrict(range(1, a.width + 1)) == a.canonical()
    assert p.restrict(range(a.width + 1, a.width + b.width + 1)) == b.canonical()


def test_interleave_rho_matches_product_for_contiguous_block():
    a = rho(2, [(1, "10"), (5, "01")], 10)
    b = rho(1, [(2, "1")], 10)
    assert interleave_rho(3, (1, 2), a, b) == product_rho(a, b)


def test_interleave_rho_noncontiguous():
    a = rho(1, [(1, "1")], 10)
    b = rho(1, [(2, "1")], 10)
    woven = interleave_rho(2, (2,), a, b)
    # block coordinate 2 fires at 1, complement coordinate 1 fires at 2
    assert woven.events == ((1, bv("01")), (2, bv("10")))


# -- progressiveness ------------------------------------------------------


def test_prefix_progressive_all_fire():
    assert is_prefix_progressive(rho(2, [(1, "11")], 10))


def test_prefix_progressive_missing_coordinate():
    assert not is_prefix_progressive(rho(2, [(1, "10"), (2, "10")], 10))


def test_round_robin_is_progressive():
    for n in (1, 2, 4):
        assert round_robin(n, range(1, 4), 10).is_prefix_progressive(min_firings=3)


def test_min_firings_threshold():
    r = rho(1, [(1, "1"), (2, "1")], 10)
    assert r.is_prefix_progressive(min_firings=2)
    assert not r.is_prefix_progressive(min_firings=3)


def test_rho_zero_events_dropped_by_equality():
    a = rho(2, [(1, "11"), (2, "00")], 10)
    b = rho(2, [(1, "11")], 10)
    assert a == b
    assert a.canonical().events == b.events


def test_event_validation():
    with pytest.raises(ValueError):
        sig(1, "0", [(2, "1"), (2, "0")], 10)
    with pytest.raises(HorizonExceeded):
        sig(1, "0", [(11, "1")], 10)
