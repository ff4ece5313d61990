"""Binary signals over exact integer time.

A signal is a piecewise-constant map from time to bit vectors: an initial
value that holds on (-inf, t_0), then the value of the latest event at or
before t.  All signals here are finite prefixes, defined on (-inf, H] for an
explicit integer horizon H and undefined beyond it.  Progressive functions
share the event-list shape but are pulse trains: a firing vector at each
event tick and implicitly zero elsewhere.

Everything in this module is immutable and safe to share across threads.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import (
    CoordinateError,
    HorizonExceeded,
    HorizonMismatch,
    WidthMismatch,
)

# Time is exact signed integer ticks; only ordering and merging are ever used.
Tick = int


def gather_bits(value: int, coords: Sequence[int]) -> int:
    """Pack the bits of `value` at 1-based positions `coords` into low bits."""
    out = 0
    for k, c in enumerate(coords):
        out |= ((value >> (c - 1)) & 1) << k
    return out


def scatter_bits(value: int, coords: Sequence[int]) -> int:
    """Spread the low bits of `value` to 1-based positions `coords`."""
    out = 0
    for k, c in enumerate(coords):
        out |= ((value >> k) & 1) << (c - 1)
    return out


@dataclass(frozen=True)
class BitVec:
    """A point of B^n.  Coordinate 1 is the least significant bit.

    Width 0 (the empty vector) is allowed so that input-free generator
    functions (m = 0) can be evaluated; signals never have width 0.
    """

    width: int
    value: int

    def __post_init__(self):
        if self.width < 0:
            raise WidthMismatch(f"negative width {self.width}")
        if not 0 <= self.value < (1 << self.width):
            raise ValueError(f"value {self.value} out of range for width {self.width}")

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "BitVec":
        bits = list(bits)
        value = 0
        for k, b in enumerate(bits):
            if b not in (0, 1):
                raise ValueError(f"bit {k + 1} is {b}, expected 0 or 1")
            value |= b << k
        return cls(len(bits), value)

    @classmethod
    def from_string(cls, text: str) -> "BitVec":
        """Parse bits written coordinate 1 first, e.g. "10" has bit 1 set."""
        return cls.from_bits(int(ch) for ch in text)

    @classmethod
    def zeros(cls, width: int) -> "BitVec":
        return cls(width, 0)

    @classmethod
    def ones(cls, width: int) -> "BitVec":
        return cls(width, (1 << width) - 1)

    @classmethod
    def all_of_width(cls, width: int):
        """All 2^width vectors in increasing packed order."""
        for v in range(1 << width):
            yield cls(width, v)

    def bit(self, i: int) -> int:
        """Coordinate i, 1-based."""
        if not 1 <= i <= self.width:
            raise CoordinateError(f"coordinate {i} out of 1..{self.width}")
        return (self.value >> (i - 1)) & 1

    def flip(self, i: int) -> "BitVec":
        if not 1 <= i <= self.width:
            raise CoordinateError(f"coordinate {i} out of 1..{self.width}")
        return BitVec(self.width, self.value ^ (1 << (i - 1)))

    def concat(self, other: "BitVec") -> "BitVec":
        return BitVec(self.width + other.width, self.value | (other.value << self.width))

    def restrict(self, coords: Iterable[int]) -> "BitVec":
        """Restriction to the given coordinates, kept in ascending order."""
        cs = _checked_coords(coords, self.width)
        return BitVec(len(cs), gather_bits(self.value, cs))

    def permute(self, permutation: Sequence[int]) -> "BitVec":
        """Relabel coordinates: old coordinate i becomes permutation[i-1]."""
        if sorted(permutation) != list(range(1, self.width + 1)):
            raise CoordinateError(f"not a permutation of 1..{self.width}: {permutation}")
        return BitVec(self.width, scatter_bits(self.value, permutation))

    def bits(self) -> tuple[int, ...]:
        return tuple((self.value >> k) & 1 for k in range(self.width))

    def __str__(self) -> str:
        return "".join(str(b) for b in self.bits())


def _checked_coords(coords: Iterable[int], width: int) -> tuple[int, ...]:
    cs = sorted(set(coords))
    if not cs:
        raise CoordinateError("empty coordinate range")
    if cs[0] < 1 or cs[-1] > width:
        raise CoordinateError(f"coordinates {cs} not within 1..{width}")
    return tuple(cs)


def _check_events(events, width: int, horizon: Tick, kind: str):
    prev = None
    for t, v in events:
        if prev is not None and t <= prev:
            raise ValueError(f"{kind} events not strictly increasing at tick {t}")
        prev = t
        if v.width != width:
            raise WidthMismatch(f"{kind} event at tick {t} has width {v.width}, expected {width}")
        if t > horizon:
            raise HorizonExceeded(f"{kind} event at tick {t} beyond horizon {horizon}")


@dataclass(frozen=True, eq=False)
class Signal:
    """Piecewise-constant map to B^width on (-inf, horizon].

    Value semantics: `initial` on (-inf, t_0), the latest event value on
    [t_k, t_{k+1}), right-continuous at every event tick.  Representations
    are not unique (an event may repeat the value in force); equality and
    hashing go through the canonical form, which drops such events.
    """

    width: int
    initial: BitVec
    events: tuple[tuple[Tick, BitVec], ...]
    horizon: Tick

    def __post_init__(self):
        object.__setattr__(self, "events", tuple((t, v) for t, v in self.events))
        if self.width < 1:
            raise WidthMismatch(f"signal width must be >= 1, got {self.width}")
        if self.initial.width != self.width:
            raise WidthMismatch(
                f"initial value width {self.initial.width}, expected {self.width}"
            )
        _check_events(self.events, self.width, self.horizon, "signal")
        canon = []
        current = self.initial
        for t, v in self.events:
            if v != current:
                canon.append((t, v))
                current = v
        object.__setattr__(self, "_canon", tuple(canon))
        object.__setattr__(self, "_ticks", tuple(t for t, _ in self.events))

    @classmethod
    def constant(cls, value: BitVec, horizon: Tick) -> "Signal":
        return cls(value.width, value, (), horizon)

    def value_at(self, t: Tick) -> BitVec:
        """The value in force at tick t; t must not exceed the horizon."""
        if t > self.horizon:
            raise HorizonExceeded(f"t={t} beyond horizon {self.horizon}")
        k = bisect_right(self._ticks, t)
        if k == 0:
            return self.initial
        return self.events[k - 1][1]

    def canonical(self) -> "Signal":
        """Drop every event whose value repeats the value in force before it."""
        return Signal(self.width, self.initial, self._canon, self.horizon)

    def truncated(self, horizon: Tick) -> "Signal":
        """Restriction to (-inf, horizon]; never extends."""
        if horizon > self.horizon:
            raise HorizonExceeded(
                f"cannot extend horizon {self.horizon} to {horizon}"
            )
        kept = tuple((t, v) for t, v in self.events if t <= horizon)
        return Signal(self.width, self.initial, kept, horizon)

    def _key(self):
        return (
            self.width,
            self.horizon,
            self.initial.value,
            tuple((t, v.value) for t, v in self._canon),
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, Signal):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __str__(self) -> str:
        ev = ";".join(f"({t},{v})" for t, v in self.events)
        return f"n={self.width} init={self.initial} H={self.horizon} events={ev}"


def unit_step(t0: Tick, horizon: Tick) -> Signal:
    """The scalar step that is 0 before t0 and 1 from t0 on."""
    return Signal(1, BitVec(1, 0), ((t0, BitVec(1, 1)),), horizon)


def value_at(x: Signal, t: Tick) -> BitVec:
    return x.value_at(t)


def initial_value(x: Signal) -> BitVec:
    return x.initial


def canonicalize(x: Signal) -> Signal:
    return x.canonical()


def product_signal(a: Signal, b: Signal) -> Signal:
    """Cartesian product on the merged event grid.

    The result reads (a(t), b(t)) at every t; its event set is the union of
    both event grids, so it may carry redundant events until canonicalized.
    """
    if a.horizon != b.horizon:
        raise HorizonMismatch(f"horizons differ: {a.horizon} vs {b.horizon}")
    ticks = sorted(set(a._ticks) | set(b._ticks))
    events = tuple((t, a.value_at(t).concat(b.value_at(t))) for t in ticks)
    return Signal(a.width + b.width, a.initial.concat(b.initial), events, a.horizon)


def project_signal(x: Signal, coords: Iterable[int]) -> Signal:
    """Coordinate restriction, canonicalized."""
    cs = _checked_coords(coords, x.width)
    events = tuple((t, v.restrict(cs)) for t, v in x.events)
    return Signal(len(cs), x.initial.restrict(cs), events, x.horizon).canonical()


def permute_signal(x: Signal, permutation: Sequence[int]) -> Signal:
    """Relabel coordinates pointwise; old coordinate i becomes permutation[i-1]."""
    events = tuple((t, v.permute(permutation)) for t, v in x.events)
    return Signal(x.width, x.initial.permute(permutation), events, x.horizon)


class SignalSet:
    """A finite set of canonical signals of one width and horizon.

    Members are deduplicated through canonical equality and stored sorted,
    so iteration order is deterministic.
    """

    __slots__ = ("width", "horizon", "members")

    def __init__(self, width: int, horizon: Tick, members: Iterable[Signal]):
        canon = {}
        for x in members:
            if x.width != width:
                raise WidthMismatch(f"member width {x.width}, expected {width}")
            if x.horizon != horizon:
                raise HorizonMismatch(f"member horizon {x.horizon}, expected {horizon}")
            c = x.canonical()
            canon[c._key()] = c
        self.width = width
        self.horizon = horizon
        self.members = tuple(canon[k] for k in sorted(canon))

    @classmethod
    def of(cls, members: Iterable[Signal]) -> "SignalSet":
        members = list(members)
        if not members:
            raise ValueError("cannot infer width/horizon of an empty SignalSet")
        return cls(members[0].width, members[0].horizon, members)

    def __iter__(self):
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, x: Signal) -> bool:
        return any(x == member for member in self.members)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SignalSet):
            return NotImplemented
        return (
            self.width == other.width
            and self.horizon == other.horizon
            and self.members == other.members
        )

    def __hash__(self) -> int:
        return hash((self.width, self.horizon, self.members))

    def issubset(self, other: "SignalSet") -> bool:
        mine = {x._key() for x in self.members}
        theirs = {x._key() for x in other.members}
        return mine <= theirs

    def __repr__(self) -> str:
        return f"SignalSet(width={self.width}, horizon={self.horizon}, size={len(self)})"


def product_set(a: SignalSet, b: SignalSet) -> SignalSet:
    """Elementwise Cartesian product of two signal sets."""
    if a.horizon != b.horizon:
        raise HorizonMismatch(f"horizons differ: {a.horizon} vs {b.horizon}")
    return SignalSet(
        a.width + b.width,
        a.horizon,
        (product_signal(x, y) for x in a for y in b),
    )


@dataclass(frozen=True, eq=False)
class ProgressiveFunction:
    """A finite schedule prefix: firing vector alpha^k at each event tick.

    A zero firing vector is a no-op (nothing is computed), so equality and
    hashing ignore all-zero events.  True progressiveness is a property of
    the infinite tail; `is_prefix_progressive` is the finite surrogate.
    """

    width: int
    events: tuple[tuple[Tick, BitVec], ...]
    horizon: Tick

    def __post_init__(self):
        object.__setattr__(self, "events", tuple((t, v) for t, v in self.events))
        if self.width < 1:
            raise WidthMismatch(f"schedule width must be >= 1, got {self.width}")
        _check_events(self.events, self.width, self.horizon, "schedule")

    def canonical(self) -> "ProgressiveFunction":
        """Drop events whose firing vector is all zeros."""
        kept = tuple((t, v) for t, v in self.events if v.value != 0)
        return ProgressiveFunction(self.width, kept, self.horizon)

    def is_prefix_progressive(self, min_firings: int = 1) -> bool:
        """Whether every coordinate fires at least `min_firings` times."""
        counts = [0] * self.width
        for _, v in self.events:
            for i in range(self.width):
                counts[i] += (v.value >> i) & 1
        return all(c >= min_firings for c in counts)

    def truncated(self, horizon: Tick) -> "ProgressiveFunction":
        if horizon > self.horizon:
            raise HorizonExceeded(f"cannot extend horizon {self.horizon} to {horizon}")
        kept = tuple((t, v) for t, v in self.events if t <= horizon)
        return ProgressiveFunction(self.width, kept, horizon)

    def restrict(self, coords: Iterable[int]) -> "ProgressiveFunction":
        """Coordinate restriction with zero-only events dropped."""
        cs = _checked_coords(coords, self.width)
        events = tuple((t, v.restrict(cs)) for t, v in self.events)
        return ProgressiveFunction(len(cs), events, self.horizon).canonical()

    def _key(self):
        return (
            self.width,
            self.horizon,
            tuple((t, v.value) for t, v in self.events if v.value != 0),
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, ProgressiveFunction):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __str__(self) -> str:
        ev = ";".join(f"({t},{v})" for t, v in self.events)
        return f"n={self.width} H={self.horizon} events={ev}"


def is_prefix_progressive(rho: ProgressiveFunction, min_firings: int = 1) -> bool:
    return rho.is_prefix_progressive(min_firings)


def round_robin(width: int, ticks: Iterable[Tick], horizon: Tick) -> ProgressiveFunction:
    """The canonical progressive prefix: every coordinate fires at every tick."""
    ones = BitVec.ones(width)
    return ProgressiveFunction(width, tuple((t, ones) for t in sorted(set(ticks))), horizon)


def product_rho(a: ProgressiveFunction, b: ProgressiveFunction) -> ProgressiveFunction:
    """Cartesian product of schedules on the merged grid.

    Where only one factor has an event, the other half of the firing vector
    is zero: that coordinate is simply not computed at that tick, which is
    exactly the shared-grid form the factors take without loss of generality.
    """
    if a.horizon != b.horizon:
        raise HorizonMismatch(f"horizons differ: {a.horizon} vs {b.horizon}")
    at = dict((t, v) for t, v in a.events)
    bt = dict((t, v) for t, v in b.events)
    zero_a = BitVec.zeros(a.width)
    zero_b = BitVec.zeros(b.width)
    events = tuple(
        (t, at.get(t, zero_a).concat(bt.get(t, zero_b)))
        for t in sorted(set(at) | set(bt))
    )
    return ProgressiveFunction(a.width + b.width, events, a.horizon)


def interleave_rho(
    n: int,
    block: Iterable[int],
    rho_block: ProgressiveFunction,
    rho_rest: ProgressiveFunction,
) -> ProgressiveFunction:
    """Assemble a width-n schedule from block/complement schedules.

    `rho_block` drives the block coordinates (ascending order) and
    `rho_rest` the complement; the generalization of `product_rho` to a
    non-contiguous block.
    """
    bs = _checked_coords(block, n)
    cs = tuple(i for i in range(1, n + 1) if i not in set(bs))
    if len(bs) != rho_block.width or len(cs) != rho_rest.width:
        raise WidthMismatch(
            f"block sizes ({len(bs)},{len(cs)}) do not match schedule widths "
            f"({rho_block.width},{rho_rest.width})"
        )
    if rho_block.horizon != rho_rest.horizon:
        raise HorizonMismatch(
            f"horizons differ: {rho_block.horizon} vs {rho_rest.horizon}"
        )
    at = dict((t, v) for t, v in rho_block.events)
    bt = dict((t, v) for t, v in rho_rest.events)
    events = []
    for t in sorted(set(at) | set(bt)):
        value = 0
        if t in at:
            value |= scatter_bits(at[t].value, bs)
        if t in bt:
            value |= scatter_bits(bt[t].value, cs)
        events.append((t, BitVec(n, value)))
    return ProgressiveFunction(n, tuple(events), rho_block.horizon)
