"""Asynchronous execution semantics.

A run applies masked updates along a schedule: at each schedule tick the
coordinates whose firing bit is 1 are recomputed from the current state and
the input value sampled at that tick, and all other coordinates hold.  The
resulting state sequence, read as a piecewise-constant signal, is the
trajectory of the generator function under that schedule.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iter_product

from .boolfn import GeneratorFn
from .errors import HorizonExceeded, HorizonMismatch, ProgressivenessError, WidthMismatch
from .signals import (
    BitVec,
    ProgressiveFunction,
    Signal,
    SignalSet,
    Tick,
)


def apply_masked(phi: GeneratorFn, nu: BitVec, mu: BitVec, lam: BitVec) -> BitVec:
    """One masked update: coordinate i is recomputed iff nu_i = 1, else held."""
    if nu.width != phi.n:
        raise WidthMismatch(f"mask width {nu.width}, expected {phi.n}")
    computed = phi.eval(mu, lam)
    return BitVec(phi.n, (mu.value & ~nu.value) | (computed.value & nu.value))


@dataclass(frozen=True)
class Trajectory:
    """A run's state sequence and its signal reading.

    `states[0]` is the initial state (the index -1 element of the
    recursion); `states[k+1]` is the state entered at `ticks[k]`.  The
    signal view is the canonical piecewise-constant reading of the same
    data, which coincides with it at every tick up to the horizon.
    """

    states: tuple[BitVec, ...]
    ticks: tuple[Tick, ...]
    horizon: Tick
    signal: Signal

    def dump(self) -> str:
        lines = [f"k=-1 omega={self.states[0]}"]
        for k, t in enumerate(self.ticks):
            lines.append(f"k={k} t={t} omega={self.states[k + 1]}")
        return "\n".join(lines)


def run(
    phi: GeneratorFn,
    mu: BitVec,
    u: Signal,
    rho: ProgressiveFunction,
    horizon: Tick,
) -> Trajectory:
    """Run `phi` from state `mu` under input `u` along schedule `rho`.

    Index alignment: with the initial state at index -1, the first schedule
    event consumes the first firing vector, so the state entered at the
    first tick is the masked update of the initial state reading u there.
    The input is sampled pointwise at the schedule's ticks; its own event
    grid is unrelated.
    """
    if mu.width != phi.n:
        raise WidthMismatch(f"initial state width {mu.width}, expected {phi.n}")
    if u.width != phi.m:
        raise WidthMismatch(f"input width {u.width}, expected {phi.m}")
    if rho.width != phi.n:
        raise WidthMismatch(f"schedule width {rho.width}, expected {phi.n}")
    if u.horizon != horizon or rho.horizon != horizon:
        raise HorizonMismatch(
            f"horizons (input {u.horizon}, schedule {rho.horizon}) "
            f"must both equal {horizon}"
        )
    states = [mu]
    current = mu
    for t, alpha in rho.events:
        current = apply_masked(phi, alpha, current, u.value_at(t))
        states.append(current)
    signal = Signal(
        phi.n,
        mu,
        tuple((t, s) for (t, _), s in zip(rho.events, states[1:])),
        horizon,
    ).canonical()
    return Trajectory(tuple(states), tuple(t for t, _ in rho.events), horizon, signal)


def enumerate_states(
    phi: GeneratorFn,
    u: Signal,
    initials,
    schedules,
    horizon: Tick,
    min_firings: int = 1,
) -> SignalSet:
    """All trajectories over the given initial states and schedule family.

    A finite under-approximation of the universal system's state set: exact
    over the supplied family only.  Schedules must be prefix-progressive.
    """
    schedules = list(schedules)
    for rho in schedules:
        if not rho.is_prefix_progressive(min_firings):
            raise ProgressivenessError(
                f"schedule {rho} is not prefix-progressive (min_firings={min_firings})"
            )
    members = [
        run(phi, mu, u, rho, horizon).signal for mu in initials for rho in schedules
    ]
    return SignalSet(phi.n, horizon, members)


def single_fire_family(width: int, window, horizon: Tick):
    """Schedules in which every coordinate fires exactly once, at some tick
    of the window; all |window|^width combinations."""
    ticks = sorted(set(window))
    for combo in iter_product(ticks, repeat=width):
        events = {}
        for i, t in enumerate(combo):
            events[t] = events.get(t, 0) | (1 << i)
        yield ProgressiveFunction(
            width,
            tuple((t, BitVec(width, v)) for t, v in sorted(events.items())),
            horizon,
        )


def exhaustive_family(width: int, ticks, horizon: Tick, max_depth: int = 4):
    """Every prefix-progressive firing sequence over the given ticks.

    Enumerates all (2^width)^depth assignments, so the tick list is capped
    at `max_depth` (default 4).
    """
    ticks = sorted(set(ticks))
    if len(ticks) > max_depth:
        raise ValueError(f"{len(ticks)} ticks exceed the depth cap {max_depth}")
    for alphas in iter_product(range(1 << width), repeat=len(ticks)):
        rho = ProgressiveFunction(
            width,
            tuple((t, BitVec(width, a)) for t, a in zip(ticks, alphas)),
            horizon,
        )
        if rho.is_prefix_progressive():
            yield rho


def delay_bounds(u: Signal, tau: Tick, t: Tick) -> tuple[int, int]:
    """The (min, max) of a scalar input over the half-open window [t-tau, t).

    The window is split at the input's event ticks, so both bounds are exact
    over the finitely many constant pieces.
    """
    if u.width != 1:
        raise WidthMismatch(f"delay bounds need a scalar input, got width {u.width}")
    if tau <= 0:
        raise ValueError(f"delay must be positive, got {tau}")
    if t > u.horizon:
        raise HorizonExceeded(f"t={t} beyond horizon {u.horizon}")
    start = t - tau
    samples = [u.value_at(start).value]
    for tk, _ in u.events:
        if start < tk < t:
            samples.append(u.value_at(tk).value)
    return min(samples), max(samples)
