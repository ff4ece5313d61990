"""Regular asynchronous systems as finite explicit bundles.

A bundle holds a generator function, a finite list of admissible inputs, an
initial-state map phi0 and a schedule map pi whose domain is exactly the
pairs (mu, u) with mu in phi0(u).  Realizing the bundle runs every admitted
combination and collects the canonical trajectories per input; this is the
computation-function form of a regular system, at finite-prefix scale.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .boolfn import GeneratorFn, Partition, parallel_fn, split_fn
from .errors import (
    HorizonMismatch,
    InvalidSystem,
    ProgressivenessError,
    WidthMismatch,
)
from .semantics import run
from .signals import (
    BitVec,
    ProgressiveFunction,
    Signal,
    SignalSet,
    Tick,
    interleave_rho,
    permute_signal,
    product_rho,
    scatter_bits,
)


@dataclass(frozen=True)
class RegularSystem:
    """An explicit (phi, inputs, phi0, pi) bundle.

    Immutable after construction; the constructor normalizes the maps to
    frozensets and validates widths, horizons, the pi domain and
    prefix-progressiveness of every schedule.
    """

    phi: GeneratorFn
    inputs: tuple[Signal, ...]
    phi0: Mapping[Signal, frozenset[BitVec]]
    pi: Mapping[tuple[BitVec, Signal], frozenset[ProgressiveFunction]]

    def __post_init__(self):
        inputs = []
        for u in self.inputs:
            if u not in inputs:
                inputs.append(u)
        object.__setattr__(self, "inputs", tuple(inputs))
        if not inputs:
            raise InvalidSystem("a system needs at least one admissible input")
        horizon = inputs[0].horizon
        for u in inputs:
            if u.width != self.phi.m:
                raise WidthMismatch(f"input width {u.width}, expected {self.phi.m}")
            if u.horizon != horizon:
                raise HorizonMismatch("all inputs must share one horizon")
        phi0 = {u: frozenset(ms) for u, ms in self.phi0.items()}
        if set(phi0) != set(inputs):
            raise InvalidSystem("phi0 must be defined exactly on the admissible inputs")
        for u, ms in phi0.items():
            if not ms:
                raise InvalidSystem(f"phi0 is empty for input {u}")
            for mu in ms:
                if mu.width != self.phi.n:
                    raise WidthMismatch(
                        f"initial state width {mu.width}, expected {self.phi.n}"
                    )
        pi = {key: frozenset(rs) for key, rs in self.pi.items()}
        delta = {(mu, u) for u in inputs for mu in phi0[u]}
        if set(pi) != delta:
            raise InvalidSystem(
                "pi must be defined exactly on {(mu, u) | u admissible, mu in phi0(u)}"
            )
        for (mu, u), rs in pi.items():
            if not rs:
                raise InvalidSystem(f"pi is empty at ({mu}, {u})")
            for rho in rs:
                if rho.width != self.phi.n:
                    raise WidthMismatch(
                        f"schedule width {rho.width}, expected {self.phi.n}"
                    )
                if rho.horizon != horizon:
                    raise HorizonMismatch("schedules must share the system horizon")
                if not rho.is_prefix_progressive():
                    raise ProgressivenessError(f"schedule {rho} is not prefix-progressive")
        object.__setattr__(self, "phi0", phi0)
        object.__setattr__(self, "pi", pi)

    @property
    def n(self) -> int:
        return self.phi.n

    @property
    def m(self) -> int:
        return self.phi.m

    @property
    def horizon(self) -> Tick:
        return self.inputs[0].horizon


@dataclass(frozen=True, eq=False)
class SystemOutput:
    """The realized multi-valued map: one nonempty signal set per input."""

    outputs: tuple[tuple[Signal, SignalSet], ...]

    def __post_init__(self):
        for u, sigs in self.outputs:
            if len(sigs) == 0:
                raise InvalidSystem(f"empty state set for input {u}")

    def __getitem__(self, u: Signal) -> SignalSet:
        for key, sigs in self.outputs:
            if key == u:
                return sigs
        raise KeyError(u)

    def __iter__(self):
        return iter(self.outputs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SystemOutput):
            return NotImplemented
        return dict(self.outputs) == dict(other.outputs)


def realize(sys: RegularSystem, horizon: Tick) -> SystemOutput:
    """Run every (mu, u, rho) the bundle admits and collect the trajectories."""
    if horizon != sys.horizon:
        raise HorizonMismatch(f"horizon {horizon} does not match the system's {sys.horizon}")
    outputs = []
    for u in sys.inputs:
        members = [
            run(sys.phi, mu, u, rho, horizon).signal
            for mu in sys.phi0[u]
            for rho in sys.pi[(mu, u)]
        ]
        outputs.append((u, SignalSet(sys.n, horizon, members)))
    return SystemOutput(tuple(outputs))


def initial_state_function(out: SystemOutput) -> dict[Signal, frozenset[BitVec]]:
    """Per input, the set of initial values occurring in the realized states."""
    return {u: frozenset(x.initial for x in sigs) for u, sigs in out}


def parallel_system(a: RegularSystem, b: RegularSystem) -> RegularSystem:
    """Parallel connection: both bundles act independently under a common input.

    Admits the inputs both factors admit; initial states multiply pointwise
    and schedule sets multiply through the merged-grid schedule product.
    """
    if a.m != b.m:
        raise WidthMismatch(f"input widths differ: {a.m} vs {b.m}")
    if a.horizon != b.horizon:
        raise HorizonMismatch(f"horizons differ: {a.horizon} vs {b.horizon}")
    shared = tuple(u for u in a.inputs if u in set(b.inputs))
    if not shared:
        raise InvalidSystem("the factors admit no common input")
    phi0 = {
        u: frozenset(ma.concat(mb) for ma in a.phi0[u] for mb in b.phi0[u])
        for u in shared
    }
    pi = {}
    for u in shared:
        for ma in a.phi0[u]:
            for mb in b.phi0[u]:
                pi[(ma.concat(mb), u)] = frozenset(
                    product_rho(ra, rb)
                    for ra in a.pi[(ma, u)]
                    for rb in b.pi[(mb, u)]
                )
    return RegularSystem(parallel_fn(a.phi, b.phi), shared, phi0, pi)


def _complement(n: int, block: Iterable[int]) -> tuple[int, ...]:
    bs = set(block)
    return tuple(i for i in range(1, n + 1) if i not in bs)


def project_phi0(sys: RegularSystem, block: Iterable[int]) -> dict[Signal, frozenset[BitVec]]:
    """Restriction of every admitted initial state to the block coordinates."""
    bs = tuple(sorted(set(block)))
    return {
        u: frozenset(mu.restrict(bs) for mu in sys.phi0[u]) for u in sys.inputs
    }


def project_pi(
    sys: RegularSystem, block: Iterable[int]
) -> dict[tuple[BitVec, Signal], frozenset[ProgressiveFunction]]:
    """Blockwise schedule projection.

    For each restricted initial state mu', collects the block-restrictions of
    every schedule admitted at any full state extending mu'; restrictions are
    canonicalized (zero-only events dropped).
    """
    bs = tuple(sorted(set(block)))
    projected: dict[tuple[BitVec, Signal], set[ProgressiveFunction]] = {}
    for u in sys.inputs:
        for mu in sys.phi0[u]:
            key = (mu.restrict(bs), u)
            bucket = projected.setdefault(key, set())
            for rho in sys.pi[(mu, u)]:
                bucket.add(rho.restrict(bs))
    return {key: frozenset(rs) for key, rs in projected.items()}


@dataclass(frozen=True)
class ProductConditionResult:
    """Outcome of the schedule-product check, with a witness when it fails.

    `witness` is (u, mu, rho_block, rho_rest): a schedule product whose
    trajectory no admitted schedule reproduces.
    """

    holds: bool
    witness: tuple[Signal, BitVec, ProgressiveFunction, ProgressiveFunction] | None

    def __bool__(self) -> bool:
        return self.holds


def check_product_condition(
    sys: RegularSystem, block: Iterable[int], horizon: Tick
) -> ProductConditionResult:
    """Whether every cross product of projected schedules is trajectory-covered.

    For each admitted (mu, u) and each pair of projected block/complement
    schedules, some admitted schedule must produce the same canonical
    trajectory as their interleaving.  Equality is of signals on the shared
    horizon; the check is trajectory-level, not schedule-level.
    """
    bs = tuple(sorted(set(block)))
    cs = _complement(sys.n, bs)
    pi_b = project_pi(sys, bs)
    pi_c = project_pi(sys, cs)
    for u in sys.inputs:
        for mu in sys.phi0[u]:
            admitted = {
                run(sys.phi, mu, u, rho, horizon).signal for rho in sys.pi[(mu, u)]
            }
            for rb in sorted(pi_b[(mu.restrict(bs), u)], key=lambda r: r._key()):
                for rc in sorted(pi_c[(mu.restrict(cs), u)], key=lambda r: r._key()):
                    woven = interleave_rho(sys.n, bs, rb, rc)
                    if run(sys.phi, mu, u, woven, horizon).signal not in admitted:
                        return ProductConditionResult(False, (u, mu, rb, rc))
    return ProductConditionResult(True, None)


@dataclass(frozen=True)
class DecompositionResult:
    """Factors of a system decomposition plus the verified verdict.

    `status` is "equal" when the realized outputs of the system and of the
    parallel connection of the factors were compared set-by-set and found
    identical for every input, else "strict-subset".  The two condition
    flags record the sufficient conditions independently of the verdict.
    """

    first: RegularSystem
    second: RegularSystem
    status: str
    partition: Partition
    phi0_product_form: bool
    product_condition: ProductConditionResult
    hull_sizes: tuple[tuple[Signal, int, int], ...]


def decompose_system(
    sys: RegularSystem, block: Iterable[int], horizon: Tick
) -> DecompositionResult:
    """Decompose at a separated block and verify the parallel hull.

    Refuses (with a dependency witness) if the block is not separated.  The
    containment of the system in the hull is checked, not assumed; the
    verdict compares both realizations explicitly so a truncation artifact
    can never misreport equality.
    """
    bs = tuple(sorted(set(block)))
    cs = _complement(sys.n, bs)
    phi_b, phi_c, partition = split_fn(sys.phi, bs)
    first = RegularSystem(phi_b, sys.inputs, project_phi0(sys, bs), project_pi(sys, bs))
    second = RegularSystem(phi_c, sys.inputs, project_phi0(sys, cs), project_pi(sys, cs))
    hull = realize(parallel_system(first, second), horizon)
    own = realize(sys, horizon)
    perm = partition.permutation

    def assemble(mb: BitVec, mc: BitVec) -> BitVec:
        value = scatter_bits(mb.value, bs) | scatter_bits(mc.value, cs)
        return BitVec(sys.n, value)

    product_form = all(
        sys.phi0[u]
        == frozenset(
            assemble(mb, mc) for mb in first.phi0[u] for mc in second.phi0[u]
        )
        for u in sys.inputs
    )

    sizes = []
    equal = True
    for u in sys.inputs:
        relabeled = SignalSet(
            sys.n, horizon, (permute_signal(x, perm) for x in own[u])
        )
        if not relabeled.issubset(hull[u]):
            raise InvalidSystem(
                f"decomposition lost a trajectory for input {u}; this should be impossible"
            )
        if relabeled != hull[u]:
            equal = False
        sizes.append((u, len(own[u]), len(hull[u])))

    condition = check_product_condition(sys, bs, horizon)
    if product_form and condition.holds and not equal:
        raise InvalidSystem(
            "product-form conditions hold but realizations differ; horizon artifact"
        )
    status = "equal" if equal else "strict-subset"
    return DecompositionResult(
        first, second, status, partition, product_form, condition, tuple(sizes)
    )
