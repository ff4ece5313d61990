"""Randomized and exhaustive checks of the library's structural claims.

Each suite draws its instances from a seeded generator, runs an equality or
agreement check that is independent of the code path it validates, and
returns a report with one summary line and a witness for the first failure.
The acceptance tests and the `verify` CLI verb both run these.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from ..boolfn import (
    GeneratorFn,
    finest_partition,
    is_separated,
    parallel_fn,
    partial_derivative,
    permute_fn,
    project_fn,
    split_fn,
)
from ..semantics import delay_bounds, run
from ..signals import (
    BitVec,
    ProgressiveFunction,
    Signal,
    product_rho,
    product_signal,
    round_robin,
    unit_step,
)
from ..systems import RegularSystem, decompose_system


@dataclass(frozen=True)
class CheckReport:
    name: str
    cases: int
    failures: int
    details: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def summary(self) -> str:
        verdict = "PASS" if self.ok else "FAIL"
        return f"{self.name}: {self.cases - self.failures}/{self.cases} ok -> {verdict}"


# -- random instance generators ------------------------------------------


def rand_fn(rng: random.Random, n: int, m: int) -> GeneratorFn:
    return GeneratorFn(n, m, tuple(rng.randrange(1 << n) for _ in range(1 << (n + m))))


def rand_signal(rng: random.Random, width: int, horizon: int, max_events: int = 8) -> Signal:
    count = rng.randint(0, max_events)
    ticks = sorted(rng.sample(range(-2, horizon + 1), min(count, horizon + 3)))
    events = tuple((t, BitVec(width, rng.randrange(1 << width))) for t in ticks)
    return Signal(width, BitVec(width, rng.randrange(1 << width)), events, horizon)


def rand_rho(rng: random.Random, width: int, horizon: int, max_events: int = 6) -> ProgressiveFunction:
    """A prefix-progressive schedule on a random grid: every coordinate gets
    one forced firing, then extra firings are sprinkled at random."""
    count = rng.randint(max(1, width // 2), max_events)
    ticks = sorted(rng.sample(range(1, horizon + 1), min(count, horizon)))
    firing = {t: 0 for t in ticks}
    for i in range(width):
        firing[rng.choice(ticks)] |= 1 << i
    for t in ticks:
        firing[t] |= rng.randrange(1 << width) & rng.randrange(1 << width)
    events = tuple((t, BitVec(width, v)) for t, v in sorted(firing.items()))
    return ProgressiveFunction(width, events, horizon)


def rand_rho_distinct(
    rng: random.Random, width: int, horizon: int, other: ProgressiveFunction
) -> ProgressiveFunction:
    """Like rand_rho, but guaranteed not to share `other`'s tick grid."""
    while True:
        rho = rand_rho(rng, width, horizon)
        if [t for t, _ in rho.events] != [t for t, _ in other.events]:
            return rho


def rand_system(
    rng: random.Random, phi: GeneratorFn, horizon: int, n_inputs: int = 2
) -> RegularSystem:
    inputs = []
    while len(inputs) < n_inputs:
        u = rand_signal(rng, phi.m, horizon, max_events=4)
        if u not in inputs:
            inputs.append(u)
    phi0 = {}
    pi = {}
    for u in inputs:
        states = rng.sample(range(1 << phi.n), rng.randint(1, min(3, 1 << phi.n)))
        phi0[u] = frozenset(BitVec(phi.n, s) for s in states)
        for mu in phi0[u]:
            pi[(mu, u)] = frozenset(
                rand_rho(rng, phi.n, horizon) for _ in range(rng.randint(1, 2))
            )
    return RegularSystem(phi, tuple(inputs), phi0, pi)


# -- theorem 26: cross-block independence of parallel composition ---------


def flip_invariant(phi: GeneratorFn, block) -> bool:
    """Direct pointwise check: flipping a state bit on the other side of the
    block never changes a coordinate's value.  Evaluation-based on purpose,
    so it is a route independent of the derivative tables."""
    bs = sorted(set(block))
    cs = [i for i in range(1, phi.n + 1) if i not in set(bs)]
    mask_b = sum(1 << (i - 1) for i in bs)
    mask_c = sum(1 << (i - 1) for i in cs)
    mus = list(BitVec.all_of_width(phi.n))
    lams = list(BitVec.all_of_width(phi.m))
    for mu in mus:
        for lam in lams:
            out = phi.eval(mu, lam)
            for j in cs:
                if (out.value ^ phi.eval(mu.flip(j), lam).value) & mask_b:
                    return False
            for j in bs:
                if (out.value ^ phi.eval(mu.flip(j), lam).value) & mask_c:
                    return False
    return True


def derivative_separated(phi: GeneratorFn, block) -> bool:
    """Derivative route: every cross-block partial derivative is identically zero."""
    bs = sorted(set(block))
    cs = [i for i in range(1, phi.n + 1) if i not in set(bs)]
    for i in bs:
        for j in cs:
            if not partial_derivative(phi, i, j).is_zero():
                return False
    for i in cs:
        for j in bs:
            if not partial_derivative(phi, i, j).is_zero():
                return False
    return True


def recompose_verdict(phi: GeneratorFn, block) -> bool:
    """Recomposition route: zero-fix extraction of both factors succeeds
    exactly when their parallel composition reproduces the table.  Unguarded
    (no separation precheck), so the verdict is the equality itself."""
    bs = sorted(set(block))
    cs = [i for i in range(1, phi.n + 1) if i not in set(bs)]
    recomposed = parallel_fn(project_fn(phi, bs), project_fn(phi, cs))
    relabeled = permute_fn(phi, _block_permutation(phi.n, bs, cs))
    return recomposed.table == relabeled.table


def _block_permutation(n: int, bs, cs) -> tuple[int, ...]:
    perm = [0] * n
    for pos, i in enumerate(list(bs) + list(cs), start=1):
        perm[i - 1] = pos
    return tuple(perm)


def theorem26_suite(seed: int, cases: int) -> CheckReport:
    rng = random.Random(seed)
    failures = 0
    details = []
    for case in range(cases):
        na, nb = rng.randint(1, 3), rng.randint(1, 3)
        m = rng.randint(1, 2)
        par = parallel_fn(rand_fn(rng, na, m), rand_fn(rng, nb, m))
        block = range(1, na + 1)
        ok = flip_invariant(par, block) and derivative_separated(par, block)
        if not ok:
            failures += 1
            if len(details) < 3:
                details.append(f"case {case}: n'={na} n''={nb} m={m} table={par.table}")
    return CheckReport("thm26 cross-block independence", cases, failures, tuple(details))


# -- theorem 27: runs of a parallel composition factor exactly ------------


def theorem27_suite(seed: int, cases: int, horizon: int = 50) -> CheckReport:
    rng = random.Random(seed)
    failures = 0
    details = []
    for case in range(cases):
        na, nb = rng.randint(1, 3), rng.randint(1, 3)
        m = rng.randint(1, 2)
        fa, fb = rand_fn(rng, na, m), rand_fn(rng, nb, m)
        u = rand_signal(rng, m, horizon)
        ra = rand_rho(rng, na, horizon)
        rb = rand_rho_distinct(rng, nb, horizon, ra)
        ma = BitVec(na, rng.randrange(1 << na))
        mb = BitVec(nb, rng.randrange(1 << nb))
        joint = run(parallel_fn(fa, fb), ma.concat(mb), u, product_rho(ra, rb), horizon)
        left = run(fa, ma, u, ra, horizon)
        right = run(fb, mb, u, rb, horizon)
        if joint.signal != product_signal(left.signal, right.signal):
            failures += 1
            if len(details) < 3:
                details.append(
                    f"case {case}: mu=({ma},{mb}) rho'={ra} rho''={rb} u={u}"
                )
    return CheckReport("thm27 parallel run factorization", cases, failures, tuple(details))


# -- theorem 30: three equivalent separation tests, exhaustively ----------


def theorem30_exhaustive() -> tuple[CheckReport, tuple[GeneratorFn, ...]]:
    """Compare the three separation routes on every n=2, m=1 table at block {1}.

    Returns the report and the tables all three routes accepted.
    """
    block = (1,)
    disagreements = 0
    separable = []
    details = []
    total = 1 << 16
    for packed in range(total):
        table = tuple((packed >> (2 * r)) & 3 for r in range(8))
        phi = GeneratorFn(2, 1, table)
        v_flip = flip_invariant(phi, block)
        v_deriv = derivative_separated(phi, block)
        v_split = recompose_verdict(phi, block)
        if not (v_flip == v_deriv == v_split):
            disagreements += 1
            if len(details) < 3:
                details.append(
                    f"table {table}: flip={v_flip} derivative={v_deriv} split={v_split}"
                )
        elif v_flip:
            separable.append(phi)
    report = CheckReport(
        "thm30 route agreement over all n=2 m=1 tables", total, disagreements, tuple(details)
    )
    return report, tuple(separable)


# -- theorem 32: split and recompose constructed-separable functions ------


def theorem32_suite(seed: int, cases: int) -> CheckReport:
    rng = random.Random(seed)
    failures = 0
    details = []
    for case in range(cases):
        na, nb = rng.randint(1, 3), rng.randint(1, 3)
        m = rng.randint(1, 2)
        phi = parallel_fn(rand_fn(rng, na, m), rand_fn(rng, nb, m))
        n = na + nb
        shuffle = list(range(1, n + 1))
        rng.shuffle(shuffle)
        permuted = permute_fn(phi, tuple(shuffle))
        block = sorted(shuffle[i - 1] for i in range(1, na + 1))
        ok = is_separated(permuted, block)
        if ok:
            first, second, partition = split_fn(permuted, block)
            relabeled = permute_fn(permuted, partition.permutation)
            ok = parallel_fn(first, second).table == relabeled.table
        if not ok:
            failures += 1
            if len(details) < 3:
                details.append(f"case {case}: n'={na} n''={nb} m={m} block={block}")
    return CheckReport("thm32 split recomposition", cases, failures, tuple(details))


# -- theorem 34: decomposition of systems ---------------------------------


def _product_form_system(
    rng: random.Random, fa: GeneratorFn, fb: GeneratorFn, horizon: int
) -> RegularSystem:
    """A system over parallel_fn(fa, fb) whose phi0 and pi are products."""
    phi = parallel_fn(fa, fb)
    u = rand_signal(rng, phi.m, horizon, max_events=4)
    sa = [BitVec(fa.n, v) for v in rng.sample(range(1 << fa.n), rng.randint(1, min(2, 1 << fa.n)))]
    sb = [BitVec(fb.n, v) for v in rng.sample(range(1 << fb.n), rng.randint(1, min(2, 1 << fb.n)))]
    ra = {ma: [rand_rho(rng, fa.n, horizon) for _ in range(rng.randint(1, 2))] for ma in sa}
    rb = {mb: [rand_rho(rng, fb.n, horizon) for _ in range(rng.randint(1, 2))] for mb in sb}
    phi0 = {u: frozenset(ma.concat(mb) for ma in sa for mb in sb)}
    pi = {
        (ma.concat(mb), u): frozenset(
            product_rho(xa, xb) for xa in ra[ma] for xb in rb[mb]
        )
        for ma in sa
        for mb in sb
    }
    return RegularSystem(phi, (u,), phi0, pi)


def diagonal_example(horizon: int = 10) -> RegularSystem:
    """Identity dynamics with the diagonal initial set {00, 11}: the textbook
    strict-subset case, whose parallel hull adds 01 and 10."""
    phi = GeneratorFn.identity(2, 1)
    u = unit_step(0, horizon)
    d00, d11 = BitVec.from_string("00"), BitVec.from_string("11")
    rho = round_robin(2, (1, 2), horizon)
    phi0 = {u: frozenset((d00, d11))}
    pi = {(d00, u): frozenset((rho,)), (d11, u): frozenset((rho,))}
    return RegularSystem(phi, (u,), phi0, pi)


def theorem34_suite(seed: int, cases: int, horizon: int = 20) -> CheckReport:
    rng = random.Random(seed)
    failures = 0
    details = []
    subset_cases = cases // 2
    for case in range(subset_cases):
        na, nb = rng.randint(1, 2), rng.randint(1, 2)
        m = rng.randint(1, 2)
        phi = parallel_fn(rand_fn(rng, na, m), rand_fn(rng, nb, m))
        sys = rand_system(rng, phi, horizon, n_inputs=rng.randint(1, 2))
        try:
            decompose_system(sys, range(1, na + 1), horizon)
        except Exception as exc:  # the subset direction must never fail
            failures += 1
            if len(details) < 3:
                details.append(f"subset case {case}: {exc}")
    for case in range(cases - subset_cases):
        na, nb = rng.randint(1, 2), rng.randint(1, 2)
        m = rng.randint(1, 2)
        sys = _product_form_system(rng, rand_fn(rng, na, m), rand_fn(rng, nb, m), horizon)
        result = decompose_system(sys, range(1, na + 1), horizon)
        if result.status != "equal" or not result.phi0_product_form or not result.product_condition.holds:
            failures += 1
            if len(details) < 3:
                details.append(f"product-form case {case}: status={result.status}")
    diag = decompose_system(diagonal_example(), (1,), 10)
    total = cases + 1
    if diag.status != "strict-subset" or all(own >= hull for _, own, hull in diag.hull_sizes):
        failures += 1
        details += (f"diagonal example: status={diag.status} sizes={diag.hull_sizes}",)
    return CheckReport("thm34 decomposition verdicts", total, failures, tuple(details))


# -- example 1: the delay envelope ----------------------------------------


def example1_suite(taus=(1, 2, 5)) -> CheckReport:
    cases = 0
    failures = 0
    details = []
    for tau in taus:
        horizon = tau + 5
        u = unit_step(0, horizon)
        for t in range(-3, tau + 6):
            cases += 1
            low, high = delay_bounds(u, tau, t)
            want = (1 if t >= tau else 0, 1 if t > 0 else 0)
            if (low, high) != want:
                failures += 1
                if len(details) < 3:
                    details.append(f"tau={tau} t={t}: got ({low},{high}), want {want}")
    return CheckReport("example1 delay envelope", cases, failures, tuple(details))


# -- lemma 1: schedule products stay progressive --------------------------


def lemma1_suite(seed: int, cases: int, horizon: int = 30) -> CheckReport:
    rng = random.Random(seed)
    failures = 0
    details = []
    for case in range(cases):
        na, nb = rng.randint(1, 3), rng.randint(1, 3)
        ra = rand_rho(rng, na, horizon)
        rb = rand_rho_distinct(rng, nb, horizon, ra)
        prod = product_rho(ra, rb)
        if not prod.is_prefix_progressive():
            failures += 1
            if len(details) < 3:
                details.append(f"case {case}: rho'={ra} rho''={rb}")
    return CheckReport("lemma1 product progressiveness", cases, failures, tuple(details))


# -- finest partition against a brute-force oracle ------------------------


def _all_partitions(items):
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for sub in _all_partitions(rest):
        for k in range(len(sub)):
            yield sub[:k] + [[first] + sub[k]] + sub[k + 1 :]
        yield [[first]] + sub


def _pairwise_separated(phi: GeneratorFn, blocks) -> bool:
    for a in range(len(blocks)):
        for b in range(len(blocks)):
            if a == b:
                continue
            for i in blocks[a]:
                for j in blocks[b]:
                    if not partial_derivative(phi, i, j).is_zero():
                        return False
    return True


def _refines(fine, coarse) -> bool:
    return all(any(set(b) <= set(c) for c in coarse) for b in fine)


def partition_oracle_verdict(phi: GeneratorFn) -> bool:
    """Brute force: the finest partition must be all-separated and refine
    every all-separated partition."""
    fp = [list(b) for b in finest_partition(phi).blocks]
    if not _pairwise_separated(phi, fp):
        return False
    for candidate in _all_partitions(range(1, phi.n + 1)):
        if _pairwise_separated(phi, candidate) and not _refines(fp, candidate):
            return False
    return True


def partition_oracle_suite(seed: int, samples: int) -> CheckReport:
    rng = random.Random(seed)
    failures = 0
    details = []
    cases = 0
    for case in range(samples):
        phi = rand_fn(rng, 3, 1)
        cases += 1
        if not partition_oracle_verdict(phi):
            failures += 1
            if len(details) < 3:
                details.append(f"random case {case}: table={phi.table}")
    constructed = []
    for _ in range(60):
        m = rng.randint(0, 1)
        constructed.append(parallel_fn(rand_fn(rng, 1, m), rand_fn(rng, 2, m)))
        constructed.append(parallel_fn(rand_fn(rng, 2, m), rand_fn(rng, 1, m)))
        constructed.append(
            parallel_fn(parallel_fn(rand_fn(rng, 1, m), rand_fn(rng, 1, m)), rand_fn(rng, 1, m))
        )
    for k, phi in enumerate(constructed):
        cases += 1
        if not partition_oracle_verdict(phi):
            failures += 1
            if len(details) < 3:
                details.append(f"block-diagonal case {k}: table={phi.table}")
    return CheckReport("finest partition vs brute force", cases, failures, tuple(details))


# -- synchronous reduction -------------------------------------------------


def synchronous_suite(seed: int, cases: int, horizon: int = 30) -> CheckReport:
    rng = random.Random(seed)
    failures = 0
    details = []
    for case in range(cases):
        n, m = rng.randint(1, 3), rng.randint(1, 2)
        phi = rand_fn(rng, n, m)
        mu = BitVec(n, rng.randrange(1 << n))
        u = rand_signal(rng, m, horizon)
        ticks = sorted(rng.sample(range(1, horizon + 1), rng.randint(1, 6)))
        rho = round_robin(n, ticks, horizon)
        traj = run(phi, mu, u, rho, horizon)
        state = mu
        expected = [mu]
        for t in ticks:
            state = phi.eval(state, u.value_at(t))
            expected.append(state)
        if traj.states != tuple(expected):
            failures += 1
            if len(details) < 3:
                details.append(f"case {case}: phi={phi.table} mu={mu} ticks={ticks}")
    return CheckReport("synchronous reduction", cases, failures, tuple(details))
