"""Generator functions as explicit truth tables, and their dependency algebra.

A generator function maps a state vector of width n and an input vector of
width m to a next-state vector of width n.  The table is total: one packed
output per row, with row index mu + (lam << n) and coordinate 1 in the least
significant bit.  All analyses are exhaustive over the 2^(n+m) rows, guarded
by a configurable bit limit; nothing here ever samples.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .errors import CoordinateError, NotSeparatedError, SizeLimitError, WidthMismatch
from .signals import BitVec, gather_bits, scatter_bits

DEFAULT_SIZE_LIMIT = 20
SIZE_LIMIT_ENV = "ASYNC_DEC_SIZE_LIMIT"


def size_limit() -> int:
    """The exhaustive-scan bit limit; overridable via ASYNC_DEC_SIZE_LIMIT."""
    raw = os.environ.get(SIZE_LIMIT_ENV)
    if raw is None:
        return DEFAULT_SIZE_LIMIT
    try:
        return int(raw)
    except ValueError:
        raise SizeLimitError(f"{SIZE_LIMIT_ENV} must be an integer, got {raw!r}")


def check_scan_size(n: int, m: int, limit: int | None):
    limit = size_limit() if limit is None else limit
    if n + m > limit:
        raise SizeLimitError(
            f"n+m = {n + m} exceeds the exhaustive-scan limit {limit}; "
            f"refusing to scan (set {SIZE_LIMIT_ENV} to raise the limit)"
        )


@dataclass(frozen=True)
class GeneratorFn:
    """A total next-state function B^n x B^m -> B^n as a packed table."""

    n: int
    m: int
    table: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(self.table))
        if self.n < 1:
            raise WidthMismatch(f"state width must be >= 1, got {self.n}")
        if self.m < 0:
            raise WidthMismatch(f"input width must be >= 0, got {self.m}")
        expected = 1 << (self.n + self.m)
        if len(self.table) != expected:
            raise ValueError(
                f"table has {len(self.table)} rows, expected {expected} for n={self.n} m={self.m}"
            )
        if self.table and (min(self.table) < 0 or max(self.table) >> self.n):
            raise ValueError(f"table entry out of range for output width {self.n}")

    @classmethod
    def from_function(cls, n: int, m: int, fn: Callable[[BitVec, BitVec], BitVec]) -> "GeneratorFn":
        rows = []
        for lam in range(1 << m):
            lv = BitVec(m, lam)
            for mu in range(1 << n):
                out = fn(BitVec(n, mu), lv)
                if out.width != n:
                    raise WidthMismatch(f"function returned width {out.width}, expected {n}")
                rows.append(out.value)
        # rows were produced lam-major, which matches row = mu + (lam << n)
        return cls(n, m, tuple(rows))

    @classmethod
    def identity(cls, n: int, m: int = 0) -> "GeneratorFn":
        return cls(n, m, tuple(r & ((1 << n) - 1) for r in range(1 << (n + m))))

    def eval(self, mu: BitVec, lam: BitVec) -> BitVec:
        if mu.width != self.n:
            raise WidthMismatch(f"state width {mu.width}, expected {self.n}")
        if lam.width != self.m:
            raise WidthMismatch(f"input width {lam.width}, expected {self.m}")
        return BitVec(self.n, self.table[mu.value | (lam.value << self.n)])

    def __str__(self) -> str:
        return f"GeneratorFn(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class BoolTable:
    """A single-output truth table B^n x B^m -> B, one bit per row."""

    n: int
    m: int
    bits: int

    def eval(self, mu: BitVec, lam: BitVec) -> int:
        if mu.width != self.n or lam.width != self.m:
            raise WidthMismatch(
                f"widths ({mu.width},{lam.width}), expected ({self.n},{self.m})"
            )
        return (self.bits >> (mu.value | (lam.value << self.n))) & 1

    def is_zero(self) -> bool:
        return self.bits == 0


def partial_derivative(phi: GeneratorFn, i: int, j: int) -> BoolTable:
    """Boolean partial derivative of coordinate i with respect to state bit j.

    The XOR of coordinate i at mu_j and at its complement; identically zero
    exactly when coordinate i does not depend on mu_j.  By construction the
    result is invariant under flipping mu_j.
    """
    if not 1 <= i <= phi.n:
        raise CoordinateError(f"coordinate i={i} out of 1..{phi.n}")
    if not 1 <= j <= phi.n:
        raise CoordinateError(f"coordinate j={j} out of 1..{phi.n}")
    table = phi.table
    ibit = 1 << (i - 1)
    jbit = 1 << (j - 1)
    bits = 0
    for r, out in enumerate(table):
        if (out ^ table[r ^ jbit]) & ibit:
            bits |= 1 << r
    return BoolTable(phi.n, phi.m, bits)


@dataclass(frozen=True)
class DependencyMatrix:
    """rows[i-1] is a bitmask over j: bit j-1 set iff coordinate i depends on mu_j."""

    n: int
    rows: tuple[int, ...]

    def depends(self, i: int, j: int) -> bool:
        if not (1 <= i <= self.n and 1 <= j <= self.n):
            raise CoordinateError(f"({i},{j}) out of 1..{self.n}")
        return bool((self.rows[i - 1] >> (j - 1)) & 1)

    def as_matrix(self) -> tuple[tuple[int, ...], ...]:
        return tuple(
            tuple((row >> j) & 1 for j in range(self.n)) for row in self.rows
        )


def dependency_matrix(phi: GeneratorFn, limit: int | None = None) -> DependencyMatrix:
    """D[i][j] = 1 iff the derivative of coordinate i w.r.t. mu_j is not zero."""
    check_scan_size(phi.n, phi.m, limit)
    table = phi.table
    cols = []
    for j in range(phi.n):
        jbit = 1 << j
        acc = 0
        for r, out in enumerate(table):
            acc |= out ^ table[r ^ jbit]
        cols.append(acc)
    rows = tuple(
        sum(((cols[j] >> i) & 1) << j for j in range(phi.n)) for i in range(phi.n)
    )
    return DependencyMatrix(phi.n, rows)


def parallel_fn(a: GeneratorFn, b: GeneratorFn) -> GeneratorFn:
    """Blockwise composition: the first n' coordinates run `a` on the first
    state block, the rest run `b` on the second, under the shared input."""
    if a.m != b.m:
        raise WidthMismatch(f"input widths differ: {a.m} vs {b.m}")
    n = a.n + b.n
    mask_a = (1 << a.n) - 1
    rows = []
    for lam in range(1 << a.m):
        la = lam << a.n
        lb = lam << b.n
        for mu in range(1 << n):
            out_a = a.table[(mu & mask_a) | la]
            out_b = b.table[(mu >> a.n) | lb]
            rows.append(out_a | (out_b << a.n))
    return GeneratorFn(n, a.m, tuple(rows))


def _split_blocks(phi: GeneratorFn, block: Iterable[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    bs = sorted(set(block))
    if not bs or bs[0] < 1 or bs[-1] > phi.n:
        raise CoordinateError(f"block {bs} not within 1..{phi.n}")
    if len(bs) == phi.n:
        raise CoordinateError("block must be a proper nonempty subset of the coordinates")
    cs = tuple(i for i in range(1, phi.n + 1) if i not in set(bs))
    return tuple(bs), cs


def dependency_witness(phi: GeneratorFn, block: Iterable[int]):
    """A cross-block dependency (i, j, mu, lam), or None if the block is separated."""
    bs, cs = _split_blocks(phi, block)
    table = phi.table
    n = phi.n
    mask = (1 << n) - 1
    for i_side, j_side in ((bs, cs), (cs, bs)):
        for i in i_side:
            ibit = 1 << (i - 1)
            for j in j_side:
                jbit = 1 << (j - 1)
                for r, out in enumerate(table):
                    if (out ^ table[r ^ jbit]) & ibit:
                        return i, j, BitVec(n, r & mask), BitVec(phi.m, r >> n)
    return None


def is_separated(phi: GeneratorFn, block: Iterable[int]) -> bool:
    """Whether no coordinate inside the block depends on a state bit outside
    it, and vice versa (all cross-block derivatives identically zero)."""
    return dependency_witness(phi, block) is None


def project_fn(phi: GeneratorFn, block: Iterable[int], fill: int = 0) -> GeneratorFn:
    """The block-coordinate function obtained by freezing the complement.

    The complement coordinates are pinned to the bits of `fill` (packed over
    the complement in ascending order, default all zeros).  When the block is
    separated the choice of `fill` is irrelevant.
    """
    bs, cs = _split_blocks(phi, block)
    nb = len(bs)
    frozen = scatter_bits(fill, cs)
    rows = []
    for lam in range(1 << phi.m):
        base = lam << phi.n
        for mu_b in range(1 << nb):
            full = scatter_bits(mu_b, bs) | frozen
            rows.append(gather_bits(phi.table[full | base], bs))
    return GeneratorFn(nb, phi.m, tuple(rows))


@dataclass(frozen=True)
class Partition:
    """Ordered disjoint blocks covering 1..n, plus the relabeling that makes
    them contiguous: old coordinate i moves to position permutation[i-1]."""

    blocks: tuple[tuple[int, ...], ...]
    permutation: tuple[int, ...]

    def __post_init__(self):
        flat = [i for b in self.blocks for i in b]
        n = len(flat)
        if sorted(flat) != list(range(1, n + 1)):
            raise CoordinateError(f"blocks {self.blocks} do not partition 1..{n}")
        if len(self.permutation) != n or sorted(self.permutation) != list(range(1, n + 1)):
            raise CoordinateError(f"invalid permutation {self.permutation}")
        pos = 0
        for b in self.blocks:
            for i in b:
                pos += 1
                if self.permutation[i - 1] != pos:
                    raise CoordinateError(
                        f"permutation inconsistent with block order at coordinate {i}"
                    )

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]]) -> "Partition":
        bs = tuple(tuple(sorted(b)) for b in blocks)
        n = sum(len(b) for b in bs)
        perm = [0] * n
        pos = 0
        for b in bs:
            for i in b:
                pos += 1
                perm[i - 1] = pos
        return cls(bs, tuple(perm))

    @property
    def n(self) -> int:
        return len(self.permutation)


def bipartition(n: int, block: Iterable[int]) -> Partition:
    """The two-block partition (block, complement), both ascending."""
    bs = tuple(sorted(set(block)))
    cs = tuple(i for i in range(1, n + 1) if i not in set(bs))
    return Partition.from_blocks((bs, cs))


def permute_fn(phi: GeneratorFn, permutation: Sequence[int]) -> GeneratorFn:
    """Relabel state coordinates: old coordinate i becomes permutation[i-1]."""
    if sorted(permutation) != list(range(1, phi.n + 1)):
        raise CoordinateError(f"not a permutation of 1..{phi.n}: {permutation}")
    rows = []
    for lam in range(1 << phi.m):
        base = lam << phi.n
        for mu_new in range(1 << phi.n):
            mu_old = gather_bits(mu_new, permutation)
            rows.append(scatter_bits(phi.table[mu_old | base], permutation))
    return GeneratorFn(phi.n, phi.m, tuple(rows))


def finest_partition(phi: GeneratorFn, limit: int | None = None) -> Partition:
    """Connected components of the symmetrized state-dependency graph.

    Every union of the returned blocks is a separated block, and no strictly
    finer partition has all blocks pairwise separated.
    """
    dm = dependency_matrix(phi, limit)
    n = phi.n
    adj = [dm.rows[i] | sum(((dm.rows[j] >> i) & 1) << j for j in range(n)) for i in range(n)]
    seen = [False] * n
    blocks = []
    for start in range(n):
        if seen[start]:
            continue
        comp = []
        stack = [start]
        seen[start] = True
        while stack:
            v = stack.pop()
            comp.append(v + 1)
            for w in range(n):
                if not seen[w] and (adj[v] >> w) & 1:
                    seen[w] = True
                    stack.append(w)
        blocks.append(tuple(sorted(comp)))
    blocks.sort(key=lambda b: b[0])
    return Partition.from_blocks(blocks)


def split_fn(phi: GeneratorFn, block: Iterable[int]) -> tuple[GeneratorFn, GeneratorFn, Partition]:
    """Split a separated block off as an independent factor.

    Returns (first, second, partition) such that, after relabeling by the
    partition's permutation, `parallel_fn(first, second)` equals `phi` on
    every row.  Refuses with a dependency witness if the block is not
    separated.
    """
    witness = dependency_witness(phi, block)
    if witness is not None:
        raise NotSeparatedError(*witness)
    bs, cs = _split_blocks(phi, block)
    first = project_fn(phi, bs)
    second = project_fn(phi, cs)
    return first, second, Partition.from_blocks((bs, cs))
