"""Concrete theories on a finite carrier: per-arity sets of operations closed
under superposition, up to an arity bound."""

from __future__ import annotations

import bisect
import itertools
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import ArityMismatch, CarrierMismatch, EnumerationTooLarge, enumeration_cap
from .ops import Carrier, OpTable, commutes, constant, projection, tuples

DEFAULT_MAX_ARITY = 3
CHUNK = 1 << 16


class CloneBuilder:
    """Incremental bounded clone closure.

    The arity-m part of the clone generated by a set of operations is the
    subalgebra of the power ``S^(S^m)`` generated by the m projections, so each
    arity is closed independently: generators are applied pointwise to tuples
    of already-known m-ary tables until nothing new appears. New tables are
    processed semi-naively (only tuples touching at least one new table).

    ``budget`` bounds the total number of generator applications; exceeding it
    raises EnumerationTooLarge.
    """

    def __init__(self, s: int, max_arity: int, budget: int | None = None):
        if s > 256:
            raise ValueError("carriers above 256 elements are not supported")
        self.s = s
        self.max_arity = max_arity
        self.budget = budget
        self.spent = 0
        self.generators: list[OpTable] = []
        self._rows: dict[int, np.ndarray] = {}
        self._count: dict[int, int] = {}
        self._keys: dict[int, set[bytes]] = {}
        self._done: dict[int, int] = {}
        for m in range(max_arity + 1):
            L = s**m
            self._rows[m] = np.zeros((max(4, m), L), dtype=np.uint8)
            self._count[m] = 0
            self._keys[m] = set()
            self._done[m] = 0
            for i in range(m):
                self._append(m, tuples(m, s)[:, i].astype(np.uint8))

    def _append(self, m: int, row: np.ndarray) -> bool:
        key = row.tobytes()
        if key in self._keys[m]:
            return False
        self._keys[m].add(key)
        n = self._count[m]
        buf = self._rows[m]
        if n == buf.shape[0]:
            grown = np.zeros((2 * n, buf.shape[1]), dtype=np.uint8)
            grown[:n] = buf
            self._rows[m] = buf = grown
        buf[n] = row
        self._count[m] = n + 1
        return True

    def _apply(self, g: OpTable, m: int, ranges: Sequence[tuple[int, int]]) -> None:
        """Apply g to every tuple whose p-th entry is a row index in ranges[p]."""
        sizes = [hi - lo for lo, hi in ranges]
        total = int(np.prod(sizes)) if sizes else 1
        if total == 0:
            return
        if self.budget is not None:
            self.spent += total
            if self.spent > self.budget:
                raise EnumerationTooLarge(f"clone closure exceeded budget of {self.budget} applications")
        s, L = self.s, self.s**m
        if g.arity == 0:
            self._append(m, np.full(L, g.table[0], dtype=np.uint8))
            return
        rows = self._rows[m][: self._count[m]].astype(np.int64)
        gtab = g.array
        for start in range(0, total, CHUNK):
            flat = np.arange(start, min(total, start + CHUNK), dtype=np.int64)
            idx = np.zeros((flat.size, L), dtype=np.int64)
            rem = flat
            for p, (lo, hi) in enumerate(ranges):
                off = rem % sizes[p]
                rem = rem // sizes[p]
                idx += rows[lo + off] * s**p
            vals = gtab[idx].astype(np.uint8)
            for row in np.unique(vals, axis=0):
                self._append(m, row)

    def _close(self, m: int) -> None:
        while self._done[m] < self._count[m]:
            start, end = self._done[m], self._count[m]
            for g in self.generators:
                k = g.arity
                for p in range(k):
                    ranges = [(0, start)] * p + [(start, end)] + [(0, end)] * (k - p - 1)
                    self._apply(g, m, ranges)
            self._done[m] = end

    def add_generator(self, g: OpTable) -> None:
        if g.carrier_size != self.s:
            raise CarrierMismatch(f"generator over {g.carrier_size} elements, clone over {self.s}")
        if g.arity > self.max_arity:
            raise ArityMismatch(f"generator arity {g.arity} above bound {self.max_arity}")
        self.generators.append(g)
        for m in range(self.max_arity + 1):
            done = self._done[m]
            self._apply(g, m, [(0, done)] * g.arity)
            self._close(m)

    def contains(self, op: OpTable) -> bool:
        return op.array.astype(np.uint8).tobytes() in self._keys[op.arity]

    def count(self, m: int) -> int:
        return self._count[m]

    def slice(self, m: int) -> tuple[OpTable, ...]:
        rows = self._rows[m][: self._count[m]]
        return tuple(sorted(OpTable(m, self.s, tuple(r.tolist())) for r in rows))


class Theory:
    """Per-arity sorted operation sets on ``range(carrier.size)`` up to ``max_arity``.

    Slices are either given eagerly or produced on demand by ``loader`` (used
    by the full theory, whose large slices are refused past the cap).
    ``generators`` records provenance; when absent, a generating subset of the
    slices is derived on first use.
    """

    def __init__(
        self,
        carrier: Carrier | int,
        max_arity: int,
        slices: dict[int, Iterable[OpTable]] | None = None,
        generators: Sequence[OpTable] | None = None,
        *,
        loader: Callable[[int], Iterable[OpTable]] | None = None,
        name: str | None = None,
        is_full: bool = False,
    ):
        self.carrier = carrier if isinstance(carrier, Carrier) else Carrier(int(carrier))
        self.max_arity = max_arity
        self.name = name
        self.is_full = is_full
        self._loader = loader
        self._slices: dict[int, tuple[OpTable, ...]] = {}
        s = self.carrier.size
        if slices is not None:
            for n, ops in slices.items():
                ops = tuple(sorted(set(ops)))
                for op in ops:
                    if op.carrier_size != s:
                        raise CarrierMismatch(f"op over {op.carrier_size} elements in a theory over {s}")
                    if op.arity != n:
                        raise ArityMismatch(f"op of arity {op.arity} in slice {n}")
                self._slices[n] = ops
        elif loader is None:
            raise ValueError("a theory needs slices or a loader")
        self._generators = None if generators is None else tuple(generators)
        if self._generators is not None:
            for g in self._generators:
                if g.carrier_size != s:
                    raise CarrierMismatch(f"generator over {g.carrier_size} elements in a theory over {s}")

    @property
    def s(self) -> int:
        return self.carrier.size

    def ops(self, n: int) -> tuple[OpTable, ...]:
        if not 0 <= n <= self.max_arity:
            raise ArityMismatch(f"arity {n} outside 0..{self.max_arity}")
        if n not in self._slices:
            if self._loader is None:
                self._slices[n] = ()
            else:
                self._slices[n] = tuple(sorted(set(self._loader(n))))
        return self._slices[n]

    def arity_counts(self) -> list[int]:
        return [len(self.ops(n)) for n in range(self.max_arity + 1)]

    @property
    def generators(self) -> tuple[OpTable, ...]:
        if self._generators is None:
            self._generators = tuple(generating_subset(self))
        return self._generators

    @property
    def has_explicit_generators(self) -> bool:
        return self._generators is not None

    def __contains__(self, op: OpTable) -> bool:
        return contains(self, op)

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"<Theory{label} s={self.s} N={self.max_arity}>"

    def truncate(self, N: int) -> "Theory":
        if N > self.max_arity:
            raise ArityMismatch(f"cannot extend a theory bounded at {self.max_arity} to {N}")
        gens = None
        if self._generators is not None:
            gens = [g for g in self._generators if g.arity <= N]
        return Theory(self.carrier, N, {n: self.ops(n) for n in range(N + 1)}, gens, name=self.name)


def full_theory(s: int, N: int = DEFAULT_MAX_ARITY, cap: int | None = None) -> Theory:
    """Every operation of arity <= N on s elements, materialized lazily.

    Slices with more than ``cap`` operations are refused with EnumerationTooLarge.
    The recorded generators are the constants, all unary operations and, for
    s >= 3, max (a complete set by Slupecki's criterion); for s <= 2 the binary
    meet.
    """
    limit = enumeration_cap(cap)

    def load(n: int):
        count = s ** (s**n)
        if count > limit:
            raise EnumerationTooLarge(f"full arity-{n} slice over {s} elements has {count} operations (cap {limit})")
        return _all_tables(n, s)

    gens: list[OpTable] = [constant(c, 0, s) for c in range(s)]
    if N >= 1:
        gens += [OpTable(1, s, t) for t in itertools.product(range(s), repeat=s)]
    if N >= 2 and s >= 2:
        pairs = tuples(2, s)
        binary = pairs.min(axis=1) if s == 2 else pairs.max(axis=1)
        gens.append(OpTable(2, s, tuple(binary.tolist())))
    return Theory(s, N, generators=gens, loader=load, name=f"full:{s}", is_full=True)


def _all_tables(n: int, s: int) -> list[OpTable]:
    L = s**n
    count = s**L
    out = []
    weights = s ** np.arange(L - 1, -1, -1, dtype=np.int64)
    for start in range(0, count, CHUNK):
        k = np.arange(start, min(count, start + CHUNK), dtype=np.int64)
        digits = (k[:, None] // weights[None, :]) % s
        out.extend(OpTable(n, s, tuple(r)) for r in digits.tolist())
    return out


def projections_theory(s: int, N: int = DEFAULT_MAX_ARITY) -> Theory:
    slices = {n: [projection(n, i, s) for i in range(n)] for n in range(N + 1)}
    return Theory(s, N, slices, (), name=f"projections:{s}")


def clone_generate(generators: Iterable[OpTable], s: int, N: int = DEFAULT_MAX_ARITY,
                   budget: int | None = None, name: str | None = None) -> Theory:
    gens = sorted(set(generators))
    builder = CloneBuilder(s, N, budget)
    for g in gens:
        # a generator already in the clone adds nothing
        if g.carrier_size == s and g.arity <= N and builder.contains(g):
            continue
        builder.add_generator(g)
    return Theory(s, N, {m: builder.slice(m) for m in range(N + 1)}, gens, name=name)


def generating_subset(T: Theory, budget: int | None = None) -> list[OpTable]:
    """Greedy generating set: scan ops in canonical order, keep those not yet generated."""
    builder = CloneBuilder(T.s, T.max_arity, budget)
    gens = []
    for n in range(T.max_arity + 1):
        for op in T.ops(n):
            if not builder.contains(op):
                builder.add_generator(op)
                gens.append(op)
    return gens


def is_closed(T: Theory, budget: int | None = 10**7) -> bool | None:
    """Whether T's slices contain the projections and are closed under superposition.

    Returns None when the re-closure would exceed ``budget`` applications.
    """
    for n in range(1, T.max_arity + 1):
        present = T.ops(n)
        for i in range(n):
            if not _has(present, projection(n, i, T.s)):
                return False
    try:
        builder = CloneBuilder(T.s, T.max_arity, budget)
        for n in range(T.max_arity + 1):
            for op in T.ops(n):
                if not builder.contains(op):
                    builder.add_generator(op)
                    if any(builder.count(m) > len(T.ops(m)) for m in range(T.max_arity + 1)):
                        return False
    except EnumerationTooLarge:
        return None
    return all(builder.slice(m) == T.ops(m) for m in range(T.max_arity + 1))


def _has(sorted_ops: Sequence[OpTable], op: OpTable) -> bool:
    i = bisect.bisect_left(sorted_ops, op)
    return i < len(sorted_ops) and sorted_ops[i] == op


def contains(T: Theory, op: OpTable) -> bool:
    if op.carrier_size != T.s:
        raise CarrierMismatch(f"op over {op.carrier_size} elements, theory over {T.s}")
    if op.arity > T.max_arity:
        raise ArityMismatch(f"op arity {op.arity} above theory bound {T.max_arity}")
    return _has(T.ops(op.arity), op)


def equal_upto(T1: Theory, T2: Theory, N: int | None = None) -> bool:
    if T1.s != T2.s:
        raise CarrierMismatch(f"theories over {T1.s} and {T2.s} elements")
    if N is None:
        N = min(T1.max_arity, T2.max_arity)
    if N > T1.max_arity or N > T2.max_arity:
        raise ArityMismatch(f"bound {N} exceeds a theory's max arity")
    return all(T1.ops(n) == T2.ops(n) for n in range(N + 1))


def is_subtheory(T1: Theory, T2: Theory, N: int | None = None) -> bool:
    """Slice-wise inclusion of T1 in T2 up to N."""
    if N is None:
        N = min(T1.max_arity, T2.max_arity)
    return all(set(T1.ops(n)) <= set(T2.ops(n)) for n in range(N + 1))


def is_commutative(T: Theory, mode: str = "generators") -> bool:
    """Whether all operations of T commute with each other.

    ``mode="generators"`` checks pairs of generators (enough, since commuting
    with a generating set means commuting with its whole clone);
    ``mode="all"`` checks every pair of operations up to the bound.
    """
    if mode == "generators":
        ops = list(T.generators)
    elif mode == "all":
        ops = [op for n in range(T.max_arity + 1) for op in T.ops(n)]
    else:
        raise ValueError(f"unknown mode {mode!r}")
    for a, b in itertools.combinations_with_replacement(ops, 2):
        if not commutes(a, b):
            return False
    return True


def center(T: Theory) -> Theory:
    """Operations of T commuting with every operation of T."""
    from .commutant import filter_commuting

    gens = T.generators
    slices = {n: filter_commuting(T.ops(n), gens, T.s, n) for n in range(T.max_arity + 1)}
    name = f"center({T.name})" if T.name else None
    return Theory(T.carrier, T.max_arity, slices, name=name)


def slice_key(T: Theory) -> list[list[list[int]]]:
    """Plain nested-list form of all slices, handy for comparisons and output."""
    return [[list(op.table) for op in T.ops(n)] for n in range(T.max_arity + 1)]
