"""Finitary operations on a finite carrier, stored as dense value tables.

Conventions used everywhere in the package:

* a tuple ``(a_0, ..., a_{n-1})`` over a carrier of size ``s`` sits at table
  index ``sum(a_i * s**i)`` (little-endian mixed radix);
* in a product arity ``j*k`` the variable pair ``(i, l)`` (``i < j``, ``l < k``)
  is variable number ``i*k + l``, so an argument tuple is a ``j x k`` matrix
  read row by row.

The first Kronecker product applies ``mu`` down each column and then ``nu``
across the results; the second applies ``nu`` along each row and then ``mu``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Sequence

import numpy as np

from .errors import ArityMismatch, CarrierMismatch


@dataclass(frozen=True)
class Carrier:
    size: int
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("carrier size must be at least 1")
        if self.labels is not None:
            labels = tuple(str(x) for x in self.labels)
            object.__setattr__(self, "labels", labels)
            if len(labels) != self.size:
                raise ValueError(f"expected {self.size} labels, got {len(labels)}")
            if len(set(labels)) != len(labels):
                raise ValueError("carrier labels must be distinct")

    def label(self, a: int) -> str:
        return self.labels[a] if self.labels else str(a)


@lru_cache(maxsize=None)
def tuples(n: int, s: int) -> np.ndarray:
    """All n-tuples over range(s) as rows, in table-index order (read-only)."""
    count = s**n
    idx = np.arange(count, dtype=np.int64)
    out = np.empty((count, n), dtype=np.int64)
    for i in range(n):
        out[:, i] = (idx // s**i) % s
    out.setflags(write=False)
    return out


def index_of(args: Sequence[int], s: int) -> int:
    idx = 0
    for i, a in enumerate(args):
        idx += a * s**i
    return idx


@dataclass(frozen=True, order=True)
class OpTable:
    """An ``arity``-ary operation on ``range(carrier_size)``.

    Ordering and equality are by ``(arity, carrier_size, table)``, which is the
    canonical order used for theory slices.
    """

    arity: int
    carrier_size: int
    table: tuple[int, ...]

    def __post_init__(self):
        s, n = self.carrier_size, self.arity
        if n < 0:
            raise ValueError("arity must be non-negative")
        if s < 1:
            raise ValueError("carrier size must be at least 1")
        table = tuple(int(v) for v in self.table)
        object.__setattr__(self, "table", table)
        if len(table) != s**n:
            raise ValueError(f"table of an arity-{n} op over {s} elements needs {s**n} entries, got {len(table)}")
        for v in table:
            if not 0 <= v < s:
                raise ValueError(f"table entry {v} outside carrier of size {s}")

    @classmethod
    def from_array(cls, arr: np.ndarray, arity: int, s: int) -> "OpTable":
        return cls(arity, s, tuple(arr.tolist()))

    @cached_property
    def array(self) -> np.ndarray:
        arr = np.asarray(self.table, dtype=np.int64)
        arr.setflags(write=False)
        return arr

    def __call__(self, *args: int) -> int:
        return eval_op(self, args)

    def __repr__(self):
        return f"OpTable(arity={self.arity}, s={self.carrier_size}, table={list(self.table)})"

    def to_doc(self) -> dict:
        return {"arity": self.arity, "table": list(self.table)}


def eval_op(op: OpTable, args: Sequence[int]) -> int:
    if len(args) != op.arity:
        raise ArityMismatch(f"op of arity {op.arity} applied to {len(args)} arguments")
    for a in args:
        if not 0 <= a < op.carrier_size:
            raise ValueError(f"argument {a} outside carrier of size {op.carrier_size}")
    return op.table[index_of(args, op.carrier_size)]


def projection(n: int, i: int, s: int) -> OpTable:
    if n < 1 or not 0 <= i < n:
        raise ValueError(f"no projection {i} of arity {n}")
    return OpTable(n, s, tuple(tuples(n, s)[:, i].tolist()))


def constant(c: int, n: int, s: int) -> OpTable:
    return OpTable(n, s, (c,) * s**n)


def _same_carrier(ops: Sequence[OpTable]) -> int:
    sizes = {op.carrier_size for op in ops}
    if len(sizes) > 1:
        raise CarrierMismatch(f"operations over different carriers: {sorted(sizes)}")
    return sizes.pop()


def superpose(outer: OpTable, inners: Sequence[OpTable], arity: int | None = None) -> OpTable:
    """``x -> outer(inners[0](x), ..., inners[n-1](x))``.

    ``arity`` is only needed when ``outer`` is nullary (there are no inners to
    read it from).
    """
    if len(inners) != outer.arity:
        raise ArityMismatch(f"outer arity {outer.arity} but {len(inners)} inner operations")
    s = _same_carrier([outer, *inners])
    m = {f.arity for f in inners}
    if len(m) > 1:
        raise ArityMismatch(f"inner operations of mixed arities {sorted(m)}")
    if m:
        m = m.pop()
        if arity is not None and arity != m:
            raise ArityMismatch(f"requested arity {arity} but inners have arity {m}")
    elif arity is None:
        raise ArityMismatch("superposing a nullary outer operation needs an explicit arity")
    else:
        m = arity
    idx = np.zeros(s**m, dtype=np.int64)
    for i, f in enumerate(inners):
        idx += f.array * s**i
    return OpTable.from_array(outer.array[idx], m, s)


@lru_cache(maxsize=None)
def _kron_indices(s: int, j: int, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Index arrays reading the columns and the rows of every j x k argument matrix.

    ``cols[l]`` holds, for every (j*k)-tuple x, the table index of the column
    ``(x[0*k+l], ..., x[(j-1)*k+l])``; ``rows[i]`` that of the row
    ``(x[i*k+0], ..., x[i*k+k-1])``.
    """
    x = tuples(j * k, s)
    count = x.shape[0]
    cols = np.zeros((k, count), dtype=np.int64)
    rows = np.zeros((j, count), dtype=np.int64)
    for i in range(j):
        for l in range(k):
            cols[l] += x[:, i * k + l] * s**i
            rows[i] += x[:, i * k + l] * s**l
    cols.setflags(write=False)
    rows.setflags(write=False)
    return cols, rows


def _weights(n: int, s: int) -> np.ndarray:
    return (s ** np.arange(n, dtype=np.int64)).reshape(n, 1)


def kron1(mu: OpTable, nu: OpTable) -> OpTable:
    """First Kronecker product: ``x -> nu(l -> mu(i -> x[i*k+l]))``."""
    s = _same_carrier([mu, nu])
    j, k = mu.arity, nu.arity
    cols, _ = _kron_indices(s, j, k)
    inner = mu.array[cols]
    idx = (inner * _weights(k, s)).sum(axis=0) if k else np.zeros(s ** (j * k), dtype=np.int64)
    return OpTable.from_array(nu.array[idx], j * k, s)


def kron2(mu: OpTable, nu: OpTable) -> OpTable:
    """Second Kronecker product: ``x -> mu(i -> nu(l -> x[i*k+l]))``."""
    s = _same_carrier([mu, nu])
    j, k = mu.arity, nu.arity
    _, rows = _kron_indices(s, j, k)
    inner = nu.array[rows]
    idx = (inner * _weights(j, s)).sum(axis=0) if j else np.zeros(s ** (j * k), dtype=np.int64)
    return OpTable.from_array(mu.array[idx], j * k, s)


def commutes(mu: OpTable, nu: OpTable) -> bool:
    """True iff the two Kronecker products of ``mu`` and ``nu`` coincide."""
    s = _same_carrier([mu, nu])
    j, k = mu.arity, nu.arity
    cols, rows = _kron_indices(s, j, k)
    count = s ** (j * k)
    first = (mu.array[cols] * _weights(k, s)).sum(axis=0) if k else np.zeros(count, dtype=np.int64)
    second = (nu.array[rows] * _weights(j, s)).sum(axis=0) if j else np.zeros(count, dtype=np.int64)
    return bool(np.array_equal(nu.array[first], mu.array[second]))


def commutation_witness(mu: OpTable, nu: OpTable) -> list[list[int]] | None:
    """A ``j x k`` matrix on which the two Kronecker products differ, or None."""
    a, b = kron1(mu, nu), kron2(mu, nu)
    if a == b:
        return None
    diff = int(np.flatnonzero(a.array != b.array)[0])
    x = tuples(mu.arity * nu.arity, mu.carrier_size)[diff]
    k = nu.arity
    return [[int(x[i * k + l]) for l in range(k)] for i in range(mu.arity)]


@lru_cache(maxsize=None)
def _transpose_perm(s: int, j: int, k: int) -> np.ndarray:
    y = tuples(j * k, s)
    idx = np.zeros(y.shape[0], dtype=np.int64)
    for i in range(j):
        for l in range(k):
            idx += y[:, l * j + i] * s ** (i * k + l)
    idx.setflags(write=False)
    return idx


def transpose_vars(op: OpTable, j: int, k: int) -> OpTable:
    """Reindex a ``j x k``-matrix argument as ``k x j``: ``result(y) = op(x)`` with ``x[i*k+l] = y[l*j+i]``."""
    if op.arity != j * k:
        raise ArityMismatch(f"op of arity {op.arity} is not {j}x{k}")
    return OpTable.from_array(op.array[_transpose_perm(op.carrier_size, j, k)], j * k, op.carrier_size)


@dataclass(frozen=True)
class OpTuple:
    """A map ``S^j -> S^j'`` given by its ``j'`` component operations."""

    in_arity: int
    components: tuple[OpTable, ...]

    def __post_init__(self):
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        for c in comps:
            if c.arity != self.in_arity:
                raise ArityMismatch(f"component of arity {c.arity} in a tuple of input arity {self.in_arity}")
        if comps:
            _same_carrier(comps)

    @property
    def out_arity(self) -> int:
        return len(self.components)

    @classmethod
    def identity(cls, n: int, s: int) -> "OpTuple":
        return cls(n, tuple(projection(n, i, s) for i in range(n)))

    def __call__(self, *args: int) -> tuple[int, ...]:
        return tuple(eval_op(c, args) for c in self.components)


def kron1_multi(a: OpTuple, b: OpTuple) -> OpTuple:
    """Component ``(i', l')`` (at position ``i'*k' + l'``) is ``kron1(a[i'], b[l'])``."""
    comps = tuple(kron1(m, n) for m in a.components for n in b.components)
    return OpTuple(a.in_arity * b.in_arity, comps)


def kron2_multi(a: OpTuple, b: OpTuple) -> OpTuple:
    comps = tuple(kron2(m, n) for m in a.components for n in b.components)
    return OpTuple(a.in_arity * b.in_arity, comps)


def all_ops(n: int, s: int):
    """Every n-ary operation on range(s), in canonical order. Unbounded; callers apply caps."""
    for table in itertools.product(range(s), repeat=s**n):
        yield OpTable(n, s, table)
