"""Finite rigs given by tables, and the matrix theories they induce on their own carrier."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import CarrierMismatch
from .ops import OpTable, tuples
from .theories import DEFAULT_MAX_ARITY, Theory


def _freeze(table) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(v) for v in row) for row in table)


@dataclass(frozen=True)
class Rig:
    """A finite rig on ``range(size)``: commutative monoid (add, zero), monoid (mul, one)."""

    size: int
    add: tuple[tuple[int, ...], ...]
    mul: tuple[tuple[int, ...], ...]
    zero: int = 0
    one: int = 1
    labels: tuple[str, ...] | None = None
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "add", _freeze(self.add))
        object.__setattr__(self, "mul", _freeze(self.mul))
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(str(x) for x in self.labels))
            if len(self.labels) != self.size:
                raise ValueError(f"expected {self.size} labels, got {len(self.labels)}")
        r = self.size
        for tname in ("add", "mul"):
            t = getattr(self, tname)
            if len(t) != r or any(len(row) != r for row in t):
                raise ValueError(f"{tname} table must be {r}x{r}")
            if any(not 0 <= v < r for row in t for v in row):
                raise ValueError(f"{tname} table has entries outside 0..{r - 1}")
        if not (0 <= self.zero < r and 0 <= self.one < r):
            raise ValueError("zero and one must be elements")

    def plus(self, a: int, b: int) -> int:
        return self.add[a][b]

    def times(self, a: int, b: int) -> int:
        return self.mul[a][b]

    def sum(self, xs: Sequence[int]) -> int:
        acc = self.zero
        for x in xs:
            acc = self.add[acc][x]
        return acc

    @property
    def is_commutative(self) -> bool:
        return all(self.mul[a][b] == self.mul[b][a] for a in range(self.size) for b in range(self.size))

    @property
    def add_array(self) -> np.ndarray:
        return np.asarray(self.add, dtype=np.int64)

    @property
    def mul_array(self) -> np.ndarray:
        return np.asarray(self.mul, dtype=np.int64)

    def label(self, a: int) -> str:
        return self.labels[a] if self.labels else str(a)


def check_rig_axioms(R: Rig) -> list[str]:
    """Every violated axiom instance, as a readable string. Empty iff R is a rig."""
    out = []
    r = range(R.size)
    A, M, z, e = R.add, R.mul, R.zero, R.one
    for a in r:
        if A[a][z] != a or A[z][a] != a:
            out.append(f"zero is not an additive identity at {a}")
        if M[a][e] != a or M[e][a] != a:
            out.append(f"one is not a multiplicative identity at {a}")
        if M[a][z] != z or M[z][a] != z:
            out.append(f"zero does not annihilate {a}")
        for b in r:
            if A[a][b] != A[b][a]:
                out.append(f"addition not commutative at ({a}, {b})")
            for c in r:
                if A[A[a][b]][c] != A[a][A[b][c]]:
                    out.append(f"addition not associative at ({a}, {b}, {c})")
                if M[M[a][b]][c] != M[a][M[b][c]]:
                    out.append(f"multiplication not associative at ({a}, {b}, {c})")
                if M[a][A[b][c]] != A[M[a][b]][M[a][c]]:
                    out.append(f"left distributivity fails at ({a}, {b}, {c})")
                if M[A[a][b]][c] != A[M[a][c]][M[b][c]]:
                    out.append(f"right distributivity fails at ({a}, {b}, {c})")
    return out


def is_ring(R: Rig) -> bool:
    return all(any(R.add[a][b] == R.zero for b in range(R.size)) for a in range(R.size))


def opposite(R: Rig) -> Rig:
    mul = tuple(tuple(R.mul[b][a] for b in range(R.size)) for a in range(R.size))
    name = None
    if R.name:
        name = R.name[:-3] if R.name.endswith("^op") else R.name + "^op"
    return Rig(R.size, R.add, mul, R.zero, R.one, R.labels, name)


# --- built-in rigs -------------------------------------------------------


def zmod(n: int) -> Rig:
    add = [[(a + b) % n for b in range(n)] for a in range(n)]
    mul = [[(a * b) % n for b in range(n)] for a in range(n)]
    return Rig(n, add, mul, 0, 1 % n, name=f"Z{n}")


def bool2() -> Rig:
    """({0,1}, or, 0, and, 1)."""
    return Rig(2, [[0, 1], [1, 1]], [[0, 0], [0, 1]], 0, 1, ("0", "1"), "bool2")


def f4() -> Rig:
    """The field with four elements; element a + b*w is index a + 2b, with w^2 = w + 1."""

    def mul(x, y):
        a, b = x & 1, x >> 1
        c, d = y & 1, y >> 1
        # (a + b w)(c + d w) = ac + (ad + bc) w + bd (w + 1)
        lo = (a * c + b * d) % 2
        hi = (a * d + b * c + b * d) % 2
        return lo + 2 * hi

    add = [[x ^ y for y in range(4)] for x in range(4)]
    return Rig(4, add, [[mul(x, y) for y in range(4)] for x in range(4)], 0, 1, ("0", "1", "w", "w+1"), "F4")


def _matrix_rig(p: int, k: int, entries: Sequence[tuple[int, int]] | None, name: str) -> Rig:
    """A ring of k x k matrices over Z_p whose free entries are ``entries``.

    Element index is the little-endian base-p number formed by the free entries
    in the given order; the product must stay inside the same pattern.
    """
    if entries is None:
        entries = [(i, j) for i in range(k) for j in range(k)]
    entries = list(entries)
    mats = []
    for digits in itertools.product(range(p), repeat=len(entries)):
        m = np.zeros((k, k), dtype=np.int64)
        for (i, j), d in zip(entries, reversed(digits)):
            m[i, j] = d
        mats.append(m)
    mats.sort(key=lambda m: sum(int(m[i, j]) * p**t for t, (i, j) in enumerate(entries)))
    index = {m.tobytes(): n for n, m in enumerate(mats)}
    size = len(mats)
    add = [[index[((mats[a] + mats[b]) % p).tobytes()] for b in range(size)] for a in range(size)]
    mul = [[index[((mats[a] @ mats[b]) % p).tobytes()] for b in range(size)] for a in range(size)]
    eye = index[np.eye(k, dtype=np.int64).tobytes()]
    labels = tuple(";".join(",".join(str(int(v)) for v in row) for row in m) for m in mats)
    return Rig(size, add, mul, index[np.zeros((k, k), dtype=np.int64).tobytes()], eye, labels, name)


def matrix_ring(p: int, k: int) -> Rig:
    """Full k x k matrices over Z_p; rows in labels are separated by ';'."""
    return _matrix_rig(p, k, None, f"M{k}_F{p}")


def upper_triangular_f2() -> Rig:
    """Upper-triangular 2x2 matrices over Z_2 (8 elements, noncommutative)."""
    return _matrix_rig(2, 2, [(0, 0), (0, 1), (1, 1)], "UT2_F2")


def builtin_rig(name: str) -> Rig:
    if name in BUILTIN_RIGS:
        return BUILTIN_RIGS[name]()
    if name.endswith("^op") and name[:-3] in BUILTIN_RIGS:
        return opposite(BUILTIN_RIGS[name[:-3]]())
    raise KeyError(f"unknown rig {name!r}; known: {', '.join(sorted(BUILTIN_RIGS))}")


BUILTIN_RIGS = {
    "Z2": lambda: zmod(2),
    "Z3": lambda: zmod(3),
    "Z4": lambda: zmod(4),
    "Z6": lambda: zmod(6),
    "bool2": bool2,
    "F4": f4,
    "UT2_F2": upper_triangular_f2,
    "M2_F2": lambda: matrix_ring(2, 2),
}


# --- matrix theories ------------------------------------------------------


def _combos(R: Rig, n: int, right: bool, affine: bool = False, constant_term: bool = False) -> np.ndarray:
    """Tables of x -> [c +] sum r_i x_i (or x_i r_i) for every coefficient row.

    Returns an array of shape (rows, |R|^n); rows are ordered by coefficient
    tuple (little-endian, constant term first when present).
    """
    r = R.size
    A, M = R.add_array, R.mul_array
    xs = tuples(n, r)  # (r^n, n)
    width = n + (1 if constant_term else 0)
    coeffs = tuples(width, r)  # (r^width, width)
    if affine:
        sums = np.full(coeffs.shape[0], R.zero, dtype=np.int64)
        for i in range(width):
            sums = A[sums, coeffs[:, i]]
        coeffs = coeffs[sums == R.one]
    offset = 1 if constant_term else 0
    acc = np.empty((coeffs.shape[0], xs.shape[0]), dtype=np.int64)
    acc[:] = (coeffs[:, [0]] if constant_term else R.zero)
    for i in range(n):
        c = coeffs[:, [i + offset]]
        x = xs[:, i][None, :]
        term = M[x, c] if right else M[c, x]
        acc = A[acc, term]
    return acc


def op_of_row(R: Rig, row: Sequence[int]) -> OpTable:
    """x -> sum_i row[i] * x_i (left coefficients)."""
    row = np.asarray(list(row), dtype=np.int64).reshape(1, -1)
    n = row.shape[1]
    xs = tuples(n, R.size)
    acc = np.full(xs.shape[0], R.zero, dtype=np.int64)
    for i in range(n):
        acc = R.add_array[acc, R.mul_array[row[0, i], xs[:, i]]]
    return OpTable.from_array(acc, n, R.size)


def _table_ops(arr: np.ndarray, n: int, s: int) -> list[OpTable]:
    return [OpTable(n, s, tuple(r)) for r in np.unique(arr, axis=0).tolist()]


def mat_generators(R: Rig, N: int) -> list[OpTable]:
    """Zero, the scalings r*x and addition (those within the arity bound)."""
    s = R.size
    gens = [OpTable(0, s, (R.zero,))]
    if N >= 1:
        gens += [op_of_row(R, [a]) for a in range(s)]
    if N >= 2:
        gens.append(op_of_row(R, [R.one, R.one]))
    return sorted(set(gens))


def mat_theory(R: Rig, N: int = DEFAULT_MAX_ARITY) -> Theory:
    """Left R-module operations x -> sum r_i x_i on the carrier R."""
    slices = {n: _table_ops(_combos(R, n, right=False), n, R.size) for n in range(N + 1)}
    return Theory(R.size, N, slices, mat_generators(R, N), name=f"mat:{R.name}" if R.name else None)


def mat_aff_theory(R: Rig, N: int = DEFAULT_MAX_ARITY) -> Theory:
    """The operations of mat_theory whose coefficient row sums to one.

    Generators are a greedy generating subset: binary affine operations do not
    generate all of them in general (over Z_2, x + y + z needs arity 3).
    """
    slices = {n: _table_ops(_combos(R, n, right=False, affine=True), n, R.size) for n in range(N + 1)}
    return Theory(R.size, N, slices, name=f"mat_aff:{R.name}" if R.name else None)


def pointed_generators(R: Rig, N: int) -> list[OpTable]:
    s = R.size
    gens = [OpTable(0, s, (c,)) for c in range(s)]
    if N >= 1:
        gens += _table_ops(_combos(R, 1, right=True, constant_term=True), 1, s)
    if N >= 2:
        gens += _table_ops(_combos(R, 2, right=True)[[R.one + R.one * s]], 2, s)
    return sorted(set(gens))


def pointed_mod_theory(R: Rig, N: int = DEFAULT_MAX_ARITY) -> Theory:
    """Operations x -> c + sum x_i r_i (right coefficients, constant term c)."""
    slices = {n: _table_ops(_combos(R, n, right=True, constant_term=True), n, R.size) for n in range(N + 1)}
    return Theory(R.size, N, slices, pointed_generators(R, N), name=f"pointed:{R.name}" if R.name else None)


def mat_collisions(R: Rig, n: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Pairs of distinct coefficient rows of length n that give the same operation."""
    tables = _combos(R, n, right=False)
    rows = tuples(n, R.size)
    seen: dict[bytes, int] = {}
    out = []
    for i, t in enumerate(tables):
        key = t.tobytes()
        if key in seen:
            out.append((tuple(rows[seen[key]].tolist()), tuple(rows[i].tolist())))
        else:
            seen[key] = i
    return out


# --- matrices ---------------------------------------------------------------


@dataclass(frozen=True)
class RMatrix:
    rig: Rig
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", _freeze(self.entries))
        widths = {len(r) for r in self.entries}
        if len(widths) > 1:
            raise ValueError("ragged matrix")
        for row in self.entries:
            for v in row:
                if not 0 <= v < self.rig.size:
                    raise ValueError(f"entry {v} outside the rig")

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    @classmethod
    def row(cls, rig: Rig, values: Sequence[int]) -> "RMatrix":
        return cls(rig, (tuple(values),))

    def ops(self) -> list[OpTable]:
        return [op_of_row(self.rig, r) for r in self.entries]


def matrix_kronecker(Y: RMatrix, X: RMatrix) -> RMatrix:
    """The classical ``Y (x) X``: entry at row (i', l'), column (i, l) is Y[l', l] * X[i', i].

    Pairs use the row-major position ``i*k + l`` with X's index outer, so for
    one-row matrices ``op_of_row(matrix_kronecker(Y, X)) == kron1(op(X), op(Y))``.
    """
    if X.rig != Y.rig:
        raise CarrierMismatch("matrices over different rigs")
    R = X.rig
    jp, j, kp, k = X.rows, X.cols, Y.rows, Y.cols
    out = [[R.zero] * (j * k) for _ in range(jp * kp)]
    for ip in range(jp):
        for lp in range(kp):
            for i in range(j):
                for l in range(k):
                    out[ip * kp + lp][i * k + l] = R.times(Y.entries[lp][l], X.entries[ip][i])
    return RMatrix(R, tuple(tuple(r) for r in out))
