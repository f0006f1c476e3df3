"""Commutants: all operations commuting with a given set, arity by arity.

An n-ary f commutes with an m-ary g exactly when f is a homomorphism from the
n-th power of (S, g) to (S, g): for every m-tuple of points p_0..p_{m-1} of
S^n, ``f(g(p_0, ..., p_{m-1})) == g(f(p_0), ..., f(p_{m-1}))`` with g applied
coordinatewise on the left. Each such tuple is one constraint on f's table.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import ArityMismatch, CarrierMismatch, EnumerationTooLarge, IntractableSlice, enumeration_cap
from .ops import OpTable, commutes, projection, tuples
from .theories import CHUNK, Theory, equal_upto, is_closed

DEFAULT_NODE_BUDGET = 200_000
EXHAUSTIVE_LIMIT = 1 << 16
CLOSURE_CHECK_BUDGET = 2 * 10**6


def commutes_with_all(op: OpTable, gens: Iterable[OpTable]) -> bool:
    return all(commutes(op, g) for g in gens)


@lru_cache(maxsize=4096)
def constraint_arrays(g: OpTable, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Point indices (M, m) and target index (M,) of every constraint g puts on an n-ary table."""
    s, m = g.carrier_size, g.arity
    points = tuples(n, s)  # (s^n, n)
    combos = tuples(m, s**n)  # (M, m)
    gidx = np.zeros((combos.shape[0], n), dtype=np.int64)
    for l in range(m):
        gidx += points[combos[:, l]] * s**l
    qcoords = g.array[gidx]
    target = (qcoords * (s ** np.arange(n, dtype=np.int64))).sum(axis=1) if n else np.zeros(combos.shape[0], dtype=np.int64)
    combos = np.ascontiguousarray(combos)
    combos.setflags(write=False)
    target.setflags(write=False)
    return combos, target


def _check_gens(gens: Sequence[OpTable], s: int) -> list[OpTable]:
    gens = sorted(set(gens))
    for g in gens:
        if g.carrier_size != s:
            raise CarrierMismatch(f"generator over {g.carrier_size} elements, expected {s}")
    return gens


def _batch_ok(F: np.ndarray, gens: Sequence[OpTable], n: int, s: int) -> np.ndarray:
    """Mask of the rows of F (candidate tables) that commute with every generator."""
    ok = np.ones(F.shape[0], dtype=bool)
    for g in gens:
        P, Q = constraint_arrays(g, n)
        idx = np.zeros((F.shape[0], P.shape[0]), dtype=np.int64)
        for l in range(g.arity):
            idx += F[:, P[:, l]] * s**l
        ok &= (F[:, Q] == g.array[idx]).all(axis=1)
        if not ok.any():
            break
    return ok


def filter_commuting(candidates: Sequence[OpTable], gens: Sequence[OpTable], s: int, n: int) -> list[OpTable]:
    if not candidates:
        return []
    gens = _check_gens(gens, s)
    F = np.array([c.table for c in candidates], dtype=np.int64).reshape(len(candidates), s**n)
    out = []
    step = max(1, (1 << 22) // max(1, max((s ** (n * g.arity) for g in gens), default=1)))
    for start in range(0, len(candidates), step):
        ok = _batch_ok(F[start:start + step], gens, n, s)
        out.extend(c for c, keep in zip(candidates[start:start + step], ok) if keep)
    return out


def exhaustive_slice(gens: Sequence[OpTable], s: int, n: int, cap: int | None = None) -> tuple[OpTable, ...]:
    """Test every n-ary table; refuses (EnumerationTooLarge) beyond the cap."""
    gens = _check_gens(gens, s)
    L = s**n
    count = s**L
    limit = enumeration_cap(cap)
    if count > limit:
        raise EnumerationTooLarge(f"{count} candidate tables at arity {n} (cap {limit})")
    weights = s ** np.arange(L - 1, -1, -1, dtype=np.int64)
    widest = max((s ** (n * g.arity) for g in gens), default=1)
    step = max(1, min(CHUNK, (1 << 22) // widest))
    out = []
    for start in range(0, count, step):
        k = np.arange(start, min(count, start + step), dtype=np.int64)
        F = (k[:, None] // weights[None, :]) % s
        ok = _batch_ok(F, gens, n, s)
        out.extend(OpTable(n, s, tuple(r)) for r in F[ok].tolist())
    return tuple(out)


def _propagate(A: np.ndarray, cons, s: int) -> bool:
    """Force every table entry implied by fully decided constraints; False on conflict."""
    while True:
        changed = False
        for g, P, Q, w in cons:
            if P.shape[1]:
                ready = (A[P] >= 0).all(axis=1)
                if not ready.any():
                    continue
                Pr, Qr = P[ready], Q[ready]
                vals = g.array[(A[Pr] * w).sum(axis=1)]
            else:
                Qr = Q
                vals = np.full(Q.shape[0], g.table[0], dtype=np.int64)
            cur = A[Qr]
            if ((cur >= 0) & (cur != vals)).any():
                return False
            free = cur < 0
            if free.any():
                A[Qr[free]] = vals[free]
                changed = True
        if not changed:
            return True


def backtrack_slice(gens: Sequence[OpTable], s: int, n: int,
                    node_budget: int = DEFAULT_NODE_BUDGET) -> tuple[OpTable, ...]:
    """Search over partial tables, deciding points in increasing index order.

    Raises IntractableSlice when more than ``node_budget`` nodes are visited.
    """
    gens = _check_gens(gens, s)
    L = s**n
    cons = []
    for g in gens:
        P, Q = constraint_arrays(g, n)
        cons.append((g, P, Q, s ** np.arange(g.arity, dtype=np.int64)))
    root = np.full(L, -1, dtype=np.int64)
    found = []
    if not _propagate(root, cons, s):
        return ()
    stack = [root]
    nodes = 0
    while stack:
        A = stack.pop()
        nodes += 1
        if nodes > node_budget:
            raise IntractableSlice(n, f"backtracking exceeded {node_budget} nodes")
        free = np.flatnonzero(A < 0)
        if free.size == 0:
            found.append(OpTable(n, s, tuple(A.tolist())))
            continue
        p = free[0]
        children = []
        for v in range(s):
            B = A.copy()
            B[p] = v
            if _propagate(B, cons, s):
                children.append(B)
        stack.extend(reversed(children))
    return tuple(sorted(found))


def commutant_slice(gens: Sequence[OpTable], s: int, n: int, *, strategy: str = "auto",
                    cap: int | None = None, node_budget: int = DEFAULT_NODE_BUDGET) -> tuple[OpTable, ...]:
    """All n-ary operations on s elements commuting with every generator.

    ``auto`` enumerates exhaustively when there are at most min(cap, 2**16)
    candidate tables and backtracks otherwise.
    """
    count = s ** (s**n)
    limit = enumeration_cap(cap)
    if strategy == "auto":
        strategy = "exhaustive" if count <= min(limit, EXHAUSTIVE_LIMIT) else "backtrack"
    if strategy == "exhaustive":
        return exhaustive_slice(gens, s, n, cap)
    if strategy == "backtrack":
        return backtrack_slice(gens, s, n, node_budget)
    raise ValueError(f"unknown strategy {strategy!r}")


def commutant(gens: Iterable[OpTable], s: int, N: int, ambient: Theory | None = None, *,
              strategy: str = "auto", cap: int | None = None, node_budget: int = DEFAULT_NODE_BUDGET,
              threads: int = 1, check: bool = True, name: str | None = None) -> Theory:
    """The theory of operations of arity <= N commuting with all of ``gens``.

    With a non-full ``ambient`` the result is the ambient's slices filtered by
    commutation, i.e. the full-theory commutant intersected with the ambient.
    With ``check`` the result is verified to contain the projections and,
    when affordable, to be closed under superposition.
    """
    gens = _check_gens(list(gens), s)
    if ambient is not None and ambient.s != s:
        raise CarrierMismatch(f"ambient over {ambient.s} elements, expected {s}")
    if ambient is not None and ambient.max_arity < N:
        raise ArityMismatch(f"ambient bounded at {ambient.max_arity} < {N}")
    use_ambient = ambient is not None and not ambient.is_full

    def one(n: int) -> tuple[OpTable, ...]:
        if use_ambient:
            return tuple(filter_commuting(ambient.ops(n), gens, s, n))
        return commutant_slice(gens, s, n, strategy=strategy, cap=cap, node_budget=node_budget)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            slices = dict(zip(range(N + 1), pool.map(one, range(N + 1))))
    else:
        slices = {n: one(n) for n in range(N + 1)}
    T = Theory(s, N, slices, name=name)
    if check:
        _assert_theory(T)
    return T


def _assert_theory(T: Theory) -> None:
    for n in range(1, T.max_arity + 1):
        have = set(T.ops(n))
        for i in range(n):
            if projection(n, i, T.s) not in have:
                raise AssertionError(f"commutant slice {n} lacks projection {i}")
    if is_closed(T, budget=CLOSURE_CHECK_BUDGET) is False:
        raise AssertionError("commutant is not closed under superposition")


def theory_commutant(T: Theory, N: int | None = None, ambient: Theory | None = None, **kw) -> Theory:
    N = T.max_arity if N is None else N
    return commutant(T.generators, T.s, N, ambient, **kw)


def double_commutant(gens: Iterable[OpTable], s: int, N: int, ambient: Theory | None = None, **kw) -> Theory:
    first = commutant(gens, s, N, ambient, **kw)
    return commutant(first.generators, s, N, ambient, **kw)


def is_saturated(T: Theory, ambient: Theory | None = None, N: int | None = None, **kw) -> bool:
    """T equals its double commutant, slice by slice up to N."""
    N = T.max_arity if N is None else N
    return equal_upto(T, double_commutant(T.generators, T.s, N, ambient, **kw), N)


def is_balanced(T: Theory, ambient: Theory | None = None, N: int | None = None, **kw) -> bool:
    """T equals its commutant, slice by slice up to N."""
    N = T.max_arity if N is None else N
    return equal_upto(T, commutant(T.generators, T.s, N, ambient, **kw), N)


def theories_commute(gens_a: Iterable[OpTable], gens_b: Iterable[OpTable], s: int, route: str = "both", **kw) -> bool:
    """Whether every generator of one theory commutes with every generator of the other.

    ``route="pairs"`` checks the cross pairs; ``route="factor"`` checks that
    each generator of B lies in the commutant of A; ``"both"`` runs the two and
    raises if they disagree.
    """
    gens_a = _check_gens(list(gens_a), s)
    gens_b = _check_gens(list(gens_b), s)
    pairs = factor = None
    if route in ("pairs", "both"):
        pairs = all(commutes(a, b) for a in gens_a for b in gens_b)
    if route in ("factor", "both"):
        N = max((b.arity for b in gens_b), default=0)
        C = commutant(gens_a, s, N, check=False, **kw)
        factor = all(b in C for b in gens_b)
    if route not in ("pairs", "factor", "both"):
        raise ValueError(f"unknown route {route!r}")
    if pairs is not None and factor is not None and pairs != factor:
        raise AssertionError(f"commutation routes disagree: pairs={pairs}, factor={factor}")
    return pairs if pairs is not None else factor

