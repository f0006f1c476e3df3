"""Finite rings, endomorphism rings of finite abelian groups, centralizers and module commutants."""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import EnumerationTooLarge
from .rigs import Rig, builtin_rig, check_rig_axioms, is_ring

END_ENUMERATION_BOUND = 16
# End(M) is stored with dense K x K tables
END_RING_LIMIT = 4096


# --- groups -------------------------------------------------------------------


@dataclass(frozen=True)
class FinAbGroup:
    size: int
    add: tuple[tuple[int, ...], ...]
    zero: int = 0
    labels: tuple[str, ...] | None = None
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "add", tuple(tuple(int(v) for v in row) for row in self.add))
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(str(x) for x in self.labels))
        problems = check_group_axioms(self)
        if problems:
            raise ValueError(f"not an abelian group: {problems[0]}")

    def neg(self, a: int) -> int:
        return next(b for b in range(self.size) if self.add[a][b] == self.zero)

    def order(self, a: int) -> int:
        k, x = 1, a
        while x != self.zero:
            x = self.add[x][a]
            k += 1
        return k


def check_group_axioms(G: FinAbGroup) -> list[str]:
    m = G.size
    A = G.add
    out = []
    if len(A) != m or any(len(r) != m for r in A):
        return [f"addition table must be {m}x{m}"]
    if any(not 0 <= v < m for r in A for v in r):
        return ["addition table has entries outside the group"]
    for a in range(m):
        if A[a][G.zero] != a:
            out.append(f"zero is not an identity at {a}")
        if all(A[a][b] != G.zero for b in range(m)):
            out.append(f"{a} has no inverse")
        for b in range(m):
            if A[a][b] != A[b][a]:
                out.append(f"not commutative at ({a}, {b})")
            for c in range(m):
                if A[A[a][b]][c] != A[a][A[b][c]]:
                    out.append(f"not associative at ({a}, {b}, {c})")
    return out


def cyclic_group(n: int) -> FinAbGroup:
    return FinAbGroup(n, [[(a + b) % n for b in range(n)] for a in range(n)], 0, name=f"Z{n}")


def elementary_group(p: int, k: int) -> FinAbGroup:
    """(Z_p)^k; the vector (c_0, ..., c_{k-1}) is element sum c_i p^i."""
    size = p**k

    def digits(x):
        return [(x // p**i) % p for i in range(k)]

    def num(ds):
        return sum(d * p**i for i, d in enumerate(ds))

    add = [[num([(a + b) % p for a, b in zip(digits(x), digits(y))]) for y in range(size)] for x in range(size)]
    name = "Z2xZ2" if (p, k) == (2, 2) else f"Z{p}^{k}"
    return FinAbGroup(size, add, 0, name=name)


def additive_group(R: Rig) -> FinAbGroup:
    return FinAbGroup(R.size, R.add, R.zero, R.labels, name=f"({R.name},+)" if R.name else None)


BUILTIN_GROUPS = {
    "Z2": lambda: cyclic_group(2),
    "Z4": lambda: cyclic_group(4),
    "Z6": lambda: cyclic_group(6),
    "Z2xZ2": lambda: elementary_group(2, 2),
    "Z2^2": lambda: elementary_group(2, 2),
    "Z2^3": lambda: elementary_group(2, 3),
}


def builtin_group(name: str) -> FinAbGroup:
    if name not in BUILTIN_GROUPS:
        raise KeyError(f"unknown group {name!r}; known: {', '.join(sorted(BUILTIN_GROUPS))}")
    return BUILTIN_GROUPS[name]()


# --- rings ------------------------------------------------------------------------


def as_ring(R: Rig) -> Rig:
    """Validate that R is a ring (a rig with additive inverses) and return it."""
    problems = check_rig_axioms(R)
    if problems:
        raise ValueError(f"not a rig: {problems[0]}")
    if not is_ring(R):
        raise ValueError("additive inverses missing: not a ring")
    return R


BUILTIN_RINGS = ("Z2", "Z3", "Z4", "Z6", "F4", "UT2_F2", "M2_F2")


def builtin_ring(name: str) -> Rig:
    return as_ring(builtin_rig(name))


@dataclass(frozen=True)
class Subring:
    """A subset of a finite ring, stored as sorted element indices."""

    ambient: Rig
    members: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(sorted(set(int(m) for m in self.members))))

    def __len__(self):
        return len(self.members)

    def __contains__(self, x: int) -> bool:
        return x in set(self.members)

    @property
    def is_commutative(self) -> bool:
        M = self.ambient.mul
        return all(M[a][b] == M[b][a] for a in self.members for b in self.members)

    def as_ring(self) -> Rig:
        """The subring as a ring in its own right, elements renumbered 0..k-1."""
        pos = {m: i for i, m in enumerate(self.members)}
        U = self.ambient
        add = [[pos[U.add[a][b]] for b in self.members] for a in self.members]
        mul = [[pos[U.mul[a][b]] for b in self.members] for a in self.members]
        labels = tuple(U.label(m) for m in self.members)
        return Rig(len(self.members), add, mul, pos[U.zero], pos[U.one], labels)


def is_unital_subring(U: Rig, members: Iterable[int]) -> bool:
    S = set(members)
    if U.zero not in S or U.one not in S:
        return False
    for a in S:
        if _neg(U, a) not in S:
            return False
        for b in S:
            if U.add[a][b] not in S or U.mul[a][b] not in S:
                return False
    return True


def _neg(U: Rig, a: int) -> int:
    return next(b for b in range(U.size) if U.add[a][b] == U.zero)


def generated_subring(U: Rig, gens: Iterable[int]) -> Subring:
    S = {U.zero, U.one, *gens}
    frontier = list(S)
    while frontier:
        new = set()
        for a in frontier:
            for b in list(S):
                for c in (U.add[a][b], U.mul[a][b], U.mul[b][a]):
                    if c not in S:
                        new.add(c)
        S |= new
        frontier = list(new)
    return Subring(U, tuple(S))


def centralizer(U: Rig, G: Iterable[int]) -> Subring:
    """Elements of U commuting with every element of G; verified to be a unital subring."""
    G = list(G)
    M = U.mul
    members = [u for u in range(U.size) if all(M[u][g] == M[g][u] for g in G)]
    if not is_unital_subring(U, members):
        raise AssertionError("centralizer is not a unital subring")
    return Subring(U, tuple(members))


def ring_center(U: Rig) -> Subring:
    return centralizer(U, range(U.size))


def all_subrings(U: Rig) -> list[Subring]:
    """Every unital subring of U, found by closing subsets generated one element at a time."""
    seen = {}
    start = generated_subring(U, [])
    queue = deque([start])
    seen[start.members] = start
    while queue:
        S = queue.popleft()
        for u in range(U.size):
            if u in S:
                continue
            T = generated_subring(U, list(S.members) + [u])
            if T.members not in seen:
                seen[T.members] = T
                queue.append(T)
    return sorted(seen.values(), key=lambda S: (len(S), S.members))


def is_maximal_commutative(U: Rig, S: Subring, cross_check: bool | None = None) -> bool:
    """Whether S is a commutative subring contained in no larger commutative subring.

    Decided by the self-centralizing test; for rings with at most 16 elements
    (or when asked) it is cross-checked against a direct extension search.
    """
    self_centralizing = centralizer(U, S.members).members == S.members
    if cross_check is None:
        cross_check = U.size <= 16
    if cross_check:
        direct = S.is_commutative and all(
            not generated_subring(U, list(S.members) + [u]).is_commutative
            for u in range(U.size) if u not in S
        )
        if direct != self_centralizing:
            raise AssertionError("maximality routes disagree")
    return self_centralizing


# --- endomorphism rings ---------------------------------------------------------


@dataclass(frozen=True)
class EndRing:
    """End(M) as a ring; element i is the map ``maps[i]`` (tuple of images), multiplication is composition."""

    group: FinAbGroup
    maps: tuple[tuple[int, ...], ...]
    ring: Rig
    method: str = field(compare=False, default="")

    def index(self, f: Sequence[int]) -> int:
        return self._lookup[tuple(int(v) for v in f)]

    @property
    def _lookup(self) -> dict:
        cached = self.__dict__.get("_lookup_cache")
        if cached is None:
            cached = {f: i for i, f in enumerate(self.maps)}
            object.__setattr__(self, "_lookup_cache", cached)
        return cached

    def __len__(self):
        return len(self.maps)


def _basis(G: FinAbGroup) -> tuple[int, list[int]] | None:
    """(p, basis) when G is elementary abelian of prime exponent p, else None."""
    if G.size == 1:
        return None
    orders = {G.order(a) for a in range(G.size) if a != G.zero}
    if len(orders) != 1:
        return None
    p = orders.pop()
    if any(p % d == 0 for d in range(2, p)):
        return None
    span = {G.zero}
    basis = []
    for a in range(G.size):
        if a in span:
            continue
        basis.append(a)
        new = set()
        for x in span:
            y = x
            for _ in range(p):
                new.add(y)
                y = G.add[y][a]
        span = new
    return p, basis


def _coords(G: FinAbGroup, p: int, basis: list[int]) -> dict[int, tuple[int, ...]]:
    out = {}
    for c in itertools.product(range(p), repeat=len(basis)):
        x = G.zero
        for ci, b in zip(c, basis):
            for _ in range(ci):
                x = G.add[x][b]
        out[x] = c
    return out


def _scale_sum(G: FinAbGroup, coeffs: Sequence[int], elems: Sequence[int]) -> int:
    x = G.zero
    for c, e in zip(coeffs, elems):
        for _ in range(c):
            x = G.add[x][e]
    return x


def endomorphisms_structural(G: FinAbGroup) -> list[tuple[int, ...]]:
    """Additive maps of an elementary abelian group: arbitrary images of a basis."""
    found = _basis(G)
    if found is None:
        raise ValueError("group is not elementary abelian")
    p, basis = found
    coords = _coords(G, p, basis)
    maps = []
    for images in itertools.product(range(G.size), repeat=len(basis)):
        maps.append(tuple(_scale_sum(G, coords[x], images) for x in range(G.size)))
    return sorted(maps)


def _generating_set(G: FinAbGroup) -> list[int]:
    span = {G.zero}
    gens = []
    for a in sorted(range(G.size), key=lambda a: -G.order(a)):
        if a in span:
            continue
        gens.append(a)
        span = _span(G, gens)
    return gens


def _span(G: FinAbGroup, gens: Sequence[int]) -> set[int]:
    S = {G.zero}
    frontier = [G.zero]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = G.add[x][g]
                if y not in S:
                    S.add(y)
                    nxt.append(y)
        frontier = nxt
    return S


def endomorphisms_enumerated(G: FinAbGroup, bound: int = END_ENUMERATION_BOUND) -> list[tuple[int, ...]]:
    """Additive maps found by choosing images of a generating set and extending by breadth-first search."""
    if G.size > bound:
        raise EnumerationTooLarge(f"group of order {G.size} above the enumeration bound {bound}")
    gens = _generating_set(G)
    A = G.add
    maps = []
    for images in itertools.product(range(G.size), repeat=len(gens)):
        f = {G.zero: G.zero}
        frontier = [G.zero]
        ok = True
        while frontier and ok:
            nxt = []
            for x in frontier:
                for g, fg in zip(gens, images):
                    y, fy = A[x][g], A[f[x]][fg]
                    if y in f:
                        if f[y] != fy:
                            ok = False
                            break
                    else:
                        f[y] = fy
                        nxt.append(y)
                if not ok:
                    break
            frontier = nxt
        if not ok:
            continue
        table = tuple(f[x] for x in range(G.size))
        if all(table[A[x][y]] == A[table[x]][table[y]] for x in range(G.size) for y in range(G.size)):
            maps.append(table)
    return sorted(maps)


def _ring_from_maps(G: FinAbGroup, maps: list[tuple[int, ...]]) -> Rig:
    E = np.asarray(maps, dtype=np.int64)  # (K, m)
    K, m = E.shape
    Aadd = np.asarray(G.add, dtype=np.int64)
    codes = (E * (m ** np.arange(m, dtype=np.int64))).sum(axis=1) if m**m < 2**62 else None
    if codes is not None:
        order = np.argsort(codes)
        sorted_codes = codes[order]

        def lookup(rows):
            c = (rows * (m ** np.arange(m, dtype=np.int64))).sum(axis=-1)
            pos = np.searchsorted(sorted_codes, c)
            if not np.array_equal(sorted_codes[np.minimum(pos, K - 1)], c):
                raise AssertionError("endomorphisms not closed under the ring operations")
            return order[pos]
    else:
        table = {tuple(f): i for i, f in enumerate(maps)}

        def lookup(rows):
            flat = rows.reshape(-1, m)
            return np.array([table[tuple(r)] for r in flat.tolist()]).reshape(rows.shape[:-1])

    add = lookup(Aadd[E[:, None, :], E[None, :, :]])
    mul = lookup(E[:, E])  # [f, g, x] = f(g(x))
    zero = maps.index(tuple([G.zero] * m))
    one = maps.index(tuple(range(m)))
    return Rig(K, add.tolist(), mul.tolist(), zero, one, name=f"End({G.name})" if G.name else None)


def end_ring(G: FinAbGroup, method: str = "auto", bound: int = END_ENUMERATION_BOUND) -> EndRing:
    """All additive self-maps of G, with pointwise addition and (f*g)(x) = f(g(x)).

    ``method``: "structural" (elementary abelian groups), "enumerate" (order
    at most ``bound``), or "auto" (structural when possible).
    """
    if method == "auto":
        method = "structural" if _basis(G) is not None else "enumerate"
    if method == "structural":
        maps = endomorphisms_structural(G)
    elif method == "enumerate":
        maps = endomorphisms_enumerated(G, bound)
    else:
        raise ValueError(f"unknown method {method!r}")
    if len(maps) > END_RING_LIMIT:
        raise EnumerationTooLarge(f"End({G.name or G.size}) has {len(maps)} elements; its tables are limited to {END_RING_LIMIT}")
    return EndRing(G, tuple(maps), _ring_from_maps(G, maps), method)


# --- module actions -----------------------------------------------------------------


@dataclass(frozen=True)
class ModuleAction:
    """A left action of a ring R on a group M: ``action[r]`` is the map x -> r.x."""

    ring: Rig
    group: FinAbGroup
    action: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "action", tuple(tuple(int(v) for v in f) for f in self.action))
        problems = check_action(self)
        if problems:
            raise ValueError(f"not a module action: {problems[0]}")

    @property
    def is_faithful(self) -> bool:
        return len(set(self.action)) == len(self.action)


def check_action(A: ModuleAction) -> list[str]:
    R, G, act = A.ring, A.group, A.action
    m = G.size
    if len(act) != R.size or any(len(f) != m for f in act):
        return [f"action needs {R.size} maps of length {m}"]
    out = []
    for r, f in enumerate(act):
        if any(not 0 <= v < m for v in f):
            return [f"map for {r} leaves the group"]
        if any(f[G.add[x][y]] != G.add[f[x]][f[y]] for x in range(m) for y in range(m)):
            out.append(f"map for {r} is not additive")
    if out:
        return out
    if act[R.one] != tuple(range(m)):
        out.append("one does not act as the identity")
    for r in range(R.size):
        for t in range(R.size):
            if act[R.add[r][t]] != tuple(G.add[act[r][x]][act[t][x]] for x in range(m)):
                out.append(f"action not additive in the ring at ({r}, {t})")
            if act[R.mul[r][t]] != tuple(act[r][act[t][x]] for x in range(m)):
                out.append(f"action not multiplicative at ({r}, {t})")
    return out


def regular_action(R: Rig) -> ModuleAction:
    """R acting on its own additive group by left multiplication."""
    G = additive_group(R)
    return ModuleAction(R, G, tuple(tuple(R.mul[r][x] for x in range(R.size)) for r in range(R.size)))


def matrix_action(p: int, k: int) -> ModuleAction:
    """k x k matrices over Z_p acting on column vectors (Z_p)^k."""
    from .rigs import matrix_ring

    R = matrix_ring(p, k)
    G = elementary_group(p, k)
    acts = []
    for lab in R.labels:
        mat = np.array([[int(v) for v in row.split(",")] for row in lab.split(";")])
        f = []
        for x in range(G.size):
            v = np.array([(x // p**i) % p for i in range(k)])
            w = (mat @ v) % p
            f.append(int(sum(int(w[i]) * p**i for i in range(k))))
        acts.append(tuple(f))
    return ModuleAction(R, G, tuple(acts))


def scalar_action(R: Rig, G: FinAbGroup) -> ModuleAction:
    """Z_n acting on a group of exponent dividing n by repeated addition."""
    acts = []
    for r in range(R.size):
        acts.append(tuple(_scale_sum(G, [r], [x]) for x in range(G.size)))
    return ModuleAction(R, G, tuple(acts))


def action_image(A: ModuleAction, E: EndRing | None = None) -> Subring:
    E = E or end_ring(A.group)
    return Subring(E.ring, tuple(E.index(f) for f in A.action))


def module_commutant(A: ModuleAction, E: EndRing | None = None) -> Subring:
    """The R-linear self-maps of M: the centralizer of the action's image in End(M)."""
    E = E or end_ring(A.group)
    return centralizer(E.ring, action_image(A, E).members)


def double_centralizer(A: ModuleAction, E: EndRing | None = None) -> Subring:
    E = E or end_ring(A.group)
    return centralizer(E.ring, module_commutant(A, E).members)


def has_double_centralizer_property(A: ModuleAction, E: EndRing | None = None) -> bool:
    """The action is faithful and its image equals its double centralizer."""
    if not A.is_faithful:
        return False
    E = E or end_ring(A.group)
    return double_centralizer(A, E).members == action_image(A, E).members


@dataclass(frozen=True)
class OppositeWitness:
    holds: bool
    centralizer_size: int
    right_mults: tuple[int, ...]
    reason: str = ""


def regular_commutant_is_opposite(R: Rig) -> OppositeWitness:
    """Check that the maps commuting with all left multiplications are exactly the
    right multiplications, and that r -> (x -> x r) reverses products.

    ``right_mults[r]`` is the index in End(R, +) of right multiplication by r.
    """
    A = regular_action(R)
    E = end_ring(A.group)
    C = module_commutant(A, E)
    rights = tuple(E.index(tuple(R.mul[x][r] for x in range(R.size))) for r in range(R.size))
    U = E.ring
    reason = ""
    if C.members != tuple(sorted(set(rights))):
        reason = "centralizer differs from the right multiplications"
    elif len(set(rights)) != R.size:
        reason = "right multiplication is not injective"
    elif rights[R.one] != U.one:
        reason = "right multiplication by one is not the identity"
    else:
        for r in range(R.size):
            for t in range(R.size):
                if rights[R.add[r][t]] != U.add[rights[r]][rights[t]]:
                    reason = f"not additive at ({r}, {t})"
                elif rights[R.mul[r][t]] != U.mul[rights[t]][rights[r]]:
                    reason = f"products not reversed at ({r}, {t})"
                if reason:
                    break
            if reason:
                break
    return OppositeWitness(not reason, len(C), rights, reason)
