"""Slow, obviously-correct reference implementations used to cross-check the library.

Nothing here touches numpy or the library's index arithmetic beyond the
OpTable container itself.
"""

import itertools

from lawvere.ops import OpTable


def all_args(n, s):
    """n-tuples over range(s) in little-endian table order."""
    for rev in itertools.product(range(s), repeat=n):
        yield tuple(reversed(rev))


def value(op, args):
    idx = 0
    for i, a in enumerate(args):
        idx += a * op.carrier_size**i
    return op.table[idx]


def from_function(n, s, fn):
    return OpTable(n, s, tuple(fn(a) for a in all_args(n, s)))


def all_ops(n, s):
    for table in itertools.product(range(s), repeat=s**n):
        yield OpTable(n, s, table)


def kron1(mu, nu):
    s, j, k = mu.carrier_size, mu.arity, nu.arity

    def f(x):
        cols = [value(mu, [x[i * k + l] for i in range(j)]) for l in range(k)]
        return value(nu, cols)

    return from_function(j * k, s, f)


def kron2(mu, nu):
    s, j, k = mu.carrier_size, mu.arity, nu.arity

    def f(x):
        rows = [value(nu, [x[i * k + l] for l in range(k)]) for i in range(j)]
        return value(mu, rows)

    return from_function(j * k, s, f)


def commutes(mu, nu):
    """Evaluate both sides on every j x k matrix."""
    s, j, k = mu.carrier_size, mu.arity, nu.arity
    for flat in itertools.product(range(s), repeat=j * k):
        m = [[flat[i * k + l] for l in range(k)] for i in range(j)]
        lhs = value(nu, [value(mu, [m[i][l] for i in range(j)]) for l in range(k)])
        rhs = value(mu, [value(nu, m[i]) for i in range(j)])
        if lhs != rhs:
            return False
    return True


def superpose(outer, inners, m):
    s = outer.carrier_size
    return from_function(m, s, lambda a: value(outer, [value(g, a) for g in inners]))


def commutant_slice(gens, s, n):
    return sorted(op for op in all_ops(n, s) if all(commutes(op, g) for g in gens))


def naive_clone(gens, s, N):
    """Superposition closure with every known op as outer and inner, to a fixpoint."""
    ops = {n: set() for n in range(N + 1)}
    for n in range(1, N + 1):
        for i in range(n):
            ops[n].add(from_function(n, s, lambda a, i=i: a[i]))
    for g in gens:
        ops[g.arity].add(g)
    changed = True
    while changed:
        changed = False
        for k in range(N + 1):
            for outer in list(ops[k]):
                for m in range(N + 1):
                    for inners in itertools.product(sorted(ops[m]), repeat=k):
                        new = superpose(outer, inners, m)
                        if new not in ops[m]:
                            ops[m].add(new)
                            changed = True
    return {n: sorted(v) for n, v in ops.items()}


def endomorphisms(add):
    m = len(add)
    out = []
    for f in itertools.product(range(m), repeat=m):
        if all(f[add[x][y]] == add[f[x]][f[y]] for x in range(m) for y in range(m)):
            out.append(f)
    return out


def row_op(add, mul, zero, row, right=False, c=None):
    s = len(add)

    def f(x):
        acc = zero if c is None else c
        for r, xi in zip(row, x):
            acc = add[acc][mul[xi][r] if right else mul[r][xi]]
        return acc

    return from_function(len(row), s, f)
