"""The finitary monad of a concrete theory, evaluated on finite sets.

An element of T(X) for X = {0..m-1} is a triple [op, n, x]: an n-ary
operation of the theory together with an anchor x: {0..n-1} -> X saying which
element of X feeds each variable. Triples are identified when they induce the
same m-ary operation (the "full-support normal form" obtained by substituting
the projections named by the anchor), which is how equality is decided here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import ArityMismatch, CarrierMismatch
from .ops import OpTable, kron1, kron2, projection, superpose
from .theories import Theory, clone_generate, contains


@dataclass(frozen=True)
class FreeElement:
    """``[op, op.arity, anchor]`` as an element of T(X) with |X| = ``size``."""

    op: OpTable
    anchor: tuple[int, ...]
    size: int
    theory: Theory | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        anchor = tuple(int(a) for a in self.anchor)
        object.__setattr__(self, "anchor", anchor)
        if len(anchor) != self.op.arity:
            raise ArityMismatch(f"anchor of length {len(anchor)} for an op of arity {self.op.arity}")
        for a in anchor:
            if not 0 <= a < self.size:
                raise ValueError(f"anchor entry {a} outside a set of size {self.size}")
        T = self.theory
        if T is not None and self.op.arity <= T.max_arity and not contains(T, self.op):
            raise ValueError("operation does not belong to the theory")

    @property
    def support_arity(self) -> int:
        return self.op.arity

    def normal_form(self) -> OpTable:
        return normal_form(self)

    def to_doc(self) -> dict:
        return {"op": self.op.to_doc(), "anchor": list(self.anchor), "size": self.size}


def normal_form(e: FreeElement) -> OpTable:
    """The |X|-ary operation ``a -> op(a[x(0)], ..., a[x(n-1)])``."""
    s = e.op.carrier_size
    inners = [projection(e.size, a, s) for a in e.anchor]
    return superpose(e.op, inners, arity=e.size)


def same(a: FreeElement, b: FreeElement) -> bool:
    if a.size != b.size:
        return False
    return normal_form(a) == normal_form(b)


def canonicalize(op: OpTable, anchor: Sequence[int], size: int, theory: Theory | None = None) -> FreeElement:
    """Factor the anchor through its image.

    ``x = x' . e`` with e onto {0..n'-1} and x' injective and increasing; the
    op is pulled back along e by identifying variables. Variables that do not
    occur are kept: no dummy elimination happens here.
    """
    anchor = tuple(int(a) for a in anchor)
    if len(anchor) != op.arity:
        raise ArityMismatch(f"anchor of length {len(anchor)} for an op of arity {op.arity}")
    image = tuple(sorted(set(anchor)))
    if image == anchor:
        return FreeElement(op, anchor, size, theory)
    pos = {a: i for i, a in enumerate(image)}
    s = op.carrier_size
    k = len(image)
    merged = superpose(op, [projection(k, pos[a], s) for a in anchor], arity=k)
    return FreeElement(merged, image, size, theory)


def _check_size(T: Theory, m: int) -> None:
    if not 0 <= m <= T.max_arity:
        raise ArityMismatch(f"set size {m} above the theory's arity bound {T.max_arity}")


def monad_apply(T: Theory, m: int) -> list[FreeElement]:
    """T(X) for |X| = m: one element per m-ary operation, anchored by the identity."""
    _check_size(T, m)
    ident = tuple(range(m))
    return [FreeElement(op, ident, m, T) for op in T.ops(m)]


def unit(T: Theory, size: int, x: int) -> FreeElement:
    if T.max_arity < 1:
        raise ArityMismatch("the unit needs unary operations")
    return FreeElement(projection(1, 0, T.s), (x,), size, T)


def fmap(T: Theory, f: Sequence[int], target_size: int, e: FreeElement) -> FreeElement:
    """T(f) for f: X -> Y given as the list of images; relabels the anchor and recanonicalizes."""
    if len(f) != e.size:
        raise ArityMismatch(f"map defined on {len(f)} points applied to an element over {e.size}")
    for y in f:
        if not 0 <= y < target_size:
            raise ValueError(f"map value {y} outside a set of size {target_size}")
    return canonicalize(e.op, [f[a] for a in e.anchor], target_size, T)


def mult(T: Theory, op: OpTable, args: Sequence[FreeElement]) -> FreeElement:
    """Flatten ``[op, n, args]`` in T(T(X)) to T(X): substitute the args' operations into op."""
    if len(args) != op.arity:
        raise ArityMismatch(f"op of arity {op.arity} with {len(args)} arguments")
    sizes = {a.size for a in args}
    if len(sizes) > 1:
        raise ArityMismatch(f"arguments over sets of sizes {sorted(sizes)}")
    if not args:
        raise ArityMismatch("a nullary outer op needs mult_const with an explicit set size")
    m = sizes.pop()
    if any(a.op.carrier_size != op.carrier_size for a in args):
        raise CarrierMismatch("arguments over a different carrier")
    full = superpose(op, [normal_form(a) for a in args], arity=m)
    return _from_full(T, full, m)


def mult_const(T: Theory, op: OpTable, size: int) -> FreeElement:
    """mult for a nullary outer op: the constant, as an element of T(X)."""
    return _from_full(T, superpose(op, [], arity=size), size)


def _from_full(T: Theory | None, full: OpTable, m: int) -> FreeElement:
    theory = T if T is not None and m <= T.max_arity else None
    return FreeElement(full, tuple(range(m)), m, theory)


def flatten(op: OpTable, inner: Sequence[tuple[OpTable, Sequence[FreeElement]]]) -> tuple[OpTable, list[FreeElement]]:
    """Multiplication one level up: turn ``[op, (op_i, args_i)_i]`` in T(T(T X))
    into ``[op', args']`` in T(T X), where args' concatenates the args_i and
    op' substitutes each op_i on its own block of variables."""
    if len(inner) != op.arity:
        raise ArityMismatch(f"op of arity {op.arity} with {len(inner)} inner terms")
    s = op.carrier_size
    total = sum(o.arity for o, _ in inner)
    subs, args, offset = [], [], 0
    for o, a in inner:
        if len(a) != o.arity:
            raise ArityMismatch("inner op and argument list differ in length")
        block = [projection(total, offset + i, s) for i in range(o.arity)]
        subs.append(superpose(o, block, arity=total))
        args.extend(a)
        offset += o.arity
    return superpose(op, subs, arity=total), args


def _pair_size(a: FreeElement, b: FreeElement) -> int:
    return a.size * b.size


def kock_kron1(a: FreeElement, b: FreeElement) -> FreeElement:
    """First product T(V) x T(W) -> T(V x W); (v, w) is element v*|W| + w."""
    return FreeElement(kron1(normal_form(a), normal_form(b)), tuple(range(_pair_size(a, b))), _pair_size(a, b))


def kock_kron2(a: FreeElement, b: FreeElement) -> FreeElement:
    return FreeElement(kron2(normal_form(a), normal_form(b)), tuple(range(_pair_size(a, b))), _pair_size(a, b))


def kock_pair_commutes(a: FreeElement, b: FreeElement) -> bool:
    return same(kock_kron1(a, b), kock_kron2(a, b))


def monad_is_commutative(T: Theory, bound: int = 2) -> bool:
    """The two Kock products agree on T(V) x T(W) for all |V|, |W| <= bound."""
    _check_size(T, bound)
    return _all_pairs_commute(T, T, bound)


def monads_commute(gens_a: Sequence[OpTable], gens_b: Sequence[OpTable], s: int, bound: int = 2) -> bool:
    """The Kock products of the two generated monads agree on T_A(V) x T_B(W), |V|, |W| <= bound."""
    A = clone_generate(gens_a, s, bound)
    B = clone_generate(gens_b, s, bound)
    return _all_pairs_commute(A, B, bound)


def _all_pairs_commute(A: Theory, B: Theory, bound: int) -> bool:
    for v in range(bound + 1):
        for w in range(bound + 1):
            for a in monad_apply(A, v):
                for b in monad_apply(B, w):
                    if not kock_pair_commutes(a, b):
                        return False
    return True
