"""Named end-to-end checks of the worked examples, used by ``lawvere verify-examples``."""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import monad, rings
from .commutant import commutant, commutant_slice, double_commutant, theories_commute
from .documents import BOOLEAN_OPS
from .ops import OpTable, commutes, kron1, kron2, transpose_vars, tuples
from .rigs import (
    RMatrix,
    Rig,
    bool2,
    f4,
    mat_aff_theory,
    mat_theory,
    matrix_kronecker,
    op_of_row,
    opposite,
    pointed_mod_theory,
    upper_triangular_f2,
    zmod,
)
from .theories import clone_generate, equal_upto, full_theory, is_commutative, is_subtheory, projections_theory

AND, OR, NOT = BOOLEAN_OPS["and"], BOOLEAN_OPS["or"], BOOLEAN_OPS["not"]
ZERO, ONE = BOOLEAN_OPS["const0"], BOOLEAN_OPS["const1"]


@dataclass
class CheckResult:
    name: str
    ok: bool
    details: str
    seconds: float

    def to_doc(self) -> dict:
        return {"name": self.name, "status": "pass" if self.ok else "fail", "details": self.details,
                "seconds": round(self.seconds, 3)}


def default_zoo() -> dict[str, Rig]:
    return {"Z2": zmod(2), "Z3": zmod(3), "Z4": zmod(4), "bool2": bool2(), "F4": f4(), "UT2_F2": upper_triangular_f2()}


def corrupt(R: Rig) -> Rig:
    """A deliberately wrong copy of R (addition replaced by the cyclic group law), for negative controls."""
    add = [[(a + b) % R.size for b in range(R.size)] for a in range(R.size)]
    return Rig(R.size, add, R.mul, R.zero, R.one, R.labels, R.name)


def _diff(label: str, got, want) -> str:
    return f"{label}: got {got}, expected {want}"


def slice_diff(A, B, N: int) -> str:
    """First differing slice between two theories, or an empty string."""
    for n in range(N + 1):
        a, b = set(A.ops(n)), set(B.ops(n))
        if a != b:
            extra = sorted(a - b)[:1]
            missing = sorted(b - a)[:1]
            return (f"arity {n}: {len(a - b)} extra {[list(o.table) for o in extra]}, "
                    f"{len(b - a)} missing {[list(o.table) for o in missing]}")
    return ""


def check_kron_bridge(zoo) -> tuple[bool, str]:
    pairs = 0
    for name in ("Z4", "bool2"):
        R = zoo[name]
        rows = [r for j in range(3) for r in itertools.product(range(R.size), repeat=j)]
        for rho in rows:
            for sigma in rows:
                lhs = op_of_row(R, matrix_kronecker(RMatrix.row(R, sigma), RMatrix.row(R, rho)).entries[0])
                rhs = kron1(op_of_row(R, rho), op_of_row(R, sigma))
                pairs += 1
                if lhs != rhs:
                    return False, f"{name}: rows {rho}, {sigma} disagree"
    return True, f"{pairs} row pairs agree"


def check_mat_commutative(zoo) -> tuple[bool, str]:
    want = {"Z2": True, "Z3": True, "Z4": True, "bool2": True, "F4": True, "UT2_F2": False}
    got = {n: is_commutative(mat_theory(zoo[n], 2)) for n in want}
    return got == want, _diff("is_commutative", got, want)


def check_mat2_balanced(zoo) -> tuple[bool, str]:
    C = commutant([OR, ZERO], 2, 3)
    M = mat_theory(zoo["bool2"], 3)
    D = double_commutant([OR, ZERO], 2, 3)
    ok = C.arity_counts() == [1, 2, 4, 8] and equal_upto(C, M, 3) and equal_upto(C, D, 3)
    details = f"commutant counts {C.arity_counts()}, Mat_2 counts {M.arity_counts()}, double counts {D.arity_counts()}"
    diff = slice_diff(C, M, 3) or slice_diff(C, D, 3)
    return ok, details + (f"; diff {diff}" if diff else "")


def check_mat_op(zoo) -> tuple[bool, str]:
    details = []
    ok = True
    for name in ("Z2", "Z3", "Z4"):
        R = zoo[name]
        for src, dst in ((R, opposite(R)), (opposite(R), R)):
            C = commutant(mat_theory(src, 2).generators, R.size, 2)
            good = equal_upto(C, mat_theory(dst, 2), 2)
            ok &= good
            details.append(f"{name}: {C.arity_counts()} {'=' if good else '!='} {mat_theory(dst, 2).arity_counts()}"
                           + ("" if good else f" ({slice_diff(C, mat_theory(dst, 2), 2)})"))
    return ok, "; ".join(details)


def check_affine(zoo) -> tuple[bool, str]:
    B = zoo["bool2"]
    C = commutant(mat_aff_theory(B, 3).generators, 2, 3)
    target = clone_generate([OR, ZERO, ONE], 2, 3)
    P = commutant(pointed_mod_theory(B, 3).generators, 2, 3)
    A = mat_aff_theory(B, 3)
    ok = equal_upto(C, target, 3) and C.arity_counts() == [2, 3, 5, 9] and equal_upto(P, A, 3)
    diff = slice_diff(C, target, 3) or slice_diff(P, A, 3)
    return ok, (f"affine commutant {C.arity_counts()} vs clone(or,0,1) {target.arity_counts()}; "
                f"pointed commutant {P.arity_counts()} vs affine {A.arity_counts()}"
                + (f"; diff {diff}" if diff else ""))


def check_empty(zoo) -> tuple[bool, str]:
    C = commutant([], 2, 3)
    ok = C.arity_counts() == [2, 4, 16, 256] and equal_upto(C, full_theory(2, 3), 3)
    return ok, _diff("counts", C.arity_counts(), [2, 4, 16, 256])


def galois_family() -> list[tuple[OpTable, ...]]:
    binary = [OpTable(2, 2, t) for t in itertools.product((0, 1), repeat=4)]
    return [()] + [(a,) for a in binary] + list(itertools.combinations(binary, 2))


def check_galois(zoo) -> tuple[bool, str]:
    fam = galois_family()
    T, C1, C2, C3 = [], [], [], []
    for gens in fam:
        T.append(clone_generate(gens, 2, 2))
        c1 = commutant(gens, 2, 2, check=False)
        c2 = commutant(c1.generators, 2, 2, check=False)
        c3 = commutant(c2.generators, 2, 2, check=False)
        C1.append(c1), C2.append(c2), C3.append(c3)
    for i in range(len(fam)):
        if not is_subtheory(T[i], C2[i], 2):
            return False, f"T not inside its double commutant for generators {fam[i]}"
        if not equal_upto(C1[i], C3[i], 2):
            return False, f"single and triple commutants differ for generators {fam[i]}"
    pairs = 0
    for i in range(len(fam)):
        for j in range(len(fam)):
            if is_subtheory(T[i], T[j], 2):
                pairs += 1
                if not is_subtheory(C1[j], C1[i], 2):
                    return False, f"antitonicity fails for {fam[i]} inside {fam[j]}"
    return True, f"{len(fam)} generator sets ({sum(len(g) == 2 for g in fam)} pairs), {pairs} inclusions"


def symmetry_pairs(seed: int = 7, random_pairs: int = 1000):
    small = [OpTable(n, 2, t) for n in range(3) for t in itertools.product((0, 1), repeat=2**n)]
    for a in small:
        for b in small:
            yield a, b
    rng = np.random.default_rng(seed)
    for _ in range(random_pairs):
        j, k = (int(x) for x in rng.integers(0, 3, size=2))
        yield (OpTable(j, 3, tuple(rng.integers(0, 3, size=3**j).tolist())),
               OpTable(k, 3, tuple(rng.integers(0, 3, size=3**k).tolist())))


def check_symmetry(zoo) -> tuple[bool, str]:
    count = 0
    for a, b in symmetry_pairs():
        count += 1
        if commutes(a, b) != commutes(b, a):
            return False, f"asymmetric pair {a}, {b}"
        if kron2(a, b) != transpose_vars(kron1(b, a), b.arity, a.arity):
            return False, f"transposition law fails for {a}, {b}"
    return True, f"{count} pairs"


def bridge_theories(zoo) -> dict[str, object]:
    B = zoo["bool2"]
    return {
        "Mat_2": mat_theory(B, 2),
        "Mat_2^aff": mat_aff_theory(B, 2),
        "clone(and)": clone_generate([AND], 2, 2),
        "clone(or)": clone_generate([OR], 2, 2),
        "clone(and,not)": clone_generate([AND, NOT], 2, 2),
        "projections": projections_theory(2, 2),
    }


def check_monad_bridge(zoo) -> tuple[bool, str]:
    ths = bridge_theories(zoo)
    for a, b in itertools.product(ths, repeat=2):
        ga, gb = ths[a].generators, ths[b].generators
        if theories_commute(ga, gb, 2) != monad.monads_commute(ga, gb, 2, 2):
            return False, f"theory and monad commutation differ for {a}, {b}"
    for name, T in ths.items():
        if is_commutative(T) != monad.monad_is_commutative(T, 2):
            return False, f"commutativity differs for {name}"
    return True, f"{len(ths) ** 2} ordered pairs and {len(ths)} theories agree"


def check_free_elements(zoo) -> tuple[bool, str]:
    count = 0
    for n in range(3):
        for table in itertools.product((0, 1), repeat=2**n):
            op = OpTable(n, 2, table)
            for m in range(1 if n else 0, 4):
                for x in itertools.product(range(m), repeat=n):
                    e = monad.canonicalize(op, x, m)
                    if monad.normal_form(e) != monad.normal_form(monad.FreeElement(op, x, m)):
                        return False, f"canonical form differs for {op} with anchor {x}"
                    count += 1
    T = full_theory(2, 3)
    laws = 0
    rng = np.random.default_rng(11)
    for m in range(1, 4):
        for e in monad.monad_apply(T, m):
            u = monad.unit(T, m, 0)
            left = monad.mult(T, u.op, [e])
            right = monad.mult(T, e.op, [monad.unit(T, m, a) for a in e.anchor]) if e.op.arity else \
                monad.mult_const(T, e.op, m)
            if not (monad.same(left, e) and monad.same(right, e)):
                return False, f"unit law fails at {e}"
            laws += 1
    for _ in range(300):
        m = int(rng.integers(1, 4))
        outer = _random_op(rng, 2, 1, 2)
        inner = []
        for _ in range(outer.arity):
            o = _random_op(rng, 2, 1, 2)
            inner.append((o, [_random_element(rng, T, m) for _ in range(o.arity)]))
        op2, args2 = monad.flatten(outer, inner)
        one = monad.mult(T, op2, args2)
        two = monad.mult(T, outer, [monad.mult(T, o, a) for o, a in inner])
        if not monad.same(one, two):
            return False, "associativity fails"
        laws += 1
    return True, f"{count} triples, {laws} law instances"


def _random_op(rng, s: int, lo: int, hi: int) -> OpTable:
    n = int(rng.integers(lo, hi + 1))
    return OpTable(n, s, tuple(rng.integers(0, s, size=s**n).tolist()))


def _random_element(rng, T, m: int) -> monad.FreeElement:
    elems = monad.monad_apply(T, m)
    return elems[int(rng.integers(0, len(elems)))]


def check_rings(zoo) -> tuple[bool, str]:
    U = rings.builtin_ring("M2_F2")
    details = []
    center = rings.ring_center(U).members
    ok = center == (U.zero, U.one)
    details.append(f"center {center}")
    cs = rings.centralizer(U, [U.zero, U.one])
    ok &= len(cs) == 16
    A = rings.matrix_action(2, 2)
    E = rings.end_ring(A.group)
    mc = rings.module_commutant(A, E)
    scalars = (E.ring.zero, E.ring.one)
    dc = rings.double_centralizer(A, E)
    ok &= mc.members == scalars and len(dc) == 16 and rings.has_double_centralizer_property(A, E)
    details.append(f"End_R(M) size {len(mc)}, double centralizer size {len(dc)}")
    w4 = rings.regular_commutant_is_opposite(rings.builtin_ring("Z4"))
    wu = rings.regular_commutant_is_opposite(rings.builtin_ring("UT2_F2"))
    ok &= w4.holds and wu.holds and wu.centralizer_size == 8
    details.append(f"opposite: Z4 {w4.holds}, UT2_F2 {wu.holds} ({wu.centralizer_size})")
    diag = rings.generated_subring(U, [_matrix_index(U, "1,0;0,0")])
    maximal = rings.is_maximal_commutative(U, diag)
    selfc = rings.centralizer(U, diag.members).members == diag.members
    ok &= len(diag) == 4 and maximal and selfc
    details.append(f"diagonal maximal {maximal}, self-centralizing {selfc}")
    return bool(ok), "; ".join(details)


def _matrix_index(U: Rig, label: str) -> int:
    return U.labels.index(label)


def oracle_cases(zoo):
    B = zoo["bool2"]
    for gens in galois_family():
        yield 2, gens, 3
    named = [
        (OR, ZERO), (AND, NOT), (BOOLEAN_OPS["maj"],), (BOOLEAN_OPS["xor"],),
        tuple(mat_aff_theory(B, 3).generators), tuple(pointed_mod_theory(B, 3).generators),
    ]
    for gens in named:
        yield 2, gens, 3
    Z3 = zoo["Z3"]
    yield 3, tuple(mat_theory(Z3, 2).generators), 2
    yield 3, tuple(mat_aff_theory(Z3, 2).generators), 2
    yield 3, (), 2
    rng = np.random.default_rng(5)
    for _ in range(12):
        yield 3, (_random_op(rng, 3, 1, 2),), 2


def check_oracle(zoo) -> tuple[bool, str]:
    runs = 0
    for s, gens, N in oracle_cases(zoo):
        for n in range(N + 1):
            a = commutant_slice(gens, s, n, strategy="exhaustive")
            b = commutant_slice(gens, s, n, strategy="backtrack")
            if a != b:
                return False, f"strategies differ for s={s}, n={n}, generators {gens}"
            runs += 1
    return True, f"{runs} slices agree"


CHECKS: list[tuple[str, Callable]] = [
    ("kron-bridge", check_kron_bridge),
    ("mat-commutative-iff", check_mat_commutative),
    ("mat2-balanced", check_mat2_balanced),
    ("mat-op-commutants", check_mat_op),
    ("affine-commutant", check_affine),
    ("empty-commutant", check_empty),
    ("galois", check_galois),
    ("symmetry-transpose", check_symmetry),
    ("monad-bridge", check_monad_bridge),
    ("free-elements", check_free_elements),
    ("rings", check_rings),
    ("oracle-equivalence", check_oracle),
]


def run_checks(filter: str | None = None, corrupt_rig: str | None = None) -> list[CheckResult]:
    """Run the named checks whose name contains ``filter``; ``corrupt_rig`` swaps in a broken builtin."""
    zoo = default_zoo()
    if corrupt_rig is not None:
        zoo[corrupt_rig] = corrupt(zoo[corrupt_rig])
    out = []
    for name, fn in CHECKS:
        if filter and filter not in name:
            continue
        t = time.perf_counter()
        try:
            ok, details = fn(zoo)
        except Exception as exc:  # a crashing check is a failing check
            ok, details = False, f"{type(exc).__name__}: {exc}"
        out.append(CheckResult(name, ok, details, time.perf_counter() - t))
    return out
