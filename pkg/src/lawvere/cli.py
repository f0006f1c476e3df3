"""Command-line front end.

Exit codes: 0 success, 1 a requested check came out false, 2 usage or
document error, 3 a commutant slice was intractable.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import monad, rings
from .commutant import DEFAULT_NODE_BUDGET, commutant, double_commutant, theories_commute
from .documents import (
    DocumentError,
    builtin_theory,
    dumps,
    load_group,
    load_module,
    load_op,
    load_op_or_tuple,
    load_rig,
    load_theory,
    op_doc,
    op_tuple_doc,
    read_json,
    theory_doc,
)
from .errors import EnumerationTooLarge, IntractableSlice, LawvereError, enumeration_cap
from .ops import OpTable, OpTuple, commutation_witness, commutes, kron1, kron1_multi, kron2, kron2_multi
from .theories import DEFAULT_MAX_ARITY, center, equal_upto, is_commutative
from .verify import run_checks

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_INTRACTABLE = 0, 1, 2, 3


def _out(args, doc: dict, text: str) -> None:
    try:
        print(dumps(doc) if args.json else text, flush=True)
    except BrokenPipeError:
        # downstream closed the pipe (e.g. `| head`); silence the exit-time flush
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())


def _fmt_table(op: OpTable) -> str:
    return f"arity {op.arity} over {op.carrier_size}: {list(op.table)}"


def _theory_text(T) -> str:
    lines = [f"carrier {T.s}, max arity {T.max_arity}", f"arity counts {T.arity_counts()}"]
    for n in range(T.max_arity + 1):
        for op in T.ops(n):
            lines.append(f"  [{n}] {list(op.table)}")
    return "\n".join(lines)


def _theory_arg(args, path_attr: str = "theory", builtin_attr: str = "builtin"):
    N = args.arity
    path = getattr(args, path_attr, None)
    builtin = getattr(args, builtin_attr, None)
    if builtin:
        return builtin_theory(builtin, DEFAULT_MAX_ARITY if N is None else N)
    if not path:
        raise DocumentError("arguments", "give a theory file or --builtin kind:name")
    return load_theory(read_json(path), N)


def _ambient(args, s: int):
    if not getattr(args, "ambient", None):
        return None
    p = args.ambient
    N = DEFAULT_MAX_ARITY if args.arity is None else args.arity
    T = load_theory(read_json(p), N) if Path(p).exists() else builtin_theory(p, N)
    if T.s != s:
        raise DocumentError("--ambient", f"carrier {T.s} differs from {s}")
    return T


def cmd_kron(args) -> int:
    a, b = load_op_or_tuple(args.a), load_op_or_tuple(args.b)
    if isinstance(a, OpTuple) or isinstance(b, OpTuple) or args.multi:
        a = a if isinstance(a, OpTuple) else OpTuple(a.arity, (a,))
        b = b if isinstance(b, OpTuple) else OpTuple(b.arity, (b,))
        prod = (kron2_multi if args.second else kron1_multi)(a, b)
        doc = {"product": op_tuple_doc(prod)}
        text = "\n".join(_fmt_table(c) for c in prod.components)
        if args.both:
            same = kron1_multi(a, b) == kron2_multi(a, b)
            doc["commute"] = same
            text += f"\ncommute: {str(same).lower()}"
        _out(args, doc, text)
        return EXIT_OK
    prod = (kron2 if args.second else kron1)(a, b)
    doc = {"product": op_doc(prod)}
    text = _fmt_table(prod)
    if args.both:
        witness = commutation_witness(a, b)
        doc["commute"] = witness is None
        text += f"\ncommute: {str(witness is None).lower()}"
        if witness is not None:
            doc["witness"] = witness
            text += f"\nwitness: {witness}"
    _out(args, doc, text)
    return EXIT_OK


def cmd_commutes(args) -> int:
    a, b = load_op(read_json(args.a)), load_op(read_json(args.b))
    witness = commutation_witness(a, b)
    ok = witness is None
    assert ok == commutes(a, b)
    doc = {"commute": ok}
    text = f"commute: {str(ok).lower()}"
    if witness is not None:
        doc["witness"] = witness
        text += f"\nwitness: {witness}"
    _out(args, doc, text)
    return EXIT_OK if ok else EXIT_FALSE


def _commutant_kwargs(args) -> dict:
    return {"cap": args.cap, "threads": args.threads, "node_budget": args.node_budget, "strategy": args.strategy}


def cmd_commutant(args) -> int:
    T = _theory_arg(args)
    N = args.arity if args.arity is not None else T.max_arity
    amb = _ambient(args, T.s)
    fn = double_commutant if args.double else commutant
    C = fn(T.generators, T.s, N, amb, **_commutant_kwargs(args))
    doc = theory_doc(C)
    doc["arity_bound"] = N
    _out(args, doc, _theory_text(C))
    return EXIT_OK


def cmd_center(args) -> int:
    T = _theory_arg(args)
    Z = center(T)
    _out(args, theory_doc(Z), _theory_text(Z))
    return EXIT_OK


def cmd_is_commutative(args) -> int:
    T = _theory_arg(args)
    ok = is_commutative(T, mode=args.mode)
    _out(args, {"commutative": ok, "mode": args.mode, "arity_bound": T.max_arity},
         f"commutative (up to arity {T.max_arity}, {args.mode}): {str(ok).lower()}")
    return EXIT_OK if ok else EXIT_FALSE


def cmd_is_balanced(args) -> int:
    T = _theory_arg(args)
    N = T.max_arity
    amb = _ambient(args, T.s)
    kw = _commutant_kwargs(args)
    C = commutant(T.generators, T.s, N, amb, **kw)
    D = commutant(C.generators, T.s, N, amb, **kw)
    balanced, saturated = equal_upto(T, C, N), equal_upto(T, D, N)
    doc = {"balanced": balanced, "saturated": saturated, "arity_bound": N,
           "arity_counts": T.arity_counts(), "commutant_counts": C.arity_counts(),
           "double_commutant_counts": D.arity_counts()}
    text = (f"up to arity {N}: balanced {str(balanced).lower()}, saturated {str(saturated).lower()}\n"
            f"counts {T.arity_counts()}, commutant {C.arity_counts()}, double commutant {D.arity_counts()}")
    _out(args, doc, text)
    return EXIT_OK if balanced else EXIT_FALSE


def _element_text(e: monad.FreeElement) -> str:
    return f"op {list(e.op.table)} (arity {e.op.arity}) anchor {list(e.anchor)} in T({e.size})"


def cmd_monad(args) -> int:
    T = _theory_arg(args)
    if args.action == "apply":
        elems = monad.monad_apply(T, args.size)
        _out(args, {"elements": [e.to_doc() for e in elems]}, "\n".join(_element_text(e) for e in elems))
        return EXIT_OK
    if args.action == "unit":
        e = monad.unit(T, args.size, args.point)
        _out(args, e.to_doc(), _element_text(e))
        return EXIT_OK
    if args.action == "mult":
        doc = read_json(args.term)
        outer = load_op(doc["op"], T.s, "$.op")
        inner = [monad.FreeElement(load_op(a["op"], T.s, f"$.args[{i}].op"), tuple(a["anchor"]), a["size"], T)
                 for i, a in enumerate(doc.get("args", []))]
        e = monad.mult(T, outer, inner) if inner else monad.mult_const(T, outer, doc["size"])
        _out(args, e.to_doc(), _element_text(e))
        return EXIT_OK
    if args.action == "kock":
        left = monad.monad_apply(T, args.v)[args.left]
        right = monad.monad_apply(T, args.w)[args.right]
        a, b = monad.kock_kron1(left, right), monad.kock_kron2(left, right)
        same = monad.same(a, b)
        _out(args, {"first": a.to_doc(), "second": b.to_doc(), "equal": same},
             f"first:  {_element_text(a)}\nsecond: {_element_text(b)}\nequal: {str(same).lower()}")
        return EXIT_OK
    if args.action == "check":
        ok = monad.monad_is_commutative(T, args.bound)
        _out(args, {"commutative": ok, "bound": args.bound}, f"commutative monad (sets up to {args.bound}): {str(ok).lower()}")
        return EXIT_OK if ok else EXIT_FALSE
    if args.action == "commute":
        if not args.other:
            raise DocumentError("--other", "needed for monad commute")
        N = T.max_arity
        U = load_theory(read_json(args.other), N) if Path(args.other).exists() else builtin_theory(args.other, N)
        ok = monad.monads_commute(T.generators, U.generators, T.s, args.bound)
        direct = theories_commute(T.generators, U.generators, T.s)
        _out(args, {"commute": ok, "theories_commute": direct, "bound": args.bound},
             f"monads commute (sets up to {args.bound}): {str(ok).lower()}; theories commute: {str(direct).lower()}")
        return EXIT_OK if ok else EXIT_FALSE
    raise DocumentError("action", f"unknown monad action {args.action!r}")


def _load_ring(target: str):
    doc = read_json(target) if Path(target).exists() else target.removeprefix("ring:")
    return rings.as_ring(load_rig(doc))


def _elements(text: str | None) -> list[int]:
    if not text:
        return []
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise DocumentError("--elements", "expected comma-separated element indices") from None


def _subring_doc(S) -> dict:
    return {"members": list(S.members), "labels": [S.ambient.label(m) for m in S.members], "size": len(S)}


def cmd_ring(args) -> int:
    act = args.action
    if act == "end":
        G = load_group(read_json(args.target) if Path(args.target).exists() else args.target)
        E = rings.end_ring(G, method=args.method)
        doc = {"size": len(E), "method": E.method, "maps": [list(f) for f in E.maps]}
        _out(args, doc, f"End({G.name or 'M'}) has {len(E)} elements ({E.method})")
        return EXIT_OK
    if act in ("module-commutant", "double", "double-property"):
        A = load_module(read_json(args.target) if Path(args.target).exists() else args.target)
        E = rings.end_ring(A.group)
        if act == "module-commutant":
            S = rings.module_commutant(A, E)
            _out(args, _subring_doc(S), f"End_R(M): {len(S)} elements {list(S.members)}")
            return EXIT_OK
        S = rings.double_centralizer(A, E)
        prop = rings.has_double_centralizer_property(A, E)
        doc = _subring_doc(S)
        doc["double_centralizer_property"] = prop
        _out(args, doc, f"double centralizer: {len(S)} elements; property holds: {str(prop).lower()}")
        return EXIT_OK if (act == "double" or prop) else EXIT_FALSE
    U = _load_ring(args.target)
    if act == "center":
        S = rings.ring_center(U)
        _out(args, _subring_doc(S), f"center: {len(S)} elements {list(S.members)}")
        return EXIT_OK
    if act == "centralizer":
        S = rings.centralizer(U, _elements(args.elements))
        _out(args, _subring_doc(S), f"centralizer: {len(S)} elements {list(S.members)}")
        return EXIT_OK
    if act == "regular-opposite":
        w = rings.regular_commutant_is_opposite(U)
        doc = {"holds": w.holds, "centralizer_size": w.centralizer_size, "right_multiplications": list(w.right_mults)}
        if w.reason:
            doc["reason"] = w.reason
        _out(args, doc, f"commutant of the regular action is the opposite ring: {str(w.holds).lower()} "
                        f"(centralizer size {w.centralizer_size}){' - ' + w.reason if w.reason else ''}")
        return EXIT_OK if w.holds else EXIT_FALSE
    if act == "maximal":
        S = rings.generated_subring(U, _elements(args.elements))
        ok = rings.is_maximal_commutative(U, S)
        doc = _subring_doc(S)
        doc["maximal_commutative"] = ok
        _out(args, doc, f"subring {list(S.members)} maximal commutative: {str(ok).lower()}")
        return EXIT_OK if ok else EXIT_FALSE
    raise DocumentError("action", f"unknown ring action {act!r}")


def cmd_verify(args) -> int:
    results = run_checks(args.filter, args.corrupt_builtin)
    doc = {"checks": [r.to_doc() for r in results]}
    text = "\n".join(f"{'PASS' if r.ok else 'FAIL'} {r.name}: {r.details}" for r in results)
    _out(args, doc, text or "no checks matched")
    return EXIT_OK if results and all(r.ok for r in results) else EXIT_FALSE


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON")
    common.add_argument("--threads", type=int, default=1, help="parallel arity slices")
    common.add_argument("--cap", type=int, default=None,
                        help="enumeration cap (default $CLONE_COMMUTANT_CAP or 2**20)")

    theory = argparse.ArgumentParser(add_help=False)
    theory.add_argument("theory", nargs="?", help="theory document")
    theory.add_argument("--builtin", help="builtin theory kind:name, e.g. mat:Z4, mat_aff:bool2, full:2")
    theory.add_argument("--arity", type=int, default=None, help="arity bound N")

    search = argparse.ArgumentParser(add_help=False)
    search.add_argument("--ambient", help="ambient theory (file or builtin)")
    search.add_argument("--strategy", choices=("auto", "exhaustive", "backtrack"), default="auto")
    search.add_argument("--node-budget", type=int, default=DEFAULT_NODE_BUDGET)

    p = argparse.ArgumentParser(prog="lawvere", description="Commutants and Kronecker products of finitary operations.")
    sub = p.add_subparsers(dest="command", required=True)

    k = sub.add_parser("kron", parents=[common], help="Kronecker product of two operations")
    k.add_argument("a")
    k.add_argument("b")
    k.add_argument("--second", action="store_true", help="second product instead of the first")
    k.add_argument("--multi", action="store_true", help="treat inputs as operation tuples")
    k.add_argument("--both", action="store_true", help="also report whether the pair commutes")
    k.set_defaults(fn=cmd_kron)

    c = sub.add_parser("commutes", parents=[common], help="whether two operations commute")
    c.add_argument("a")
    c.add_argument("b")
    c.set_defaults(fn=cmd_commutes)

    cm = sub.add_parser("commutant", parents=[common, theory, search], help="commutant of a theory")
    cm.add_argument("--double", action="store_true", help="double commutant")
    cm.set_defaults(fn=cmd_commutant)

    ce = sub.add_parser("center", parents=[common, theory], help="center of a theory")
    ce.set_defaults(fn=cmd_center)

    ic = sub.add_parser("is-commutative", parents=[common, theory], help="commutativity of a theory")
    ic.add_argument("--mode", choices=("generators", "all"), default="generators")
    ic.set_defaults(fn=cmd_is_commutative)

    ib = sub.add_parser("is-balanced", parents=[common, theory, search], help="balanced and saturated verdicts")
    ib.set_defaults(fn=cmd_is_balanced)

    mo = sub.add_parser("monad", parents=[common, theory], help="the finitary monad of a theory")
    mo.add_argument("action", choices=("apply", "unit", "mult", "kock", "check", "commute"))
    mo.add_argument("--size", type=int, default=1, help="|X|")
    mo.add_argument("--point", type=int, default=0)
    mo.add_argument("--term", help="JSON file {op, args:[{op, anchor, size}]} for mult")
    mo.add_argument("--v", type=int, default=1)
    mo.add_argument("--w", type=int, default=1)
    mo.add_argument("--left", type=int, default=0, help="index into T(V)")
    mo.add_argument("--right", type=int, default=0, help="index into T(W)")
    mo.add_argument("--bound", type=int, default=2)
    mo.add_argument("--other", help="second theory for commute (file or builtin)")
    mo.set_defaults(fn=cmd_monad)

    r = sub.add_parser("ring", parents=[common], help="ring and module computations")
    r.add_argument("action", choices=("end", "center", "centralizer", "module-commutant", "double",
                                       "double-property", "regular-opposite", "maximal"))
    r.add_argument("target", help="ring/group/module: builtin name (e.g. ring:M2_F2, Z2^3, matrix:M2_F2) or file")
    r.add_argument("--elements", help="comma-separated element indices")
    r.add_argument("--method", choices=("auto", "structural", "enumerate"), default="auto")
    r.set_defaults(fn=cmd_ring)

    v = sub.add_parser("verify-examples", parents=[common], help="run the built-in example checks")
    v.add_argument("--filter", help="only checks whose name contains this")
    v.add_argument("--corrupt-builtin", help=argparse.SUPPRESS)
    v.set_defaults(fn=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if getattr(args, "cap", None) is not None:
        args.cap = enumeration_cap(args.cap)
    if not hasattr(args, "arity"):
        args.arity = None
    try:
        return args.fn(args)
    except (IntractableSlice, EnumerationTooLarge) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTRACTABLE
    except (DocumentError, LawvereError, ValueError, KeyError, OSError,
            json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
