"""JSON documents for operations, rigs, groups, module actions and theories, plus the builtin registry."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .ops import Carrier, OpTable, OpTuple
from .rigs import Rig, builtin_rig, mat_aff_theory, mat_theory, opposite, pointed_mod_theory
from .rings import (
    FinAbGroup,
    ModuleAction,
    builtin_group,
    builtin_ring,
    cyclic_group,
    matrix_action,
    regular_action,
    scalar_action,
)
from .theories import DEFAULT_MAX_ARITY, Theory, clone_generate, full_theory, projections_theory


class DocumentError(ValueError):
    """A malformed document; ``where`` names the file position or field path."""

    def __init__(self, where: str, msg: str):
        super().__init__(f"{where}: {msg}")
        self.where = where


def read_json(path: str | Path) -> Any:
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{path}:{exc.lineno}:{exc.colno}", exc.msg) from None


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2, sort_keys=True)


def _field(doc: dict, key: str, where: str, kind=None):
    if not isinstance(doc, dict):
        raise DocumentError(where, "expected an object")
    if key not in doc:
        raise DocumentError(f"{where}.{key}", "missing field")
    value = doc[key]
    if kind is not None and not isinstance(value, kind):
        raise DocumentError(f"{where}.{key}", f"expected {getattr(kind, '__name__', kind)}")
    return value


# --- carriers and operations ---------------------------------------------------


def load_carrier(value, where: str = "carrier") -> Carrier:
    try:
        if isinstance(value, int) and not isinstance(value, bool):
            return Carrier(value)
        if isinstance(value, list):
            return Carrier(len(value), tuple(value))
    except ValueError as exc:
        raise DocumentError(where, str(exc)) from None
    raise DocumentError(where, "expected a size or a list of labels")


def carrier_doc(c: Carrier):
    return list(c.labels) if c.labels else c.size


def load_op(doc: dict, s: int | None = None, where: str = "$") -> OpTable:
    if s is None:
        s = load_carrier(_field(doc, "carrier", where), f"{where}.carrier").size
    elif "carrier" in doc and load_carrier(doc["carrier"], f"{where}.carrier").size != s:
        raise DocumentError(f"{where}.carrier", f"expected carrier of size {s}")
    arity = _field(doc, "arity", where, int)
    table = _field(doc, "table", where, list)
    try:
        return OpTable(arity, s, tuple(table))
    except (ValueError, TypeError) as exc:
        raise DocumentError(f"{where}.table", str(exc)) from None


def op_doc(op: OpTable, with_carrier: bool = True) -> dict:
    doc = op.to_doc()
    if with_carrier:
        doc["carrier"] = op.carrier_size
    return doc


def load_op_tuple(doc: dict, where: str = "$") -> OpTuple:
    s = load_carrier(_field(doc, "carrier", where), f"{where}.carrier").size
    comps = _field(doc, "components", where, list)
    ops = [load_op(c, s, f"{where}.components[{i}]") for i, c in enumerate(comps)]
    in_arity = doc.get("in_arity", ops[0].arity if ops else None)
    if in_arity is None:
        raise DocumentError(f"{where}.in_arity", "needed when there are no components")
    return OpTuple(in_arity, tuple(ops))


def op_tuple_doc(t: OpTuple) -> dict:
    s = t.components[0].carrier_size if t.components else None
    return {"carrier": s, "in_arity": t.in_arity, "components": [c.to_doc() for c in t.components]}


def load_op_or_tuple(path: str):
    doc = read_json(path)
    if isinstance(doc, dict) and "components" in doc:
        return load_op_tuple(doc)
    return load_op(doc)


# --- named Boolean operations --------------------------------------------------

BOOLEAN_OPS = {
    "const0": OpTable(0, 2, (0,)),
    "const1": OpTable(0, 2, (1,)),
    "id": OpTable(1, 2, (0, 1)),
    "not": OpTable(1, 2, (1, 0)),
    "and": OpTable(2, 2, (0, 0, 0, 1)),
    "or": OpTable(2, 2, (0, 1, 1, 1)),
    "xor": OpTable(2, 2, (0, 1, 1, 0)),
    "maj": OpTable(3, 2, (0, 0, 0, 1, 0, 1, 1, 1)),
}


# --- rigs, groups, modules -----------------------------------------------------------


def load_rig(doc, where: str = "$") -> Rig:
    if isinstance(doc, str):
        doc = {"builtin": doc}
    if "builtin" in doc:
        try:
            return builtin_rig(doc["builtin"])
        except KeyError as exc:
            raise DocumentError(f"{where}.builtin", str(exc.args[0])) from None
    add = _field(doc, "add", where, list)
    mul = _field(doc, "mul", where, list)
    labels = doc.get("elements")
    try:
        return Rig(len(add), add, mul, doc.get("zero", 0), doc.get("one", 1),
                   tuple(labels) if labels else None, doc.get("name"))
    except (ValueError, TypeError) as exc:
        raise DocumentError(where, str(exc)) from None


def rig_doc(R: Rig) -> dict:
    doc = {"add": [list(r) for r in R.add], "mul": [list(r) for r in R.mul], "zero": R.zero, "one": R.one}
    doc["elements"] = list(R.labels) if R.labels else [str(i) for i in range(R.size)]
    if R.name:
        doc["name"] = R.name
    return doc


def load_group(doc, where: str = "$") -> FinAbGroup:
    if isinstance(doc, str):
        doc = {"builtin": doc}
    if "builtin" in doc:
        try:
            return builtin_group(doc["builtin"])
        except KeyError as exc:
            raise DocumentError(f"{where}.builtin", str(exc.args[0])) from None
    add = _field(doc, "add", where, list)
    labels = doc.get("elements")
    try:
        return FinAbGroup(len(add), add, doc.get("zero", 0), tuple(labels) if labels else None, doc.get("name"))
    except (ValueError, TypeError) as exc:
        raise DocumentError(where, str(exc)) from None


BUILTIN_MODULES = {
    "matrix:M2_F2": lambda: matrix_action(2, 2),
    "regular:UT2_F2": lambda: regular_action(builtin_ring("UT2_F2")),
    "regular:Z4": lambda: regular_action(builtin_ring("Z4")),
    "scalar:Z2:Z2xZ2": lambda: scalar_action(builtin_ring("Z2"), builtin_group("Z2xZ2")),
    "scalar:Z2:Z2": lambda: scalar_action(builtin_ring("Z2"), builtin_group("Z2")),
    "scalar:Z4:Z2": lambda: scalar_action(builtin_ring("Z4"), cyclic_group(2)),
}


def load_module(doc, where: str = "$") -> ModuleAction:
    if isinstance(doc, str):
        doc = {"builtin": doc}
    if "builtin" in doc:
        name = doc["builtin"]
        if name not in BUILTIN_MODULES:
            raise DocumentError(f"{where}.builtin", f"unknown module {name!r}; known: {', '.join(sorted(BUILTIN_MODULES))}")
        return BUILTIN_MODULES[name]()
    R = load_rig(_field(doc, "ring", where), f"{where}.ring")
    G = load_group(_field(doc, "group", where), f"{where}.group")
    action = _field(doc, "action", where, list)
    try:
        return ModuleAction(R, G, tuple(tuple(f) for f in action))
    except (ValueError, TypeError) as exc:
        raise DocumentError(f"{where}.action", str(exc)) from None


# --- theories ------------------------------------------------------------------------


def builtin_theory(spec: str, N: int = DEFAULT_MAX_ARITY) -> Theory:
    """Resolve "kind:name": mat, mat_op, mat_aff, pointed (rig names), full and
    projections (carrier size), clone (comma-separated Boolean op names)."""
    kind, _, name = spec.partition(":")
    if not name:
        raise DocumentError("builtin", f"expected kind:name, got {spec!r}")
    try:
        if kind in ("mat", "mat_op", "mat_aff", "pointed", "pointed_mod"):
            R = builtin_rig(name)
            if kind == "mat":
                return mat_theory(R, N)
            if kind == "mat_op":
                return mat_theory(opposite(R), N)
            if kind == "mat_aff":
                return mat_aff_theory(R, N)
            return pointed_mod_theory(R, N)
        if kind == "full":
            return full_theory(int(name), N)
        if kind == "projections":
            return projections_theory(int(name), N)
        if kind == "clone":
            names = [n for n in name.split(",") if n]
            unknown = [n for n in names if n not in BOOLEAN_OPS]
            if unknown:
                raise KeyError(f"unknown Boolean ops {unknown}; known: {', '.join(BOOLEAN_OPS)}")
            return clone_generate([BOOLEAN_OPS[n] for n in names], 2, N, name=spec)
    except KeyError as exc:
        raise DocumentError("builtin", str(exc.args[0])) from None
    except ValueError as exc:
        raise DocumentError("builtin", str(exc)) from None
    raise DocumentError("builtin", f"unknown theory kind {kind!r}")


def load_theory(doc: dict, N: int | None = None, where: str = "$") -> Theory:
    """A theory document: a builtin reference, explicit slices ("ops"), or generators to close."""
    if "builtin" in doc:
        bound = N if N is not None else doc.get("max_arity", DEFAULT_MAX_ARITY)
        b = doc["builtin"]
        if isinstance(b, dict):
            kind = _field(b, "kind", f"{where}.builtin", str)
            R = load_rig(_field(b, "rig", f"{where}.builtin"), f"{where}.builtin.rig")
            makers = {"mat": mat_theory, "mat_aff": mat_aff_theory, "pointed_mod": pointed_mod_theory,
                      "pointed": pointed_mod_theory}
            if kind not in makers:
                raise DocumentError(f"{where}.builtin.kind", f"unknown kind {kind!r}")
            return makers[kind](R, bound)
        return builtin_theory(b, bound)
    carrier = load_carrier(_field(doc, "carrier", where), f"{where}.carrier")
    s = carrier.size
    bound = N if N is not None else doc.get("max_arity", DEFAULT_MAX_ARITY)
    if not isinstance(bound, int):
        raise DocumentError(f"{where}.max_arity", "expected an integer")
    gens = [load_op(g, s, f"{where}.generators[{i}]") for i, g in enumerate(doc.get("generators", []))]
    if "ops" in doc:
        ops = doc["ops"]
        if not isinstance(ops, dict):
            raise DocumentError(f"{where}.ops", "expected an object keyed by arity")
        slices = {}
        for key, tables in ops.items():
            try:
                n = int(key)
            except ValueError:
                raise DocumentError(f"{where}.ops", f"bad arity key {key!r}") from None
            if n > bound:
                continue
            slices[n] = [load_op({"arity": n, "table": t}, s, f"{where}.ops[{key}][{i}]") for i, t in enumerate(tables)]
        for n in range(bound + 1):
            slices.setdefault(n, [])
        return Theory(carrier, bound, slices, gens if "generators" in doc else None, name=doc.get("name"))
    for i, g in enumerate(gens):
        if g.arity > bound:
            raise DocumentError(f"{where}.generators[{i}]", f"arity {g.arity} above max_arity {bound}")
    T = clone_generate(gens, s, bound, name=doc.get("name"))
    T.carrier = carrier
    return T


def theory_doc(T: Theory) -> dict:
    doc = {
        "carrier": carrier_doc(T.carrier),
        "max_arity": T.max_arity,
        "generators": [g.to_doc() for g in T.generators],
        "ops": {str(n): [list(op.table) for op in T.ops(n)] for n in range(T.max_arity + 1)},
        "arity_counts": T.arity_counts(),
    }
    if T.name:
        doc["name"] = T.name
    return doc
