"""JSON model and instance files.

Numbers may be JSON numbers, ``"p/q"`` strings or decimal strings; all are
read exactly. Features are 0-based array positions.
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .errors import SchemaError
from .model import (
    CircuitModel,
    ExplanationProblem,
    FeatureSpace,
    Gate,
    Leaf,
    Model,
    OutputKind,
    RankingModel,
    Split,
    TabularModel,
    TreeModel,
    check_nonconstant,
)
from .rational import try_rational

MODEL_KINDS = ("tabular", "tree", "circuit", "ranking")


def _load(source):
    if isinstance(source, dict):
        return source
    try:
        return json.loads(Path(source).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"invalid JSON: {exc}") from None


def _require(doc, key, path):
    if not isinstance(doc, dict):
        raise SchemaError(path, "expected an object")
    if key not in doc:
        raise SchemaError(f"{path}.{key}", "missing field")
    return doc[key]


def _array(value, path):
    if not isinstance(value, list):
        raise SchemaError(path, "expected an array")
    return value


def _domain_value(raw, path):
    if isinstance(raw, bool) or raw is None or isinstance(raw, (list, dict)):
        raise SchemaError(path, f"bad domain value {raw!r}")
    q = try_rational(raw)
    if q is None:
        return raw
    return int(q) if q.denominator == 1 else q


def _output_value(raw, kind: OutputKind, path):
    if kind is OutputKind.CATEGORICAL:
        if not isinstance(raw, str):
            raise SchemaError(path, f"categorical output must be a string, got {raw!r}")
        return raw
    q = None if isinstance(raw, bool) else try_rational(raw)
    if q is None:
        raise SchemaError(path, f"expected a rational, got {raw!r}")
    return q


def _point(raw, path):
    return tuple(_domain_value(x, f"{path}[{k}]") for k, x in enumerate(_array(raw, path)))


def _output_kind(doc, path, default):
    raw = doc.get("output", default)
    try:
        return OutputKind(raw)
    except ValueError:
        raise SchemaError(f"{path}.output", f"unknown output kind {raw!r}") from None


def _infer_kind(values):
    return OutputKind.CATEGORICAL if any(
        isinstance(v, str) and try_rational(v) is None for v in values) else OutputKind.REAL


def _parse_variant(doc, space, path) -> Model:
    kind = _require(doc, "kind", path)
    if kind == "tabular":
        rows = _array(_require(doc, "table", path), f"{path}.table")
        out_kind = _output_kind(doc, path, _infer_kind(r.get("output") for r in rows if isinstance(r, dict)))
        table = {}
        for k, row in enumerate(rows):
            rp = f"{path}.table[{k}]"
            x = _point(_require(row, "point", rp), f"{rp}.point")
            if x in table:
                raise SchemaError(rp, f"duplicate point {list(x)}")
            table[x] = _output_value(_require(row, "output", rp), out_kind, f"{rp}.output")
        return TabularModel(space, table, out_kind)
    if kind == "tree":
        records = _array(_require(doc, "nodes", path), f"{path}.nodes")
        out_kind = _output_kind(doc, path, _infer_kind(r.get("leaf") for r in records if isinstance(r, dict)))
        nodes = {}
        for k, rec in enumerate(records):
            rp = f"{path}.nodes[{k}]"
            nid = _require(rec, "id", rp)
            if nid in nodes:
                raise SchemaError(f"{rp}.id", f"duplicate node id {nid!r}")
            if "leaf" in rec:
                nodes[nid] = Leaf(_output_value(rec["leaf"], out_kind, f"{rp}.leaf"))
                continue
            feature = _require(rec, "feature", rp)
            if not isinstance(feature, int) or isinstance(feature, bool):
                raise SchemaError(f"{rp}.feature", "expected an integer feature index")
            branches = []
            for b, br in enumerate(_array(_require(rec, "branches", rp), f"{rp}.branches")):
                bp = f"{rp}.branches[{b}]"
                vals = [_domain_value(x, f"{bp}.values") for x in _array(_require(br, "values", bp), f"{bp}.values")]
                branches.append((frozenset(vals), _require(br, "child", bp)))
            nodes[nid] = Split(feature, tuple(branches))
        if not records:
            raise SchemaError(f"{path}.nodes", "tree has no nodes")
        root = doc.get("root", records[0].get("id"))
        return TreeModel(space, nodes, root, out_kind)
    if kind == "circuit":
        gates = []
        records = _array(_require(doc, "gates", path), f"{path}.gates")
        if not records:
            raise SchemaError(f"{path}.gates", "circuit has no gates")
        for k, rec in enumerate(records):
            rp = f"{path}.gates[{k}]"
            gates.append(Gate(_require(rec, "id", rp), _require(rec, "op", rp),
                              tuple(rec.get("args", ())), rec.get("input"), rec.get("value")))
        return CircuitModel(space, tuple(gates), doc.get("output_gate", gates[-1].id))
    if kind == "ranking":
        heads = []
        for k, head in enumerate(_array(_require(doc, "heads", path), f"{path}.heads")):
            hp = f"{path}.heads[{k}]"
            if _require(head, "kind", hp) not in ("tabular", "tree"):
                raise SchemaError(f"{hp}.kind", "ranking heads must be tabular or tree models")
            heads.append(_parse_variant({**head, "output": "real"}, space, hp))
        raw_labels = _array(_require(doc, "labels", path), f"{path}.labels")
        out_kind = _output_kind(doc, path, OutputKind.CATEGORICAL)
        labels = [_output_value(y, out_kind, f"{path}.labels[{k}]") for k, y in enumerate(raw_labels)]
        return RankingModel(space, tuple(heads), tuple(labels), out_kind)
    raise SchemaError(f"{path}.kind", f"unknown model kind {kind!r}; expected one of {MODEL_KINDS}")


def parse_model(source, check_constant: bool = True) -> Model:
    """Read and validate a model file (path or already-decoded dict)."""
    doc = _load(source)
    raw_domains = _array(_require(doc, "domains", "$"), "$.domains")
    domains = tuple(
        tuple(_domain_value(x, f"$.domains[{i}][{k}]") for k, x in enumerate(_array(d, f"$.domains[{i}]")))
        for i, d in enumerate(raw_domains))
    model = _parse_variant(doc, FeatureSpace(domains), "$")
    return check_nonconstant(model) if check_constant else model


def parse_instance(source, model: Model) -> ExplanationProblem:
    doc = _load(source)
    point = _point(_require(doc, "point", "$"), "$.point")
    raw_delta = doc.get("delta", 0)
    delta = try_rational(raw_delta)
    if delta is None:
        raise SchemaError("$.delta", f"expected a rational, got {raw_delta!r}")
    return ExplanationProblem(model, point, delta)


def value_to_json(value):
    if isinstance(value, str):
        return value
    q = Fraction(value)
    return q.numerator if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _dump_variant(model: Model) -> dict:
    if isinstance(model, TabularModel):
        rows = [{"point": [value_to_json(v) for v in x], "output": value_to_json(model.table[x])}
                for x in model.space.points()]
        return {"kind": "tabular", "output": model.output_kind.value, "table": rows}
    if isinstance(model, TreeModel):
        def sort_vals(vals):
            return sorted(vals, key=lambda v: (isinstance(v, str), v if not isinstance(v, str) else 0, str(v)))
        records = []
        for nid, node in model.nodes.items():
            if isinstance(node, Leaf):
                records.append({"id": nid, "leaf": value_to_json(node.output)})
            else:
                records.append({"id": nid, "feature": node.feature, "branches": [
                    {"values": [value_to_json(v) for v in sort_vals(vals)], "child": child}
                    for vals, child in node.branches]})
        return {"kind": "tree", "output": model.output_kind.value, "root": model.root, "nodes": records}
    if isinstance(model, CircuitModel):
        gates = []
        for g in model.gates:
            rec = {"id": g.id, "op": g.op}
            if g.args:
                rec["args"] = list(g.args)
            if g.input is not None:
                rec["input"] = g.input
            if g.value is not None:
                rec["value"] = g.value
            gates.append(rec)
        return {"kind": "circuit", "output_gate": model.output, "gates": gates}
    if isinstance(model, RankingModel):
        heads = []
        for h in model.heads:
            doc = _dump_variant(h)
            doc.pop("output")
            heads.append(doc)
        return {"kind": "ranking", "output": model.output_kind.value, "heads": heads,
                "labels": [value_to_json(y) for y in model.labels]}
    raise TypeError(f"cannot serialize {type(model).__name__}")


def dump_model(model: Model) -> dict:
    doc = {"domains": [[value_to_json(v) for v in d] for d in model.space.domains]}
    doc.update(_dump_variant(model))
    return doc


def dumps_model(model: Model) -> str:
    return json.dumps(dump_model(model), indent=2, sort_keys=True) + "\n"
