"""Feature spaces, models and explanation problems.

Features are indexed from 0 internally. Points are plain tuples. Numeric
outputs are ``Fraction``; categorical outputs are strings.
"""
from __future__ import annotations

import enum
import itertools
import math
import os
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .errors import (
    ArgumentError,
    CapacityError,
    ConstantModelError,
    DomainViolationError,
    ModelIntegrityError,
    StructuralError,
)

DEFAULT_MAX_POINTS = 2 ** 22
CAP_ENV_VAR = "SIMSHAP_MAX_POINTS"


def max_points() -> int:
    raw = os.environ.get(CAP_ENV_VAR)
    if raw is None:
        return DEFAULT_MAX_POINTS
    cap = int(raw)
    if cap < 1:
        raise ArgumentError(f"{CAP_ENV_VAR} must be >= 1, got {cap}")
    return cap


class OutputKind(str, enum.Enum):
    REAL = "real"
    ORDINAL = "ordinal"
    CATEGORICAL = "categorical"

    @property
    def numeric(self) -> bool:
        return self is not OutputKind.CATEGORICAL


def _is_numeric_value(value) -> bool:
    return isinstance(value, (int, Fraction)) and not isinstance(value, bool)


@dataclass(frozen=True)
class FeatureSpace:
    domains: tuple

    def __post_init__(self):
        domains = tuple(tuple(d) for d in self.domains)
        if not domains:
            raise ArgumentError("feature space needs at least one feature")
        for i, dom in enumerate(domains):
            if not dom:
                raise ArgumentError(f"domain of feature {i} is empty")
            if len(set(dom)) != len(dom):
                raise ArgumentError(f"domain of feature {i} has duplicate values")
        object.__setattr__(self, "domains", domains)

    @classmethod
    def boolean(cls, m: int) -> "FeatureSpace":
        return cls(((0, 1),) * m)

    @property
    def m(self) -> int:
        return len(self.domains)

    @property
    def features(self) -> frozenset:
        return frozenset(range(self.m))

    @property
    def size(self) -> int:
        return math.prod(len(d) for d in self.domains)

    def is_boolean(self) -> bool:
        return all(set(d) == {0, 1} for d in self.domains)

    def check_point(self, x: Sequence) -> tuple:
        x = tuple(x)
        if len(x) != self.m:
            raise DomainViolationError(f"point {x} has {len(x)} components, expected {self.m}")
        for i, (xi, dom) in enumerate(zip(x, self.domains)):
            if xi not in dom:
                raise DomainViolationError(f"value {xi!r} of feature {i} not in domain {list(dom)}")
        return x

    def points(self, cap: int | None = None) -> Iterator[tuple]:
        _check_cap(self.size, cap)
        return itertools.product(*self.domains)


def _check_cap(count: int, cap: int | None):
    cap = max_points() if cap is None else cap
    if count > cap:
        raise CapacityError(f"enumeration of {count} points exceeds cap {cap}")


def enumerate_consistent(space: FeatureSpace, fixed: Iterable[int], v: Sequence,
                         cap: int | None = None) -> Iterator[tuple]:
    """Points ``x`` of ``space`` with ``x[i] == v[i]`` for every ``i`` in ``fixed``."""
    fixed = frozenset(fixed)
    if not fixed <= space.features:
        raise ArgumentError(f"feature subset {sorted(fixed)} not within 0..{space.m - 1}")
    v = space.check_point(v)
    axes = [(v[i],) if i in fixed else dom for i, dom in enumerate(space.domains)]
    _check_cap(math.prod(len(a) for a in axes), cap)
    return itertools.product(*axes)


class Model:
    """Common surface of every model variant.

    Subclasses provide ``space``, ``output_kind`` and ``_evaluate``.
    """

    space: FeatureSpace
    output_kind: OutputKind

    def evaluate(self, x: Sequence):
        return self._evaluate(self.space.check_point(x))

    def _evaluate(self, x: tuple):
        raise NotImplementedError

    def outputs(self) -> set:
        return {self._evaluate(x) for x in self.space.points()}

    def is_constant(self) -> bool:
        first = None
        for k, x in enumerate(self.space.points()):
            y = self._evaluate(x)
            if k == 0:
                first = y
            elif y != first:
                return False
        return True


def check_nonconstant(model: Model) -> Model:
    if model.is_constant():
        raise ConstantModelError("model is constant over its feature space")
    return model


def _check_outputs(kind: OutputKind, values: Iterable):
    for value in values:
        if kind.numeric and not _is_numeric_value(value):
            raise ModelIntegrityError(f"{kind.value} model has non-numeric output {value!r}")
        if not kind.numeric and not isinstance(value, str):
            raise ModelIntegrityError(f"categorical output must be a token, got {value!r}")


def _normalize_output(kind: OutputKind, value):
    if kind.numeric and _is_numeric_value(value):
        return Fraction(value)
    return value


@dataclass(frozen=True, eq=False)
class TabularModel(Model):
    space: FeatureSpace
    table: dict
    output_kind: OutputKind = OutputKind.REAL

    def __post_init__(self):
        kind = OutputKind(self.output_kind)
        table = {}
        for x, y in self.table.items():
            table[self.space.check_point(x)] = _normalize_output(kind, y)
        _check_cap(self.space.size, None)
        if len(table) != self.space.size:
            raise ModelIntegrityError(
                f"table has {len(table)} entries, feature space has {self.space.size} points")
        _check_outputs(kind, table.values())
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "output_kind", kind)

    def _evaluate(self, x):
        return self.table[x]

    @classmethod
    def from_function(cls, space: FeatureSpace, fn, output_kind=OutputKind.REAL) -> "TabularModel":
        return cls(space, {x: fn(x) for x in space.points()}, output_kind)


@dataclass(frozen=True)
class Leaf:
    output: object


@dataclass(frozen=True)
class Split:
    feature: int
    branches: tuple  # ((frozenset of values, child id), ...)


@dataclass(frozen=True, eq=False)
class TreeModel(Model):
    """Decision/regression tree; ``nodes`` maps node id to ``Leaf`` or ``Split``."""

    space: FeatureSpace
    nodes: dict
    root: object
    output_kind: OutputKind = OutputKind.REAL

    def __post_init__(self):
        kind = OutputKind(self.output_kind)
        object.__setattr__(self, "output_kind", kind)
        nodes = {}
        for nid, node in self.nodes.items():
            if isinstance(node, Leaf):
                node = Leaf(_normalize_output(kind, node.output))
                _check_outputs(kind, [node.output])
            else:
                node = Split(node.feature, tuple((frozenset(vals), child) for vals, child in node.branches))
            nodes[nid] = node
        object.__setattr__(self, "nodes", nodes)
        self._validate()

    def _validate(self):
        if self.root not in self.nodes:
            raise ModelIntegrityError(f"root {self.root!r} is not a node")
        # feasible[i] is the set of values feature i may still take on the current path
        stack = [(self.root, tuple(frozenset(d) for d in self.space.domains), (self.root,))]
        while stack:
            nid, feasible, path = stack.pop()
            node = self.nodes[nid]
            if isinstance(node, Leaf):
                continue
            i = node.feature
            if not 0 <= i < self.space.m:
                raise ModelIntegrityError(f"node {nid!r} tests unknown feature {i}")
            seen = set()
            for vals, child in node.branches:
                if not vals <= frozenset(self.space.domains[i]):
                    raise ModelIntegrityError(f"node {nid!r} guard {sorted(vals, key=repr)} leaves domain")
                if seen & vals:
                    raise ModelIntegrityError(f"node {nid!r} has overlapping edge guards")
                seen |= vals
                if child not in self.nodes:
                    raise ModelIntegrityError(f"node {nid!r} points to missing node {child!r}")
                if child in path:
                    raise ModelIntegrityError(f"cycle through node {child!r}")
                narrowed = feasible[i] & vals
                if not narrowed:
                    raise ModelIntegrityError(f"edge {nid!r}->{child!r} is unreachable (inconsistent path)")
                stack.append((child, feasible[:i] + (narrowed,) + feasible[i + 1:], path + (child,)))
            if not feasible[i] <= seen:
                raise ModelIntegrityError(f"node {nid!r} guards do not cover feature {i}")

    def _evaluate(self, x):
        node = self.nodes[self.root]
        while isinstance(node, Split):
            for vals, child in node.branches:
                if x[node.feature] in vals:
                    node = self.nodes[child]
                    break
            else:
                raise ModelIntegrityError(f"no branch for value {x[node.feature]!r}")
        return node.output


GATE_OPS = ("var", "const", "and", "or", "not")


@dataclass(frozen=True)
class Gate:
    id: object
    op: str
    args: tuple = ()
    input: int | None = None  # feature index for "var"
    value: int | None = None  # 0/1 for "const"


@dataclass(frozen=True, eq=False)
class CircuitModel(Model):
    space: FeatureSpace
    gates: tuple
    output: object
    deterministic: bool = False
    decomposable: bool = False
    output_kind: OutputKind = field(default=OutputKind.ORDINAL, init=False)

    def __post_init__(self):
        if not self.space.is_boolean():
            raise ModelIntegrityError("circuit inputs must be boolean")
        gates = tuple(self.gates)
        by_id = {}
        for g in gates:
            if g.id in by_id:
                raise StructuralError(f"duplicate gate id {g.id!r}")
            if g.op not in GATE_OPS:
                raise StructuralError(f"gate {g.id!r} has unknown op {g.op!r}")
            by_id[g.id] = g
        for g in gates:
            if g.op == "var" and not (g.input is not None and 0 <= g.input < self.space.m):
                raise StructuralError(f"variable gate {g.id!r} has bad input {g.input!r}")
            if g.op == "const" and g.value not in (0, 1):
                raise StructuralError(f"constant gate {g.id!r} has bad value {g.value!r}")
            if g.op == "not" and len(g.args) != 1:
                raise StructuralError(f"NOT gate {g.id!r} needs exactly one input")
            if g.op in ("and", "or") and not g.args:
                raise StructuralError(f"gate {g.id!r} has no inputs")
            if g.op in ("var", "const") and g.args:
                raise StructuralError(f"leaf gate {g.id!r} cannot have inputs")
            for a in g.args:
                if a not in by_id:
                    raise StructuralError(f"gate {g.id!r} reads missing gate {a!r}")
        if self.output not in by_id:
            raise StructuralError(f"output gate {self.output!r} missing")
        object.__setattr__(self, "gates", gates)
        object.__setattr__(self, "_by_id", by_id)
        object.__setattr__(self, "_order", self._topological_order())
        read = {a for g in gates for a in g.args}
        sinks = [g.id for g in gates if g.id not in read]
        if sinks != [self.output]:
            raise StructuralError(f"expected single output gate {self.output!r}, sinks are {sinks}")

    def _topological_order(self):
        state, order = {}, []
        for start in self._by_id:
            if start in state:
                continue
            stack = [(start, iter(self._by_id[start].args))]
            state[start] = "open"
            while stack:
                gid, it = stack[-1]
                nxt = next(it, None)
                if nxt is None:
                    stack.pop()
                    state[gid] = "done"
                    order.append(gid)
                elif state.get(nxt) == "open":
                    raise StructuralError(f"cycle through gate {nxt!r}")
                elif nxt not in state:
                    state[nxt] = "open"
                    stack.append((nxt, iter(self._by_id[nxt].args)))
        return tuple(order)

    def gate_values(self, x: tuple) -> dict:
        vals = {}
        for gid in self._order:
            g = self._by_id[gid]
            if g.op == "var":
                vals[gid] = 1 if x[g.input] else 0
            elif g.op == "const":
                vals[gid] = g.value
            elif g.op == "not":
                vals[gid] = 1 - vals[g.args[0]]
            elif g.op == "and":
                vals[gid] = int(all(vals[a] for a in g.args))
            else:
                vals[gid] = int(any(vals[a] for a in g.args))
        return vals

    def support(self, gid) -> frozenset:
        memo = {}
        for g_id in self._order:
            g = self._by_id[g_id]
            if g.op == "var":
                memo[g_id] = frozenset([g.input])
            else:
                memo[g_id] = frozenset().union(*(memo[a] for a in g.args))
        return memo[gid]

    def _evaluate(self, x):
        return Fraction(self.gate_values(x)[self.output])


@dataclass
class CircuitReport:
    determinism_violations: list  # (gate id, witnessing assignment)
    decomposability_violations: list  # (gate id, shared variables)
    circuit: CircuitModel

    @property
    def deterministic(self) -> bool:
        return not self.determinism_violations

    @property
    def decomposable(self) -> bool:
        return not self.decomposability_violations


def validate_circuit(circuit: CircuitModel) -> CircuitReport:
    """Check OR-determinism and AND-decomposability by exhaustive scan.

    The returned report carries a copy of the circuit with the verified
    flags set to the outcome.
    """
    det = []
    or_gates = [g for g in circuit.gates if g.op == "or"]
    flagged = set()
    for x in circuit.space.points():
        if len(flagged) == len(or_gates):
            break
        vals = circuit.gate_values(x)
        for g in or_gates:
            if g.id not in flagged and sum(vals[a] for a in g.args) > 1:
                flagged.add(g.id)
                det.append((g.id, x))
    dec = []
    for g in circuit.gates:
        if g.op != "and":
            continue
        supports = [circuit.support(a) for a in g.args]
        shared = set()
        for s1, s2 in itertools.combinations(supports, 2):
            shared |= s1 & s2
        if shared:
            dec.append((g.id, frozenset(shared)))
    report = CircuitReport(det, dec, circuit)
    report.circuit = replace(circuit, deterministic=report.deterministic,
                             decomposable=report.decomposable)
    return report


def argmax_lowest(scores: Sequence) -> int:
    """Index of the maximum score; ties go to the lowest index."""
    best = 0
    for j in range(1, len(scores)):
        if scores[j] > scores[best]:
            best = j
    return best


@dataclass(frozen=True, eq=False)
class RankingModel(Model):
    """Argmax over per-index scoring heads, mapped through ``labels``."""

    space: FeatureSpace
    heads: tuple
    labels: tuple
    output_kind: OutputKind = OutputKind.CATEGORICAL

    def __post_init__(self):
        kind = OutputKind(self.output_kind)
        heads, labels = tuple(self.heads), tuple(_normalize_output(kind, y) for y in self.labels)
        if not heads:
            raise ModelIntegrityError("ranking model needs at least one head")
        if len(heads) != len(labels):
            raise ModelIntegrityError(f"{len(heads)} heads but {len(labels)} labels")
        if len(set(labels)) != len(labels):
            raise ModelIntegrityError("ranking labels must be distinct")
        for j, head in enumerate(heads):
            if isinstance(head, RankingModel) or not head.output_kind.numeric:
                raise ModelIntegrityError(f"head {j} must be a numeric tabular or tree model")
            if head.space != self.space:
                raise ModelIntegrityError(f"head {j} is over a different feature space")
        _check_outputs(kind, labels)
        object.__setattr__(self, "heads", heads)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "output_kind", kind)

    def select(self, x: tuple) -> int:
        return argmax_lowest([h._evaluate(x) for h in self.heads])

    def _evaluate(self, x):
        return self.labels[self.select(x)]


def ranking_select(model: RankingModel, x: Sequence) -> int:
    return model.select(model.space.check_point(x))


def tabulate(model: Model) -> TabularModel:
    """Flatten any model into an explicit table over its feature space."""
    return TabularModel(model.space, {x: model._evaluate(x) for x in model.space.points()},
                        model.output_kind)


@dataclass(frozen=True, eq=False)
class ExplanationProblem:
    """A model, a target point and the regression similarity threshold."""

    model: Model
    point: tuple
    delta: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "point", self.model.space.check_point(self.point))
        delta = Fraction(self.delta)
        if delta < 0:
            raise ArgumentError(f"delta must be non-negative, got {delta}")
        if delta and self.model.output_kind is not OutputKind.REAL:
            raise ArgumentError("delta only applies to real-valued (regression) models")
        object.__setattr__(self, "delta", delta)

    @property
    def space(self) -> FeatureSpace:
        return self.model.space

    @property
    def m(self) -> int:
        return self.model.space.m

    @property
    def features(self) -> frozenset:
        return self.model.space.features

    @cached_property
    def prediction(self):
        return self.model._evaluate(self.point)

    @cached_property
    def outputs(self) -> dict:
        """Model output for every point, in lexicographic point order."""
        return {x: self.model._evaluate(x) for x in self.space.points()}

    def with_model(self, model: Model) -> "ExplanationProblem":
        return ExplanationProblem(model, self.point, self.delta)
