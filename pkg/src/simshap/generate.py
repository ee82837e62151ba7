"""Random small models and problems for property tests and the self-test."""
from __future__ import annotations

import random
from fractions import Fraction

from .model import ExplanationProblem, FeatureSpace, Leaf, OutputKind, Split, TabularModel, TreeModel

REAL_VALUES = [Fraction(n, 4) for n in range(-8, 9)]
DELTAS = [Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(1), Fraction(3, 2)]
TOKENS = ["red", "green", "blue", "amber"]


def random_space(rng: random.Random, max_features: int = 4, max_domain: int = 3,
                 min_features: int = 1) -> FeatureSpace:
    m = rng.randint(min_features, max_features)
    return FeatureSpace(tuple(tuple(range(rng.randint(2, max_domain))) for _ in range(m)))


def _outputs_for(rng: random.Random, kind: OutputKind):
    if kind is OutputKind.REAL:
        return rng.sample(REAL_VALUES, rng.randint(2, 5))
    if kind is OutputKind.CATEGORICAL:
        return TOKENS[:rng.randint(2, len(TOKENS))]
    return [Fraction(c) for c in range(rng.randint(2, 3))]


def random_model(rng: random.Random, space: FeatureSpace, kind: OutputKind | None = None,
                 values=None) -> TabularModel:
    """Non-constant random table over ``space``."""
    kind = kind or rng.choice(list(OutputKind))
    values = list(values) if values is not None else _outputs_for(rng, kind)
    points = list(space.points())
    while True:
        table = {x: rng.choice(values) for x in points}
        if len(set(table.values())) > 1:
            return TabularModel(space, table, kind)


def random_problem(rng: random.Random, max_features: int = 4, max_domain: int = 3,
                   kind: OutputKind | None = None, min_features: int = 1) -> ExplanationProblem:
    space = random_space(rng, max_features, max_domain, min_features)
    kind = kind or rng.choice(list(OutputKind))
    model = random_model(rng, space, kind)
    v = rng.choice(list(space.points()))
    delta = rng.choice(DELTAS) if kind is OutputKind.REAL else 0
    return ExplanationProblem(model, v, delta)


def random_boolean_classifier(rng: random.Random, max_features: int = 4) -> TabularModel:
    space = FeatureSpace.boolean(rng.randint(1, max_features))
    return random_model(rng, space, OutputKind.ORDINAL, [Fraction(0), Fraction(1)])


def random_tree(rng: random.Random, space: FeatureSpace, kind: OutputKind = OutputKind.REAL,
                max_depth: int = 3) -> TreeModel:
    """Random tree whose guards partition the remaining feasible values."""
    values = _outputs_for(rng, kind)
    nodes = {}

    def build(feasible, depth):
        nid = len(nodes)
        nodes[nid] = None
        splittable = [i for i, vals in enumerate(feasible) if len(vals) > 1]
        if depth == 0 or not splittable or rng.random() < 0.25:
            nodes[nid] = Leaf(rng.choice(values))
            return nid
        i = rng.choice(splittable)
        vals = list(feasible[i])
        rng.shuffle(vals)
        cut = rng.randint(1, len(vals) - 1)
        branches = []
        for part in (vals[:cut], vals[cut:]):
            narrowed = feasible[:i] + (frozenset(part),) + feasible[i + 1:]
            branches.append((frozenset(part), build(narrowed, depth - 1)))
        nodes[nid] = Split(i, tuple(branches))
        return nid

    build(tuple(frozenset(d) for d in space.domains), max_depth)
    return TreeModel(space, nodes, 0, kind)
