"""Brute-force reference implementations.

Deliberately shares nothing with the engine beyond the model classes:
slices are found by filtering the whole feature space, similarity is
re-derived from raw model outputs, Shapley values are averaged over every
ordering, and explanation families come from a double powerset scan.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .errors import CapacityError
from .model import RankingModel


@dataclass(frozen=True)
class OracleBudget:
    max_features: int = 5
    max_points: int = 1024

    def check(self, problem):
        m = problem.model.space.m
        if m > self.max_features:
            raise CapacityError(f"oracle budget allows {self.max_features} features, got {m}")
        size = 1
        for d in problem.model.space.domains:
            size *= len(d)
        if size > self.max_points:
            raise CapacityError(f"oracle budget allows {self.max_points} points, got {size}")


def _all_points(model):
    return list(itertools.product(*model.space.domains))


def _similar(problem, x):
    model, v = problem.model, problem.point
    if isinstance(model, RankingModel):
        def pick(z):
            vals = [h.evaluate(z) for h in model.heads]
            return min(j for j, s in enumerate(vals) if s == max(vals))
        return pick(x) == pick(v)
    if model.output_kind.value == "real":
        return abs(model.evaluate(x) - model.evaluate(v)) <= problem.delta
    return model.evaluate(x) == model.evaluate(v)


def _slice(problem, fixed):
    v = problem.point
    return [x for x in _all_points(problem.model) if all(x[i] == v[i] for i in fixed)]


def oracle_cf(kind, problem, fixed):
    """Characteristic function straight from its definition."""
    tag = getattr(kind, "tag", kind)
    fixed = set(fixed)
    if tag == "e":
        pts = _slice(problem, fixed)
        return sum((Fraction(problem.model.evaluate(x)) for x in pts), Fraction(0)) / len(pts)
    if tag == "s":
        pts = _slice(problem, fixed)
        return Fraction(sum(1 for x in pts if _similar(problem, x)), len(pts))
    if tag == "a":
        return 1 if oracle_cf("s", problem, fixed) == 1 else 0
    if tag == "n":
        return 1 if oracle_cf("s", problem, fixed) < 1 else 0
    if tag == "c":
        rest = set(range(problem.model.space.m)) - fixed
        return 1 if oracle_cf("s", problem, rest) < 1 else 0
    if tag == "b":
        w, v = kind.baseline, problem.point
        z = tuple(v[i] if i in fixed else w[i] for i in range(len(v)))
        return Fraction(problem.model.evaluate(z))
    return 1 if kind.predicate(frozenset(fixed)) else 0


def oracle_shap(kind, problem, budget: OracleBudget = OracleBudget()) -> tuple:
    """Average marginal contribution over all m! feature orderings."""
    budget.check(problem)
    m = problem.model.space.m
    memo = {}

    def cf(s):
        s = frozenset(s)
        if s not in memo:
            memo[s] = Fraction(oracle_cf(kind, problem, s))
        return memo[s]

    totals = [Fraction(0)] * m
    for order in itertools.permutations(range(m)):
        before = set()
        for i in order:
            totals[i] += cf(before | {i}) - cf(before)
            before.add(i)
    return tuple(t / factorial(m) for t in totals)


def _waxp(problem, s):
    return all(_similar(problem, x) for x in _slice(problem, s))


def _wcxp(problem, s):
    rest = set(range(problem.model.space.m)) - set(s)
    return any(not _similar(problem, x) for x in _slice(problem, rest))


def oracle_explanations(problem, budget: OracleBudget = OracleBudget()):
    """(AXps, CXps, relevant features) by checking minimality of every subset literally."""
    budget.check(problem)
    m = problem.model.space.m
    every = [frozenset(c) for r in range(m + 1) for c in itertools.combinations(range(m), r)]
    weak_a = {s: _waxp(problem, s) for s in every}
    weak_c = {s: _wcxp(problem, s) for s in every}
    axps = {s for s in every if weak_a[s] and not any(weak_a[t] for t in every if t < s)}
    cxps = {s for s in every if weak_c[s] and not any(weak_c[t] for t in every if t < s)}
    relevant = frozenset(i for s in axps for i in s)
    return axps, cxps, relevant
