"""Exact and sampled Shapley values over characteristic functions."""
from __future__ import annotations

import hashlib
import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .charfn import as_charfn, cf_table, cf_value
from .errors import ArgumentError, CapacityError
from .model import ExplanationProblem

MAX_FEATURES = 20


@dataclass(frozen=True)
class ScoreVector:
    scores: tuple
    charfn: str
    fingerprint: str = ""

    def __len__(self):
        return len(self.scores)

    def __getitem__(self, i):
        return self.scores[i]

    def __iter__(self):
        return iter(self.scores)


def problem_fingerprint(problem: ExplanationProblem) -> str:
    h = hashlib.sha256()
    h.update(repr(problem.space.domains).encode())
    for x, y in problem.outputs.items():
        h.update(repr((x, y)).encode())
    h.update(repr((problem.point, problem.delta)).encode())
    return h.hexdigest()[:16]


def weight(k: int, m: int) -> Fraction:
    """Shapley coefficient k!(m-k-1)!/m! of a coalition of size k among m players."""
    if not 0 <= k <= m - 1:
        raise ArgumentError(f"coalition size {k} out of range for {m} features")
    return Fraction(factorial(k) * factorial(m - k - 1), factorial(m))


def delta(kind, problem: ExplanationProblem, i: int, subset) -> Fraction:
    subset = frozenset(subset)
    if i in subset:
        raise ArgumentError(f"feature {i} already in {sorted(subset)}")
    return Fraction(cf_value(kind, problem, subset | {i})) - Fraction(cf_value(kind, problem, subset))


def _check_budget(m: int):
    if m > MAX_FEATURES:
        raise CapacityError(f"{m} features exceed the exact Shapley budget of {MAX_FEATURES}")


def shapley_from_table(table: dict, m: int) -> tuple:
    """Subset-form Shapley values from a characteristic function table keyed by frozensets."""
    weights = [weight(k, m) for k in range(m)]
    scores = [Fraction(0)] * m
    for s, value in table.items():
        k = len(s)
        for i in range(m):
            if i in s:
                scores[i] += weights[k - 1] * value
            else:
                scores[i] -= weights[k] * value
    return tuple(scores)


def exact_shap(kind, problem: ExplanationProblem) -> ScoreVector:
    """Exact Shapley value of every feature under ``kind``.

    Each cf value enters once with a positive weight for every member and once
    with a negative weight for every non-member, so the table is read once.
    """
    _check_budget(problem.m)
    cf = as_charfn(kind)
    table = cf_table(cf, problem)
    return ScoreVector(shapley_from_table(table, problem.m), cf.label, problem_fingerprint(problem))


def sample_shap(kind, problem: ExplanationProblem, permutations: int, seed: int = 0) -> tuple:
    """Monte-Carlo Shapley estimate from uniformly sampled feature orderings."""
    if permutations < 1:
        raise ArgumentError("need at least one permutation")
    cf = as_charfn(kind)
    rng = random.Random(seed)
    memo = {}

    def value(s):
        if s not in memo:
            memo[s] = float(cf_value(cf, problem, s))
        return memo[s]

    m = problem.m
    totals = [0.0] * m
    order = list(range(m))
    for _ in range(permutations):
        rng.shuffle(order)
        prefix = frozenset()
        before = value(prefix)
        for i in order:
            prefix = prefix | {i}
            after = value(prefix)
            totals[i] += after - before
            before = after
    return tuple(t / permutations for t in totals)


@dataclass
class AxiomReport:
    efficiency: bool
    dummy_violations: list = field(default_factory=list)
    symmetry_violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.efficiency and not self.dummy_violations and not self.symmetry_violations


def axiom_report(kind, problem: ExplanationProblem) -> AxiomReport:
    """Check efficiency, dummy and symmetry on the exact scores."""
    _check_budget(problem.m)
    cf = as_charfn(kind)
    table = cf_table(cf, problem)
    scores = shapley_from_table(table, problem.m)
    features = problem.features
    full = table[frozenset(features)]
    report = AxiomReport(efficiency=sum(scores) == full - table[frozenset()])
    for i in sorted(features):
        rest = [s for s in table if i not in s]
        if all(table[s | {i}] == table[s] for s in rest) and scores[i] != 0:
            report.dummy_violations.append(i)
    for i, j in itertools.combinations(sorted(features), 2):
        rest = [s for s in table if i not in s and j not in s]
        if all(table[s | {i}] == table[s | {j}] for s in rest) and scores[i] != scores[j]:
            report.symmetry_violations.append((i, j))
    return report
