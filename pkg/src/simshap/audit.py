"""Auditors: relevancy mismatches, compliance, value independence, similarity transform."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ArgumentError
from .generate import random_problem
from .model import ExplanationProblem, Model, OutputKind, TabularModel
from .shapley import ScoreVector, exact_shap
from .similarity import SimilarityMode, similarity_mode, similarity_table
from .xplain import enumerate_explanations


@dataclass
class MismatchReport:
    # (irrelevant feature, relevant feature, |score irrelevant|, |score relevant|)
    witnesses: list = field(default_factory=list)

    @property
    def mismatch(self) -> bool:
        return bool(self.witnesses)

    @property
    def offending_features(self) -> set:
        return {w[0] for w in self.witnesses}


def relevancy_mismatch(scores, relevant) -> MismatchReport:
    """Pairs where an irrelevant feature outscores a relevant one in absolute value."""
    values = scores.scores if isinstance(scores, ScoreVector) else tuple(scores)
    relevant = frozenset(relevant)
    report = MismatchReport()
    for i, si in enumerate(values):
        if i in relevant:
            continue
        for j in sorted(relevant):
            if abs(si) > abs(values[j]):
                report.witnesses.append((i, j, abs(si), abs(values[j])))
    return report


def compliance_check(problem: ExplanationProblem, kind) -> bool:
    """Every feature is irrelevant exactly when its score is zero."""
    scores = exact_shap(kind, problem)
    relevant = enumerate_explanations(problem).relevant
    return all((i not in relevant) == (scores[i] == 0) for i in range(problem.m))


@dataclass(frozen=True)
class ValueRemap:
    """Output relabelling; ``weak`` requires a bijection on the realized outputs,
    ``strong`` only that no other output collapses onto the target's."""

    mapping: dict
    mode: str = "strong"

    def __post_init__(self):
        if self.mode not in ("weak", "strong"):
            raise ArgumentError(f"remap mode must be 'weak' or 'strong', got {self.mode!r}")

    def check(self, outputs, target):
        outputs = set(outputs)
        missing = [y for y in outputs if y not in self.mapping]
        if missing:
            raise ArgumentError(f"remap is undefined on outputs {missing}")
        if self.mode == "weak":
            if len({self.mapping[y] for y in outputs}) != len(outputs):
                raise ArgumentError("weak remap must be a bijection on the realized outputs")
        elif any(self.mapping[y] == self.mapping[target] for y in outputs if y != target):
            raise ArgumentError("strong remap merges another output with the target output")


def _remapped_kind(model: Model, values) -> OutputKind:
    if any(isinstance(y, str) for y in values):
        return OutputKind.CATEGORICAL
    if model.output_kind is OutputKind.REAL:
        return OutputKind.REAL
    return OutputKind.ORDINAL


def remap_model(model: Model, mapping: dict) -> TabularModel:
    table = {x: mapping[model._evaluate(x)] for x in model.space.points()}
    return TabularModel(model.space, table, _remapped_kind(model, table.values()))


def value_independence_test(problem: ExplanationProblem, kind, remap: ValueRemap) -> bool:
    """Scores before and after relabelling the outputs agree exactly.

    Only defined when similarity is output equality (classification, ranking,
    or regression with zero threshold).
    """
    if similarity_mode(problem) is SimilarityMode.THRESHOLD and problem.delta != 0:
        raise ArgumentError("value independence needs equality-based similarity (delta = 0)")
    remap.check(problem.outputs.values(), problem.prediction)
    remapped = ExplanationProblem(remap_model(problem.model, remap.mapping), problem.point)
    return exact_shap(kind, problem).scores == exact_shap(kind, remapped).scores


def similarity_transform(problem: ExplanationProblem) -> TabularModel:
    """Boolean model computing the similarity predicate of ``problem``."""
    table = {x: Fraction(b) for x, b in similarity_table(problem).items()}
    return TabularModel(problem.space, table, OutputKind.ORDINAL)


def transform_problem(problem: ExplanationProblem) -> ExplanationProblem:
    return ExplanationProblem(similarity_transform(problem), problem.point)


@dataclass
class SweepRow:
    point: tuple
    scores: ScoreVector
    relevant: frozenset
    report: MismatchReport


def audit_sweep(model: Model, kind, delta=0, points=None) -> list:
    """Mismatch audit with every point of the feature space (or ``points``) as target."""
    rows = []
    for v in (model.space.points() if points is None else points):
        problem = ExplanationProblem(model, v, delta)
        scores = exact_shap(kind, problem)
        relevant = enumerate_explanations(problem).relevant
        rows.append(SweepRow(problem.point, scores, relevant, relevancy_mismatch(scores, relevant)))
    return rows


def search_similarity_mismatches(trials: int, seed: int = 0, max_features: int = 4,
                                 max_domain: int = 3) -> list:
    """Fuzz for instances where the similarity-based scores mislead about relevancy.

    Whether such instances exist is unresolved; this only collects any found.
    """
    rng = random.Random(seed)
    found = []
    for _ in range(trials):
        problem = random_problem(rng, max_features=max_features, max_domain=max_domain)
        scores = exact_shap("s", problem)
        relevant = enumerate_explanations(problem).relevant
        report = relevancy_mismatch(scores, relevant)
        if report.mismatch:
            found.append((problem, scores, report))
    return found
