"""Similarity predicate and conditional expectations under the uniform distribution."""
from __future__ import annotations

import enum
from fractions import Fraction
from typing import Callable, Iterable

from .errors import NumericalNeutralityError
from .model import ExplanationProblem, OutputKind, RankingModel, enumerate_consistent


class SimilarityMode(str, enum.Enum):
    THRESHOLD = "regression-threshold"
    CLASS_EQUALITY = "class-equality"
    ARGMAX_EQUALITY = "argmax-equality"


def similarity_mode(problem: ExplanationProblem) -> SimilarityMode:
    if isinstance(problem.model, RankingModel):
        return SimilarityMode.ARGMAX_EQUALITY
    if problem.model.output_kind is OutputKind.REAL:
        return SimilarityMode.THRESHOLD
    return SimilarityMode.CLASS_EQUALITY


def _similar(problem: ExplanationProblem, x: tuple) -> int:
    mode = similarity_mode(problem)
    if mode is SimilarityMode.ARGMAX_EQUALITY:
        return int(problem.model.select(x) == problem.model.select(problem.point))
    y = problem.outputs[x]
    if mode is SimilarityMode.THRESHOLD:
        return int(abs(y - problem.prediction) <= problem.delta)
    return int(y == problem.prediction)


def similar(problem: ExplanationProblem, x) -> int:
    """1 if the model output at ``x`` is indistinguishable from the target output."""
    return _similar(problem, problem.space.check_point(x))


def similarity_table(problem: ExplanationProblem) -> dict:
    """Similarity bit for every point, memoized on the problem."""
    table = problem.__dict__.get("_similarity_table")
    if table is None:
        table = {x: _similar(problem, x) for x in problem.outputs}
        problem.__dict__["_similarity_table"] = table
    return table


def cond_expectation(f: Callable, problem: ExplanationProblem, fixed: Iterable[int]) -> Fraction:
    """Mean of ``f`` over the points agreeing with the target on ``fixed``."""
    total, count = Fraction(0), 0
    for x in enumerate_consistent(problem.space, fixed, problem.point):
        y = f(x)
        if isinstance(y, bool) or not isinstance(y, (int, Fraction)):
            raise NumericalNeutralityError(f"expectation of non-numeric value {y!r}")
        total += y
        count += 1
    return total / count


def cond_probability(p: Callable, problem: ExplanationProblem, fixed: Iterable[int]) -> Fraction:
    return cond_expectation(lambda x: 1 if p(x) else 0, problem, fixed)


def model_output(problem: ExplanationProblem) -> Callable:
    """The model output as a point function, for use with ``cond_expectation``."""
    outputs = problem.outputs
    return outputs.__getitem__


def sigma(problem: ExplanationProblem) -> Callable:
    return similarity_table(problem).__getitem__


def all_similar(problem: ExplanationProblem, fixed: Iterable[int]) -> bool:
    """Early-exit check that every point of the slice is similar."""
    table = similarity_table(problem)
    return all(table[x] for x in enumerate_consistent(problem.space, fixed, problem.point))
