"""Characteristic functions over feature subsets."""
from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

from .errors import ArgumentError, NumericalNeutralityError
from .model import ExplanationProblem
from .similarity import all_similar, cond_expectation, cond_probability, model_output, sigma

KINDS = ("e", "s", "a", "c", "n", "b", "dual")


class BaselineWarning(UserWarning):
    """The baseline characteristic function ignores part of the feature space."""


@dataclass(frozen=True)
class CharFn:
    tag: str
    baseline: tuple | None = None
    predicate: Callable | None = None
    name: str | None = None

    def __post_init__(self):
        if self.tag not in KINDS:
            raise ArgumentError(f"unknown characteristic function {self.tag!r}")
        if self.tag == "b" and self.baseline is None:
            raise ArgumentError("baseline characteristic function needs a baseline point")
        if self.tag == "dual" and self.predicate is None:
            raise ArgumentError("dual characteristic function needs a subset predicate")

    @property
    def label(self) -> str:
        return self.name or self.tag

    @classmethod
    def with_baseline(cls, w) -> "CharFn":
        return cls("b", baseline=tuple(w))

    @classmethod
    def from_predicate(cls, predicate: Callable, name: str | None = None) -> "CharFn":
        return cls("dual", predicate=predicate, name=name)


def as_charfn(kind) -> CharFn:
    if isinstance(kind, CharFn):
        return kind
    return CharFn(kind)


def _check_subset(problem: ExplanationProblem, subset) -> frozenset:
    subset = frozenset(subset)
    if not subset <= problem.features:
        raise ArgumentError(f"feature subset {sorted(subset)} not within 0..{problem.m - 1}")
    return subset


def _baseline_point(problem: ExplanationProblem, w: tuple, subset: frozenset) -> tuple:
    w = problem.space.check_point(w)
    if not problem.space.is_boolean() or any(wi == vi for wi, vi in zip(w, problem.point)):
        warnings.warn("baseline characteristic function is only well-defined on boolean "
                      "domains with a baseline that differs from the instance everywhere",
                      BaselineWarning, stacklevel=3)
    return tuple(vi if i in subset else wi for i, (vi, wi) in enumerate(zip(problem.point, w)))


def cf_value(kind, problem: ExplanationProblem, subset: Iterable[int]):
    """Value of characteristic function ``kind`` on ``subset``.

    ``e``, ``s`` and ``b`` return a ``Fraction``; the others return 0 or 1.
    """
    cf = as_charfn(kind)
    subset = _check_subset(problem, subset)
    tag = cf.tag
    if tag == "e":
        if not problem.model.output_kind.numeric:
            raise NumericalNeutralityError("expected-value characteristic function needs numeric outputs")
        return cond_expectation(model_output(problem), problem, subset)
    if tag == "s":
        return cond_probability(sigma(problem), problem, subset)
    if tag == "a":
        return int(all_similar(problem, subset))
    if tag == "n":
        return int(not all_similar(problem, subset))
    if tag == "c":
        return int(not all_similar(problem, problem.features - subset))
    if tag == "b":
        y = problem.model._evaluate(_baseline_point(problem, cf.baseline, subset))
        if not isinstance(y, (int, Fraction)):
            raise NumericalNeutralityError("baseline characteristic function needs numeric outputs")
        return Fraction(y)
    return int(bool(cf.predicate(subset)))


def subsets(features: Iterable[int]):
    features = sorted(features)
    for r in range(len(features) + 1):
        for combo in itertools.combinations(features, r):
            yield frozenset(combo)


def cf_table(kind, problem: ExplanationProblem) -> dict:
    """``cf_value`` on every subset of the features."""
    cf = as_charfn(kind)
    if cf.tag == "b":
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", BaselineWarning)
            table = {s: cf_value(cf, problem, s) for s in subsets(problem.features)}
        # warn once per table rather than once per subset
        _baseline_point(problem, cf.baseline, frozenset())
        return table
    return {s: cf_value(cf, problem, s) for s in subsets(problem.features)}


def complement_dual(predicate: Callable, features: Iterable[int]) -> Callable:
    """``S -> not predicate(F \\ S)``; for a monotone predicate this is its hitting-set dual."""
    features = frozenset(features)
    return lambda s: not predicate(features - frozenset(s))


def hitting_set_predicate(family: Iterable[Iterable[int]]) -> Callable:
    """``S -> S intersects every set of family``."""
    family = [frozenset(f) for f in family]
    return lambda s: all(frozenset(s) & f for f in family)


def upward_closure(minimal_sets: Iterable[Iterable[int]]) -> Callable:
    """Monotone predicate true exactly on supersets of some generator."""
    gens = [frozenset(g) for g in minimal_sets]
    return lambda s: any(g <= frozenset(s) for g in gens)


def dual_pair(minimal_sets) -> tuple[CharFn, CharFn]:
    """Primal/dual characteristic functions from the generators of a monotone predicate."""
    gens = [frozenset(g) for g in minimal_sets]
    primal = upward_closure(gens)
    return (CharFn.from_predicate(primal, "primal"),
            CharFn.from_predicate(hitting_set_predicate(gens), "dual"))
