"""Abductive/contrastive explanations, feature relevancy and adversarial search."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .charfn import subsets
from .errors import ArgumentError, CapacityError, InternalConsistencyError, NormError
from .model import ExplanationProblem, enumerate_consistent
from .similarity import all_similar, similarity_table

MAX_FEATURES = 20
NORMS = (0, 1, 2, "inf")


def is_waxp(problem: ExplanationProblem, subset: Iterable[int]) -> bool:
    """Fixing ``subset`` to the instance values keeps every output similar."""
    return all_similar(problem, subset)


def is_wcxp(problem: ExplanationProblem, subset: Iterable[int]) -> bool:
    """Freeing ``subset`` admits a dissimilar point."""
    return not all_similar(problem, problem.features - frozenset(subset))


def find_axp(problem: ExplanationProblem, seed: Iterable[int] | None = None) -> frozenset:
    """Deletion-based minimization of a WAXp, visiting features in ascending order."""
    current = problem.features if seed is None else frozenset(seed)
    if not is_waxp(problem, current):
        raise ArgumentError(f"seed {sorted(current)} is not a weak abductive explanation")
    for i in sorted(current):
        if is_waxp(problem, current - {i}):
            current = current - {i}
    return current


def find_cxp(problem: ExplanationProblem, seed: Iterable[int] | None = None) -> frozenset:
    current = problem.features if seed is None else frozenset(seed)
    if not is_wcxp(problem, current):
        raise ArgumentError(f"seed {sorted(current)} is not a weak contrastive explanation")
    for i in sorted(current):
        if is_wcxp(problem, current - {i}):
            current = current - {i}
    return current


def _sort_family(family) -> tuple:
    return tuple(sorted(family, key=lambda s: (len(s), sorted(s))))


@dataclass(frozen=True)
class ExplanationSet:
    axps: tuple
    cxps: tuple
    relevant: frozenset
    features: frozenset

    @property
    def irrelevant(self) -> frozenset:
        return self.features - self.relevant


def minimal_hitting_sets(family: Iterable[frozenset], features: frozenset) -> list:
    """All subset-minimal subsets of ``features`` meeting every set in ``family``."""
    family = list(family)
    hits = [s for s in subsets(features) if all(s & f for f in family)]
    return [s for s in hits if not any(t < s for t in hits)]


def _minimal_family(problem: ExplanationProblem, pred) -> list:
    """Subset-minimal sets satisfying a monotone predicate, by powerset scan.

    Supersets of a found set are skipped; since ``subsets`` yields by size, a
    set that survives and satisfies the predicate is minimal.
    """
    found = []
    for s in subsets(problem.features):
        if any(f <= s for f in found):
            continue
        if pred(problem, s):
            found.append(s)
    return found


def enumerate_explanations(problem: ExplanationProblem) -> ExplanationSet:
    """Complete AXp and CXp families, checked for hitting-set duality."""
    if problem.m > MAX_FEATURES:
        raise CapacityError(f"{problem.m} features exceed the enumeration budget of {MAX_FEATURES}")
    axps = _minimal_family(problem, is_waxp)
    cxps = _minimal_family(problem, is_wcxp)
    if set(minimal_hitting_sets(cxps, problem.features)) != set(axps):
        raise InternalConsistencyError("AXps are not the minimal hitting sets of the CXps")
    if set(minimal_hitting_sets(axps, problem.features)) != set(cxps):
        raise InternalConsistencyError("CXps are not the minimal hitting sets of the AXps")
    rel_a = frozenset().union(*axps)
    rel_c = frozenset().union(*cxps)
    if rel_a != rel_c:
        raise InternalConsistencyError("relevant features differ between AXps and CXps")
    return ExplanationSet(_sort_family(axps), _sort_family(cxps), rel_a, problem.features)


def relevant_features(problem: ExplanationProblem) -> frozenset:
    return enumerate_explanations(problem).relevant


def irrelevant_features(problem: ExplanationProblem) -> frozenset:
    return problem.features - relevant_features(problem)


@dataclass(frozen=True)
class NormSpec:
    p: object
    eps: Fraction

    def __post_init__(self):
        p = self.p
        if isinstance(p, str):
            p = "inf" if p.lower() in ("inf", "infinity") else int(p)
        if p not in NORMS:
            raise NormError(f"unsupported norm l_{p}; choose from 0, 1, 2, inf")
        eps = Fraction(self.eps)
        if eps <= 0:
            raise NormError(f"epsilon must be positive, got {eps}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "eps", eps)

    def within(self, x: tuple, v: tuple) -> bool:
        """``||x - v||_p <= eps``, decided exactly (the l2 case compares squares)."""
        if self.p == 0:
            return sum(1 for a, b in zip(x, v) if a != b) <= self.eps
        diffs = []
        for a, b in zip(x, v):
            if a == b:
                diffs.append(Fraction(0))
            elif isinstance(a, str) or isinstance(b, str):
                raise NormError(f"l_{self.p} is undefined on categorical values; use p=0")
            else:
                diffs.append(abs(Fraction(a) - Fraction(b)))
        if self.p == 1:
            return sum(diffs) <= self.eps
        if self.p == 2:
            return sum(d * d for d in diffs) <= self.eps * self.eps
        return max(diffs) <= self.eps


def _check_norm_domains(problem: ExplanationProblem, norm: NormSpec):
    if norm.p == 0:
        return
    for i, dom in enumerate(problem.space.domains):
        if any(isinstance(d, str) for d in dom):
            raise NormError(f"feature {i} is categorical; only the l_0 norm applies")


def find_adversarial(problem: ExplanationProblem, norm: NormSpec,
                     fixed: Iterable[int] | None = None):
    """First dissimilar point within the norm ball, in lexicographic order.

    With ``fixed`` the search is restricted to points agreeing with the
    instance on those features. Returns ``None`` when no such point exists.
    """
    _check_norm_domains(problem, norm)
    fixed = frozenset() if fixed is None else frozenset(fixed)
    table = similarity_table(problem)
    for x in enumerate_consistent(problem.space, fixed, problem.point):
        if not table[x] and norm.within(x, problem.point):
            return x
    return None


def adversarial_matches_wcxp(problem: ExplanationProblem, subset: Iterable[int], norm: NormSpec | None = None) -> bool:
    """A constrained adversarial example fixing the complement of ``subset``
    exists exactly when ``subset`` is a weak contrastive explanation."""
    subset = frozenset(subset)
    norm = norm or NormSpec(0, problem.m)
    exists = find_adversarial(problem, norm, problem.features - subset) is not None
    return exists == is_wcxp(problem, subset)


def hitting_set_duality_holds(axps, cxps) -> bool:
    """Every AXp meets every CXp."""
    return all(a & c for a, c in itertools.product(axps, cxps))
