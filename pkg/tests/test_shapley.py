from fractions import Fraction as F
from itertools import permutations
from math import factorial
import random

import pytest

from conftest import first_feature_model
from simshap import CapacityError, CharFn, ExplanationProblem, FeatureSpace, TabularModel
from simshap.charfn import cf_value, dual_pair
from simshap.errors import ArgumentError
from simshap.generate import random_problem
from simshap.shapley import axiom_report, delta, exact_shap, sample_shap, shapley_from_table, weight


def permutation_shapley(cf, m):
    """Independent oracle: average marginal contribution over all orderings."""
    totals = [F(0)] * m
    for order in permutations(range(m)):
        seen = frozenset()
        for i in order:
            totals[i] += F(cf(seen | {i})) - F(cf(seen))
            seen = seen | {i}
    return tuple(t / factorial(m) for t in totals)


@pytest.mark.parametrize("k,m,expected", [(0, 2, F(1, 2)), (1, 3, F(1, 6)), (2, 3, F(1, 3)), (0, 1, F(1))])
def test_weight(k, m, expected):
    assert weight(k, m) == expected


@pytest.mark.parametrize("k,m", [(-1, 3), (3, 3)])
def test_weight_range(k, m):
    with pytest.raises(ArgumentError):
        weight(k, m)


def test_delta(running):
    assert delta("a", running, 0, set()) == 1
    assert delta("e", running, 1, {0}) == F(-1, 8)
    with pytest.raises(ArgumentError):
        delta("e", running, 0, {0})


def test_delta_zero_when_cf_flat(running):
    # cf_a({1}) = cf_a({}) = 0 for the running example
    assert delta("a", running, 1, set()) == 0


@pytest.mark.parametrize("kind,expected", [
    ("e", (F(0), F(1, 4))),
    ("s", (F(1, 2), F(0))),
    ("a", (F(1), F(0))),
    ("c", (F(1), F(0))),
    ("n", (F(-1), F(0))),
])
def test_exact_running(running, kind, expected):
    assert exact_shap(kind, running).scores == expected
    assert permutation_shapley(lambda s: cf_value(kind, running, s), 2) == expected


def test_exact_baseline(baseline):
    sv = exact_shap(CharFn.with_baseline((0, 0)), baseline)
    assert sv.scores == (0, 1)
    assert sv.charfn == "b"


def test_subset_form_matches_permutation_form():
    rng = random.Random(1)
    for _ in range(100):
        m = rng.randint(1, 5)
        table = {}
        for r in range(1 << m):
            table[frozenset(i for i in range(m) if r >> i & 1)] = F(rng.randint(-5, 5), rng.randint(1, 4))
        assert shapley_from_table(table, m) == permutation_shapley(table.__getitem__, m)


def test_single_feature():
    model = TabularModel.from_function(FeatureSpace(((0, 1, 2),)), lambda x: x[0])
    p = ExplanationProblem(model, (2,))
    assert exact_shap("e", p).scores == (cf_value("e", p, {0}) - cf_value("e", p, set()),)


def test_sample_full_coverage_is_exact(running):
    # both orderings yield marginals (1/2, 0) here, so every sample is exact
    est = sample_shap("s", running, 2, seed=4)
    assert est == pytest.approx((0.5, 0.0), abs=0.0)


def test_sample_deterministic(running):
    assert sample_shap("e", running, 50, seed=3) == sample_shap("e", running, 50, seed=3)


def test_sample_rejects_zero(running):
    with pytest.raises(ArgumentError):
        sample_shap("s", running, 0)


def test_sample_converges():
    rng = random.Random(8)
    p = random_problem(rng, max_features=4, min_features=4)
    exact = exact_shap("s", p).scores
    est = sample_shap("s", p, 10_000, seed=1)
    assert all(abs(float(a) - b) <= 0.05 for a, b in zip(exact, est))


def test_axioms_running(running):
    for kind in "esacn":
        rep = axiom_report(kind, running)
        assert rep.ok
    assert sum(exact_shap("e", running).scores) == F(1, 4)
    assert sum(exact_shap("a", running).scores) == 1


def test_dummy_feature():
    p = ExplanationProblem(first_feature_model(3), (1, 0, 1))
    for kind in "esacn":
        sv = exact_shap(kind, p)
        assert sv[1] == 0 and sv[2] == 0
        assert axiom_report(kind, p).ok


def test_symmetry():
    model = TabularModel.from_function(FeatureSpace.boolean(3), lambda x: int(x[0] and x[1]))
    p = ExplanationProblem(model, (1, 1, 0))
    sv = exact_shap("e", p)
    assert sv[0] == sv[1]


def test_dual_pair_scores_equal():
    primal, dual = dual_pair([{0, 1}, {2}])
    p = ExplanationProblem(first_feature_model(3), (1, 0, 1))
    assert exact_shap(primal, p).scores == exact_shap(dual, p).scores


def test_budget(monkeypatch):
    import simshap.shapley as sh
    monkeypatch.setattr(sh, "MAX_FEATURES", 1)
    with pytest.raises(CapacityError):
        exact_shap("e", ExplanationProblem(first_feature_model(2), (1, 0)))


def test_fingerprint_stable(running):
    assert exact_shap("e", running).fingerprint == exact_shap("s", running).fingerprint
