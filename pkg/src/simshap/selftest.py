"""Engine-versus-oracle differential run behind ``simshap selftest``."""
from __future__ import annotations

import random
import sys

from .generate import random_problem
from .oracle import OracleBudget, oracle_explanations, oracle_shap
from .shapley import exact_shap
from .xplain import enumerate_explanations

KINDS = ("e", "s", "a", "c", "n")


def differential(problem, budget: OracleBudget = OracleBudget()) -> list[str]:
    """Names of the checks on which engine and oracle disagree."""
    failures = []
    for kind in KINDS:
        if kind == "e" and not problem.model.output_kind.numeric:
            continue
        if exact_shap(kind, problem).scores != oracle_shap(kind, problem, budget):
            failures.append(f"shap[{kind}]")
    expl = enumerate_explanations(problem)
    axps, cxps, relevant = oracle_explanations(problem, budget)
    if set(expl.axps) != axps or set(expl.cxps) != cxps or expl.relevant != relevant:
        failures.append("explanations")
    return failures


def run_selftest(models: int = 50, seed: int = 0, out=sys.stdout) -> bool:
    rng = random.Random(seed)
    budget = OracleBudget()
    bad = 0
    for k in range(models):
        problem = random_problem(rng, max_features=4, max_domain=3)
        failures = differential(problem, budget)
        status = "ok" if not failures else "FAIL " + ",".join(failures)
        print(f"model {k:3d} m={problem.m} {problem.model.output_kind.value:<11} {status}", file=out)
        bad += bool(failures)
    print(f"selftest: {models - bad}/{models} models agree with the oracles", file=out)
    return bad == 0
