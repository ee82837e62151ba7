from fractions import Fraction
from pathlib import Path

import pytest

from simshap import ExplanationProblem, FeatureSpace, OutputKind, TabularModel, parse_model

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "simshap" / "fixtures"
F = Fraction


def running_model():
    """Regression table over {0,1}^2 matching the worked example's stated scores."""
    return TabularModel(FeatureSpace.boolean(2), {
        (0, 0): F(-1), (0, 1): F(7, 4), (1, 0): F(5, 4), (1, 1): F(1)})


def baseline_model():
    """ITE(x1 = 1, 1, 2 * x2)."""
    return TabularModel.from_function(FeatureSpace.boolean(2), lambda x: 1 if x[0] == 1 else 2 * x[1])


def xor_model():
    return TabularModel.from_function(FeatureSpace.boolean(2), lambda x: x[0] ^ x[1], OutputKind.ORDINAL)


def first_feature_model(m=3):
    return TabularModel.from_function(FeatureSpace.boolean(m), lambda x: x[0], OutputKind.ORDINAL)


@pytest.fixture
def running():
    return ExplanationProblem(running_model(), (1, 1), F(1, 2))


@pytest.fixture
def baseline():
    return ExplanationProblem(baseline_model(), (1, 1))


@pytest.fixture
def xor():
    return ExplanationProblem(xor_model(), (0, 0))


@pytest.fixture
def first_only():
    return ExplanationProblem(first_feature_model(), (1, 0, 1))


@pytest.fixture
def fixtures_dir():
    return FIXTURES


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
