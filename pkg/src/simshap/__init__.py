"""Exact Shapley scores over similarity-based characteristic functions, with
formal abductive/contrastive explanations and relevancy auditing."""

from .audit import (
    MismatchReport,
    ValueRemap,
    audit_sweep,
    compliance_check,
    relevancy_mismatch,
    similarity_transform,
    transform_problem,
    value_independence_test,
)
from .charfn import CharFn, cf_table, cf_value
from .errors import (
    CapacityError,
    DomainViolationError,
    InternalConsistencyError,
    ModelIntegrityError,
    NormError,
    NumericalNeutralityError,
    SchemaError,
    StructuralError,
    UserError,
)
from .io import dump_model, dumps_model, parse_instance, parse_model
from .model import (
    CircuitModel,
    ExplanationProblem,
    FeatureSpace,
    Gate,
    Leaf,
    OutputKind,
    RankingModel,
    Split,
    TabularModel,
    TreeModel,
    enumerate_consistent,
    ranking_select,
    tabulate,
    validate_circuit,
)
from .shapley import ScoreVector, axiom_report, delta, exact_shap, sample_shap, weight
from .similarity import cond_expectation, cond_probability, similar
from .xplain import (
    ExplanationSet,
    NormSpec,
    enumerate_explanations,
    find_adversarial,
    find_axp,
    find_cxp,
    is_waxp,
    is_wcxp,
    relevant_features,
)

__version__ = "0.1.0"
