"""Exact learning of Boolean functions from amplitude-amplified uniform examples.

A classical simulator of the tunable-network training circuits, the four
trainers built on them, and a reproducible experiment harness.
"""

from .boolfun import (
    Anf,
    BooleanFunction,
    Mask,
    anf_of,
    error_set,
    function_of,
    monomial_eval,
    random_positive_kjunta,
    relevant_variables,
)
from .learner import (
    PhaseLog,
    TrainingResult,
    error_rate,
    junta_update,
    run_improved,
    run_junta,
    run_naive,
    run_refined,
)
from .qsim import (
    AmplificationSetup,
    MeasurementOutcome,
    OutcomeDistribution,
    analytic_distribution,
    dense_distribution,
    sample,
    tv_distance,
)
from .schedule import (
    PreampPlan,
    Schedule,
    StagePlan,
    S_m0_total,
    figure_ratios,
    generic_schedule,
    generic_stage,
    junta_schedule,
    m_max,
    naive_sample_count,
    preamp_plan,
    refined_params,
    refined_schedule,
    theta_m0,
    theta_min,
)
from .tnn import Network, hypothesis, toggle_gate

__all__ = [
    "Anf", "BooleanFunction", "Mask", "anf_of", "error_set", "function_of",
    "monomial_eval", "random_positive_kjunta", "relevant_variables",
    "Network", "hypothesis", "toggle_gate",
    "PreampPlan", "Schedule", "StagePlan", "S_m0_total", "figure_ratios",
    "generic_schedule", "generic_stage", "junta_schedule", "m_max",
    "naive_sample_count", "preamp_plan", "refined_params", "refined_schedule",
    "theta_m0", "theta_min",
    "AmplificationSetup", "MeasurementOutcome", "OutcomeDistribution",
    "analytic_distribution", "dense_distribution", "sample", "tv_distance",
    "PhaseLog", "TrainingResult", "error_rate", "junta_update",
    "run_improved", "run_junta", "run_naive", "run_refined",
]
