from .energy import EnergyTestResult, energy_distance, energy_test  # noqa
from .metrics import (  # noqa
    EvaluationSet,
    cf_mae,
    composition_mae,
    monotonicity_violation_rate,
    mu_ape,
    oracle_monotonicity_rate,
    path_composition_mae,
    pushforward_distance,
    pushforward_test,
    reversibility_mae,
)
from .report import (  # noqa
    EvalConfig,
    MetricsReport,
    aggregate,
    evaluate_model,
    read_reports,
    write_reports,
)
