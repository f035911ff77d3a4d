from .assignment import solve_assignment  # noqa
from .batches import (  # noqa
    SCHEMES,
    BatchBuilder,
    ConditionalSamplingError,
    CouplingPlan,
    Observations,
    PairedBatch,
    binned_batch,
    dependence,
    independent_batch,
    markovian_batch,
    naive_batch,
    plan_cost,
)
from .prior import PriorConfig  # noqa
