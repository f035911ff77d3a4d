from .counterfactual import (  # noqa
    CfQuery,
    FlowEngine,
    FrontdoorEngine,
    abduct,
    as_engine,
    counterfactual,
    frontdoor_counterfactual,
    predict,
    reverse_cycle,
)
from .ode import IntegrationError, OdeConfig, integrate  # noqa
