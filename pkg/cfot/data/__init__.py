from .dataset import Dataset, Sample, gen_dataset  # noqa
from .ellipse import (  # noqa
    ConditionalSampler,
    DgpConfig,
    EllipseOracle,
    ellipse_points,
    true_abduct,
    true_counterfactual,
    true_counterfactual_frontdoor,
)
