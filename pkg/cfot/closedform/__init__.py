from .quantile import (  # noqa
    Mechanism1D,
    OutOfSupportError,
    cf_1d,
    quantile_table,
    rank_1d,
)
