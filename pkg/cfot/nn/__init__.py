from .network import (  # noqa
    NetworkSpec,
    Params,
    backward_input,
    backward_params,
    forward,
)
from .optim import (  # noqa
    AdamWState,
    EmaParams,
    NonFiniteGradientError,
    adamw_step,
    ema_update,
)
from .tape import StaleTapeError  # noqa
