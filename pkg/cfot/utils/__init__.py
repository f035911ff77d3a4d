from .utils import (  # noqa
    STREAMS,
    TWO_PI,
    find_configs,
    handle_run_script_options,
    stream_rng,
    wrap_angle,
)
