from .curl import CurlMap, GridSpec, curl, curl_noise_floor  # noqa
from .vector_field import (  # noqa
    FieldDivergedError,
    VectorFieldModel,
    eval_field,
    load_field,
    save_field,
)
