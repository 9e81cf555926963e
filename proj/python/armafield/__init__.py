"""2D ARMA random-field synthesis, estimation and texture segmentation."""

from ._armafield import (
    DegenerateFieldError,
    ModelOrder,
    NumericError,
    default_block_order,
    estimate,
    estimate_lags,
    label_accuracy,
    lag_order,
    read_pgm,
    segment,
    stability_check,
    synthesize,
    write_pgm,
    zero_mean,
)

__all__ = [
    "DegenerateFieldError",
    "ModelOrder",
    "NumericError",
    "default_block_order",
    "estimate",
    "estimate_lags",
    "label_accuracy",
    "lag_order",
    "read_pgm",
    "segment",
    "stability_check",
    "synthesize",
    "write_pgm",
    "zero_mean",
]
