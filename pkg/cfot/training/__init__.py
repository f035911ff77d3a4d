from .trainer import (  # noqa
    NonFiniteLossError,
    TrainConfig,
    TrainedModel,
    TrainingDivergedError,
    draw_validation_batches,
    fm_loss,
    train,
    validation_loss,
)
