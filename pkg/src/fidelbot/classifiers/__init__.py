"""Three interchangeable intent classifiers behind one ranking interface."""

from .common import (
    ActivationKind,
    DimensionMismatchError,
    activation_derivative,
    activation_value,
    predict,
    rank_distribution,
    softmax,
)
from .dnn import (
    AdamHyper,
    AdamState,
    BadDimensionsError,
    DnnModel,
    EmptyTrainingSetError,
    EpochReport,
    ShapeMismatchError,
    StaleCacheError,
    TrainConfig,
    adam_init,
    adam_step,
    dnn_backward,
    dnn_forward,
    evaluate_dnn,
    init_dnn,
    train_dnn,
)
from .mnb import MissingClassError, MnbModel, predict_mnb, train_mnb
from .svm import SingleClassError, SvmHyper, SvmModel, predict_svm, train_svm

__all__ = [
    "ActivationKind",
    "AdamHyper",
    "AdamState",
    "BadDimensionsError",
    "DimensionMismatchError",
    "DnnModel",
    "EmptyTrainingSetError",
    "EpochReport",
    "MissingClassError",
    "MnbModel",
    "ShapeMismatchError",
    "SingleClassError",
    "StaleCacheError",
    "SvmHyper",
    "SvmModel",
    "TrainConfig",
    "activation_derivative",
    "activation_value",
    "adam_init",
    "adam_step",
    "dnn_backward",
    "dnn_forward",
    "evaluate_dnn",
    "init_dnn",
    "predict",
    "predict_mnb",
    "predict_svm",
    "rank_distribution",
    "softmax",
    "train_dnn",
    "train_mnb",
    "train_svm",
]
