"""Supervised selector: scalers, classifiers, model selection and persistence."""

from .dataset import CSV_HEADER, Dataset, read_dataset, write_dataset
from .model import (
    ALGORITHMS,
    DEFAULT_LABELS,
    FORMAT_VERSION,
    REFERENCE_FOREST_PARAMS,
    TrainedModel,
    dumps_model,
    load_model,
    loads_model,
    predict,
    predict_batch,
    predict_timed,
    resolve_hyperparams,
    save_model,
    train_classifier,
)
from .scaling import ScalerParams, apply_scaler, fit_scaler
from .selection import (
    DEFAULT_GRIDS,
    EvalReport,
    accuracy_report,
    evaluate,
    fold_assignment,
    grid_combinations,
    grid_search,
    kfold_cv,
    kfold_scores,
    parse_grid_spec,
    train_test_split,
)

__all__ = [
    "ALGORITHMS",
    "CSV_HEADER",
    "DEFAULT_GRIDS",
    "DEFAULT_LABELS",
    "Dataset",
    "EvalReport",
    "FORMAT_VERSION",
    "ScalerParams",
    "REFERENCE_FOREST_PARAMS",
    "TrainedModel",
    "accuracy_report",
    "apply_scaler",
    "dumps_model",
    "evaluate",
    "fit_scaler",
    "fold_assignment",
    "grid_combinations",
    "grid_search",
    "kfold_cv",
    "kfold_scores",
    "load_model",
    "parse_grid_spec",
    "loads_model",
    "predict",
    "predict_batch",
    "predict_timed",
    "read_dataset",
    "resolve_hyperparams",
    "save_model",
    "train_classifier",
    "train_test_split",
    "write_dataset",
]
