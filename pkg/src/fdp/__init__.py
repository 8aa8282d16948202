"""Financial distress prediction with MRMR-SVM-RFE feature selection.

The submodules carry the full API; the names below are the common entry points.
"""

from .data_model import DEFAULT_CATALOG, Dataset, Horizon, Schema, load_dataset, write_dataset
from .evaluation import (
    ConfusionMatrix,
    Metrics,
    Protocol,
    compare_indicator_systems,
    confusion,
    metrics,
    run_experiment,
)
from .models import ClassifierSpec, Kind, TrainedModel, predict, train
from .preprocess import apply_minmax, fit_minmax, screen_missing, split
from .selection import mrmr_quotient_rank, mrmr_svm_rfe, select_top_k, svm_rfe, train_linear_svm
from .selection.sweep import sweep_beta

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_CATALOG",
    "ClassifierSpec",
    "ConfusionMatrix",
    "Dataset",
    "Horizon",
    "Kind",
    "Metrics",
    "Protocol",
    "Schema",
    "TrainedModel",
    "apply_minmax",
    "compare_indicator_systems",
    "confusion",
    "fit_minmax",
    "load_dataset",
    "metrics",
    "mrmr_quotient_rank",
    "mrmr_svm_rfe",
    "predict",
    "run_experiment",
    "screen_missing",
    "select_top_k",
    "split",
    "svm_rfe",
    "sweep_beta",
    "train",
    "train_linear_svm",
    "write_dataset",
]
