"""Mutual information, MRMR, linear SVM and recursive feature elimination.

``sweep_beta`` lives in :mod:`fdp.selection.sweep`; it is not imported here
because it depends on the evaluation harness, which itself uses the SVM.
"""

from .mrmr import EPSILON, MIView, mrmr_quotient_rank, redundancy, relevance
from .mutual_info import (
    DEFAULT_BINS,
    DiscretizedFeature,
    discretize,
    entropy,
    labels_as_feature,
    mutual_information,
)
from .ranking import FeatureRanking, TraceEntry, select_top_k
from .rfe import DEFAULT_BETAS, combined_score, mrmr_svm_rfe, svm_rfe
from .svm import DEFAULT_C, SvmModel, dual_objective, train_linear_svm

__all__ = [
    "DEFAULT_BETAS",
    "DEFAULT_BINS",
    "DEFAULT_C",
    "EPSILON",
    "DiscretizedFeature",
    "FeatureRanking",
    "MIView",
    "SvmModel",
    "TraceEntry",
    "combined_score",
    "discretize",
    "dual_objective",
    "entropy",
    "labels_as_feature",
    "mrmr_quotient_rank",
    "mrmr_svm_rfe",
    "mutual_information",
    "redundancy",
    "relevance",
    "select_top_k",
    "svm_rfe",
    "train_linear_svm",
]
