from .forest import (
    ForestModel,
    TreeModel,
    grow_tree,
    permutation_importance,
    rfr_fit,
    rfr_predict,
)
from .model import (
    PREDICTION_COLUMNS,
    SurvivalModel,
    fit_survival_model,
    predict_survival,
    read_predictions,
    score_predictions,
    training_subjects,
    write_predictions,
)
from .scoring import BIN_NAMES, SurvivalScores, score, spearman, survival_bins
from .selection import rank_importance, select_top_k
from .standardize import StandardizationRecord, standardize_apply, standardize_fit
