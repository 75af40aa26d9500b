"""Decision trees whose split criterion is a Tsallis entropy of tunable order q.

Shannon entropy (q = 1), the Gini index (q = 2) and the gain ratio
(normalised, q = 1) are members of the family, so one induction routine
covers ID3-, CART- and C4.5-style split selection.
"""

__version__ = "0.1.0"

from ._backend import BACKEND
from .criterion import SplitCriterion, impurity, split_gain
from .dataset import Attribute, Dataset, class_counts, k_folds, load_bundled, load_csv, train_test_split
from .entropy import (
    JointDistribution,
    ProbabilityDistribution,
    q_exp,
    q_log,
    shannon_entropy,
    tsallis_conditional_entropy,
    tsallis_entropy,
    tsallis_joint_entropy,
    tsallis_mutual_information,
)
from .evaluation import EvalConfig, accuracy, grid_search_q, q_sweep, run_benchmark
from .stats import wilcoxon_signed_rank
from .tree import (
    DecisionTree,
    TreeParams,
    best_split,
    build_tree,
    candidate_cut_points,
    deserialize_tree,
    node_count,
    predict,
    predict_distribution,
    serialize_tree,
)

__all__ = [
    "BACKEND",
    "Attribute",
    "Dataset",
    "DecisionTree",
    "EvalConfig",
    "JointDistribution",
    "ProbabilityDistribution",
    "SplitCriterion",
    "TreeParams",
    "accuracy",
    "best_split",
    "build_tree",
    "candidate_cut_points",
    "class_counts",
    "deserialize_tree",
    "grid_search_q",
    "impurity",
    "k_folds",
    "load_bundled",
    "load_csv",
    "node_count",
    "predict",
    "predict_distribution",
    "q_exp",
    "q_log",
    "q_sweep",
    "run_benchmark",
    "serialize_tree",
    "shannon_entropy",
    "split_gain",
    "train_test_split",
    "tsallis_conditional_entropy",
    "tsallis_entropy",
    "tsallis_joint_entropy",
    "tsallis_mutual_information",
    "wilcoxon_signed_rank",
]
