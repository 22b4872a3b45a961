"""Pedestrian movement prediction on street graphs.

Two predictors are compared against held-out shortest-path traffic: local
space-syntax integration (relative asymmetry at radius 2) and the state
visitation frequencies of a maximum-entropy IRL model fitted to training
trajectories.
"""

from .datagen import TrajectorySet, generate_corpus, parse_osm_extract, split_corpus
from .errors import InputError, NumericalError, SyntaxIrlError
from .evaluate import EvalReport, compare_methods, pearson_r, visit_counts
from .graph import ConnectivityGraph, bfs_depths, build_graph, dijkstra_path, grid_graph
from .irl import (
    IrlResult,
    StochasticPolicy,
    TrainConfig,
    backward_policy,
    enumerate_path_distribution,
    expected_svf,
    expert_feature_expectation,
    likelihood_gradient,
    train_maxent,
)
from .kernels import BACKEND
from .mdp import MdpModel, mdp_from_graph, path_feature_counts
from .syntax import SyntaxMetrics, compute_syntax_metrics, local_closeness, rank_by_integration

__version__ = "0.1.0"
