"""centroidlab: centroid statistics of random very simple increasing trees.

Samples trees from the linear-preferential growth process, evaluates the
exact finite-n laws and the limiting laws of the nearest centroid's depth,
label and subtree size, and cross-validates all layers against a brute-force
enumeration oracle and Monte Carlo simulation.
"""

from .analysis import (
    CentroidReport,
    depth_of,
    find_centroids,
    node_total_distances,
    on_centroid_path,
    subtree_sizes,
)
from .dist import DistributionTable
from .exact import (
    MoonStats,
    PathProbBound,
    PathProbQuery,
    expected_subtree_count,
    moon_recursive_stats,
    node_depth_pmf,
    p_centroid_subtree_exact,
    p_depth_ge_exact,
    p_lambda_exact,
    p_lambda_upper_bound,
    parent_prob,
    prob_two_centroids,
)
from .families import FamilyParams, attach_weight, make_family, total_weight
from .limit import (
    asym_p_subtree,
    depth_limit_dist,
    depth_limit_factorial_moment,
    depth_limit_mean,
    depth_limit_variance,
    eval_depth_gf,
    label_limit_factorial_moment,
    label_limit_mean,
    label_limit_pmf,
    label_limit_variance,
    lim_p_lambda,
    not_centroid_asym,
    subtree_limit_cdf,
    subtree_limit_density,
    subtree_limit_moment,
    subtree_point_mass,
)
from .montecarlo import (
    ComparisonStats,
    ExperimentConfig,
    MCSummary,
    compare_distributions,
    run_experiment,
)
from .rng import RngStream
from .special import gen_binomial, log_gamma, reg_inc_beta, rising_factorial
from .treegen import (
    IncreasingTree,
    enumerate_histories,
    read_trees,
    sample_tree,
    tree_from_parents,
    write_trees,
)

__version__ = "0.1.0"
