"""Linear-time structural analysis of a single tree.

The centroid is located with the branch rule: starting from the root,
repeatedly descend into the child whose subtree holds more than floor(n/2)
nodes.  The nodes passing that test form a chain from the root, so the
descent endpoint is simply the chain member with the smallest subtree; that
node is the centroid nearest the root.  ``node_total_distances`` implements
the definitional characterization (argmin of summed distances) as an
independent oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .treegen import IncreasingTree

__all__ = [
    "CentroidReport",
    "subtree_sizes",
    "find_centroids",
    "node_total_distances",
    "on_centroid_path",
    "depth_of",
]


@dataclass(frozen=True)
class CentroidReport:
    """Centroid location summary for one tree.

    With two centroids (n even, adjacent pair straddling an exact n/2
    split) the nearest one is the parent; ``subtree_size`` S and
    ``ancestral_branch_size`` n - S refer to the nearest centroid.
    """

    centroid_labels: tuple[int, ...]
    nearest_label: int
    nearest_depth: int
    subtree_size: int
    ancestral_branch_size: int


def subtree_sizes(tree: IncreasingTree) -> np.ndarray:
    """sizes[k] = node k plus its descendants; index 0 unused, sizes[1] = n."""
    sizes = np.zeros(tree.n + 1, dtype=np.int64)
    _kernels.subtree_sizes_kernel(tree.parent, tree.n, sizes)
    return sizes


def _depths(tree: IncreasingTree) -> np.ndarray:
    depth = np.zeros(tree.n + 1, dtype=np.int64)
    _kernels.depths_kernel(tree.parent, tree.n, depth)
    return depth


def find_centroids(tree: IncreasingTree) -> CentroidReport:
    """Locate the centroid(s) by the branch rule."""
    sizes = subtree_sizes(tree)
    label, second, s, depth = _kernels.centroid_kernel(tree.parent, sizes, tree.n)
    labels = (int(label),) if second == 0 else (int(label), int(second))
    return CentroidReport(
        centroid_labels=labels,
        nearest_label=int(label),
        nearest_depth=int(depth),
        subtree_size=int(s),
        ancestral_branch_size=tree.n - int(s),
    )


def node_total_distances(tree: IncreasingTree) -> np.ndarray:
    """out[v] = sum of graph distances from v to every other node.

    Two-pass rerooting: out[root] is the depth sum, then
    out[k] = out[parent[k]] + n - 2*sizes[k] in label order.
    """
    sizes = subtree_sizes(tree)
    depth = _depths(tree)
    out = np.zeros(tree.n + 1, dtype=np.int64)
    _kernels.total_distances_kernel(tree.parent, tree.n, sizes, depth, out)
    return out


def on_centroid_path(tree: IncreasingTree, k: int, sigma: float = 0.5) -> bool:
    """Whether node k has at least floor(sigma*n) descendants.

    At sigma = 1/2 this holds exactly for the labels on the path from the
    root to the nearest centroid.
    """
    if not 1 <= k <= tree.n:
        raise ValueError(f"label {k} outside 1..{tree.n}")
    if not 0.5 <= sigma < 1.0:
        raise ValueError("sigma must lie in [1/2, 1)")
    sizes = subtree_sizes(tree)
    return int(sizes[k]) - 1 >= math.floor(sigma * tree.n)


def depth_of(tree: IncreasingTree, k: int) -> int:
    """Number of edges between the root and node k."""
    if not 1 <= k <= tree.n:
        raise ValueError(f"label {k} outside 1..{tree.n}")
    d = 0
    v = k
    while v != 1:
        v = int(tree.parent[v])
        d += 1
    return d
