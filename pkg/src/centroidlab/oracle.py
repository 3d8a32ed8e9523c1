"""Brute-force verification of the exact formula layer against exhaustive
enumeration of growth histories (n <= 8).

Every check aggregates an indicator or count over all histories with exact
rational probabilities and compares the float formula value against the
rational expectation.  The subtree-size and ancestral-branch checks count
"some centroid has subtree size m": for m > n/2 that is the centroid nearest
the root, while m = n/2 at even n is the farther twin, matching what the
closed-form decomposition measures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import exact
from .analysis import find_centroids, node_total_distances, subtree_sizes
from .families import FamilyParams
from .treegen import enumerate_histories

__all__ = ["OracleCheck", "run_family_suite", "max_error"]

DEFAULT_TOL = 1e-12


@dataclass(frozen=True)
class OracleCheck:
    family: str
    n: int
    name: str
    max_abs_err: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_abs_err <= self.tol


@dataclass(frozen=True)
class _TreeStats:
    prob: Fraction
    sizes: np.ndarray
    depths: np.ndarray
    centroid_labels: tuple[int, ...]
    nearest_label: int
    nearest_depth: int
    distance_argmin: tuple[int, ...]


def _history_stats(family: FamilyParams, n: int) -> list[_TreeStats]:
    stats = []
    for tree, prob in enumerate_histories(family, n):
        sizes = subtree_sizes(tree)
        depths = np.zeros(n + 1, dtype=np.int64)
        for k in range(2, n + 1):
            depths[k] = depths[tree.parent[k]] + 1
        report = find_centroids(tree)
        dist = node_total_distances(tree)
        dmin = dist[1:].min()
        argmin = tuple(int(v) for v in np.flatnonzero(dist[1:] == dmin) + 1)
        stats.append(
            _TreeStats(
                prob=prob,
                sizes=sizes,
                depths=depths,
                centroid_labels=report.centroid_labels,
                nearest_label=report.nearest_label,
                nearest_depth=report.nearest_depth,
                distance_argmin=argmin,
            )
        )
    return stats


def _expect(stats: list[_TreeStats], fn) -> float:
    return float(sum((st.prob * fn(st) for st in stats), Fraction(0)))


def run_family_suite(
    family: FamilyParams,
    n_max: int = 8,
    sigmas: tuple[float, ...] = (0.5, 0.6),
    tol: float = DEFAULT_TOL,
) -> list[OracleCheck]:
    """Run every enumeration-equivalence check for sizes 1..n_max."""
    checks: list[OracleCheck] = []
    alpha = family.alpha
    tag = family.tag
    for n in range(1, n_max + 1):
        stats = _history_stats(family, n)

        def record(name: str, err: float, this_tol: float = tol) -> None:
            checks.append(
                OracleCheck(
                    family=tag, n=n, name=name, max_abs_err=err, tol=this_tol
                )
            )

        # path probabilities, all labels and sigmas
        if n >= 2:
            err = 0.0
            for sigma in sigmas:
                t = math.floor(sigma * n)
                for k in range(1, n + 1):
                    got = exact.p_lambda_exact(
                        exact.PathProbQuery(family=family, n=n, k=k, sigma=sigma)
                    )
                    want = _expect(stats, lambda st: int(st.sizes[k] - 1 >= t))
                    err = max(err, abs(got - want))
            record("p_lambda_exact", err)

        # centroid depth tail probabilities
        err = 0.0
        for h in range(0, n + 1):
            got = exact.p_depth_ge_exact(family, n, h)
            want = _expect(stats, lambda st: int(st.nearest_depth >= h))
            err = max(err, abs(got - want))
        record("p_depth_ge_exact", err)

        # expected number of size-m subtrees
        if n >= 2:
            err = 0.0
            for m in range(1, n):
                got = exact.expected_subtree_count(alpha, n, m)
                want = _expect(
                    stats, lambda st: int(np.count_nonzero(st.sizes[1:] == m))
                )
                err = max(err, abs(got - want))
            record("expected_subtree_count", err)

        if n >= 2 and n % 2 == 0:
            got = exact.prob_two_centroids(family, n)
            want = _expect(stats, lambda st: int(len(st.centroid_labels) == 2))
            record("prob_two_centroids", abs(got - want))

        # law of the centroid subtree size (either centroid)
        err = 0.0
        ran = False
        for m in range((n + 1) // 2, n):
            got = exact.p_centroid_subtree_exact(family, n, m)
            want = _expect(
                stats,
                lambda st: int(any(st.sizes[c] == m for c in st.centroid_labels)),
            )
            err = max(err, abs(got - want))
            ran = True
        if ran:
            record("p_centroid_subtree_exact", err)

        # per-node depth distribution
        err = 0.0
        for k in range(1, n + 1):
            table = exact.node_depth_pmf(alpha, k)
            for h, mass in zip(table.support, table.mass):
                want = _expect(stats, lambda st: int(st.depths[k] == h))
                err = max(err, abs(mass - want))
        record("node_depth_pmf", err)

        if family.variant == "recursive" and n >= 2:
            moon = exact.moon_recursive_stats(n)
            err = abs(moon.expected_depth - _expect(stats, lambda st: st.nearest_depth))
            err = max(
                err,
                abs(moon.expected_label - _expect(stats, lambda st: st.nearest_label)),
            )
            for b_nodes, got in moon.ancestral_branch_pmf.items():
                want = _expect(
                    stats,
                    lambda st: int(
                        any(n - st.sizes[c] == b_nodes for c in st.centroid_labels)
                    ),
                )
                err = max(err, abs(got - want))
            record("moon_recursive_stats", err)

        # definitional centroid: branch rule equals distance-sum argmin
        mismatches = sum(
            1
            for st in stats
            if set(st.centroid_labels) != set(st.distance_argmin)
        )
        record("centroid_distance_argmin", float(mismatches), 0.0)

    return checks


def max_error(checks: list[OracleCheck]) -> float:
    return max((c.max_abs_err for c in checks), default=0.0)
