"""Exact finite-n probability formulas for centroid statistics.

Everything here is a closed finite sum evaluated term-by-term in log space
(with a running max shift and fsum), so no factorial overflows occur up to
n = 10^6.  The formulas and the enumeration oracle agree to 1e-12 absolute
for every family at n <= 8; see the oracle module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np
from scipy.special import gammaln

from .dist import DistributionTable
from .families import FamilyParams
from .special import log_gamma, rising_factorial_log

__all__ = [
    "PathProbQuery",
    "PathProbBound",
    "p_lambda_exact",
    "p_lambda_threshold",
    "p_lambda_upper_bound",
    "node_depth_pmf",
    "p_depth_ge_exact",
    "parent_prob",
    "expected_subtree_count",
    "prob_two_centroids",
    "p_centroid_subtree_exact",
    "MoonStats",
    "moon_recursive_stats",
]

_TRUNC_REL = 1e-16


@dataclass(frozen=True)
class PathProbQuery:
    """Parameters of the event that node k has at least floor(sigma*n)
    descendants in a size-n tree."""

    family: FamilyParams
    n: int
    k: int
    sigma: float = 0.5

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be >= 2")
        if not 1 <= self.k <= self.n:
            raise ValueError(f"k must lie in 1..{self.n}")
        if not 0.5 <= self.sigma < 1.0:
            raise ValueError("sigma must lie in [1/2, 1)")


def p_lambda_exact(query: PathProbQuery) -> float:
    """Exact probability that node k has at least floor(sigma*n) descendants."""
    t = math.floor(query.sigma * query.n)
    return p_lambda_threshold(query.family.alpha, query.n, query.k, t)


def p_lambda_threshold(alpha: float, n: int, k: int, threshold: int) -> float:
    """P(node k has >= threshold descendants) in a size-n tree.

    For k > 1 this is
        sum_{m=threshold}^{n-k} C(alpha+m-1, m) C(n-m-2, k-2) / C(alpha+n-2, n-k);
    node 1 deterministically has n-1 descendants.
    """
    if k == 1:
        return 1.0 if n - 1 >= threshold else 0.0
    lo, hi = threshold, n - k
    if lo > hi:
        return 0.0
    m = np.arange(lo, hi + 1, dtype=np.float64)
    log_num = (
        gammaln(alpha + m)
        - gammaln(m + 1.0)
        - log_gamma(alpha)
        + gammaln(n - m - 1.0)
        - log_gamma(float(k - 1))
        - gammaln(n - m - k + 1.0)
    )
    log_den = (
        log_gamma(alpha + n - 1)
        - log_gamma(float(n - k + 1))
        - log_gamma(alpha + k - 1)
    )
    logs = log_num - log_den
    shift = float(logs.max())
    total = math.exp(shift) * math.fsum(np.exp(logs - shift).tolist())
    return min(1.0, max(0.0, total))


@dataclass(frozen=True)
class PathProbBound:
    """Uniform-in-n upper bounds for the path probability at (alpha, k, sigma).

    ``general`` is (3/sigma) * alpha^(rising k-1)/(k-1)! * (1-sigma)^(k-1),
    valid for n >= 3; ``sharp_half`` is the tighter 2^-(k-2) variant available
    only at sigma = 1/2.
    """

    general: float
    sharp_half: float | None

    def best(self) -> float:
        if self.sharp_half is None:
            return self.general
        return min(self.general, self.sharp_half)


def p_lambda_upper_bound(alpha: float, k: int, sigma: float) -> PathProbBound:
    if k < 1:
        raise ValueError("k must be >= 1")
    if not 0.5 <= sigma < 1.0:
        raise ValueError("sigma must lie in [1/2, 1)")
    ratio = math.exp(rising_factorial_log(alpha, k - 1) - log_gamma(float(k)))
    general = (3.0 / sigma) * ratio * (1.0 - sigma) ** (k - 1)
    sharp = ratio * 2.0 ** (-(k - 2)) if sigma == 0.5 else None
    return PathProbBound(general=general, sharp_half=sharp)


def _depth_pmf_rows(alpha: float, k_max: int) -> Iterator[np.ndarray]:
    """Yields the depth pmf of node k for k = 1..k_max.

    Row k holds P(depth(k) = h) for h = 0..k-1, the coefficients of
    prod_{j=0}^{k-2} (alpha*v + j)/(alpha + j); independent of tree size.
    """
    coef = np.array([1.0])
    yield coef
    for k in range(2, k_max + 1):
        j = float(k - 2)
        nxt = np.empty(k)
        nxt[0] = coef[0] * j / (alpha + j)
        nxt[1:] = (j * np.append(coef[1:], 0.0) + alpha * coef) / (alpha + j)
        coef = nxt
        yield coef


def node_depth_pmf(alpha: float, k: int) -> DistributionTable:
    """Distribution of the depth of node k over h = 0..k-1."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if alpha <= 0.0:
        raise ValueError("alpha must be positive")
    for row in _depth_pmf_rows(alpha, k):
        coef = row
    return DistributionTable(
        support=tuple(range(k)), mass=tuple(coef), provenance="exact"
    )


def p_depth_ge_exact(family: FamilyParams, n: int, h: int) -> float:
    """Exact P(centroid depth >= h) in a size-n tree.

    Sums P(depth(k) = h) * P(Lambda_k(1/2)) over labels k; the subtree size
    of k is independent of the depth of k, so the product form is exact for
    every n.  The k-sum is cut off once the sigma = 1/2 upper bound drops
    below 1e-16 of the partial sum, which never triggers for n <= 8.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if h < 0:
        raise ValueError("h must be >= 0")
    if h == 0:
        return 1.0
    if h >= n:
        return 0.0
    alpha = family.alpha
    threshold = n // 2
    k_path_max = n - threshold  # Lambda_k is impossible beyond this label
    if h + 1 > k_path_max:
        return 0.0
    acc_terms: list[float] = []
    acc = 0.0
    for k, row in enumerate(_depth_pmf_rows(alpha, k_path_max), start=1):
        if k <= h:
            continue
        bound = p_lambda_upper_bound(alpha, k, 0.5).sharp_half
        if k > h + 1 and bound < _TRUNC_REL * acc + 1e-300:
            break
        lam = p_lambda_threshold(alpha, n, k, threshold)
        term = float(row[h]) * lam
        acc_terms.append(term)
        acc += term
    return min(1.0, max(0.0, math.fsum(acc_terms)))


def parent_prob(alpha: float, k: int, j: int) -> float:
    """P(the parent of node k+j is node k) = alpha k^(rising j-1) / (alpha+k-1)^(rising j).

    Independent of the tree size; alpha = 1 reduces to 1/(k+j-1).
    """
    if k < 1 or j < 1:
        raise ValueError("k and j must be >= 1")
    if alpha <= 0.0:
        raise ValueError("alpha must be positive")
    return math.exp(
        math.log(alpha)
        + rising_factorial_log(float(k), j - 1)
        - rising_factorial_log(alpha + k - 1, j)
    )


def expected_subtree_count(alpha: float, n: int, m: int) -> float:
    """Expected number of size-m subtrees in a size-n tree, 1 <= m < n.

    Equals alpha (alpha+n-1) / ((alpha+m)(alpha+m-1)); for m >= n/2 a tree
    holds at most one such subtree, so this is also P(one exists).
    """
    if not 1 <= m < n:
        raise ValueError(f"m must lie in 1..{n - 1}")
    if alpha <= 0.0:
        raise ValueError("alpha must be positive")
    return alpha * (alpha + n - 1) / ((alpha + m) * (alpha + m - 1))


def prob_two_centroids(family: FamilyParams, n: int) -> float:
    """Probability that a size-n tree has two centroids (n even).

    Two centroids exist exactly when some subtree has n/2 nodes, and at most
    one such subtree can exist, so this is the m = n/2 subtree probability.
    """
    if n < 2 or n % 2 != 0:
        raise ValueError("n must be an even integer >= 2")
    return expected_subtree_count(family.alpha, n, n // 2)


def p_centroid_subtree_exact(family: FamilyParams, n: int, m: int) -> float:
    """Exact probability that a centroid's subtree holds exactly m nodes.

    Decomposition: a size-m subtree exists (probability known in closed
    form), and no node below its root holds floor(n/2) or more descendants,
    which is a sum over the subtree root's children weighted by the parent
    law.  For m > n/2 the event pins the centroid nearest the root; at
    m = n/2 (n even) it is the second, farther centroid of a twin pair, so
    the value equals ``prob_two_centroids``.

    The child sum truncates once the per-term upper bound falls below 1e-16
    of the partial sum; the bound decays geometrically in j.
    """
    if not (n + 1) // 2 <= m < n:
        raise ValueError(f"m must lie in ceil(n/2)..{n - 1}")
    alpha = family.alpha
    p_exists = expected_subtree_count(alpha, n, m)
    threshold = n // 2
    j_hi = m - threshold  # node j needs >= threshold descendants in size m
    sigma = n / (2.0 * m)
    terms: list[float] = []
    acc = 0.0
    for j in range(2, j_hi + 1):
        bound = (3.0 / sigma) * (alpha / (j - 1)) * (1.0 - sigma) ** (j - 1)
        if j > 2 and bound < _TRUNC_REL * acc:
            break
        term = parent_prob(alpha, 1, j - 1) * p_lambda_threshold(
            alpha, m, j, threshold
        )
        terms.append(term)
        acc += term
    not_centroid = math.fsum(terms)
    return min(1.0, max(0.0, p_exists * (1.0 - not_centroid)))


@dataclass(frozen=True)
class MoonStats:
    """Moon's exact recursive-tree centroid statistics at size n."""

    n: int
    expected_depth: float
    expected_label: float
    ancestral_branch_pmf: dict[int, float]


def moon_recursive_stats(n: int, family: FamilyParams | None = None) -> MoonStats:
    """Moon's closed forms for recursive trees: mean centroid depth M/(n-M)
    with M = floor((n-1)/2), the mean label, and the law of the ancestral
    branch size B.

    The branch table gives, for each B in 0..floor(n/2), the probability
    that some centroid has an ancestral branch of exactly B nodes (for
    B < n/2 that centroid is the one nearest the root; B = n/2 is the
    farther twin, so at even n the table totals 1 + P(two centroids)).
    The summand of the harmonic correction is read as 1/b, and the B = 0
    prefactor is 1 since a size-n subtree always exists.
    """
    if family is not None and family.variant != "recursive":
        raise ValueError("Moon's formulas hold for the recursive family only")
    if n < 2:
        raise ValueError("n must be >= 2")
    big_m = (n - 1) // 2
    expected_depth = big_m / (n - big_m)
    expected_label = 0.5 + n * (n + 1) / (2.0 * (n - big_m) * (n + 1 - big_m))
    lo = (n + 2) // 2  # ceil((n+1)/2)
    # walk B downward so the harmonic tail sum_{b=lo}^{n-B-1} 1/b only ever
    # grows; Kahan compensation keeps the running sum at machine accuracy
    pmf: dict[int, float] = {}
    harmonic = 0.0
    comp = 0.0
    hi = lo - 1
    for b_nodes in range(n // 2, -1, -1):
        while hi < n - b_nodes - 1:
            hi += 1
            y = 1.0 / hi - comp
            t = harmonic + y
            comp = (t - harmonic) - y
            harmonic = t
        pref = 1.0 if b_nodes == 0 else n / ((n - b_nodes) * (n - b_nodes + 1.0))
        pmf[b_nodes] = pref * (1.0 - harmonic)
    pmf = dict(sorted(pmf.items()))
    return MoonStats(
        n=n,
        expected_depth=expected_depth,
        expected_label=expected_label,
        ancestral_branch_pmf=pmf,
    )
