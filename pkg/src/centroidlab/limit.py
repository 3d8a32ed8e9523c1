"""Limiting distributions and moments for the centroid's depth, label and
subtree-size proportion.

The depth law's printed closed form multiplies (alpha/(alpha-1))^h by a
bracket that vanishes like the tail of an exponential series; evaluated
literally it explodes in float64 once h is moderately large.  Both ccdf and
pmf are therefore computed from the algebraically identical tail series

    P(depth >= h) = 2^(1-alpha) * sum_{i>=0} (alpha-1)^i alpha^h ln2^(h+i) / (h+i)!

which is stable for every alpha > 0 and reduces to ln2^h / h! at alpha = 1.
Expressions with an explicit (alpha-1) denominator route through expm1 and
switch to their alpha = 1 closed forms within 1e-8 of the singular point.
"""

from __future__ import annotations

import math
from typing import NamedTuple

from .special import gen_binomial, log_gamma, reg_inc_beta, rising_factorial

__all__ = [
    "lim_p_lambda",
    "DepthLimit",
    "depth_limit_dist",
    "eval_depth_gf",
    "depth_limit_factorial_moment",
    "depth_limit_mean",
    "depth_limit_variance",
    "label_limit_pmf",
    "label_limit_factorial_moment",
    "label_limit_mean",
    "label_limit_variance",
    "not_centroid_asym",
    "asym_p_subtree",
    "subtree_limit_density",
    "subtree_point_mass",
    "subtree_limit_cdf",
    "subtree_limit_moment",
]

_LN2 = math.log(2.0)
_ALPHA_SWITCH = 1e-8


def _check_alpha(alpha: float) -> float:
    if not (alpha > 0.0) or not math.isfinite(alpha):
        raise ValueError(f"alpha must be positive and finite, got {alpha}")
    return float(alpha)


def lim_p_lambda(alpha: float, k: int) -> float:
    """Limit probability that node k lies on the root-to-centroid path:
    I_{1/2}(k-1, alpha); the root (k = 1) is always on it."""
    _check_alpha(alpha)
    if k < 1:
        raise ValueError("k must be >= 1")
    if k == 1:
        return 1.0
    return reg_inc_beta(0.5, k - 1, alpha)


class DepthLimit(NamedTuple):
    ccdf: float
    pmf: float


def _scaled_exp_tail(alpha: float, h: int) -> float:
    """alpha^h * sum_{i>=0} (alpha-1)^i ln2^(h+i) / (h+i)!."""
    if h == 0:
        t = 1.0
    else:
        t = math.exp(h * math.log(alpha * _LN2) - log_gamma(h + 1.0))
    total = 0.0
    i = 0
    while True:
        total += t
        t *= (alpha - 1.0) * _LN2 / (h + i + 1)
        i += 1
        if abs(t) <= 1e-21 * max(abs(total), 1e-300) or i > 400:
            return total


def depth_limit_dist(alpha: float, h: int) -> DepthLimit:
    """(P(depth >= h), P(depth = h)) of the limiting centroid depth."""
    alpha = _check_alpha(alpha)
    if h < 0:
        raise ValueError("h must be >= 0")
    scale = 2.0 ** (1.0 - alpha)
    ccdf = scale * _scaled_exp_tail(alpha, h)
    if h == 0:
        term0 = 1.0
    else:
        term0 = math.exp(h * math.log(alpha * _LN2) - log_gamma(h + 1.0))
    pmf = scale * (term0 - _scaled_exp_tail(alpha, h + 1) / alpha)
    return DepthLimit(ccdf=min(1.0, max(0.0, ccdf)), pmf=min(1.0, max(0.0, pmf)))


def eval_depth_gf(alpha: float, v: float) -> tuple[float, float]:
    """The limit generating functions (C(v), A(v)) of the depth law.

    C(v) = 1 + alpha*v*(2^w - 1)/w and A(v) = 1 + alpha*(v-1)*(2^w - 1)/w
    with w = alpha*(v-1) + 1; the w = 0 singularity is removable and handled
    by the series of (2^w - 1)/w.
    """
    alpha = _check_alpha(alpha)
    w = alpha * (v - 1.0) + 1.0
    if abs(w) < 1e-6:
        z = w * _LN2
        g = _LN2 * (1.0 + z / 2.0 + z * z / 6.0 + z * z * z / 24.0)
    else:
        g = math.expm1(w * _LN2) / w
    return 1.0 + alpha * v * g, 1.0 + alpha * (v - 1.0) * g


def depth_limit_factorial_moment(alpha: float, m: int) -> float:
    """Limit of E[D (D-1) ... (D-m+1)] for the centroid depth."""
    alpha = _check_alpha(alpha)
    if m < 1 or int(m) != m:
        raise ValueError("m must be a positive integer")
    m = int(m)
    inner = math.fsum(
        gen_binomial(m - 1, j) * (-1.0) ** j * math.factorial(j) * _LN2 ** (m - 1 - j)
        for j in range(0, m - 1)
    )
    return m * alpha**m * (2.0 * inner + (-1.0) ** (m - 1) * math.factorial(m - 1))


def depth_limit_mean(alpha: float) -> float:
    return depth_limit_factorial_moment(alpha, 1)


def depth_limit_variance(alpha: float) -> float:
    mean = depth_limit_factorial_moment(alpha, 1)
    second = depth_limit_factorial_moment(alpha, 2)
    return second + mean - mean * mean


def label_limit_pmf(alpha: float, k: int) -> float:
    """Limit probability that the nearest centroid carries label k."""
    alpha = _check_alpha(alpha)
    if k < 1:
        raise ValueError("k must be >= 1")
    t = alpha - 1.0
    if k == 1:
        if abs(t) <= _ALPHA_SWITCH:
            return 1.0 - _LN2
        return 1.0 + (alpha / t) * math.expm1(-t * _LN2)
    if abs(t) <= _ALPHA_SWITCH:
        # 2^-(k-1) - sum_{j>=k} 2^-j / j
        acc = 2.0 ** (-(k - 1))
        j = k
        while True:
            term = 2.0**-j / j
            acc -= term
            j += 1
            if term < 1e-16:
                return max(0.0, acc)
    val = -reg_inc_beta(0.5, k, alpha) / t + (
        1.0 + alpha / t
    ) * gen_binomial(alpha + k - 2.0, k - 1) * 2.0 ** (-(alpha + k - 1.0))
    return max(0.0, val)


def label_limit_factorial_moment(alpha: float, m: int) -> float:
    """Limit of the m-th falling factorial moment of the centroid label."""
    alpha = _check_alpha(alpha)
    if m < 1 or int(m) != m:
        raise ValueError("m must be a positive integer")
    m = int(m)
    return (4.0 * m * m + 2.0 * alpha * m + alpha - 2.0) / (m + 1.0) * rising_factorial(
        alpha, m - 1
    )


def label_limit_mean(alpha: float) -> float:
    return 1.0 + 1.5 * alpha


def label_limit_variance(alpha: float) -> float:
    return -7.0 / 12.0 * alpha * alpha + 19.0 / 6.0 * alpha


def not_centroid_asym(alpha: float, theta: float) -> float:
    """Limit probability that the root of a subtree holding a fraction theta
    of the nodes is displaced as centroid by one of its children."""
    alpha = _check_alpha(alpha)
    if not 0.5 <= theta <= 1.0:
        raise ValueError("theta must lie in [1/2, 1]")
    log2t = math.log(2.0 * theta)
    t = alpha - 1.0
    if abs(t) <= _ALPHA_SWITCH:
        return log2t
    return (alpha / t) * -math.expm1(-t * log2t)


def _density_core(alpha: float, x: float) -> float:
    """4 * (alpha/(alpha-1)) * (alpha * x^(alpha+1) - x^2) for x = n/(2m)."""
    t = alpha - 1.0
    lx = math.log(x)
    if abs(t) <= _ALPHA_SWITCH:
        return 4.0 * x * x * (1.0 + lx)
    g = math.expm1(t * lx) + t * math.exp(t * lx)  # alpha * x^(alpha-1) - 1
    return 4.0 * (alpha / t) * x * x * g


def asym_p_subtree(alpha: float, n: int, m: int) -> float:
    """Leading-order P(centroid subtree size = m) for n/2 <= m < n."""
    alpha = _check_alpha(alpha)
    if not (n / 2.0 <= m < n):
        raise ValueError("m must satisfy n/2 <= m < n")
    return _density_core(alpha, n / (2.0 * m)) / n


def subtree_limit_density(alpha: float, theta: float) -> float:
    """Density f(theta) of the limiting subtree proportion on [1/2, 1)."""
    alpha = _check_alpha(alpha)
    if not 0.5 <= theta < 1.0:
        raise ValueError("theta must lie in [1/2, 1)")
    return max(0.0, _density_core(alpha, 1.0 / (2.0 * theta)))


def subtree_point_mass(alpha: float) -> float:
    """Mass of the atom at 1: the centroid sits at the root."""
    return label_limit_pmf(alpha, 1)


def subtree_limit_cdf(alpha: float, theta: float) -> float:
    """Mass of the continuous part on [1/2, theta] (atom excluded)."""
    alpha = _check_alpha(alpha)
    if not 0.5 <= theta <= 1.0:
        raise ValueError("theta must lie in [1/2, 1]")
    log2t = math.log(2.0 * theta)
    t = alpha - 1.0
    if abs(t) <= _ALPHA_SWITCH:
        return log2t / theta
    return (alpha / t) * -math.expm1(-t * log2t) / theta


def subtree_limit_moment(alpha: float, r: int) -> float:
    """Limit of E[(S/n)^r], r a positive integer.

    The r >= 2 closed form has removable singularities at alpha = 1 and
    alpha = r, both evaluated as limits.
    """
    alpha = _check_alpha(alpha)
    if r < 1 or int(r) != r:
        raise ValueError("moment order r must be a positive integer")
    r = int(r)
    t = alpha - 1.0
    if r == 1:
        if abs(t) <= _ALPHA_SWITCH:
            return 1.0 - 0.5 * _LN2 * _LN2
        return 1.0 + alpha / (t * t) * (-math.expm1(-t * _LN2) - t * _LN2)
    if abs(t) <= _ALPHA_SWITCH:
        return (
            1.0
            + r / (r - 1.0) ** 2 * (1.0 - 2.0 ** (-(r - 1.0)))
            - r / (r - 1.0) * _LN2
        )
    pm = subtree_point_mass(alpha)
    if abs(alpha - r) <= _ALPHA_SWITCH:
        diff_ratio = _LN2 * 2.0 ** (-(r - 1.0))
    else:
        # (2^-(r-1) - 2^-(alpha-1)) / (alpha - r)
        diff_ratio = -(2.0 ** (-(r - 1.0))) * math.expm1(
            -(alpha - r) * _LN2
        ) / (alpha - r)
    tail = 1.0 - 2.0 ** (-(r - 1.0))
    return pm + (alpha / t) * (alpha * diff_ratio - tail / (r - 1.0))
