"""Batch simulation of centroid statistics with deterministic merging.

Trial i draws its tree from the stream (master_seed, i), so results are
bit-identical across runs and across thread counts: trials are processed in
fixed chunks of 4096, each chunk fills integer count arrays, and integer
merging is order-independent.  All empirical tables and moments are derived
from those counts.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .dist import DistributionTable
from .exact import p_depth_ge_exact, p_centroid_subtree_exact
from .families import FamilyParams
from .limit import (
    depth_limit_dist,
    label_limit_pmf,
    subtree_limit_cdf,
    subtree_point_mass,
)
from .treegen import _check_sampleable

__all__ = [
    "COLLECTORS",
    "ExperimentConfig",
    "MCSummary",
    "ComparisonStats",
    "run_experiment",
    "compare_distributions",
    "depth_limit_table",
    "depth_exact_table",
    "label_limit_table",
    "subtree_limit_table",
    "subtree_exact_table",
]

COLLECTORS = ("depth", "label", "subtree_fraction", "two_centroid")

_CHUNK = 4096
_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class ExperimentConfig:
    family: FamilyParams
    n: int
    trials: int
    master_seed: int
    collectors: tuple[str, ...] = COLLECTORS
    subtree_bins: int = 25

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.subtree_bins < 2:
            raise ValueError("subtree_bins must be >= 2")
        bad = [c for c in self.collectors if c not in COLLECTORS]
        if bad:
            raise ValueError(f"unknown collectors: {bad}")

    def to_dict(self) -> dict:
        return {
            "family": self.family.tag,
            "alpha": self.family.alpha,
            "n": self.n,
            "trials": self.trials,
            "master_seed": self.master_seed,
            "collectors": list(self.collectors),
            "subtree_bins": self.subtree_bins,
        }


@dataclass
class MCSummary:
    config: ExperimentConfig
    tables: dict[str, DistributionTable]
    moments: dict[str, dict[str, float]]
    two_centroid_frequency: float | None
    wall_time: float

    def to_dict(self, include_wall_time: bool = True) -> dict:
        out = {
            "config": self.config.to_dict(),
            "collectors": {
                name: {
                    "support": list(table.support),
                    "mass": list(table.mass),
                    "provenance": table.provenance,
                    **(
                        {"bin_edges": list(table.bin_edges)}
                        if table.bin_edges is not None
                        else {}
                    ),
                }
                for name, table in self.tables.items()
            },
            "moments": self.moments,
            "two_centroid_frequency": self.two_centroid_frequency,
        }
        if include_wall_time:
            out["wall_time"] = self.wall_time
        return out

    def to_json(self, include_wall_time: bool = True) -> str:
        return json.dumps(
            self.to_dict(include_wall_time), sort_keys=True, separators=(",", ":")
        )

    def canonical_json(self) -> str:
        """Deterministic serialization: full schema minus the timing field."""
        return self.to_json(include_wall_time=False)

    def to_csv(self) -> str:
        lines = ["collector,support,mass,provenance"]
        for name, table in self.tables.items():
            for s, m in zip(table.support, table.mass):
                lines.append(f"{name},{s!r},{m!r},{table.provenance}")
        return "\n".join(lines) + "\n"


def _subtree_bin_index(s: int, n: int, bins: int) -> int:
    # right-closed bins (0.5 + i/(2*bins), 0.5 + (i+1)/(2*bins)] in exact
    # integer arithmetic; valid for n/2 < s < n
    idx = (bins * (2 * s - n) + n - 1) // n - 1
    return min(max(idx, 0), bins - 1)


def _subtree_support(n_bins: int) -> tuple[tuple, tuple]:
    width = 0.5 / n_bins
    edges = tuple(0.5 + i * width for i in range(n_bins + 1))
    mids = tuple(0.5 + (i + 0.5) * width for i in range(n_bins))
    return edges, mids + (1.0,)


def run_experiment(config: ExperimentConfig, threads: int = 1) -> MCSummary:
    """Run the configured trials and aggregate empirical distributions."""
    started = time.perf_counter()
    fam = config.family
    _check_sampleable(fam)
    n = config.n
    seed = np.uint64(config.master_seed & _MASK64)
    recursive = fam.variant == "recursive"

    chunks = [
        (lo, min(lo + _CHUNK, config.trials))
        for lo in range(0, config.trials, _CHUNK)
    ]

    def _one_chunk(bounds):
        lo, hi = bounds
        d = np.zeros(n + 2, dtype=np.int64)
        l = np.zeros(n + 2, dtype=np.int64)
        s = np.zeros(n + 2, dtype=np.int64)
        tw = _kernels.mc_chunk_kernel(
            n, recursive, fam.c1, fam.c2, seed, lo, hi, d, l, s
        )
        return d, l, s, tw

    depth_counts = np.zeros(n + 2, dtype=np.int64)
    label_counts = np.zeros(n + 2, dtype=np.int64)
    size_counts = np.zeros(n + 2, dtype=np.int64)
    twins = 0
    if threads <= 1:
        results = map(_one_chunk, chunks)
    else:
        pool = ThreadPoolExecutor(max_workers=threads)
        results = pool.map(_one_chunk, chunks)
    for d, l, s, tw in results:
        depth_counts += d
        label_counts += l
        size_counts += s
        twins += tw
    if threads > 1:
        pool.shutdown()

    trials = config.trials
    tables: dict[str, DistributionTable] = {}
    moments: dict[str, dict[str, float]] = {}

    if "depth" in config.collectors:
        hmax = int(np.max(np.nonzero(depth_counts)[0]))
        mass = tuple(depth_counts[h] / trials for h in range(hmax + 1))
        tables["depth"] = DistributionTable(
            support=tuple(range(hmax + 1)),
            mass=mass,
            provenance="empirical",
            trials=trials,
        )
        moments["depth"] = _int_moments(depth_counts, trials)

    if "label" in config.collectors:
        lmax = int(np.max(np.nonzero(label_counts)[0]))
        mass = tuple(label_counts[k] / trials for k in range(1, lmax + 1))
        tables["label"] = DistributionTable(
            support=tuple(range(1, lmax + 1)),
            mass=mass,
            provenance="empirical",
            trials=trials,
        )
        moments["label"] = _int_moments(label_counts, trials)

    if "subtree_fraction" in config.collectors:
        bins = config.subtree_bins
        counts = [0] * bins
        for s in range(n // 2 + 1, n):
            c = int(size_counts[s])
            if c:
                counts[_subtree_bin_index(s, n, bins)] += c
        atom = int(size_counts[n])
        edges, support = _subtree_support(bins)
        mass = tuple(c / trials for c in counts) + (atom / trials,)
        tables["subtree_fraction"] = DistributionTable(
            support=support,
            mass=mass,
            provenance="empirical",
            bin_edges=edges,
            trials=trials,
        )
        fr_mean = math.fsum(
            (s / n) * size_counts[s] for s in range(1, n + 1)
        ) / trials
        fr_m2 = math.fsum(
            (s / n) ** 2 * size_counts[s] for s in range(1, n + 1)
        ) / trials
        moments["subtree_fraction"] = {
            "mean": fr_mean,
            "second_moment": fr_m2,
            "variance": fr_m2 - fr_mean * fr_mean,
        }

    freq = twins / trials if "two_centroid" in config.collectors else None
    return MCSummary(
        config=config,
        tables=tables,
        moments=moments,
        two_centroid_frequency=freq,
        wall_time=time.perf_counter() - started,
    )


def _int_moments(counts: np.ndarray, trials: int) -> dict[str, float]:
    vals = np.nonzero(counts)[0]
    mean = math.fsum(float(v) * counts[v] for v in vals) / trials
    m2 = math.fsum(float(v) ** 2 * counts[v] for v in vals) / trials
    return {"mean": mean, "variance": m2 - mean * mean}


@dataclass(frozen=True)
class ComparisonStats:
    tv_distance: float
    max_cdf_diff: float
    moment_z_scores: tuple[tuple[int, float], ...] = ()

    def to_dict(self) -> dict:
        return {
            "tv_distance": self.tv_distance,
            "max_cdf_diff": self.max_cdf_diff,
            "moment_z_scores": [list(z) for z in self.moment_z_scores],
        }


def compare_distributions(
    empirical: DistributionTable, reference: DistributionTable
) -> ComparisonStats:
    """Total variation, sup-CDF distance and moment z-scores on a matched
    support (pointwise for integer supports, bin-by-bin for binned ones)."""
    if empirical.is_binned != reference.is_binned:
        raise ValueError("cannot compare binned and unbinned tables")
    if empirical.is_binned:
        if len(empirical.bin_edges) != len(reference.bin_edges) or any(
            not math.isclose(a, b, rel_tol=0.0, abs_tol=1e-12)
            for a, b in zip(empirical.bin_edges, reference.bin_edges)
        ):
            raise ValueError("binned tables have incompatible bin edges")
        support = list(empirical.support)
        p = list(empirical.mass)
        q = list(reference.mass)
    else:
        union = sorted(set(empirical.support) | set(reference.support))
        emp = dict(zip(empirical.support, empirical.mass))
        ref = dict(zip(reference.support, reference.mass))
        support = union
        p = [emp.get(s, 0.0) for s in union]
        q = [ref.get(s, 0.0) for s in union]
    tv = 0.5 * math.fsum(abs(a - b) for a, b in zip(p, q))
    cdf_diff = 0.0
    acc_p = acc_q = 0.0
    for a, b in zip(p, q):
        acc_p += a
        acc_q += b
        cdf_diff = max(cdf_diff, abs(acc_p - acc_q))
    zs: list[tuple[int, float]] = []
    if empirical.trials:
        for order in (1, 2):
            m_emp = math.fsum((s**order) * a for s, a in zip(support, p))
            m_ref = math.fsum((s**order) * b for s, b in zip(support, q))
            m2_emp = math.fsum((s ** (2 * order)) * a for s, a in zip(support, p))
            var = max(m2_emp - m_emp * m_emp, 0.0) / empirical.trials
            if var > 0.0:
                zs.append((order, (m_emp - m_ref) / math.sqrt(var)))
            else:
                zs.append((order, 0.0 if m_emp == m_ref else math.inf))
    return ComparisonStats(
        tv_distance=tv, max_cdf_diff=cdf_diff, moment_z_scores=tuple(zs)
    )


def depth_limit_table(alpha: float, tail_tol: float = 1e-12) -> DistributionTable:
    """Limiting depth pmf truncated once the remaining tail is below tol."""
    masses = []
    h = 0
    while True:
        ccdf, pmf = depth_limit_dist(alpha, h)
        if h > 2 and ccdf < tail_tol:
            tail = ccdf
            break
        masses.append(pmf)
        h += 1
        if h > 2000:
            tail = depth_limit_dist(alpha, h).ccdf
            break
    return DistributionTable(
        support=tuple(range(len(masses))),
        mass=tuple(masses),
        provenance="asymptotic",
        truncation_tail_bound=tail,
    )


def depth_exact_table(
    family: FamilyParams, n: int, tail_tol: float = 1e-13
) -> DistributionTable:
    """Exact finite-n depth pmf via successive P(D >= h) differences."""
    masses = []
    h = 0
    prev = 1.0
    while True:
        nxt = p_depth_ge_exact(family, n, h + 1)
        masses.append(prev - nxt)
        prev = nxt
        h += 1
        if prev < tail_tol or h >= n:
            break
    return DistributionTable(
        support=tuple(range(len(masses))),
        mass=tuple(masses),
        provenance="exact",
        truncation_tail_bound=prev,
    )


def label_limit_table(alpha: float, tail_tol: float = 1e-12) -> DistributionTable:
    """Limiting label pmf truncated when the accumulated mass reaches 1 - tol."""
    masses = []
    k = 1
    acc = 0.0
    while acc < 1.0 - tail_tol and k <= 5000:
        p = label_limit_pmf(alpha, k)
        masses.append(p)
        acc += p
        k += 1
    return DistributionTable(
        support=tuple(range(1, len(masses) + 1)),
        mass=tuple(masses),
        provenance="asymptotic",
        truncation_tail_bound=max(0.0, 1.0 - acc),
    )


def subtree_limit_table(alpha: float, n_bins: int = 25) -> DistributionTable:
    """Limiting S/n law binned on [1/2, 1) plus the atom at 1."""
    edges, support = _subtree_support(n_bins)
    cdf_vals = [subtree_limit_cdf(alpha, e) for e in edges]
    mass = tuple(
        max(0.0, cdf_vals[i + 1] - cdf_vals[i]) for i in range(n_bins)
    ) + (subtree_point_mass(alpha),)
    return DistributionTable(
        support=support, mass=mass, provenance="asymptotic", bin_edges=edges
    )


def subtree_exact_table(
    family: FamilyParams, n: int, n_bins: int = 25
) -> DistributionTable:
    """Exact finite-n law of the nearest centroid's subtree size, binned.

    Only m > n/2 contributes (the nearest centroid's subtree always exceeds
    half the tree); the atom at 1 collects the complement.  O(n^2) work, so
    keep n modest.
    """
    edges, support = _subtree_support(n_bins)
    counts = [0.0] * n_bins
    acc = 0.0
    for m in range(n // 2 + 1, n):
        p = p_centroid_subtree_exact(family, n, m)
        counts[_subtree_bin_index(m, n, n_bins)] += p
        acc += p
    mass = tuple(counts) + (max(0.0, 1.0 - acc),)
    return DistributionTable(
        support=support, mass=mass, provenance="exact", bin_edges=edges
    )
