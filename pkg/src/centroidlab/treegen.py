"""Sampling and exhaustive enumeration of increasing trees.

Trees are stored as parent arrays: ``parent[k]`` is the attachment target of
label k for k = 2..n, always smaller than k.  ``sample_tree`` draws from the
family's growth process; ``enumerate_histories`` expands every attachment
history with its exact rational probability and is the brute-force oracle
for the formula layers (n <= 9, history count (n-1)!).
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, TextIO

import numpy as np

from . import _kernels
from .families import FamilyParams, make_family
from .rng import RngStream

__all__ = [
    "IncreasingTree",
    "sample_tree",
    "enumerate_histories",
    "tree_from_parents",
    "write_trees",
    "read_trees",
]

ENUMERATION_MAX_N = 9


@dataclass(frozen=True, eq=False)
class IncreasingTree:
    """A labelled increasing tree of size n over labels 1..n.

    ``parent`` has length n+1; entries 0 and 1 are unused (zero), and
    parent[k] < k for k >= 2.  Instances are immutable and safe to share.
    """

    n: int
    parent: np.ndarray
    family: FamilyParams

    def parents_tuple(self) -> tuple[int, ...]:
        """The attachment history (parent[2], ..., parent[n])."""
        return tuple(int(p) for p in self.parent[2 : self.n + 1])

    def __repr__(self) -> str:
        return f"IncreasingTree(n={self.n}, parents={self.parents_tuple()}, family={self.family.tag})"


def tree_from_parents(parents: Iterable[int], family: FamilyParams) -> IncreasingTree:
    """Validate a parent list (entries for labels 2..n) into a tree."""
    plist = [int(p) for p in parents]
    n = len(plist) + 1
    arr = np.zeros(n + 1, dtype=np.int64)
    outdeg = [0] * (n + 1)
    for k, p in enumerate(plist, start=2):
        if p >= k:
            raise ValueError(f"parent[{k}] = {p} violates the increasing property")
        if p < 1:
            raise ValueError(f"parent[{k}] = {p} is not a valid label")
        arr[k] = p
        outdeg[p] += 1
        if family.variant == "dary" and outdeg[p] > family.d:
            raise ValueError(
                f"node {p} exceeds the d-ary out-degree cap d={family.d}"
            )
    arr.setflags(write=False)
    return IncreasingTree(n=n, parent=arr, family=family)


def _check_sampleable(family: FamilyParams) -> None:
    # c2 > 0 means attachment weights decrease with out-degree and must hit
    # exactly zero at capacity; that needs c1/c2 to be a positive integer
    # (the d-ary families).  Anything else has no growth process.
    if family.c2 <= 0.0:
        return
    cap = family.c1 / family.c2
    if abs(cap - round(cap)) > 1e-9 or round(cap) < 1:
        raise ValueError(
            f"family {family.tag} has c1/c2 = {cap}, which is not a positive "
            "integer; its growth process is undefined"
        )


def sample_tree(family: FamilyParams, n: int, rng: RngStream) -> IncreasingTree:
    """Draw one size-n tree from the family's growth process.

    At step m the new node attaches to v with probability
    (c1 + c2 - c2*outdeg(v)) / ((m-1)*c1 + c2).  Consumes exactly n-1
    deviates from ``rng``, so a fresh stream reproduces the same tree.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    _check_sampleable(family)
    arr = np.zeros(n + 1, dtype=np.int64)
    s0, s1, s2, s3 = (np.uint64(w) for w in rng.state())
    s0, s1, s2, s3 = _kernels.sample_tree_kernel(
        arr,
        n,
        family.variant == "recursive",
        family.c1,
        family.c2,
        s0,
        s1,
        s2,
        s3,
    )
    rng._s = [int(s0), int(s1), int(s2), int(s3)]
    arr.setflags(write=False)
    return IncreasingTree(n=n, parent=arr, family=family)


def enumerate_histories(
    family: FamilyParams, n: int
) -> list[tuple[IncreasingTree, Fraction]]:
    """All attachment histories of size n with exact probabilities.

    Probabilities are products of the per-step rationals
    (c1 + c2 - c2*outdeg) / ((m-1)*c1 + c2) and sum to exactly 1.
    Histories correspond one-to-one with parent arrays.
    """
    if not 1 <= n <= ENUMERATION_MAX_N:
        raise ValueError(f"enumeration supports 1 <= n <= {ENUMERATION_MAX_N}")
    _check_sampleable(family)
    c1, c2 = family.exact_coefficients()
    w_floor = Fraction(1, 10**12) * (c1 + abs(c2))

    out: list[tuple[IncreasingTree, Fraction]] = []
    parents = [0] * (n + 1)
    outdeg = [0] * (n + 1)

    def _make_tree() -> IncreasingTree:
        arr = np.array(parents, dtype=np.int64)
        arr.setflags(write=False)
        return IncreasingTree(n=n, parent=arr, family=family)

    def _rec(m: int, prob: Fraction) -> None:
        if m > n:
            out.append((_make_tree(), prob))
            return
        total = c1 * (m - 1) + c2
        for v in range(1, m):
            w = c1 + c2 - c2 * outdeg[v]
            if w <= w_floor:
                continue
            parents[m] = v
            outdeg[v] += 1
            _rec(m + 1, prob * w / total)
            outdeg[v] -= 1
        parents[m] = 0

    _rec(2, Fraction(1))
    return out


def shape_histogram(
    family: FamilyParams, n: int, trials: int, master_seed: int
) -> dict[tuple[int, ...], int]:
    """Sampled counts of parent arrays over ``trials`` independent streams.

    Trial i uses stream (master_seed, i), matching ``sample_tree`` with a
    fresh ``RngStream(master_seed, i)``.  Kept for n <= 9 where the shape
    space (n-1)! is small.
    """
    if not 1 <= n <= ENUMERATION_MAX_N:
        raise ValueError(f"shape_histogram supports 1 <= n <= {ENUMERATION_MAX_N}")
    _check_sampleable(family)
    n_codes = math.factorial(n - 1)
    counts = np.zeros(n_codes, dtype=np.int64)
    _kernels.shape_count_kernel(
        n,
        family.variant == "recursive",
        family.c1,
        family.c2,
        np.uint64(master_seed & ((1 << 64) - 1)),
        0,
        trials,
        counts,
    )
    out: dict[tuple[int, ...], int] = {}
    for code in np.flatnonzero(counts):
        rem = int(code)
        parents = [0] * (n + 1)
        for m in range(n, 1, -1):
            parents[m] = rem % (m - 1) + 1
            rem //= m - 1
        out[tuple(parents[2 : n + 1])] = int(counts[code])
    return out


def write_trees(
    fp: TextIO | str,
    trees: Iterable[IncreasingTree],
    family: FamilyParams,
    n: int,
    seed: int,
) -> None:
    """One tree per line, comma-separated parent[2..n], with a header line."""
    own = isinstance(fp, str)
    fh: TextIO = open(fp, "w", newline="\n") if own else fp
    try:
        fh.write(f"#family={family.tag},n={n},seed={seed}\n")
        for tree in trees:
            fh.write(",".join(str(p) for p in tree.parents_tuple()))
            fh.write("\n")
    finally:
        if own:
            fh.close()


def read_trees(fp: TextIO | str) -> tuple[list[IncreasingTree], dict]:
    """Parse the ``write_trees`` format; returns (trees, header fields)."""
    own = isinstance(fp, str)
    fh: TextIO = open(fp, "r") if own else fp
    try:
        header = fh.readline().strip()
        if not header.startswith("#"):
            raise ValueError("missing header line")
        fields: dict = {}
        for item in header[1:].split(","):
            key, _, value = item.partition("=")
            fields[key] = value
        family = _family_from_tag(fields["family"])
        n = int(fields["n"])
        trees = []
        for line in fh:
            line = line.strip()
            if line == "" and n > 1:
                continue
            parts = [int(x) for x in line.split(",")] if line else []
            if len(parts) != n - 1:
                raise ValueError(f"expected {n - 1} parents per line, got {len(parts)}")
            trees.append(tree_from_parents(parts, family))
        return trees, fields
    finally:
        if own:
            fh.close()


def _family_from_tag(tag: str) -> FamilyParams:
    if tag.startswith("dary"):
        return make_family("dary", d=int(tag[4:]))
    if tag.startswith("general"):
        inner = tag[tag.index("=") + 1 : tag.rindex(")")]
        return make_family("general", alpha=float(inner))
    return make_family(tag)


def trees_to_text(trees: list[IncreasingTree], family: FamilyParams, n: int, seed: int) -> str:
    buf = io.StringIO()
    write_trees(buf, trees, family, n, seed)
    return buf.getvalue()
