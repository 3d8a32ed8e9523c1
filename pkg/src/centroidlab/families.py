"""Families of very simple increasing trees.

A family is parameterized by a pair (c1, c2) with c1 > 0 and
alpha = 1 + c2/c1 > 0.  The total weight of trees with n nodes satisfies
y_{n+1}/y_n = c1*n + c2, equivalently the trees grow by attaching node m
to an existing node v with probability proportional to

    c1 + c2 - c2 * outdeg(v).

Standard members: recursive trees (c1, c2) = (1, 0), plane-oriented trees
(2, -1), and d-ary increasing trees (d-1, 1).  Families created from a bare
alpha are normalized to c1 = 1 since the growth law only depends on c2/c1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "FamilyParams",
    "make_family",
    "attach_weight",
    "total_weight",
    "VARIANTS",
]

VARIANTS = ("recursive", "plane", "dary", "general")

_VARIANT_ALIASES = {
    "recursive": "recursive",
    "plane": "plane",
    "plane-oriented": "plane",
    "planeoriented": "plane",
    "dary": "dary",
    "d-ary": "dary",
    "general": "general",
    "generalalpha": "general",
}


@dataclass(frozen=True)
class FamilyParams:
    """Validated parameters of one very simple increasing tree family."""

    c1: float
    c2: float
    alpha: float
    variant: str
    d: int | None = None

    @property
    def tag(self) -> str:
        """Short canonical name, e.g. ``recursive``, ``plane``, ``dary2``."""
        if self.variant == "dary":
            return f"dary{self.d}"
        if self.variant == "general":
            return f"general(alpha={self.alpha!r})"
        return self.variant

    def exact_coefficients(self) -> tuple[Fraction, Fraction]:
        """(c1, c2) as exact rationals (exact binary value of the floats)."""
        return Fraction(self.c1), Fraction(self.c2)


def make_family(
    variant: str,
    alpha: float | None = None,
    d: int | None = None,
) -> FamilyParams:
    """Build a validated family.

    ``recursive``, ``plane`` and ``dary`` fix (c1, c2); ``dary`` needs
    ``d >= 2``.  ``general`` needs ``alpha > 0`` and normalizes c1 = 1,
    c2 = alpha - 1.
    """
    try:
        kind = _VARIANT_ALIASES[variant.strip().lower()]
    except (KeyError, AttributeError):
        raise ValueError(f"unknown family variant {variant!r}") from None

    if kind == "recursive":
        return FamilyParams(c1=1.0, c2=0.0, alpha=1.0, variant="recursive")
    if kind == "plane":
        return FamilyParams(c1=2.0, c2=-1.0, alpha=0.5, variant="plane")
    if kind == "dary":
        if d is None or int(d) != d or d < 2:
            raise ValueError("d-ary family requires an integer d >= 2")
        d = int(d)
        return FamilyParams(
            c1=float(d - 1), c2=1.0, alpha=d / (d - 1), variant="dary", d=d
        )
    # general
    if alpha is None:
        raise ValueError("general family requires alpha")
    alpha = float(alpha)
    if not math.isfinite(alpha) or alpha <= 0.0:
        raise ValueError(f"alpha must be positive and finite, got {alpha}")
    return FamilyParams(c1=1.0, c2=alpha - 1.0, alpha=alpha, variant="general")


def attach_weight(family: FamilyParams, outdeg: int) -> float:
    """Unnormalized attachment weight of a node with the given out-degree.

    Recursive: 1 for every node.  Plane-oriented: outdeg + 1.  d-ary:
    d - outdeg, which is exactly 0 at full capacity; querying beyond
    capacity is an error.
    """
    if outdeg < 0:
        raise ValueError("outdeg must be >= 0")
    if family.variant == "dary" and outdeg > family.d:
        raise ValueError(f"d-ary node out-degree {outdeg} exceeds d={family.d}")
    return family.c1 + family.c2 - family.c2 * outdeg


def total_weight(family: FamilyParams, n: int) -> float:
    """log of the family's total weight y_n of trees with n nodes.

    y_n = prod_{j=1}^{n-1} (c1*j + c2) = c1^(n-1) * alpha^(rising n-1),
    evaluated through log-gamma so that n up to 10^6 and beyond stays in
    range.  n = 1 gives 0 (empty product).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return 0.0
    a = family.alpha
    return (n - 1) * math.log(family.c1) + math.lgamma(a + n - 1) - math.lgamma(a)
