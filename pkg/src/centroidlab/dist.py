"""Discrete / binned distribution tables passed between the formula layers."""

from __future__ import annotations

from dataclasses import dataclass, field

__all__ = ["DistributionTable", "PROVENANCES"]

PROVENANCES = ("exact", "asymptotic", "empirical")

_SUM_TOL = 1e-9


@dataclass(frozen=True)
class DistributionTable:
    """A probability table with provenance.

    ``support`` holds integer points (depth, label) or, for binned S/n
    tables, the bin midpoints followed by the atom location 1.0 with
    ``bin_edges`` carrying the 26 edges of the 25 half-open bins.
    ``truncation_tail_bound`` accounts for mass beyond a truncated support,
    so mass + tail must resolve to 1 within 1e-9.
    """

    support: tuple
    mass: tuple
    provenance: str
    truncation_tail_bound: float = 0.0
    bin_edges: tuple | None = None
    trials: int | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.provenance not in PROVENANCES:
            raise ValueError(f"provenance must be one of {PROVENANCES}")
        if len(self.support) != len(self.mass):
            raise ValueError("support and mass lengths differ")
        if any(m < -1e-15 for m in self.mass):
            raise ValueError("negative mass entry")
        if self.truncation_tail_bound < 0.0:
            raise ValueError("negative truncation_tail_bound")
        total = sum(self.mass) + self.truncation_tail_bound
        if not (1.0 - _SUM_TOL <= total <= 1.0 + _SUM_TOL):
            raise ValueError(f"table mass sums to {total}, not 1 within {_SUM_TOL}")

    @property
    def is_binned(self) -> bool:
        return self.bin_edges is not None

    def mean(self) -> float:
        return sum(s * m for s, m in zip(self.support, self.mass))

    def moment(self, order: int) -> float:
        return sum((s ** order) * m for s, m in zip(self.support, self.mass))

    def variance(self) -> float:
        mu = self.mean()
        return self.moment(2) - mu * mu

    def cdf(self) -> tuple:
        out = []
        acc = 0.0
        for m in self.mass:
            acc += m
            out.append(acc)
        return tuple(out)
