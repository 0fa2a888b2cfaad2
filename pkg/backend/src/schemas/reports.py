#!/usr/bin/env python3
"""
Report records produced by verification operations. Each serializes to a
JSON-ready dict for the CLI.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple


@dataclass(frozen=True)
class LossEquivalenceRow:
    count: int
    binomial: float
    beamsplitter: float

    @property
    def difference(self) -> float:
        return abs(self.binomial - self.beamsplitter)


@dataclass(frozen=True)
class LossEquivalenceReport:
    """Binomial-convolution loss vs beam splitter with a vacuum ancilla."""
    eta: float
    cutoff: int
    max_abs_difference: float
    rows: Tuple[LossEquivalenceRow, ...]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "eta": self.eta,
            "cutoff": self.cutoff,
            "max_abs_difference": self.max_abs_difference,
            "table": [
                {
                    "m": row.count,
                    "binomial": row.binomial,
                    "beamsplitter": row.beamsplitter,
                    "difference": row.difference,
                }
                for row in self.rows
            ],
        }


@dataclass(frozen=True)
class KSResult:
    statistic: float
    pvalue: float

    def to_dict(self) -> Dict[str, float]:
        return {"statistic": self.statistic, "pvalue": self.pvalue}


@dataclass(frozen=True)
class HomogeneityResult:
    """Two-sample χ² homogeneity test on a shared 2-D binning of (z1, z2)."""
    statistic: float
    degrees_of_freedom: int
    pvalue: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "statistic": self.statistic,
            "degrees_of_freedom": self.degrees_of_freedom,
            "pvalue": self.pvalue,
        }


@dataclass(frozen=True)
class MomentDelta:
    """Difference B − A of one moment with a normal-approximation CI half width."""
    name: str
    delta: float
    ci_half_width: float

    @property
    def within_ci(self) -> bool:
        return abs(self.delta) <= self.ci_half_width

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "delta": self.delta,
            "ci_half_width": self.ci_half_width,
            "within_ci": self.within_ci,
        }


@dataclass(frozen=True)
class EquivalenceReport:
    """Sample-level comparison of two scheme runs."""
    scheme_a: str
    scheme_b: str
    n_a: int
    n_b: int
    significance: float
    ks_z1: KSResult
    ks_z2: KSResult
    mean_deltas: Tuple[MomentDelta, ...]
    covariance_deltas: Tuple[MomentDelta, ...]
    variance_ratio: Tuple[float, float]     # Var_B / Var_A for (z1, z2)
    operator_delta: Optional[float] = None
    homogeneity: Optional[HomogeneityResult] = None     # Reported, not part of the verdict

    @property
    def equivalent(self) -> bool:
        samples_ok = min(self.ks_z1.pvalue, self.ks_z2.pvalue) > self.significance
        operators_ok = self.operator_delta is None or self.operator_delta <= 1e-12
        return samples_ok and operators_ok

    @property
    def verdict(self) -> str:
        return "equivalent" if self.equivalent else "not-equivalent"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "scheme_a": self.scheme_a,
            "scheme_b": self.scheme_b,
            "n_a": self.n_a,
            "n_b": self.n_b,
            "significance": self.significance,
            "ks": {"z1": self.ks_z1.to_dict(), "z2": self.ks_z2.to_dict()},
            "mean_deltas": [d.to_dict() for d in self.mean_deltas],
            "covariance_deltas": [d.to_dict() for d in self.covariance_deltas],
            "variance_ratio": {"z1": self.variance_ratio[0], "z2": self.variance_ratio[1]},
            "operator_max_abs_delta": self.operator_delta,
            "chi2": self.homogeneity.to_dict() if self.homogeneity else None,
            "verdict": self.verdict,
        }


@dataclass(frozen=True)
class DistanceReport:
    """Analytic propensity vs empirical histogram."""
    total_variation: float
    chi2_statistic: float
    degrees_of_freedom: int
    pvalue: float
    significance: float
    n_samples: int
    pooled_bins: int
    outside_fraction: float

    @property
    def passed(self) -> bool:
        return self.pvalue > self.significance

    def to_dict(self) -> Dict[str, Any]:
        return {
            "total_variation": self.total_variation,
            "chi2": self.chi2_statistic,
            "dof": self.degrees_of_freedom,
            "pvalue": self.pvalue,
            "significance": self.significance,
            "n_samples": self.n_samples,
            "pooled_bins": self.pooled_bins,
            "outside_fraction": self.outside_fraction,
            "passed": self.passed,
        }


@dataclass(frozen=True)
class OperatorComparison:
    """Max-abs deltas between leading-order photocurrent operators of two schemes."""
    scheme_a: str
    scheme_b: str
    eta: float
    z1_delta: float
    z2_delta: float
    notes: List[str] = field(default_factory=list)

    @property
    def max_delta(self) -> float:
        return max(self.z1_delta, self.z2_delta)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "scheme_a": self.scheme_a,
            "scheme_b": self.scheme_b,
            "eta": self.eta,
            "z1_max_abs_delta": self.z1_delta,
            "z2_max_abs_delta": self.z2_delta,
            "notes": list(self.notes),
        }
