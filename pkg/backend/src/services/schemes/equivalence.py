#!/usr/bin/env python3
"""
Statistical comparison of two scheme runs with matched physics: KS tests on
both marginals, moment deltas with normal-approximation CIs, variance ratios,
a χ² homogeneity test on a shared 2-D binning and (optionally) the
leading-order operator delta.
"""

import logging
from typing import Optional, Tuple

import numpy as np
from scipy import stats

from schemas.photocurrent import SampleBatch
from schemas.reports import EquivalenceReport, HomogeneityResult, KSResult, MomentDelta
from schemas.scheme_config import SchemeConfig
from services.schemes.operators import compare_operators
from services.schemes.scheme_runner import run_scheme
from utils.errors import InvalidArgumentError

logger = logging.getLogger(__name__)

HOMOGENEITY_BINS_PER_AXIS = 8


def check_matched(cfg_a: SchemeConfig, cfg_b: SchemeConfig) -> None:
    """Signal, idler and η must agree for two runs to be comparable."""
    mismatched = [
        name
        for name, a, b in zip(("signal", "idler", "eta"), cfg_a.physics_key(), cfg_b.physics_key())
        if a != b
    ]
    if mismatched:
        raise InvalidArgumentError(
            f"Equivalence needs matched physics; differing: {', '.join(mismatched)}",
            context={"mismatched": mismatched, "a": cfg_a.to_dict(), "b": cfg_b.to_dict()},
        )


def _mean_deltas(a: SampleBatch, b: SampleBatch, quantile: float) -> Tuple[MomentDelta, ...]:
    deltas = []
    for name in ("z1", "z2"):
        xa, xb = getattr(a, name), getattr(b, name)
        half = quantile * np.sqrt(np.var(xa, ddof=1) / xa.size + np.var(xb, ddof=1) / xb.size)
        deltas.append(MomentDelta(f"mean_{name}", float(xb.mean() - xa.mean()), float(half)))
    return tuple(deltas)


def _covariance_deltas(a: SampleBatch, b: SampleBatch, quantile: float) -> Tuple[MomentDelta, ...]:
    """Each covariance entry is the mean of centred products; its SE follows from their spread."""
    deltas = []
    for name, first, second in (("cov_z1z1", "z1", "z1"), ("cov_z1z2", "z1", "z2"),
                                ("cov_z2z2", "z2", "z2")):
        products = []
        for batch in (a, b):
            x, y = getattr(batch, first), getattr(batch, second)
            products.append((x - x.mean()) * (y - y.mean()))
        half = quantile * np.sqrt(sum(np.var(p, ddof=1) / p.size for p in products))
        deltas.append(MomentDelta(name, float(products[1].mean() - products[0].mean()), float(half)))
    return tuple(deltas)


def homogeneity_test(a: SampleBatch, b: SampleBatch,
                     bins_per_axis: int = HOMOGENEITY_BINS_PER_AXIS) -> HomogeneityResult:
    """χ² test that both batches share one (z1, z2) distribution, pooled-quantile bins."""
    edges = []
    for name in ("z1", "z2"):
        pooled = np.concatenate([getattr(a, name), getattr(b, name)])
        inner = np.unique(np.quantile(pooled, np.linspace(0, 1, bins_per_axis + 1)[1:-1]))
        edges.append(np.concatenate([[-np.inf], inner, [np.inf]]))
    table = np.stack([
        np.histogram2d(batch.z1, batch.z2, bins=edges)[0].reshape(-1) for batch in (a, b)
    ])
    table = table[:, table.sum(axis=0) > 0]
    if table.shape[1] < 2:
        return HomogeneityResult(statistic=0.0, degrees_of_freedom=0, pvalue=1.0)
    statistic, pvalue, dof, _ = stats.chi2_contingency(table, correction=False)
    return HomogeneityResult(float(statistic), int(dof), float(pvalue))


def compare_batches(
    a: SampleBatch,
    b: SampleBatch,
    significance: float = 0.01,
    operator_delta: Optional[float] = None,
) -> EquivalenceReport:
    """Build the report from two existing sample batches."""
    if not 0.0 < significance < 1.0:
        raise InvalidArgumentError(f"significance {significance} outside (0, 1)")
    if len(a) < 2 or len(b) < 2:
        raise InvalidArgumentError(f"Equivalence needs at least 2 samples per run, got {len(a)}, {len(b)}")

    quantile = float(stats.norm.ppf(1.0 - significance / 2.0))
    ks_z1 = stats.ks_2samp(a.z1, b.z1)
    ks_z2 = stats.ks_2samp(a.z2, b.z2)
    variance_ratio = (
        float(np.var(b.z1, ddof=1) / np.var(a.z1, ddof=1)),
        float(np.var(b.z2, ddof=1) / np.var(a.z2, ddof=1)),
    )
    report = EquivalenceReport(
        scheme_a=a.scheme,
        scheme_b=b.scheme,
        n_a=len(a),
        n_b=len(b),
        significance=significance,
        ks_z1=KSResult(float(ks_z1.statistic), float(ks_z1.pvalue)),
        ks_z2=KSResult(float(ks_z2.statistic), float(ks_z2.pvalue)),
        mean_deltas=_mean_deltas(a, b, quantile),
        covariance_deltas=_covariance_deltas(a, b, quantile),
        variance_ratio=variance_ratio,
        operator_delta=operator_delta,
        homogeneity=homogeneity_test(a, b),
    )
    logger.info(
        f"{a.scheme} vs {b.scheme}: KS p=({report.ks_z1.pvalue:.3g}, {report.ks_z2.pvalue:.3g}) "
        f"-> {report.verdict}"
    )
    return report


def equivalence_report(
    cfg_a: SchemeConfig,
    cfg_b: SchemeConfig,
    significance: float = 0.01,
    threads: int = 1,
    require_matched: bool = True,
    samples: Optional[Tuple[SampleBatch, SampleBatch]] = None,
    with_operators: bool = False,
) -> EquivalenceReport:
    """
    Compare two scheme configurations statistically.

    Args:
        cfg_a, cfg_b: Configs to compare (signal, idler and η must match unless
            require_matched is False, e.g. for the 1/(2η) variance law)
        significance: KS rejection level for the verdict
        threads: Worker threads for sampling
        samples: Pre-drawn batches (skips sampling)
        with_operators: Also compare the leading-order operators at η

    Raises:
        InvalidArgumentError: mismatched physics
    """
    if require_matched:
        check_matched(cfg_a, cfg_b)
    if samples is None:
        samples = (run_scheme(cfg_a, threads), run_scheme(cfg_b, threads))
    operator_delta = None
    if with_operators:
        operator_delta = compare_operators(cfg_a.scheme, cfg_b.scheme, cfg_a.eta).max_delta
    return compare_batches(samples[0], samples[1], significance, operator_delta)
