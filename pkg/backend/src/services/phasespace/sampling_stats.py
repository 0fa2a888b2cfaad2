#!/usr/bin/env python3
"""
Empirical phase-space densities of photocurrent samples and their distance to
an analytic propensity.
"""

import logging
from typing import Tuple, Union

import numpy as np
from scipy import stats

from schemas.phase_space import GridGeometry, GridKind, PhaseSpaceGrid
from schemas.photocurrent import SampleBatch
from schemas.reports import DistanceReport
from utils.errors import InvalidArgumentError

logger = logging.getLogger(__name__)

MIN_EXPECTED_COUNT = 5.0

SampleInput = Union[SampleBatch, Tuple[np.ndarray, np.ndarray]]


def _coordinates(samples: SampleInput) -> Tuple[np.ndarray, np.ndarray]:
    if isinstance(samples, SampleBatch):
        return np.asarray(samples.z1), np.asarray(samples.z2)
    z1, z2 = samples
    return np.asarray(z1, dtype=np.float64).reshape(-1), np.asarray(z2, dtype=np.float64).reshape(-1)


def empirical_density(samples: SampleInput, geometry: GridGeometry) -> PhaseSpaceGrid:
    """
    Histogram of (z1, z2) on cells x_j ± h/2, normalized so that Σ·h² equals the
    fraction of samples inside the extent.

    Raises:
        InvalidArgumentError: no samples
    """
    z1, z2 = _coordinates(samples)
    n = z1.size
    if n == 0:
        raise InvalidArgumentError("empirical_density: no samples")
    edges = geometry.bin_edges()
    counts, _, _ = np.histogram2d(z1, z2, bins=(edges, edges))
    h = geometry.spacing
    inside = int(counts.sum())
    outside_fraction = (n - inside) / n
    if outside_fraction > 0:
        logger.info(f"empirical_density: {outside_fraction:.2%} of {n} samples outside the grid")
    return PhaseSpaceGrid(
        geometry=geometry,
        values=counts / (n * h * h),
        kind=GridKind.EMPIRICAL,
        outside_fraction=outside_fraction,
    )


def distribution_distance(
    analytic: PhaseSpaceGrid,
    empirical: PhaseSpaceGrid,
    n_samples: int,
    significance: float = 0.01,
) -> DistanceReport:
    """
    Total-variation distance and χ² goodness of fit of a histogram against an
    analytic grid. Negative analytic ripple is clamped for binning; cells
    expected to hold fewer than 5 samples are pooled with the outside region.

    Raises:
        InvalidArgumentError: geometry mismatch or wrong grid kinds
    """
    if not analytic.is_compatible(empirical):
        raise InvalidArgumentError(
            "distribution_distance: grid geometries differ",
            context={"analytic": analytic.geometry.to_dict(), "empirical": empirical.geometry.to_dict()},
        )
    if empirical.kind is not GridKind.EMPIRICAL or analytic.kind in (GridKind.EMPIRICAL, GridKind.CHARACTERISTIC):
        raise InvalidArgumentError(
            f"distribution_distance: need analytic vs empirical, got {analytic.kind.value} vs {empirical.kind.value}"
        )
    if n_samples < 1:
        raise InvalidArgumentError(f"distribution_distance: n_samples {n_samples} < 1")

    h = analytic.geometry.spacing
    expected_p = np.clip(np.asarray(analytic.values), 0.0, None).reshape(-1) * h * h
    total = float(expected_p.sum())
    if total > 1.0:
        expected_p = expected_p / total
        total = 1.0
    outside_expected_p = 1.0 - total

    observed = np.rint(np.asarray(empirical.values).reshape(-1) * n_samples * h * h)
    outside_observed = n_samples * empirical.outside_fraction
    empirical_p = observed / n_samples

    total_variation = 0.5 * (
        float(np.abs(empirical_p - expected_p).sum()) + abs(empirical.outside_fraction - outside_expected_p)
    )

    expected = expected_p * n_samples
    keep = expected >= MIN_EXPECTED_COUNT
    pooled_expected = float(expected[~keep].sum()) + outside_expected_p * n_samples
    pooled_observed = float(observed[~keep].sum()) + outside_observed
    bins_expected = list(expected[keep])
    bins_observed = list(observed[keep])
    if pooled_expected >= MIN_EXPECTED_COUNT or not bins_expected:
        bins_expected.append(pooled_expected)
        bins_observed.append(pooled_observed)
    else:
        # Too little mass to stand alone: fold into the largest cell
        largest = int(np.argmax(bins_expected))
        bins_expected[largest] += pooled_expected
        bins_observed[largest] += pooled_observed

    e = np.asarray(bins_expected)
    o = np.asarray(bins_observed)
    positive = e > 0
    statistic = float(np.sum((o[positive] - e[positive]) ** 2 / e[positive]))
    dof = max(int(positive.sum()) - 1, 1)
    pvalue = float(stats.chi2.sf(statistic, dof))

    report = DistanceReport(
        total_variation=total_variation,
        chi2_statistic=statistic,
        degrees_of_freedom=dof,
        pvalue=pvalue,
        significance=significance,
        n_samples=n_samples,
        pooled_bins=int((~keep).sum()),
        outside_fraction=empirical.outside_fraction,
    )
    logger.info(
        f"distribution_distance: TV={total_variation:.4f}, chi2={statistic:.1f} "
        f"(dof {dof}), p={pvalue:.3g}"
    )
    return report


def sample_from_grid(grid: PhaseSpaceGrid, rng: np.random.Generator, n: int) -> SampleBatch:
    """
    Draw (z1, z2) from a nonnegative grid: pick a cell by its clamped mass,
    then place the point uniformly inside the cell.
    """
    if grid.kind is GridKind.CHARACTERISTIC:
        raise InvalidArgumentError("sample_from_grid: characteristic grids are not densities")
    if n < 0:
        raise InvalidArgumentError(f"sample_from_grid: n={n} < 0")
    weights = np.clip(np.asarray(grid.values), 0.0, None).reshape(-1)
    if weights.sum() <= 0:
        raise InvalidArgumentError("sample_from_grid: grid has no positive mass")
    cells = rng.choice(weights.size, size=n, p=weights / weights.sum())
    i_re, i_im = np.unravel_index(cells, np.asarray(grid.values).shape)
    axis = grid.geometry.axis()
    h = grid.geometry.spacing
    z1 = axis[i_re] + h * (rng.random(n) - 0.5)
    z2 = axis[i_im] + h * (rng.random(n) - 0.5)
    return SampleBatch(scheme="grid", counts=np.zeros((n, 0), dtype=np.int64), z1=z1, z2=z2)
