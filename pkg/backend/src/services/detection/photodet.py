#!/usr/bin/env python3
"""
Single-detector photon counting with quantum efficiency η.

Two loss models are implemented independently so they can be checked against
each other:
  - binomial convolution of the ideal count distribution;
  - a transmissivity-η beam splitter whose second input port holds vacuum,
    followed by ideal counting on the transmitted mode.
Samplers take an explicit numpy Generator (see utils.rng).
"""

import logging
from typing import Optional, Union

import numpy as np
from scipy.special import comb, gammaln

from core.fockcore import partial_trace, tensor
from core.linopt import beamsplitter_matrix, lift_to_fock
from schemas.counts import CountDistribution, Efficiency, as_efficiency
from schemas.fock_state import DensityOperator, ModeOperator
from schemas.reports import LossEquivalenceReport, LossEquivalenceRow
from utils.errors import InvalidArgumentError, TruncationError
from utils.settings import get_settings

logger = logging.getLogger(__name__)

LOG_SPACE_THRESHOLD = 50


def ideal_counts(rho: DensityOperator, mode: int = 0) -> CountDistribution:
    """probs[m] = ⟨m|ρ|m⟩ on the designated mode (others traced out)."""
    if rho.num_modes > 1:
        rho = partial_trace(rho, [mode])
    elif mode != 0:
        raise InvalidArgumentError(f"ideal_counts: mode {mode} on a single-mode state")
    return CountDistribution.from_probs(rho.diagonal())


def binomial_loss_matrix(eta: Union[float, Efficiency], cutoff: int) -> np.ndarray:
    """
    B[m, n] = C(n, m) η^m (1−η)^{n−m}; columns sum to one.
    Coefficients switch to log-space above n = 50.
    """
    eta = as_efficiency(eta).eta
    if cutoff < 1:
        raise InvalidArgumentError(f"binomial_loss_matrix: cutoff {cutoff} < 1")
    if eta == 1.0:
        return np.eye(cutoff)

    n = np.arange(cutoff)[None, :]
    m = np.arange(cutoff)[:, None]
    valid = m <= n
    small = np.where(valid, comb(n, m), 0.0) * eta ** m * (1.0 - eta) ** np.where(valid, n - m, 0)
    matrix = np.where(valid, small, 0.0)

    if cutoff - 1 > LOG_SPACE_THRESHOLD:
        big = (n > LOG_SPACE_THRESHOLD) & valid
        log_terms = (
            gammaln(n + 1) - gammaln(m + 1) - gammaln(np.maximum(n - m, 0) + 1)
            + m * np.log(eta) + np.maximum(n - m, 0) * np.log1p(-eta)
        )
        matrix = np.where(big, np.exp(np.where(big, log_terms, 0.0)), matrix)
    return matrix


def lossy_counts_binomial(p: CountDistribution, eta: Union[float, Efficiency]) -> CountDistribution:
    """P_m^η = Σ_{n≥m} p_n C(n,m) η^m (1−η)^{n−m}; deficit carried over."""
    matrix = binomial_loss_matrix(eta, p.probs.size)
    return CountDistribution(probs=matrix @ p.probs, deficit=p.deficit)


def beamsplitter_channel(rho: DensityOperator, tau: float) -> DensityOperator:
    """
    Transmitted-mode state after mixing ρ with vacuum on a τ beam splitter.

    Both modes use ρ's cutoff N; every input component has at most N−1 photons,
    so the lifted unitary is exact on the populated sector.
    """
    if rho.num_modes != 1:
        raise InvalidArgumentError("beamsplitter_channel: single-mode state required")
    if not 0.0 < tau <= 1.0:
        raise InvalidArgumentError(f"beamsplitter_channel: tau {tau} outside (0, 1]")
    cutoff = rho.cutoff
    if tau == 1.0 or cutoff == 1:
        return rho
    vacuum = np.zeros((cutoff, cutoff))
    vacuum[0, 0] = 1.0
    joint = tensor([rho, DensityOperator((cutoff,), vacuum)])
    unitary = lift_to_fock(beamsplitter_matrix(tau), (cutoff, cutoff)).matrix
    evolved = unitary @ np.asarray(joint.matrix) @ unitary.conj().T
    evolved = 0.5 * (evolved + evolved.conj().T)
    return partial_trace(DensityOperator((cutoff, cutoff), evolved), [0])


def lossy_counts_beamsplitter(rho: DensityOperator, tau: float) -> CountDistribution:
    """Counts on the transmitted port of the vacuum-ancilla beam splitter."""
    return ideal_counts(beamsplitter_channel(rho, tau))


def equivalence_check(rho: DensityOperator, eta: Union[float, Efficiency]) -> LossEquivalenceReport:
    """Compare both loss models entrywise for τ = η."""
    efficiency = as_efficiency(eta)
    binomial = lossy_counts_binomial(ideal_counts(rho), efficiency).probs
    splitter = lossy_counts_beamsplitter(rho, efficiency.eta).probs
    size = max(binomial.size, splitter.size)
    binomial = np.pad(binomial, (0, size - binomial.size))
    splitter = np.pad(splitter, (0, size - splitter.size))
    rows = tuple(
        LossEquivalenceRow(count=m, binomial=float(binomial[m]), beamsplitter=float(splitter[m]))
        for m in range(size)
    )
    report = LossEquivalenceReport(
        eta=efficiency.eta,
        cutoff=rho.cutoff,
        max_abs_difference=float(np.max(np.abs(binomial - splitter))),
        rows=rows,
    )
    logger.debug(f"Loss equivalence eta={efficiency.eta}: max diff {report.max_abs_difference:.3e}")
    return report


def detection_povm(eta: Union[float, Efficiency], count: int, cutoff: int) -> ModeOperator:
    """Number-basis POVM element Π_m = Σ_n C(n,m) η^m (1−η)^{n−m} |n⟩⟨n|."""
    if not 0 <= count < cutoff:
        raise InvalidArgumentError(f"detection_povm: count {count} outside [0, {cutoff})")
    weights = binomial_loss_matrix(eta, cutoff)[count, :]
    return ModeOperator((cutoff,), np.diag(weights), hermitian=True, label=f"Pi_{count}")


# ---------------------------------------------------------------------------
# Samplers
# ---------------------------------------------------------------------------

def sample_counts(
    p: CountDistribution,
    rng: np.random.Generator,
    n: int,
    deficit_threshold: Optional[float] = None,
) -> np.ndarray:
    """
    Inverse-CDF samples of a count distribution.

    Raises:
        TruncationError: if the deficit exceeds the threshold (cutoff too small)
    """
    threshold = get_settings().deficit_threshold if deficit_threshold is None else deficit_threshold
    if p.deficit > threshold:
        raise TruncationError(
            f"Count distribution deficit {p.deficit:.3e} exceeds threshold {threshold:.1e}",
            context={"deficit": p.deficit, "threshold": threshold},
        )
    if n < 0:
        raise InvalidArgumentError(f"sample_counts: n={n} < 0")
    cdf = np.cumsum(p.probs)
    cdf /= cdf[-1]
    draws = np.searchsorted(cdf, rng.random(n), side="right")
    return np.minimum(draws, p.probs.size - 1).astype(np.int64)


def sample_poisson(
    mean: Union[float, np.ndarray],
    rng: np.random.Generator,
    n: int,
    normal_threshold: Optional[float] = None,
) -> np.ndarray:
    """
    Poisson counts; an array of means yields shape [n, len(mean)].

    Means above the threshold (default 1e6) use the rounded normal approximation
    N(μ, μ), clipped at zero.
    """
    threshold = (get_settings().poisson_normal_threshold
                 if normal_threshold is None else normal_threshold)
    means = np.atleast_1d(np.asarray(mean, dtype=np.float64))
    if np.any(means < 0) or not np.all(np.isfinite(means)):
        raise InvalidArgumentError(f"sample_poisson: invalid mean {mean}")

    out = np.empty((n, means.size), dtype=np.int64)
    for k, mu in enumerate(means):
        if mu > threshold:
            logger.debug(f"sample_poisson: normal approximation for mean {mu:.3e}")
            approx = np.rint(mu + np.sqrt(mu) * rng.standard_normal(n))
            out[:, k] = np.maximum(approx, 0).astype(np.int64)
        else:
            out[:, k] = rng.poisson(mu, n)
    return out[:, 0] if np.ndim(mean) == 0 else out
