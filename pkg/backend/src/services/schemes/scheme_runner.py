#!/usr/bin/env python3
"""
Scheme runner: draws joint detector counts for a configured scheme and converts
them to rescaled photocurrents.

Sampling is split into fixed-size chunks; chunk i draws from RNG stream i and
chunks are merged in index order, so results depend on (config, seed) only and
never on the number of worker threads.
"""

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from adapters.base_scheme import DetectionScheme
from adapters.registry import get_scheme
from schemas.photocurrent import SampleBatch
from schemas.scheme_config import BackendKind, SchemeConfig, SchemeKind
from services.schemes.backends import CoherentExactBackend, SamplingBackend, get_backend
from utils.errors import InvalidArgumentError
from utils.rng import chunk_sizes, stream_generator
from utils.settings import get_settings

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SampleMoments:
    """Exact mean vector and covariance of (z1, z2)."""
    mean: np.ndarray            # Shape: [2]
    covariance: np.ndarray      # Shape: [2, 2]

    @property
    def complex_mean(self) -> complex:
        return complex(self.mean[0], self.mean[1])


def resolve_threads(threads: int) -> int:
    """0 means one worker per CPU."""
    if threads < 0:
        raise InvalidArgumentError(f"threads must be >= 0, got {threads}")
    return threads or (os.cpu_count() or 1)


def run_scheme(
    cfg: SchemeConfig,
    threads: int = 1,
    backend: Optional[SamplingBackend] = None,
) -> SampleBatch:
    """
    Draw cfg.sample_count joint outcomes for cfg.scheme.

    Args:
        cfg: Scheme configuration (scheme, states, LO, η, backend, seed)
        threads: Worker threads; 0 = auto
        backend: Override the backend named in the config

    Returns:
        SampleBatch with counts in detector-label order and rescaled (z1, z2)
    """
    scheme = get_scheme(cfg.scheme)
    scheme.validate(cfg)
    backend = backend or get_backend(cfg.backend)
    sampler = backend.prepare(scheme, cfg)

    sizes = chunk_sizes(cfg.sample_count, get_settings().chunk_size)
    workers = min(resolve_threads(threads), max(len(sizes), 1))
    logger.info(
        f"Sampling {cfg.sample_count} outcomes of {scheme.name} "
        f"({cfg.backend.value}, eta={cfg.eta.eta}, |z|={cfg.lo_amplitude:g}) "
        f"in {len(sizes)} chunks on {workers} threads"
    )

    def draw(chunk: Tuple[int, int]) -> np.ndarray:
        index, size = chunk
        return sampler(stream_generator(cfg.seed, index), size)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(draw, enumerate(sizes)))
    else:
        chunks = [draw(chunk) for chunk in enumerate(sizes)]

    num_detectors = scheme.topology.num_detectors
    counts = np.concatenate(chunks, axis=0) if chunks else np.zeros((0, num_detectors), np.int64)
    z1, z2 = scheme.photocurrents(counts, cfg)
    return SampleBatch(scheme=scheme.name, counts=counts, z1=z1, z2=z2)


def _run_kind(cfg: SchemeConfig, kind: SchemeKind, threads: int) -> SampleBatch:
    if cfg.scheme is not kind:
        raise InvalidArgumentError(
            f"run_{kind.name.lower().replace('_', '')}: config is for {cfg.scheme.value}"
        )
    return run_scheme(cfg, threads)


def run_eightport(cfg: SchemeConfig, threads: int = 1) -> SampleBatch:
    """Double homodyne: z1 = (I2−I1)/(η|z|), z2 = (I4−I3)/(η|z|)."""
    return _run_kind(cfg, SchemeKind.EIGHT_PORT, threads)


def run_sixport(cfg: SchemeConfig, threads: int = 1) -> SampleBatch:
    """Triple homodyne through the Fourier-transformed photocurrents."""
    return _run_kind(cfg, SchemeKind.SIX_PORT, threads)


def run_heterodyne(cfg: SchemeConfig, threads: int = 1) -> SampleBatch:
    """Four-bin beat-note demodulation with an image-band idler."""
    return _run_kind(cfg, SchemeKind.HETERODYNE, threads)


def exact_moments(cfg: SchemeConfig) -> SampleMoments:
    """
    Mean and covariance of (z1, z2) implied exactly by the Poisson count model.
    Coherent inputs only.
    """
    if cfg.backend is not BackendKind.COHERENT_EXACT:
        cfg = cfg.with_overrides(backend=BackendKind.COHERENT_EXACT)
    scheme: DetectionScheme = get_scheme(cfg.scheme)
    scheme.validate(cfg)
    mean, covariance = CoherentExactBackend().exact_moments(scheme, cfg)
    return SampleMoments(mean=mean, covariance=covariance)
