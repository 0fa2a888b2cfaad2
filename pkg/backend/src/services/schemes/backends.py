#!/usr/bin/env python3
"""
Sampling backends turning a scheme + config into raw detector counts.

CoherentExact: with coherent inputs every output of a passive network is a
product of coherent states, so detectors count independently with Poisson means
η|d_k|². Exact at any LO amplitude.

FockTruncated: propagates signal/idler photons through the lifted network in a
truncated multimode Fock space, applies the LO as output displacements
(U D_L(z) U† = Π_k D_k(S_kL z)), applies η loss as binomial thinning on each
detector axis, and samples the resulting joint count distribution.
"""

import logging
import math
from abc import ABC, abstractmethod
from functools import reduce
from typing import Callable, Dict, List, Tuple

import numpy as np

from adapters.base_scheme import DetectionScheme, PortRole
from core.fockcore import displacement, pure_ensemble
from core.linopt import apply_network, network_generator
from schemas.counts import JointCountDistribution
from schemas.fock_state import DensityOperator
from schemas.scheme_config import BackendKind, SchemeConfig
from services.detection.photodet import beamsplitter_channel, binomial_loss_matrix, sample_poisson
from services.schemes.state_specs import to_density
from utils.errors import InvalidArgumentError, ResourceLimitError, TruncationError
from utils.settings import get_settings

logger = logging.getLogger(__name__)

CountSampler = Callable[[np.random.Generator, int], np.ndarray]


class SamplingBackend(ABC):
    """Prepares a reusable count sampler for one (scheme, config)."""

    @abstractmethod
    def prepare(self, scheme: DetectionScheme, cfg: SchemeConfig) -> CountSampler:
        """Return f(rng, n) -> counts [n, K] in detector-label order."""


class CoherentExactBackend(SamplingBackend):
    """Independent Poisson counts for all-coherent inputs."""

    def prepare(self, scheme: DetectionScheme, cfg: SchemeConfig) -> CountSampler:
        means = scheme.detector_means(cfg)
        logger.debug(f"{scheme.name}: Poisson means {np.array2string(means, precision=4)}")

        def sampler(rng: np.random.Generator, n: int) -> np.ndarray:
            return sample_poisson(means, rng, n)

        return sampler

    def exact_moments(self, scheme: DetectionScheme, cfg: SchemeConfig) -> Tuple[np.ndarray, np.ndarray]:
        """
        Mean vector and covariance of (z1, z2) implied by the Poisson counts.
        Linear in the counts, so these follow from μ_k alone.
        """
        means = scheme.detector_means(cfg)
        scale = scheme.current_scale(cfg)
        weights = scheme.demodulation_weights()
        projections = np.vstack([weights.real, weights.imag]) / scale   # [2, K]
        mean = projections @ means
        covariance = (projections * means[None, :]) @ projections.T
        return mean, covariance


class FockTruncatedBackend(SamplingBackend):
    """Multimode truncated-Fock propagation for arbitrary signal/idler states."""

    def prepare(self, scheme: DetectionScheme, cfg: SchemeConfig) -> CountSampler:
        joint = self.joint_distribution(scheme, cfg)
        threshold = get_settings().deficit_threshold
        if joint.deficit > threshold:
            raise TruncationError(
                f"{scheme.name}: joint count deficit {joint.deficit:.3e} exceeds {threshold:.1e}; "
                "raise the output cutoff",
                context={"deficit": joint.deficit, "shape": list(joint.probs.shape)},
            )
        return joint.sample

    def input_states(self, scheme: DetectionScheme, cfg: SchemeConfig) -> Dict[int, DensityOperator]:
        """Signal and idler density operators keyed by network column."""
        topo = scheme.topology
        tau = scheme.input_transmission(cfg) ** 2
        states = {}
        for role, spec, cutoff in (
            (PortRole.SIGNAL, cfg.signal, cfg.cutoffs.signal),
            (PortRole.IDLER, cfg.idler, cfg.cutoffs.idler),
        ):
            rho = to_density(spec, cutoff)
            if tau < 1.0:
                rho = beamsplitter_channel(rho, tau)
            states[topo.column(role)] = rho
        return states

    def output_cutoffs(
        self, scheme: DetectionScheme, cfg: SchemeConfig, lo_outputs: np.ndarray,
        states: Dict[int, DensityOperator], propagation_cutoff: int,
    ) -> Tuple[int, ...]:
        if cfg.cutoffs.output is not None:
            return (max(cfg.cutoffs.output, 1),) * scheme.topology.num_modes
        photons = sum(float(np.dot(np.arange(r.cutoff), r.diagonal())) for r in states.values())
        cutoffs = []
        for amplitude in np.abs(lo_outputs):
            mean = (amplitude + math.sqrt(photons)) ** 2
            cutoffs.append(max(int(math.ceil(mean + 6.0 * math.sqrt(mean) + 4.0)), propagation_cutoff))
        return tuple(cutoffs)

    def joint_distribution(self, scheme: DetectionScheme, cfg: SchemeConfig) -> JointCountDistribution:
        """Joint counts over detectors (label order) including η loss."""
        topo = scheme.topology
        settings = get_settings()
        network = scheme.network()
        num_modes = topo.num_modes

        states = self.input_states(scheme, cfg)
        propagation_cutoff = 1 + sum(r.cutoff - 1 for r in states.values())
        prop_cutoffs = (propagation_cutoff,) * num_modes

        lo_outputs = np.asarray(network.entries)[:, topo.column(PortRole.LOCAL_OSCILLATOR)] \
            * scheme.lo_input_amplitude(cfg)
        out_cutoffs = self.output_cutoffs(scheme, cfg, lo_outputs, states, propagation_cutoff)
        out_dim = int(np.prod(out_cutoffs))
        if out_dim > settings.dim_limit:
            raise ResourceLimitError(
                f"{scheme.name}: output Fock dimension {out_dim} exceeds limit {settings.dim_limit}",
                context={"output_cutoffs": list(out_cutoffs), "limit": settings.dim_limit},
            )
        logger.info(
            f"{scheme.name}: Fock propagation cutoff {propagation_cutoff}, output cutoffs {out_cutoffs}"
        )

        working = max(out_cutoffs) + propagation_cutoff + 10
        if cfg.cutoffs.lo is not None:
            working = max(working, cfg.cutoffs.lo)
        if working > settings.dense_limit:
            raise ResourceLimitError(
                f"{scheme.name}: displacement cutoff {working} exceeds dense limit {settings.dense_limit}",
                context={"cutoff": working, "limit": settings.dense_limit},
            )
        displacements = [
            np.asarray(displacement(z_k, working).matrix)[:n_k, :propagation_cutoff]
            for z_k, n_k in zip(lo_outputs, out_cutoffs)
        ]
        generator = network_generator(network, prop_cutoffs)

        ensembles = {col: pure_ensemble(rho) for col, rho in states.items()}
        columns = sorted(ensembles)
        probs = np.zeros(out_cutoffs)
        vacuum = np.zeros(propagation_cutoff, dtype=np.complex128)
        vacuum[0] = 1.0

        for members in _product([ensembles[c] for c in columns]):
            weight = float(np.prod([w for w, _ in members]))
            mode_vectors: List[np.ndarray] = [vacuum] * num_modes
            for col, (_, vec) in zip(columns, members):
                padded = np.zeros(propagation_cutoff, dtype=np.complex128)
                padded[: vec.size] = vec
                mode_vectors = mode_vectors[:col] + [padded] + mode_vectors[col + 1:]
            psi = reduce(np.multiply.outer, mode_vectors).reshape(-1)
            out = apply_network(network, psi, prop_cutoffs, generator).reshape(prop_cutoffs)
            for k, matrix in enumerate(displacements):
                out = np.moveaxis(np.tensordot(matrix, out, axes=([1], [k])), 0, k)
            probs += weight * np.abs(out) ** 2

        if not cfg.eta.is_ideal:
            for k, n_k in enumerate(out_cutoffs):
                loss = binomial_loss_matrix(cfg.eta, n_k)
                probs = np.moveaxis(np.tensordot(loss, probs, axes=([1], [k])), 0, k)

        probs = probs.transpose(topo.detector_rows)
        deficit = max(0.0, 1.0 - float(probs.sum()))
        logger.debug(f"{scheme.name}: joint distribution deficit {deficit:.3e}")
        return JointCountDistribution(probs=probs, deficit=deficit)


def _product(lists: List[list]) -> List[list]:
    combos: List[list] = [[]]
    for options in lists:
        combos = [combo + [option] for combo in combos for option in options]
    return combos


def get_backend(kind: BackendKind) -> SamplingBackend:
    if kind is BackendKind.COHERENT_EXACT:
        return CoherentExactBackend()
    if kind is BackendKind.FOCK_TRUNCATED:
        return FockTruncatedBackend()
    raise InvalidArgumentError(f"Unknown backend {kind}")
