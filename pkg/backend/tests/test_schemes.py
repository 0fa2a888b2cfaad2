"""
Tests for the scheme adapters, sampling backends and the scheme runner.
"""

import math

import numpy as np
import pytest
from scipy import stats

from adapters import get_scheme, list_available_schemes
from adapters.sixport_scheme import fourier_currents
from schemas.scheme_config import (
    BackendKind,
    FockCutoffs,
    SchemeConfig,
    SchemeKind,
    coherent,
    fock,
    thermal,
    vacuum,
)
from services.schemes.backends import CoherentExactBackend, FockTruncatedBackend
from services.schemes.scheme_runner import (
    exact_moments,
    resolve_threads,
    run_eightport,
    run_heterodyne,
    run_scheme,
    run_sixport,
)
from utils.errors import InvalidArgumentError, ResourceLimitError


def test_registry_lists_all_schemes():
    assert {"eight-port", "six-port", "heterodyne"} <= set(list_available_schemes())
    assert get_scheme("double-homodyne").name == "eight-port"
    with pytest.raises(KeyError, match="Unknown detection scheme"):
        get_scheme("ten-port")


def test_sixport_fourier_currents_of_equal_counts():
    currents = fourier_currents(np.array([1, 1, 1]))
    assert abs(currents[1]) <= 1e-15
    assert abs(currents[2]) <= 1e-15
    assert currents[0] == pytest.approx(math.sqrt(3))


def test_sixport_fourier_currents_single_detector():
    np.testing.assert_allclose(fourier_currents(np.array([3, 0, 0])), [math.sqrt(3)] * 3, atol=1e-15)


def test_sixport_equal_counts_give_zero_current(coherent_config):
    cfg = coherent_config("six-port")
    z1, z2 = get_scheme("six-port").photocurrents(np.array([[5, 5, 5]]), cfg)
    assert abs(z1[0]) <= 1e-15 and abs(z2[0]) <= 1e-15


def test_eightport_difference_currents(coherent_config):
    cfg = coherent_config(eta=0.5, lo_amplitude=10.0)
    z1, z2 = get_scheme("eight-port").photocurrents(np.array([[0, 10, 5, 2]]), cfg)
    assert z1[0] == pytest.approx(10 / 5.0)
    assert z2[0] == pytest.approx(-3 / 5.0)


def test_photocurrents_reject_wrong_detector_count(coherent_config):
    with pytest.raises(InvalidArgumentError):
        get_scheme("eight-port").photocurrents(np.zeros((2, 3)), coherent_config())


def test_config_validation():
    with pytest.raises(InvalidArgumentError, match="heterodyne mixing"):
        SchemeConfig(SchemeKind.HETERODYNE, lo_amplitude=10.0, heterodyne_mixing=10.0)
    with pytest.raises(InvalidArgumentError, match="coherent inputs"):
        SchemeConfig(SchemeKind.EIGHT_PORT, signal=fock(1))
    with pytest.raises(InvalidArgumentError, match="lo_amplitude"):
        SchemeConfig(SchemeKind.EIGHT_PORT, lo_amplitude=0.0)
    with pytest.raises(InvalidArgumentError, match="LO cutoff"):
        SchemeConfig(SchemeKind.EIGHT_PORT, backend=BackendKind.FOCK_TRUNCATED,
                     lo_amplitude=5.0, cutoffs=FockCutoffs(lo=20))


def test_runner_rejects_scheme_mismatch(coherent_config):
    with pytest.raises(InvalidArgumentError):
        run_sixport(coherent_config("eight-port", sample_count=10))


def test_resolve_threads():
    assert resolve_threads(3) == 3
    assert resolve_threads(0) >= 1
    with pytest.raises(InvalidArgumentError):
        resolve_threads(-1)


def test_sampling_is_deterministic_across_thread_counts(coherent_config, monkeypatch):
    monkeypatch.setenv("TWOPHOTO_CHUNK_SIZE", "1000")
    cfg = coherent_config("six-port", sample_count=5500)
    single = run_scheme(cfg, threads=1)
    pooled = run_scheme(cfg, threads=4)
    np.testing.assert_array_equal(single.counts, pooled.counts)
    np.testing.assert_array_equal(single.z1, pooled.z1)
    assert len(single) == 5500


def test_seed_changes_samples(coherent_config):
    a = run_eightport(coherent_config(sample_count=100, seed=1))
    b = run_eightport(coherent_config(sample_count=100, seed=2))
    assert not np.array_equal(a.z1, b.z1)


def test_zero_samples(coherent_config):
    batch = run_heterodyne(coherent_config("heterodyne", sample_count=0))
    assert len(batch) == 0
    assert batch.counts.shape == (0, 4)


@pytest.mark.parametrize("scheme", ["eight-port", "six-port", "heterodyne"])
def test_exact_moments_calibrated_mean(scheme, coherent_config):
    alpha = 1.0 + 0.5j
    moments = exact_moments(coherent_config(scheme, alpha))
    assert abs(moments.complex_mean - alpha) <= 10.0 / 1e4
    if scheme != "six-port":
        assert moments.complex_mean == pytest.approx(alpha, abs=1e-9)


@pytest.mark.parametrize("scheme", ["eight-port", "six-port", "heterodyne"])
def test_exact_moments_variance_is_half(scheme, coherent_config):
    moments = exact_moments(coherent_config(scheme, 0, heterodyne_mixing=100.0))
    np.testing.assert_allclose(np.diag(moments.covariance), [0.5, 0.5], rtol=1e-3)
    assert abs(moments.covariance[0, 1]) <= 1e-6


def test_sixport_bias_decays_as_inverse_lo_amplitude():
    alpha, beta = 1.0 + 0.5j, 0.5 + 0.0j
    amplitudes = np.array([1e2, 1e3, 1e4])
    errors = []
    for z in amplitudes:
        cfg = SchemeConfig(SchemeKind.SIX_PORT, signal=coherent(alpha), idler=coherent(beta),
                           lo_amplitude=float(z))
        errors.append(abs(exact_moments(cfg).complex_mean - (alpha + np.conj(beta))))
    slope = np.polyfit(np.log(amplitudes), np.log(errors), 1)[0]
    assert slope == pytest.approx(-1.0, abs=0.3)
    assert errors[0] == pytest.approx(abs(np.conj(alpha) * beta) / 1e2, rel=1e-6)


def test_heterodyne_bias_stays_within_inverse_lo_amplitude(coherent_config):
    alpha, beta = 1.0 + 0.5j, 0.5 + 0.0j
    for z in (1e2, 1e3, 1e4):
        cfg = coherent_config("heterodyne", alpha, idler=coherent(beta), lo_amplitude=z,
                              heterodyne_mixing=10.0, sample_count=20_000, seed=31)
        # The four-bin beat model has no O(1/|z|) term: the bias is rounding only.
        bias = abs(exact_moments(cfg).complex_mean - (alpha + np.conj(beta)))
        assert bias <= 1.0 / z
        assert bias <= 1e-6
        batch = run_heterodyne(cfg)
        assert abs(batch.complex_currents.mean() - (alpha + np.conj(beta))) <= 5.0 * np.sqrt(1.0 / 20_000)


def test_large_lo_sample_mean_converges(coherent_config):
    alpha = 1.0 + 0.5j
    for z in (1e2, 1e3, 1e4):
        batch = run_eightport(coherent_config(alpha=alpha, lo_amplitude=z, seed=11))
        mean = batch.complex_currents.mean()
        # Statistical error of a 1e5-sample mean is ~2e-3 per quadrature
        assert abs(mean - alpha) <= 10.0 / z + 0.01


def test_sixport_sample_mean(coherent_config):
    batch = run_sixport(coherent_config("six-port", 2.0))
    assert batch.z1.mean() == pytest.approx(2.0, abs=0.0067)


@pytest.mark.parametrize("eta", [1.0, 0.5])
def test_vacuum_variance_law(eta, coherent_config):
    batch = run_eightport(coherent_config(alpha=0, eta=eta, seed=3))
    target = 1.0 / (2.0 * eta)
    assert np.var(batch.z1) == pytest.approx(target, rel=0.03)
    assert np.var(batch.z2) == pytest.approx(target, rel=0.03)


def test_heterodyne_vacuum_variance(coherent_config):
    batch = run_heterodyne(coherent_config("heterodyne", 0, heterodyne_mixing=10.0))
    assert np.var(batch.z1) == pytest.approx(0.5, rel=0.03)


# ---------------------------------------------------------------------------
# Fock-truncated backend
# ---------------------------------------------------------------------------

SMALL_CUTOFFS = FockCutoffs(signal=8, idler=1, output=12)


def _fock_config(signal, scheme="eight-port", **overrides) -> SchemeConfig:
    fields = dict(
        scheme=SchemeKind(scheme),
        signal=signal,
        idler=vacuum(),
        lo_amplitude=2.0,
        backend=BackendKind.FOCK_TRUNCATED,
        cutoffs=SMALL_CUTOFFS,
        sample_count=10_000,
        seed=5,
    )
    fields.update(overrides)
    return SchemeConfig(**fields)


def test_fock_backend_joint_distribution_is_normalized():
    cfg = _fock_config(coherent(0.5))
    joint = FockTruncatedBackend().joint_distribution(get_scheme("eight-port"), cfg)
    assert joint.probs.shape == (12, 12, 12, 12)
    assert joint.deficit <= 1e-6


def test_fock_backend_matches_poisson_for_coherent_input():
    cfg = _fock_config(coherent(0.5))
    scheme = get_scheme("eight-port")
    joint = FockTruncatedBackend().joint_distribution(scheme, cfg)
    means = scheme.detector_means(cfg)
    for k in range(4):
        marginal = joint.marginal(k).probs
        poisson = stats.poisson.pmf(np.arange(marginal.size), means[k])
        np.testing.assert_allclose(marginal, poisson, atol=1e-6)


@pytest.mark.slow
def test_fock_and_coherent_backends_agree_statistically():
    cfg = _fock_config(coherent(0.5))
    fock_batch = run_scheme(cfg)
    exact_batch = run_scheme(cfg.with_overrides(backend=BackendKind.COHERENT_EXACT, seed=6))
    assert stats.ks_2samp(fock_batch.z1, exact_batch.z1).pvalue > 0.01
    assert stats.ks_2samp(fock_batch.z2, exact_batch.z2).pvalue > 0.01


def test_fock_backend_with_single_photon_signal():
    cfg = _fock_config(fock(1), sample_count=2000, cutoffs=FockCutoffs(signal=8, idler=1, output=16))
    joint = FockTruncatedBackend().joint_distribution(get_scheme("eight-port"), cfg)
    total_mean = sum(joint.marginal(k).mean() for k in range(4))
    assert total_mean == pytest.approx(1.0 + 4.0, abs=1e-6)
    batch = run_scheme(cfg)
    assert batch.counts.shape == (2000, 4)


def test_fock_backend_applies_efficiency():
    cfg = _fock_config(thermal(0.3, cutoff=8), eta=0.5)
    joint = FockTruncatedBackend().joint_distribution(get_scheme("eight-port"), cfg)
    total_mean = sum(joint.marginal(k).mean() for k in range(4))
    ideal = 0.3 + 4.0   # thermal mean plus |z|^2
    assert total_mean == pytest.approx(0.5 * ideal, rel=1e-3)


def test_fock_backend_dimension_limit(monkeypatch):
    monkeypatch.setenv("TWOPHOTO_DIM_LIMIT", "1000")
    cfg = _fock_config(coherent(0.5))
    with pytest.raises(ResourceLimitError):
        FockTruncatedBackend().prepare(get_scheme("eight-port"), cfg)


def test_coherent_backend_means_are_lo_dominated(coherent_config):
    cfg = coherent_config(alpha=0)
    means = get_scheme("eight-port").detector_means(cfg)
    np.testing.assert_allclose(means, np.full(4, 1e8 / 4))
    mean, cov = CoherentExactBackend().exact_moments(get_scheme("eight-port"), cfg)
    np.testing.assert_allclose(mean, [0.0, 0.0], atol=1e-9)
