"""
Tests for the leading-order photocurrent operators.
"""

import itertools

import numpy as np
import pytest

from core.fockcore import coherent_density, tensor
from schemas.scheme_config import SchemeConfig, SchemeKind, coherent
from services.schemes.operators import (
    commutator_residual,
    compare_operators,
    low_lying_states,
    operator_mean,
    photocurrent_operators,
    predicted_moments,
    sixport_identity_residual,
)
from services.schemes.scheme_runner import exact_moments
from utils.errors import InvalidArgumentError

SCHEMES = ("eight-port", "six-port", "heterodyne")


@pytest.mark.parametrize("eta", [1.0, 0.8, 0.5])
@pytest.mark.parametrize("pair", list(itertools.combinations(SCHEMES, 2)))
def test_schemes_share_leading_order_operators(pair, eta):
    comparison = compare_operators(pair[0], pair[1], eta)
    assert comparison.max_delta <= 1e-12
    assert comparison.eta == eta


def test_comparison_notes_idler_identification():
    comparison = compare_operators("eight-port", "heterodyne")
    assert comparison.notes
    assert "c (heterodyne)" in comparison.notes[0]
    assert comparison.to_dict()["z1_max_abs_delta"] == comparison.z1_delta


@pytest.mark.parametrize("scheme", SCHEMES)
def test_calibrated_coefficients(scheme):
    ops = photocurrent_operators(scheme)
    assert ops.coefficients["signal"] == pytest.approx(1.0, abs=1e-12)
    assert ops.coefficients["idler_conjugate"] == pytest.approx(1.0, abs=1e-12)
    assert abs(ops.coefficients["signal_conjugate"]) <= 1e-12
    assert abs(ops.coefficients["idler"]) <= 1e-12


@pytest.mark.parametrize("eta", [1.0, 0.7])
def test_photocurrents_commute(eta):
    ops = photocurrent_operators("eight-port", eta, cutoffs=(6, 6), noise_cutoff=4)
    assert commutator_residual(ops) <= 1e-12


def test_noise_ancillas_only_below_unit_efficiency():
    assert photocurrent_operators("six-port", 1.0).mode_labels == ("signal", "a3")
    lossy = photocurrent_operators("six-port", 0.5, cutoffs=(4, 4), noise_cutoff=3)
    assert lossy.mode_labels == ("signal", "a3", "u1", "u2")
    assert lossy.cutoffs == (4, 4, 3, 3)
    assert lossy.coefficients["noise"] == pytest.approx(1.0, abs=1e-12)


def test_operators_are_hermitian():
    ops = photocurrent_operators("heterodyne", 0.8, cutoffs=(4, 4), noise_cutoff=3)
    for op in (ops.z1, ops.z2):
        matrix = np.asarray(op.matrix)
        np.testing.assert_allclose(matrix, matrix.conj().T, atol=1e-14)


def test_sixport_fourier_identities_hold():
    assert sixport_identity_residual((5, 5, 5)) <= 1e-10


def test_sixport_fourier_identities_need_three_modes():
    with pytest.raises(InvalidArgumentError):
        sixport_identity_residual((4, 4))


def test_low_lying_states_skip_the_top_level():
    indices = low_lying_states((3, 3), max_photons=4)
    # Only n_k <= 1 on each mode survives
    assert sorted(indices.tolist()) == [0, 1, 3, 4]


def test_wrong_cutoff_count():
    with pytest.raises(InvalidArgumentError):
        photocurrent_operators("eight-port", cutoffs=(4, 4, 4))


@pytest.mark.parametrize("eta", [1.0, 0.8, 0.5])
def test_vacuum_covariance_law(eta):
    ops = photocurrent_operators("eight-port", eta, cutoffs=(5, 5), noise_cutoff=4)
    mean, covariance = predicted_moments(ops)
    assert abs(mean) <= 1e-12
    np.testing.assert_allclose(covariance, np.eye(2) / (2.0 * eta), atol=1e-12)


def test_coherent_operator_mean():
    alpha = 0.5 - 0.25j
    ops = photocurrent_operators("six-port", 1.0, cutoffs=(10, 10))
    rho = tensor([coherent_density(alpha, 10), coherent_density(0j, 10)])
    assert operator_mean(ops, np.asarray(rho.matrix)) == pytest.approx(alpha, abs=1e-6)


def test_operator_mean_shape_check():
    ops = photocurrent_operators("eight-port", 1.0, cutoffs=(3, 3))
    with pytest.raises(InvalidArgumentError, match="state shape"):
        operator_mean(ops, np.eye(4))


@pytest.mark.parametrize("scheme", ["eight-port", "six-port"])
def test_exact_covariance_approaches_operator_prediction(scheme):
    eta = 0.8
    alpha = 1.0 + 0.5j
    _, predicted = predicted_moments(
        photocurrent_operators(scheme, eta, cutoffs=(4, 4), noise_cutoff=3)
    )
    for lo in (1e2, 1e3, 1e4):
        cfg = SchemeConfig(SchemeKind(scheme), signal=coherent(alpha), lo_amplitude=lo, eta=eta)
        covariance = exact_moments(cfg).covariance
        assert np.max(np.abs(covariance - predicted)) <= 10.0 / lo
