"""
Tests for truncated Fock-space operators, states and composition.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from core.fockcore import (
    annihilation,
    coherent_cutoff,
    coherent_density,
    coherent_vector,
    creation,
    diagonal_density,
    displacement,
    displacement_closed_form,
    embed,
    expectation,
    fock_density,
    fock_vector,
    number_operator,
    partial_trace,
    pure_ensemble,
    quadrature,
    tensor,
    thermal_density,
)
from schemas.fock_state import DensityOperator, FockVector, ModeOperator
from utils.errors import InvalidArgumentError


def test_ladder_identities_hold_below_cutoff():
    cutoff = 12
    a = annihilation(cutoff)
    a_dag = creation(cutoff)
    for n in range(1, cutoff):
        lowered = a.apply(fock_vector(n, cutoff))
        expected = np.zeros(cutoff)
        expected[n - 1] = math.sqrt(n)
        np.testing.assert_array_equal(lowered, expected)
    for n in range(cutoff - 1):
        raised = a_dag.apply(fock_vector(n, cutoff))
        assert raised[n + 1] == pytest.approx(math.sqrt(n + 1), abs=0)


def test_number_operator_is_a_dagger_a():
    cutoff = 9
    a = annihilation(cutoff)
    np.testing.assert_allclose((a.dag() @ a).matrix, number_operator(cutoff).matrix, atol=1e-14)


def test_vacuum_quadrature_variance_is_one_quarter():
    vac = coherent_density(0j, 6)
    x = quadrature(0.3, 6)
    second = expectation(vac, x @ x).real
    assert second == pytest.approx(0.25, abs=1e-14)


def test_annihilation_rejects_tiny_cutoff():
    with pytest.raises(InvalidArgumentError):
        annihilation(1)


@settings(max_examples=40, deadline=None)
@given(
    re=st.floats(min_value=-3.0, max_value=3.0),
    im=st.floats(min_value=-3.0, max_value=3.0),
    cutoff=st.integers(min_value=1, max_value=60),
)
def test_coherent_norm_plus_truncation_error_is_one(re, im, cutoff):
    vector = coherent_vector(complex(re, im), cutoff)
    assert vector.norm_squared + vector.truncation_error == pytest.approx(1.0, abs=1e-10)


def test_coherent_cutoff_policy():
    assert coherent_cutoff(0) == 10
    assert coherent_cutoff(2.0) == math.ceil(4 + 12 + 10)
    vector = coherent_vector(2.0, coherent_cutoff(2.0))
    assert vector.truncation_error < 1e-8


def test_small_cutoff_coherent_warns_and_reports_loss(caplog):
    with caplog.at_level("WARNING"):
        vector = coherent_vector(3.0, 5)
    assert "small" in caplog.text
    assert vector.truncation_error > 0.1


def test_coherent_mean_field():
    z = 0.8 - 0.4j
    rho = coherent_density(z, 30)
    assert expectation(rho, annihilation(30)) == pytest.approx(z, abs=1e-10)


def test_displacement_of_vacuum_is_coherent():
    cutoff = 40
    gamma = 1.5 + 1.0j
    displaced = displacement(gamma, cutoff).apply(fock_vector(0, cutoff))
    target = coherent_vector(gamma, cutoff)
    tolerance = max(1e-8, target.truncation_error)
    assert np.max(np.abs(displaced - target.amplitudes)) <= tolerance


def test_displacement_matches_laguerre_closed_form_on_low_block():
    gamma = 0.7 - 0.2j
    dense = np.asarray(displacement(gamma, 40).matrix)[:10, :10]
    exact = np.asarray(displacement_closed_form(gamma, 10).matrix)
    np.testing.assert_allclose(dense, exact, atol=1e-8)


def test_thermal_density_mean():
    rho = thermal_density(1.5, 80)
    assert expectation(rho, number_operator(80)).real == pytest.approx(1.5, abs=1e-8)


def _normalized(rho: DensityOperator) -> DensityOperator:
    return DensityOperator(rho.cutoffs, np.asarray(rho.matrix) / rho.trace)


def test_tensor_partial_trace_round_trip_on_product_state():
    # Truncated factors carry trace < 1, which would scale the kept factor.
    rho_a = _normalized(thermal_density(0.4, 5))
    rho_b = _normalized(coherent_density(0.3j, 6))
    joint = tensor([rho_a, rho_b])
    np.testing.assert_allclose(partial_trace(joint, [0]).matrix, rho_a.matrix, atol=1e-12)
    np.testing.assert_allclose(partial_trace(joint, [1]).matrix, rho_b.matrix, atol=1e-12)
    assert partial_trace(joint, [1]).trace == pytest.approx(joint.trace, abs=1e-12)


def test_partial_trace_of_entangled_state_is_maximally_mixed():
    amplitudes = np.zeros(4)
    amplitudes[1] = amplitudes[2] = 1 / math.sqrt(2)   # (|0,1⟩ + |1,0⟩)/√2
    rho = DensityOperator.from_vector(FockVector((2, 2), amplitudes))
    np.testing.assert_allclose(partial_trace(rho, [0]).matrix, np.diag([0.5, 0.5]), atol=1e-15)


def test_partial_trace_reorders_kept_modes():
    joint = tensor([fock_density(1, 2), fock_density(0, 3), fock_density(2, 4)])
    reduced = partial_trace(joint, [2, 0])
    assert reduced.cutoffs == (4, 2)
    assert reduced.diagonal()[2 * 2 + 1] == pytest.approx(1.0)


def test_partial_trace_rejects_bad_modes():
    joint = tensor([fock_density(0, 2), fock_density(0, 2)])
    with pytest.raises(InvalidArgumentError):
        partial_trace(joint, [2])
    with pytest.raises(InvalidArgumentError):
        partial_trace(joint, [0, 0])


def test_tensor_rejects_mixed_kinds():
    with pytest.raises(InvalidArgumentError):
        tensor([fock_vector(0, 2), fock_density(0, 2)])


def test_embed_acts_on_one_mode():
    cutoffs = (3, 4)
    a1 = embed(annihilation(4), 1, cutoffs)
    state = tensor([fock_vector(2, 3), fock_vector(3, 4)])
    out = a1.apply(state)
    assert out[2 * 4 + 2] == pytest.approx(math.sqrt(3))


def test_density_operator_validation():
    with pytest.raises(InvalidArgumentError, match="Hermitian"):
        DensityOperator((2,), np.array([[0.5, 0.1], [0.0, 0.5]]))
    with pytest.raises(InvalidArgumentError, match="trace"):
        DensityOperator((2,), np.eye(2))
    with pytest.raises(InvalidArgumentError, match="eigenvalue"):
        DensityOperator((2,), np.array([[0.5, 0.6], [0.6, 0.5]]))


def test_fock_vector_rejects_overnormalized_amplitudes():
    with pytest.raises(InvalidArgumentError):
        FockVector((2,), np.array([1.0, 0.5]))


def test_records_are_immutable():
    rho = fock_density(1, 3)
    with pytest.raises(ValueError):
        rho.matrix[0, 0] = 1.0
    op = ModeOperator((2,), np.eye(2))
    with pytest.raises(ValueError):
        op.matrix[1, 1] = 0.0


def test_pure_ensemble_reconstructs_mixed_state():
    rho = diagonal_density([0.5, 0.3, 0.2])
    members = pure_ensemble(rho)
    rebuilt = sum(w * np.outer(v, v.conj()) for w, v in members)
    np.testing.assert_allclose(rebuilt, rho.matrix, atol=1e-14)
