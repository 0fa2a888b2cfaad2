"""
Tests for characteristic functions, Wigner functions and propensities.
"""

import math

import numpy as np
import pytest

from core.fockcore import coherent_density, fock_density, thermal_density
from schemas.phase_space import GridGeometry, GridKind, PhaseSpaceGrid
from services.phasespace.characteristic import (
    characteristic_function,
    characteristic_values,
    direct_transform,
    symplectic_fourier_transform,
    wigner_function,
)
from services.phasespace.propensity import (
    convolve_grids,
    default_geometry,
    gaussian_filter,
    husimi_q,
    mean_field,
    propensity,
    propensity_by_convolution,
    rotation_variation,
    value_at,
)
from utils.errors import InvalidArgumentError

VACUUM = coherent_density(0j, 1)


def _center(grid: PhaseSpaceGrid) -> float:
    m = grid.points_per_axis
    return float(grid.values[m // 2, m // 2])


class TestGeometry:
    def test_axes(self):
        geometry = GridGeometry(6.0, 64)
        assert geometry.spacing == pytest.approx(0.1875)
        assert geometry.dual_spacing == pytest.approx(math.pi / 12.0)
        assert geometry.axis()[32] == 0.0
        assert geometry.dual_axis()[32] == 0.0
        assert geometry.bin_edges().size == 65

    def test_mesh_is_indexed_re_im(self):
        mesh = GridGeometry(2.0, 4).mesh()
        assert mesh[0, 3] == pytest.approx(-2.0 + 1.0j)
        assert mesh[3, 0] == pytest.approx(1.0 - 2.0j)

    @pytest.mark.parametrize("extent,points", [(6.0, 100), (6.0, 2), (0.0, 64), (float("inf"), 64)])
    def test_invalid_geometry(self, extent, points):
        with pytest.raises(InvalidArgumentError):
            GridGeometry(extent, points)

    def test_grid_shape_check(self):
        with pytest.raises(InvalidArgumentError, match="values shape"):
            PhaseSpaceGrid(GridGeometry(1.0, 4), np.zeros((4, 8)), GridKind.WIGNER)


class TestCharacteristic:
    def test_unit_at_origin(self):
        rho = fock_density(2, 6)
        assert characteristic_values(rho, np.array([0j]))[0] == pytest.approx(1.0, abs=1e-10)

    def test_vacuum_is_gaussian(self):
        points = np.array([0.3, 1.0j, -1.2 + 0.7j, 2.5])
        expected = np.exp(-0.5 * np.abs(points) ** 2)
        np.testing.assert_allclose(characteristic_values(VACUUM, points), expected, atol=1e-14)
        padded = coherent_density(0j, 4)
        np.testing.assert_allclose(characteristic_values(padded, points), expected, atol=1e-8)

    def test_coherent_closed_form(self):
        alpha = 0.5 - 0.3j
        points = np.array([0.4 + 0.2j, -1.0 + 0.5j, 1.5j])
        expected = np.exp(-0.5 * np.abs(points) ** 2 + points * np.conj(alpha) - np.conj(points) * alpha)
        actual = characteristic_values(coherent_density(alpha, 12), points)
        np.testing.assert_allclose(actual, expected, atol=1e-7)

    def test_single_photon_closed_form(self):
        points = np.array([0.5, 1.0 + 1.0j])
        expected = (1.0 - np.abs(points) ** 2) * np.exp(-0.5 * np.abs(points) ** 2)
        np.testing.assert_allclose(characteristic_values(fock_density(1, 4), points), expected, atol=1e-9)

    def test_grid_is_complex(self):
        grid = characteristic_function(VACUUM, GridGeometry(6.0, 16))
        assert grid.kind is GridKind.CHARACTERISTIC
        assert np.iscomplexobj(grid.values)
        with pytest.raises(InvalidArgumentError):
            grid.total_mass()

    def test_fft_matches_direct_quadrature(self):
        geometry = GridGeometry(4.0, 16)
        chi = characteristic_values(coherent_density(0.5 + 0.5j, 8), geometry.dual_mesh())
        np.testing.assert_allclose(
            symplectic_fourier_transform(chi, geometry), direct_transform(chi, geometry), atol=1e-10
        )

    def test_direct_transform_refuses_large_grids(self):
        geometry = GridGeometry(4.0, 64)
        with pytest.raises(InvalidArgumentError):
            direct_transform(np.zeros((64, 64)), geometry)


class TestWigner:
    def test_vacuum_origin(self):
        grid = wigner_function(VACUUM, GridGeometry(6.0, 64))
        assert _center(grid) == pytest.approx(2.0 / math.pi, rel=1e-4)
        assert grid.total_mass() == pytest.approx(1.0, rel=1e-4)
        assert grid.imag_residue <= 1e-9

    def test_single_photon_is_negative_at_origin(self):
        grid = wigner_function(fock_density(1, 4), GridGeometry(6.0, 64))
        assert _center(grid) == pytest.approx(-2.0 / math.pi, rel=1e-4)
        assert grid.total_mass() == pytest.approx(1.0, rel=1e-4)

    def test_coherent_moments(self):
        alpha = 1.0 - 0.5j
        grid = wigner_function(coherent_density(alpha, 15), GridGeometry(6.0, 64))
        mean, covariance = grid.moments()
        np.testing.assert_allclose(mean, [1.0, -0.5], atol=1e-4)
        np.testing.assert_allclose(covariance, np.eye(2) / 4.0, atol=1e-4)


class TestPropensity:
    def test_vacuum_vacuum_at_unit_efficiency(self):
        grid = propensity(VACUUM, VACUUM)
        assert grid.geometry == GridGeometry(6.0, 256)
        assert grid.total_mass() == pytest.approx(1.0, rel=5e-3)
        assert _center(grid) == pytest.approx(1.0 / math.pi, rel=1e-2)
        _, covariance = grid.moments()
        assert covariance[0, 0] == pytest.approx(0.5, rel=1e-2)
        assert covariance[1, 1] == pytest.approx(0.5, rel=1e-2)

    @pytest.mark.parametrize("eta", [1.0, 0.8, 0.5])
    def test_vacuum_variance_law(self, eta):
        grid = propensity(VACUUM, VACUUM, GridGeometry(8.0, 128), eta)
        _, covariance = grid.moments()
        np.testing.assert_allclose(np.diag(covariance), [0.5 / eta] * 2, rtol=1e-2)

    def test_mean_adds_signal_and_conjugate_probe(self):
        signal = coherent_density(1.0 + 0.5j, 15)
        probe = coherent_density(0.5j, 12)
        grid = propensity(signal, probe, GridGeometry(6.0, 64))
        mean, _ = grid.moments()
        np.testing.assert_allclose(mean, [1.0, 0.0], atol=1e-3)

    def test_convolution_oracle(self):
        geometry = GridGeometry(6.0, 64)
        signal = coherent_density(1.0 + 0.5j, 15)
        probe = coherent_density(0.5j, 12)
        direct = propensity_by_convolution(wigner_function(signal, geometry), wigner_function(probe, geometry))
        spectral = propensity(signal, probe, geometry)
        assert np.max(np.abs(direct.values - spectral.values)) <= 1e-3

    def test_efficiency_factorizes(self):
        geometry = GridGeometry(6.0, 128)
        signal = fock_density(1, 4)
        ideal = propensity(signal, VACUUM, geometry, 1.0)
        lossy = propensity(signal, VACUUM, geometry, 0.6)
        filtered = convolve_grids(ideal, gaussian_filter(0.6, geometry))
        assert np.max(np.abs(lossy.values - filtered.values)) <= 1e-3

    def test_vacuum_probe_gives_husimi_q(self):
        geometry = GridGeometry(6.0, 64)
        signal = fock_density(1, 4)
        q = husimi_q(signal, geometry)
        k = propensity(signal, VACUUM, geometry)
        np.testing.assert_allclose(k.values, q.values, atol=1e-6)
        assert k.min_value() >= -1e-6
        # Q of one photon is |alpha|^2 e^{-|alpha|^2} / pi
        assert value_at(q, 1.125 + 0j) == pytest.approx(1.125 ** 2 * math.exp(-1.125 ** 2) / math.pi, rel=1e-6)

    def test_rotation_invariance(self):
        grid = propensity(thermal_density(0.5, 20), VACUUM, GridGeometry(6.0, 128), 0.8)
        assert rotation_variation(grid, radius=1.0) <= 0.01 * _center(grid)

    def test_gaussian_filter_is_normalized(self):
        assert gaussian_filter(0.5, GridGeometry(6.0, 128)).total_mass() == pytest.approx(1.0, rel=1e-4)
        with pytest.raises(InvalidArgumentError):
            gaussian_filter(1.0, GridGeometry(6.0, 128))

    @pytest.mark.parametrize("eta", [0.0, 1.5, -0.1])
    def test_invalid_efficiency(self, eta):
        with pytest.raises(InvalidArgumentError):
            propensity(VACUUM, VACUUM, GridGeometry(6.0, 16), eta)

    def test_default_geometry_tracks_centroid(self):
        signal = coherent_density(3.0 + 4.0j, 60)
        assert mean_field(signal) == pytest.approx(3.0 + 4.0j, abs=1e-6)
        assert default_geometry(signal, VACUUM).half_extent == pytest.approx(10.0, abs=1e-5)
        assert default_geometry(VACUUM, VACUUM, 64) == GridGeometry(6.0, 64)

    def test_convolution_requires_same_geometry(self):
        a = gaussian_filter(0.5, GridGeometry(6.0, 16))
        b = gaussian_filter(0.5, GridGeometry(5.0, 16))
        with pytest.raises(InvalidArgumentError):
            convolve_grids(a, b)
