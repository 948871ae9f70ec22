import itertools

import numpy as np
import pytest

from ciq.helmholtz import longitudinal_project, transverse_delta_kernel, transverse_project
from ciq.lattice import (
    LatticeGrid,
    ScalarField,
    VectorField,
    dft_forward,
    spectral_curl,
    spectral_divergence,
    spectral_gradient,
)


def brute_kernel_entry(grid, i, j, d):
    """Explicit mode sum (n^3 a^3)^-1 sum_n T_ij(k) exp(i k.d a)."""
    half = (grid.n_points - 1) // 2
    total = 0j
    for n in itertools.product(range(-half, half + 1), repeat=3):
        k = 2 * np.pi / grid.box_length * np.array(n, dtype=float)
        k2 = k @ k
        t = float(i == j) - (k[i] * k[j] / k2 if k2 > 0 else 0.0)
        total += t * np.exp(1j * k @ (np.array(d) * grid.spacing))
    return total / (grid.n_sites * grid.cell_volume)


def maxabs(v):
    return float(np.max(np.abs(v.values)))


class TestProjectors:
    def test_gradient_is_longitudinal(self, grid, rng):
        g = spectral_gradient(ScalarField.random(grid, rng))
        assert maxabs(transverse_project(g)) < 1e-12
        assert maxabs(longitudinal_project(g) - g) < 1e-12

    def test_curl_is_transverse(self, grid, rng):
        c = spectral_curl(VectorField.random(grid, rng))
        assert maxabs(transverse_project(c) - c) < 1e-12
        assert maxabs(longitudinal_project(c)) < 1e-12

    def test_constant_field_is_transverse(self, grid):
        v = VectorField.from_array(grid, np.outer([1.0, -2.0, 0.5], np.ones(grid.n_sites)))
        assert maxabs(transverse_project(v) - v) < 1e-12
        assert maxabs(longitudinal_project(v)) < 1e-12

    def test_algebra(self, grid, rng):
        v = VectorField.random(grid, rng)
        pt, pl = transverse_project(v), longitudinal_project(v)
        assert maxabs(pt + pl - v) < 1e-12
        assert maxabs(transverse_project(pt) - pt) < 1e-12
        assert maxabs(longitudinal_project(pl) - pl) < 1e-12
        assert maxabs(transverse_project(pl)) < 1e-12
        assert maxabs(spectral_divergence(pt)) < 1e-12
        assert maxabs(spectral_curl(pl)) < 1e-12


class TestTransverseKernel:
    def test_brute_force_origin_entry(self):
        g = LatticeGrid(3, 1.0)
        K = transverse_delta_kernel(g)
        assert K.at((0, 0, 0))[0, 0] == pytest.approx(brute_kernel_entry(g, 0, 0, (0, 0, 0)).real, abs=1e-15)

    @pytest.mark.parametrize("d", [(1, 0, 0), (1, 2, 0), (-1, 1, 2), (2, 2, 2)])
    def test_brute_force_offsets(self, d):
        g = LatticeGrid(3, 0.7)
        K = transverse_delta_kernel(g)
        for i, j in itertools.product(range(3), repeat=2):
            ref = brute_kernel_entry(g, i, j, d)
            assert abs(ref.imag) < 1e-12
            assert K.at(d)[i, j] == pytest.approx(ref.real, abs=1e-12)

    def test_real_symmetric_even(self, grid):
        K = transverse_delta_kernel(grid)
        assert K.imag_residual < 1e-12
        e = K.entries
        np.testing.assert_allclose(e, np.swapaxes(e, -1, -2), atol=1e-14)
        n = grid.n_points
        for d in [(1, 0, 0), (1, 2, 1), (0, 1, n - 1)]:
            np.testing.assert_allclose(K.at(d), K.at(tuple(-np.array(d))), atol=1e-14)

    def test_trace_identity(self, grid):
        K = transverse_delta_kernel(grid)
        tr = np.trace(K.entries, axis1=-2, axis2=-1)
        expected = np.full(grid.shape, 1.0 / (grid.n_sites * grid.cell_volume))
        expected[0, 0, 0] += 2.0 / grid.cell_volume
        np.testing.assert_allclose(tr, expected, atol=1e-12)

    def test_convolution_equals_projector(self, grid, rng):
        v = VectorField.random(grid, rng)
        K = transverse_delta_kernel(grid)
        assert maxabs(K.convolve(v) - transverse_project(v)) < 1e-10

    def test_single_mode_along_axis(self):
        g = LatticeGrid(5, 0.4)
        kappa = 2 * np.pi / g.box_length * 2
        amp = np.array([0.3, -1.1, 0.8])
        z = g.sites.reshape(-1, 3)[:, 2] * g.spacing
        v = VectorField.from_array(g, np.outer(amp, np.cos(kappa * z)))
        out = transverse_delta_kernel(g).convolve(v)
        np.testing.assert_allclose(out.values, np.outer(amp * [1, 1, 0], np.cos(kappa * z)), atol=1e-12)
        # and the spectrum of the result lives only on the chosen mode
        s = dft_forward(out.components[0])
        assert abs(s[(0, 0, 2)] - 0.15) < 1e-12
