"""
Transverse / longitudinal split of lattice vector fields.

Per mode the transverse projector is ``T(k) = I - khat khat^T`` and the
longitudinal one ``L(k) = khat khat^T``.  On the torus the constant mode is
both divergence- and curl-free; it is assigned to the transverse part
(``T(0) = I``, ``L(0) = 0``) so that ``T + L = I`` holds for every mode.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ciq.lattice import LatticeGrid, VectorField, forward_cube, inverse_cube


def projector_symbols(grid: LatticeGrid) -> tuple[np.ndarray, np.ndarray]:
    """Per-mode ``(T, L)`` matrices in shifted order, each ``(n, n, n, 3, 3)``."""
    k = grid.wavevectors
    k2 = grid.k_squared
    safe = np.where(k2 > 0, k2, 1.0)
    long_ = np.einsum("...i,...j->...ij", k, k) / safe[..., None, None]
    long_[k2 == 0] = 0.0
    trans = np.eye(3) - long_
    return trans, long_


def _apply_symbol(v: VectorField, symbol: np.ndarray) -> VectorField:
    g = v.grid
    spec = forward_cube(v.cube)  # (3, n, n, n)
    out = np.einsum("...ij,j...->i...", symbol, spec)
    return VectorField.from_array(g, g.to_flat(inverse_cube(out).real))


def transverse_project(v: VectorField) -> VectorField:
    """Divergence-free part of ``v`` (constant mode included)."""
    trans, _ = projector_symbols(v.grid)
    return _apply_symbol(v, trans)


def longitudinal_project(v: VectorField) -> VectorField:
    """Curl-free part of ``v``; zero on the constant mode."""
    _, long_ = projector_symbols(v.grid)
    return _apply_symbol(v, long_)


@dataclass(frozen=True)
class TransverseKernel:
    """
    Discrete transverse delta indexed by lattice displacement.

    ``entries[d3, d2, d1]`` is the symmetric 3x3 matrix
    ``(n**3 * a**3)**-1 * sum_n T(k(n)) exp(i k(n).d a)`` with each ``di``
    taken modulo ``n_points``.
    """

    grid: LatticeGrid
    entries: np.ndarray = field(repr=False)
    imag_residual: float = 0.0

    def at(self, d) -> np.ndarray:
        n = self.grid.n_points
        d1, d2, d3 = (int(c) % n for c in d)
        return self.entries[d3, d2, d1]

    def convolve(self, v: VectorField) -> VectorField:
        """``sum_y a**3 * kernel(x - y) v(y)``, evaluated by direct summation."""
        g = self.grid
        out = g.cell_volume * self.block_matrix() @ v.values.reshape(-1)
        return VectorField.from_array(g, out)

    def block_matrix(self) -> np.ndarray:
        """Dense ``(3 n_sites) x (3 n_sites)`` matrix ``K[(i,x),(j,y)] = kernel_ij(x-y)``."""
        g = self.grid
        x = g.sites.reshape(-1, 3)
        d = (x[:, None, :] - x[None, :, :]) % g.n_points
        kxy = self.entries[d[..., 2], d[..., 1], d[..., 0]]
        return np.transpose(kxy, (2, 0, 3, 1)).reshape(3 * g.n_sites, 3 * g.n_sites)


def transverse_delta_kernel(grid: LatticeGrid) -> TransverseKernel:
    trans, _ = projector_symbols(grid)
    # sum_n T(n) e^{i k.d} = n**3 * ifftn(T) with T in unshifted order
    sym = np.moveaxis(trans, (-2, -1), (0, 1))  # (3, 3, n, n, n)
    summed = inverse_cube(sym)  # (3, 3, n, n, n) indexed by displacement
    scaled = summed / (grid.n_sites * grid.cell_volume)
    imag = float(np.max(np.abs(scaled.imag)))
    entries = np.moveaxis(scaled.real, (0, 1), (-2, -1)).copy()
    entries.flags.writeable = False
    return TransverseKernel(grid, entries, imag)
