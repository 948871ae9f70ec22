"""
Klein-Gordon and Coulomb-gauge Maxwell fields as lattice quadratic systems.

Coordinates are raw field values per site and ``H = a**3 * sum_x (...)``,
so the continuum ``delta(x - y)`` shows up as ``delta_{x,y} / a**3`` in every
bracket below.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ciq.errors import DimensionMismatch
from ciq.helmholtz import transverse_delta_kernel
from ciq.lattice import LatticeGrid, derivative_matrices, laplacian_matrix
from ciq.solver import BracketMatrix, QuadraticSystem


@dataclass(frozen=True)
class KGScenario:
    grid: LatticeGrid
    mass: float = 1.0

    def __post_init__(self):
        if not self.mass > 0:
            raise ValueError("mass must be positive")


@dataclass(frozen=True)
class MaxwellScenario:
    grid: LatticeGrid


def _labels(grid: LatticeGrid, fields: list[tuple[str, int]]) -> list[tuple]:
    return [(name, comp, s) for name, comp in fields for s in range(grid.n_sites)]


def build_kg_system(s: KGScenario) -> QuadraticSystem:
    """
    ``xi = (phi, pi)``, ``phi' = pi``, ``pi' = lap(phi) - m^2 phi``.
    """
    g = s.grid
    n = g.n_sites
    K = -laplacian_matrix(g)
    W = s.mass**2 * np.eye(n) + K
    Z = np.zeros((n, n))
    I = np.eye(n)
    M = g.cell_volume * np.block([[W, Z], [Z, I]])
    A = np.block([[Z, I], [-W, Z]])
    return QuadraticSystem(M, A, None, _labels(g, [("phi", 0), ("pi", 0)]))


def build_maxwell_system(s: MaxwellScenario) -> QuadraticSystem:
    """
    ``xi = (A_1, A_2, A_3, pi_1, pi_2, pi_3)`` each over all sites.

    ``A' = -pi``, ``pi' = -lap(A)``; constraints ``div A = 0`` and
    ``div pi = 0``.  The potential energy is the quadratic form of
    ``1/2 (d_j A_i d_j A_i - d_i A_j d_j A_i)``, i.e. ``|k|^2 - k k^T`` per mode.
    """
    g = s.grid
    n = g.n_sites
    K = -laplacian_matrix(g)
    D = derivative_matrices(g)
    M_AA = np.block([[K * (i == j) + D[i] @ D[j] for j in range(3)] for i in range(3)])
    M_AA = 0.5 * (M_AA + M_AA.T)
    I3 = np.eye(3 * n)
    Z3 = np.zeros((3 * n, 3 * n))
    M = g.cell_volume * np.block([[M_AA, Z3], [Z3, I3]])
    A = np.block([[Z3, -I3], [np.kron(np.eye(3), K), Z3]])
    div = np.hstack(D)
    Zd = np.zeros_like(div)
    C = np.block([[div, Zd], [Zd, div]])
    labels = _labels(g, [("A", i) for i in range(3)] + [("pi", i) for i in range(3)])
    return QuadraticSystem(M, A, C, labels)


def expected_kg_bracket(grid: LatticeGrid) -> np.ndarray:
    """``{phi(x), pi(y)} = delta_{x,y} / a**3``; ``{phi, phi} = {pi, pi} = 0``."""
    n = grid.n_sites
    D = np.eye(n) / grid.cell_volume
    Z = np.zeros((n, n))
    return np.block([[Z, D], [-D, Z]])


def expected_maxwell_bracket(grid: LatticeGrid) -> np.ndarray:
    """``{A_i(x), pi_j(y)} = -deltaT_ij(x - y)``; ``{A, A} = {pi, pi} = 0``."""
    T = transverse_delta_kernel(grid).block_matrix()
    Z = np.zeros_like(T)
    return np.block([[Z, -T], [T.T, Z]])


def compare_brackets(actual, expected) -> float:
    """Max abs elementwise difference between two bracket tables."""
    a = actual.theta if isinstance(actual, BracketMatrix) else np.asarray(actual)
    e = expected.theta if isinstance(expected, BracketMatrix) else np.asarray(expected)
    if a.shape != e.shape:
        raise DimensionMismatch(f"shapes differ: {a.shape} vs {e.shape}")
    return float(np.max(np.abs(a - e), initial=0.0))
