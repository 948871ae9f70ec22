"""
Real mode coordinates for real fields, and polarization bases.

A real field has ``fhat(-n) = conj(fhat(n))``.  Writing
``fhat(n) = (1+i)/2 alpha(n) + (1-i)/2 alpha(-n)`` with real ``alpha`` gives
a bijection between real fields and real arrays on the full mode set, with
inverse ``alpha(n) = Re fhat(n) + Im fhat(n)``.

Transverse vector fields are expanded the same way along a real polarization
pair ``eps_1(n), eps_2(n)`` with ``eps_1(-n) = eps_1(n)`` and
``eps_2(-n) = -eps_2(n)``.  The constant mode has no polarization plane and is
carried as a separate real 3-vector.

Continuum-to-lattice dictionary (box length ``L``, spacing ``a``, ``N``
points per axis, ``L = N a``):

* ``int dk^3 f(k) e^{ikx}``  ->  ``sum_n fhat(n) e^{ik(n)x}``
* ``(2 pi)^3 int dq^3``  ->  ``L^3 sum_n``   (Parseval: ``a^3 sum_x f^2 = L^3 sum_n |fhat|^2``)
* ``(2 pi)^-3 delta^3(k - q)``  ->  ``delta_{n,n'} / L^3``
* ``delta^3(x - y)``  ->  ``delta_{x,y} / a^3``
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ciq.errors import DimensionMismatch, GridMismatch, NotTransverse
from ciq.helmholtz import projector_symbols
from ciq.lattice import (
    LatticeGrid,
    ScalarField,
    VectorField,
    forward_cube,
    inverse_cube,
    negate_modes,
)

_HALF_P = (1 + 1j) / 2
_HALF_M = (1 - 1j) / 2


@dataclass(frozen=True)
class ModeCoefficients:
    """
    Real mode amplitudes in shifted mode order.

    Scalar case: ``values`` has shape ``(n, n, n)`` and ``zero_mode`` is None.
    Transverse vector case: ``values`` has shape ``(2, n, n, n)`` (polarization
    first) and is zero at ``k = 0``; the constant mode lives in ``zero_mode``.
    """

    grid: LatticeGrid
    values: np.ndarray = field(repr=False)
    zero_mode: np.ndarray | None = None

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.shape[-3:] != self.grid.shape or v.ndim not in (3, 4):
            raise DimensionMismatch(f"bad coefficient shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("mode coefficients must be finite")
        object.__setattr__(self, "values", v)
        if v.ndim == 4:
            if v.shape[0] != 2:
                raise DimensionMismatch("vector coefficients need two polarizations")
            z = np.zeros(3) if self.zero_mode is None else np.array(self.zero_mode, dtype=float)
            if z.shape != (3,):
                raise DimensionMismatch("zero mode must be a 3-vector")
            object.__setattr__(self, "zero_mode", z)

    @property
    def is_vector(self) -> bool:
        return self.values.ndim == 4

    def __getitem__(self, key):
        """``coeffs[n]`` (scalar) or ``coeffs[lam, n]`` (vector, ``lam`` in {1, 2})."""
        if self.is_vector:
            lam, n = key
            return float(self.values[(lam - 1,) + self.grid.mode_index(n)])
        return float(self.values[self.grid.mode_index(key)])

    def flat(self) -> np.ndarray:
        """Scalar: all modes.  Vector: eps_1 on nonzero modes, eps_2 likewise, then zero mode."""
        if not self.is_vector:
            return self.values.ravel()
        nz = _nonzero_flat(self.grid)
        v = self.values.reshape(2, -1)
        return np.concatenate([v[0, nz], v[1, nz], self.zero_mode])


def _nonzero_flat(grid: LatticeGrid) -> np.ndarray:
    return grid.k_squared.ravel() > 0


def _alpha_from_spectrum(spec: np.ndarray) -> np.ndarray:
    return spec.real + spec.imag


def _spectrum_from_alpha(alpha: np.ndarray) -> np.ndarray:
    return _HALF_P * alpha + _HALF_M * negate_modes(alpha)


def scalar_to_alpha(f: ScalarField) -> ModeCoefficients:
    return ModeCoefficients(f.grid, _alpha_from_spectrum(forward_cube(f.cube)))


def alpha_to_scalar(a: ModeCoefficients) -> ScalarField:
    if a.is_vector:
        raise DimensionMismatch("expected scalar mode coefficients")
    g = a.grid
    return ScalarField(g, g.to_flat(inverse_cube(_spectrum_from_alpha(a.values)).real))


@dataclass(frozen=True)
class PolarizationBasis:
    """Real polarization pairs per mode, shape ``(n, n, n, 3)``; zero at ``k = 0``."""

    grid: LatticeGrid
    eps1: np.ndarray = field(repr=False)
    eps2: np.ndarray = field(repr=False)

    def at(self, n) -> tuple[np.ndarray, np.ndarray]:
        idx = self.grid.mode_index(n)
        return self.eps1[idx], self.eps2[idx]

    @property
    def stacked(self) -> np.ndarray:
        """``(2, n, n, n, 3)``."""
        return np.stack([self.eps1, self.eps2])


def _is_canonical(modes: np.ndarray) -> np.ndarray:
    n1, n2, n3 = modes[..., 0], modes[..., 1], modes[..., 2]
    return (n1 > 0) | ((n1 == 0) & (n2 > 0)) | ((n1 == 0) & (n2 == 0) & (n3 > 0))


def build_polarization_basis(grid: LatticeGrid) -> PolarizationBasis:
    """
    Deterministic real basis obeying the parity and handedness conditions.

    On the canonical half of the mode set, ``eps_1`` is the coordinate axis
    least aligned with ``k`` (lowest index on ties) with its ``k`` component
    removed, and ``eps_2 = khat x eps_1``.  The other half is filled from
    ``-n`` with ``eps_1`` copied and ``eps_2`` negated.
    """
    k = grid.wavevectors
    k2 = grid.k_squared
    nonzero = k2 > 0
    khat = np.zeros_like(k)
    khat[nonzero] = k[nonzero] / np.sqrt(k2[nonzero])[:, None]

    axis = np.argmin(np.abs(khat), axis=-1)
    u = np.eye(3)[axis]
    e1 = u - np.sum(u * khat, axis=-1, keepdims=True) * khat
    e1[nonzero] /= np.linalg.norm(e1[nonzero], axis=-1, keepdims=True)
    e2 = np.cross(khat, e1)

    canon = _is_canonical(grid.modes)
    flipped = ~canon & nonzero
    # mode axes lead here, so reversing them maps n -> -n
    e1 = np.where(flipped[..., None], e1[::-1, ::-1, ::-1], e1)
    e2 = np.where(flipped[..., None], -e2[::-1, ::-1, ::-1], e2)
    e1[~nonzero] = 0.0
    e2[~nonzero] = 0.0
    return PolarizationBasis(grid, e1, e2)


def check_closure(basis: PolarizationBasis) -> float:
    """Max over nonzero modes of ``|sum_lam eps_lam eps_lam^T - (I - khat khat^T)|``."""
    trans, _ = projector_symbols(basis.grid)
    outer = np.einsum("...i,...j->...ij", basis.eps1, basis.eps1) + np.einsum(
        "...i,...j->...ij", basis.eps2, basis.eps2
    )
    nonzero = basis.grid.k_squared > 0
    return float(np.max(np.abs(outer - trans)[nonzero]))


def check_parity(basis: PolarizationBasis) -> float:
    """Max violation of ``eps_1(-n) = eps_1(n)``, ``eps_2(-n) = -eps_2(n)``."""
    e1, e2 = basis.eps1, basis.eps2
    return float(
        max(
            np.max(np.abs(e1[::-1, ::-1, ::-1] - e1)),
            np.max(np.abs(e2[::-1, ::-1, ::-1] + e2)),
        )
    )


def check_orthonormal(basis: PolarizationBasis) -> float:
    """Max deviation from orthonormality and ``eps_1 x eps_2 = khat`` over nonzero modes."""
    g = basis.grid
    nonzero = g.k_squared > 0
    e1, e2 = basis.eps1[nonzero], basis.eps2[nonzero]
    khat = g.wavevectors[nonzero] / np.sqrt(g.k_squared[nonzero])[:, None]
    errs = [
        np.abs(np.sum(e1 * e1, axis=-1) - 1),
        np.abs(np.sum(e2 * e2, axis=-1) - 1),
        np.abs(np.sum(e1 * e2, axis=-1)),
        np.abs(np.cross(e1, e2) - khat).max(axis=-1),
    ]
    return float(max(e.max() for e in errs))


def _project_on_basis(spec: np.ndarray, basis: PolarizationBasis) -> np.ndarray:
    """``c_lam(n) = vhat(n) . eps_lam(n)`` for a ``(..., 3, n, n, n)`` spectrum."""
    eps = np.moveaxis(basis.stacked, -1, 1)  # (2, 3, n, n, n)
    return np.einsum("...iabc,liabc->...labc", spec, eps)


def _check_basis_grid(grid: LatticeGrid, basis: PolarizationBasis):
    if grid != basis.grid:
        raise GridMismatch("field and polarization basis live on different grids")


def vector_to_alphabeta(
    v: VectorField, basis: PolarizationBasis, tol: float = 1e-10
) -> ModeCoefficients:
    """
    Polarization amplitudes of a transverse vector field.

    ``alpha_lam(n) = Re c_lam(n) + Im c_lam(n)`` with ``c_lam = vhat . eps_lam``.
    The same formula holds for both polarizations: for ``lam = 2`` the sign of
    ``eps_2(-n)`` swaps the roles of real and imaginary parts, and their sum
    is unchanged.

    Raises
    ------
    NotTransverse
        If ``v`` has a longitudinal part above ``tol`` (relative to ``max|v|``).
    """
    _check_basis_grid(v.grid, basis)
    spec = forward_cube(v.cube)
    _, long_ = projector_symbols(v.grid)
    long_part = np.einsum("...ij,j...->i...", long_, spec)
    scale = max(1.0, float(np.max(np.abs(v.values))))
    resid = float(np.max(np.abs(inverse_cube(long_part))))
    if resid > tol * scale:
        raise NotTransverse(f"field has a longitudinal component of size {resid:.3e}")
    return _alphabeta_from_spectrum(spec, basis)


def _alphabeta_from_spectrum(spec: np.ndarray, basis: PolarizationBasis) -> ModeCoefficients:
    g = basis.grid
    coeffs = _alpha_from_spectrum(_project_on_basis(spec, basis))
    h = (g.n_points - 1) // 2
    zero = spec[:, h, h, h].real
    return ModeCoefficients(g, coeffs, zero)


def alphabeta_to_vector(c: ModeCoefficients, basis: PolarizationBasis) -> VectorField:
    """Synthesize the transverse field with polarization amplitudes ``c``."""
    if not c.is_vector:
        raise DimensionMismatch("expected vector mode coefficients")
    _check_basis_grid(c.grid, basis)
    g = c.grid
    eps = np.moveaxis(basis.stacked, -1, 1)  # (2, 3, n, n, n)
    a = c.values[:, None]  # (2, 1, n, n, n)
    spec = np.sum(_HALF_P * a * eps + _HALF_M * negate_modes(a * eps), axis=0)
    h = (g.n_points - 1) // 2
    spec[:, h, h, h] = c.zero_mode
    return VectorField.from_array(g, g.to_flat(inverse_cube(spec).real))


def momentum_hamiltonian_kg(
    alpha: ModeCoefficients, beta: ModeCoefficients, mass: float, grid: LatticeGrid
) -> float:
    """``L^3/2 sum_n (beta^2 + (m^2 + |k|^2) alpha^2)``."""
    if alpha.grid != grid or beta.grid != grid:
        raise GridMismatch("coefficients and grid differ")
    w = mass**2 + grid.k_squared
    return 0.5 * grid.volume * float(np.sum(beta.values**2 + w * alpha.values**2))


def momentum_hamiltonian_maxwell(
    alpha: ModeCoefficients, beta: ModeCoefficients, grid: LatticeGrid
) -> float:
    """
    ``L^3/2 sum_{n != 0} sum_lam (beta_lam^2 + |k|^2 alpha_lam^2) + L^3/2 |beta_0|^2``.

    The constant mode of the potential has no energy.
    """
    if alpha.grid != grid or beta.grid != grid:
        raise GridMismatch("coefficients and grid differ")
    k2 = grid.k_squared
    bulk = np.sum(beta.values**2 + k2 * alpha.values**2)
    return 0.5 * grid.volume * float(bulk + np.sum(beta.zero_mode**2))


def scalar_extraction_matrix(grid: LatticeGrid) -> np.ndarray:
    """Rows are the linear functionals ``f -> alpha(n)`` in flat mode order."""
    eye = grid.to_cube(np.eye(grid.n_sites))
    return grid.to_flat(_alpha_from_spectrum(forward_cube(eye))).T


def vector_extraction_matrix(basis: PolarizationBasis) -> np.ndarray:
    """
    Rows are the functionals ``v -> alpha`` in :meth:`ModeCoefficients.flat` order.

    Columns follow the component-major ``(3 * n_sites)`` field layout.  Every row
    is itself a transverse field, so the map is meaningful on any input.
    """
    g = basis.grid
    n = g.n_sites
    eye = g.to_cube(np.eye(3 * n).reshape(3 * n, 3, n))
    spec = forward_cube(eye)  # (3n, 3, n, n, n)
    coeffs = _alpha_from_spectrum(_project_on_basis(spec, basis)).reshape(3 * n, 2, n)
    nz = _nonzero_flat(g)
    h = (g.n_points - 1) // 2
    zero = spec[:, :, h, h, h].real  # (3n, 3)
    rows = np.concatenate([coeffs[:, 0, nz], coeffs[:, 1, nz], zero], axis=1)
    return rows.T


def kg_mode_maps(grid: LatticeGrid) -> tuple[np.ndarray, np.ndarray]:
    """Extraction maps ``xi -> alpha`` and ``xi -> beta`` for ``xi = (phi, pi)``."""
    S = scalar_extraction_matrix(grid)
    Z = np.zeros_like(S)
    return np.hstack([S, Z]), np.hstack([Z, S])


def maxwell_mode_maps(basis: PolarizationBasis) -> tuple[np.ndarray, np.ndarray]:
    """Extraction maps ``xi -> alpha_lam`` and ``xi -> beta_lam`` for ``xi = (A, pi)``."""
    S = vector_extraction_matrix(basis)
    Z = np.zeros_like(S)
    return np.hstack([S, Z]), np.hstack([Z, S])


def bracket_in_modes(theta, S_alpha: np.ndarray, S_beta: np.ndarray) -> dict[str, np.ndarray]:
    """
    Transport a bracket matrix to mode coordinates.

    Returns the tables ``{alpha, beta}``, ``{alpha, alpha}`` and ``{beta, beta}``.
    """
    T = getattr(theta, "theta", theta)
    T = np.asarray(T)
    if S_alpha.shape[1] != T.shape[0] or S_beta.shape[1] != T.shape[0]:
        raise DimensionMismatch(
            f"extraction maps {S_alpha.shape}, {S_beta.shape} do not match theta {T.shape}"
        )
    return {
        "alpha_beta": S_alpha @ T @ S_beta.T,
        "alpha_alpha": S_alpha @ T @ S_alpha.T,
        "beta_beta": S_beta @ T @ S_beta.T,
    }


def expected_mode_table(size: int, grid: LatticeGrid, sign: float) -> np.ndarray:
    """``sign * delta / L^3``: +1 for the scalar field, -1 for the Maxwell field."""
    return sign * np.eye(size) / grid.volume
