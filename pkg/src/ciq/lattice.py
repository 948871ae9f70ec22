"""
Periodic cubic lattice, real fields on it, and spectral calculus.

Conventions
-----------
Sites ``x = (x1, x2, x3)`` with ``0 <= xi < n_points`` sit at physical
position ``x * spacing``.  Flat site index is ``x1 + n*(x2 + n*x3)``.
Internally a field is held as a C-ordered cube with axes ``(x3, x2, x1)`` so
that ``cube.ravel()`` reproduces that flat ordering.

Modes ``n`` have components in ``[-(n-1)/2, (n-1)/2]`` and wavevector
``k(n) = 2*pi*n / box_length``.  Spectra are stored "shifted": mode component
``ni`` lives at array index ``ni + (n-1)/2``, again with axes ``(j3, j2, j1)``.
Negating a mode is therefore a reversal of all three axes.

The transform pair is::

    fhat(n) = n**-3 * sum_x f(x) exp(-i k(n).x)
    f(x)    = sum_n fhat(n) exp(+i k(n).x)

so synthesis carries no prefactor.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from ciq.errors import GridMismatch, SymmetryViolation

_AXES = (-3, -2, -1)


@dataclass(frozen=True)
class LatticeGrid:
    """Periodic cubic lattice with an odd number of points per axis."""

    n_points: int
    spacing: float = 1.0

    def __post_init__(self):
        if int(self.n_points) != self.n_points:
            raise ValueError("n_points must be an integer")
        if self.n_points < 3:
            raise ValueError("n_points must be >= 3")
        if self.n_points % 2 == 0:
            raise ValueError("n_points must be odd")
        if not (np.isfinite(self.spacing) and self.spacing > 0):
            raise ValueError("spacing must be positive")
        object.__setattr__(self, "n_points", int(self.n_points))
        object.__setattr__(self, "spacing", float(self.spacing))

    @property
    def box_length(self) -> float:
        return self.n_points * self.spacing

    @property
    def n_sites(self) -> int:
        return self.n_points**3

    @property
    def cell_volume(self) -> float:
        return self.spacing**3

    @property
    def volume(self) -> float:
        return self.box_length**3

    @property
    def shape(self) -> tuple[int, int, int]:
        n = self.n_points
        return (n, n, n)

    def mode_range(self) -> np.ndarray:
        """Mode components along one axis, in shifted (ascending) order."""
        half = (self.n_points - 1) // 2
        return np.arange(-half, half + 1)

    @cached_property
    def modes(self) -> np.ndarray:
        """Integer mode vectors, shape ``(n, n, n, 3)``; last axis is (n1, n2, n3)."""
        r = self.mode_range()
        n3, n2, n1 = np.meshgrid(r, r, r, indexing="ij")
        return np.stack([n1, n2, n3], axis=-1)

    @cached_property
    def wavevectors(self) -> np.ndarray:
        """Wavevectors ``k(n)`` in shifted order, shape ``(n, n, n, 3)``."""
        return (2.0 * np.pi / self.box_length) * self.modes

    @cached_property
    def k_squared(self) -> np.ndarray:
        return np.sum(self.wavevectors**2, axis=-1)

    @cached_property
    def sites(self) -> np.ndarray:
        """Integer site coordinates, shape ``(n, n, n, 3)``; last axis is (x1, x2, x3)."""
        r = np.arange(self.n_points)
        x3, x2, x1 = np.meshgrid(r, r, r, indexing="ij")
        return np.stack([x1, x2, x3], axis=-1)

    def mode_index(self, n) -> tuple[int, int, int]:
        """Array index of mode ``n = (n1, n2, n3)`` inside a shifted spectrum cube."""
        half = (self.n_points - 1) // 2
        n1, n2, n3 = (int(c) for c in n)
        if max(abs(n1), abs(n2), abs(n3)) > half:
            raise IndexError(f"mode {tuple(n)} outside the lattice mode set")
        return (n3 + half, n2 + half, n1 + half)

    def flat_mode_index(self, n) -> int:
        j3, j2, j1 = self.mode_index(n)
        return j1 + self.n_points * (j2 + self.n_points * j3)

    def site_index(self, x) -> int:
        n = self.n_points
        x1, x2, x3 = (int(c) % n for c in x)
        return x1 + n * (x2 + n * x3)

    def to_cube(self, values: np.ndarray) -> np.ndarray:
        """Reshape trailing flat site (or mode) axis into an ``(x3, x2, x1)`` cube."""
        values = np.asarray(values)
        return values.reshape(values.shape[:-1] + self.shape)

    def to_flat(self, cube: np.ndarray) -> np.ndarray:
        cube = np.asarray(cube)
        return cube.reshape(cube.shape[:-3] + (self.n_sites,))


def _check_grid(a: LatticeGrid, b: LatticeGrid):
    if a != b:
        raise GridMismatch(f"grids differ: {a} vs {b}")


@dataclass(frozen=True)
class ScalarField:
    grid: LatticeGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.array(self.values, dtype=float).reshape(-1)
        if v.size != self.grid.n_sites:
            raise ValueError(
                f"expected {self.grid.n_sites} values, got {v.size}"
            )
        if not np.all(np.isfinite(v)):
            raise ValueError("field values must be finite")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @classmethod
    def from_function(cls, grid: LatticeGrid, fn) -> "ScalarField":
        """Sample ``fn(x1, x2, x3)`` at physical site positions."""
        pos = grid.sites * grid.spacing
        return cls(grid, grid.to_flat(fn(pos[..., 0], pos[..., 1], pos[..., 2])))

    @classmethod
    def random(cls, grid: LatticeGrid, rng: np.random.Generator) -> "ScalarField":
        return cls(grid, rng.standard_normal(grid.n_sites))

    @property
    def cube(self) -> np.ndarray:
        return self.grid.to_cube(self.values)

    def __add__(self, other: "ScalarField") -> "ScalarField":
        _check_grid(self.grid, other.grid)
        return ScalarField(self.grid, self.values + other.values)

    def __sub__(self, other: "ScalarField") -> "ScalarField":
        _check_grid(self.grid, other.grid)
        return ScalarField(self.grid, self.values - other.values)

    def __mul__(self, c: float) -> "ScalarField":
        return ScalarField(self.grid, c * self.values)

    __rmul__ = __mul__


@dataclass(frozen=True)
class VectorField:
    """Three scalar components on one grid."""

    components: tuple[ScalarField, ScalarField, ScalarField]

    def __post_init__(self):
        comps = tuple(self.components)
        if len(comps) != 3:
            raise ValueError("a vector field has exactly three components")
        for c in comps[1:]:
            _check_grid(comps[0].grid, c.grid)
        object.__setattr__(self, "components", comps)

    @classmethod
    def from_array(cls, grid: LatticeGrid, values) -> "VectorField":
        """Build from an array of shape ``(3, n_sites)`` (component-major)."""
        values = np.asarray(values, dtype=float).reshape(3, grid.n_sites)
        return cls(tuple(ScalarField(grid, v) for v in values))

    @classmethod
    def random(cls, grid: LatticeGrid, rng: np.random.Generator) -> "VectorField":
        return cls.from_array(grid, rng.standard_normal((3, grid.n_sites)))

    @property
    def grid(self) -> LatticeGrid:
        return self.components[0].grid

    @property
    def values(self) -> np.ndarray:
        return np.stack([c.values for c in self.components])

    @property
    def cube(self) -> np.ndarray:
        return self.grid.to_cube(self.values)

    def __add__(self, other: "VectorField") -> "VectorField":
        _check_grid(self.grid, other.grid)
        return VectorField.from_array(self.grid, self.values + other.values)

    def __sub__(self, other: "VectorField") -> "VectorField":
        _check_grid(self.grid, other.grid)
        return VectorField.from_array(self.grid, self.values - other.values)

    def __mul__(self, c: float) -> "VectorField":
        return VectorField.from_array(self.grid, c * self.values)

    __rmul__ = __mul__


@dataclass(frozen=True)
class ComplexSpectrum:
    """Fourier coefficients in shifted mode order, cube axes ``(j3, j2, j1)``."""

    grid: LatticeGrid
    coefficients: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.array(self.coefficients, dtype=complex)
        if c.size != self.grid.n_sites:
            raise ValueError(f"expected {self.grid.n_sites} coefficients, got {c.size}")
        c = c.reshape(self.grid.shape)
        c.flags.writeable = False
        object.__setattr__(self, "coefficients", c)

    def __getitem__(self, n) -> complex:
        return complex(self.coefficients[self.grid.mode_index(n)])

    @property
    def flat(self) -> np.ndarray:
        return self.coefficients.ravel()

    def negated(self) -> np.ndarray:
        """Coefficients at ``-n`` laid out at position ``n``."""
        return negate_modes(self.coefficients)

    def symmetry_error(self) -> float:
        """Max of ``|s(-n) - conj(s(n))|``, relative to the largest coefficient."""
        c = self.coefficients
        scale = max(float(np.max(np.abs(c))), 1.0)
        return float(np.max(np.abs(self.negated() - np.conj(c)))) / scale


def negate_modes(cube: np.ndarray) -> np.ndarray:
    """Map a shifted spectrum ``s(n)`` (trailing three axes) to ``s(-n)``."""
    return cube[..., ::-1, ::-1, ::-1]


# Batched transforms on raw cubes; trailing three axes are spatial / spectral.

def forward_cube(cube: np.ndarray) -> np.ndarray:
    n3 = np.prod(cube.shape[-3:])
    return np.fft.fftshift(np.fft.fftn(cube, axes=_AXES), axes=_AXES) / n3


def inverse_cube(spec: np.ndarray) -> np.ndarray:
    n3 = np.prod(spec.shape[-3:])
    return np.fft.ifftn(np.fft.ifftshift(spec, axes=_AXES), axes=_AXES) * n3


def apply_multiplier(grid: LatticeGrid, values: np.ndarray, multiplier: np.ndarray) -> np.ndarray:
    """Multiply the spectrum of flat real ``values`` by ``multiplier`` (shifted cube)."""
    spec = forward_cube(grid.to_cube(values)) * multiplier
    return grid.to_flat(inverse_cube(spec).real)


def dft_forward(f: ScalarField) -> ComplexSpectrum:
    return ComplexSpectrum(f.grid, forward_cube(f.cube))


def dft_inverse(s: ComplexSpectrum, tol: float = 1e-10) -> ScalarField:
    """
    Synthesize the real field whose forward transform is ``s``.

    Raises
    ------
    SymmetryViolation
        If ``s`` is not the spectrum of a real field to within ``tol``.
    """
    err = s.symmetry_error()
    if err > tol:
        raise SymmetryViolation(
            f"spectrum violates s(-n) = conj(s(n)): relative error {err:.3e}"
        )
    return ScalarField(s.grid, s.grid.to_flat(inverse_cube(s.coefficients).real))


def spectral_laplacian(f: ScalarField) -> ScalarField:
    g = f.grid
    return ScalarField(g, apply_multiplier(g, f.values, -g.k_squared))


def spectral_gradient(f: ScalarField) -> VectorField:
    g = f.grid
    spec = forward_cube(f.cube)
    k = np.moveaxis(g.wavevectors, -1, 0)
    out = inverse_cube(1j * k * spec).real
    return VectorField.from_array(g, g.to_flat(out))


def spectral_divergence(v: VectorField) -> ScalarField:
    g = v.grid
    spec = forward_cube(v.cube)
    k = np.moveaxis(g.wavevectors, -1, 0)
    out = inverse_cube(np.sum(1j * k * spec, axis=0)).real
    return ScalarField(g, g.to_flat(out))


def spectral_curl(v: VectorField) -> VectorField:
    g = v.grid
    spec = forward_cube(v.cube)
    k = np.moveaxis(g.wavevectors, -1, 0)
    curl = 1j * np.cross(k, spec, axis=0)
    return VectorField.from_array(g, g.to_flat(inverse_cube(curl).real))


def multiplier_matrix(grid: LatticeGrid, multiplier: np.ndarray) -> np.ndarray:
    """
    Dense real ``n_sites x n_sites`` matrix of a per-mode multiplier.

    ``multiplier`` must be even-real or odd-imaginary in ``k`` (true for
    ``|k|^2``, ``i k_j`` and their products), so the matrix is real.
    """
    eye = np.eye(grid.n_sites)
    # Column j is the operator applied to the unit field at site j.
    return apply_multiplier(grid, eye, multiplier).T


def laplacian_matrix(grid: LatticeGrid) -> np.ndarray:
    return multiplier_matrix(grid, -grid.k_squared)


def derivative_matrices(grid: LatticeGrid) -> list[np.ndarray]:
    """Spectral ``d/dx_j`` as dense matrices, ``j = 1, 2, 3``."""
    return [multiplier_matrix(grid, 1j * grid.wavevectors[..., j]) for j in range(3)]
