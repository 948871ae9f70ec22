"""
Helmholtz split and polarization bases
======================================

Split a random vector field into its divergence-free and curl-free parts,
then expand the transverse part along a real polarization basis.
"""

# %%
import numpy as np

from ciq import (
    LatticeGrid,
    VectorField,
    alphabeta_to_vector,
    build_polarization_basis,
    check_closure,
    longitudinal_project,
    spectral_curl,
    spectral_divergence,
    transverse_project,
    vector_to_alphabeta,
)

rng = np.random.default_rng(3)
grid = LatticeGrid(9, 0.25)
v = VectorField.random(grid, rng)
vt, vl = transverse_project(v), longitudinal_project(v)
print("|div vT|  =", np.abs(spectral_divergence(vt).values).max())
print("|curl vL| =", np.abs(spectral_curl(vl).values).max())
print("|vT + vL - v| =", np.abs((vt + vl - v).values).max())

# %%
# The basis: eps_1(-k) = eps_1(k), eps_2(-k) = -eps_2(k), and the pair spans
# the plane orthogonal to k.
basis = build_polarization_basis(grid)
print("closure error:", check_closure(basis))
e1, e2 = basis.at((1, 2, -1))
print("eps_1, eps_2 at (1,2,-1):", np.round(e1, 4), np.round(e2, 4))

# %%
# Real amplitudes alpha_l(k) of the transverse part, and back.
coeffs = vector_to_alphabeta(vt, basis)
print("round trip error:", np.abs((alphabeta_to_vector(coeffs, basis) - vt).values).max())
