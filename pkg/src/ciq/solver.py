"""
Bracket identification for linear systems with linear constraints.

A quadratic system is ``H = 1/2 xi^T M xi``, ``d xi/dt = A xi`` and
``C xi = 0``.  Hamilton's equations at the initial instant read
``A xi = Theta M xi`` for every admissible initial state ``xi``, and the
bracket matrix ``Theta`` is identified from that equality on the constraint
surface.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.linalg

from ciq.errors import (
    ConstraintDrift,
    ConstraintViolation,
    DegenerateHamiltonian,
    DimensionMismatch,
    InconsistentSystem,
)

# Relative singular-value cutoff for the constraint rank.
RANK_RTOL = 1e-10
# Eigenvalues of the reduced Hamiltonian below max/COND_MAX count as null.
COND_MAX = 1e12
SYMMETRY_RTOL = 1e-12
DRIFT_RTOL = 1e-10
# Antisymmetry residual at or above this means A is not a Hamiltonian flow of M.
INCONSISTENT_RTOL = 1e-6
HAMILTON_RTOL = 1e-9
STATE_RTOL = 1e-8


@dataclass(frozen=True)
class QuadraticSystem:
    M: np.ndarray = field(repr=False)
    A: np.ndarray = field(repr=False)
    C: np.ndarray | None = field(default=None, repr=False)
    labels: Sequence[tuple] | None = field(default=None, repr=False)

    def __post_init__(self):
        M = np.asarray(self.M, dtype=float)
        A = np.asarray(self.A, dtype=float)
        d = M.shape[0]
        if M.shape != (d, d) or A.shape != (d, d):
            raise DimensionMismatch(f"M {M.shape} and A {A.shape} must both be d x d")
        C = np.zeros((0, d)) if self.C is None else np.asarray(self.C, dtype=float)
        if C.ndim != 2 or C.shape[1] != d:
            raise DimensionMismatch(f"C has shape {C.shape}, expected (c, {d})")
        scale = max(np.max(np.abs(M), initial=0.0), np.finfo(float).tiny)
        if np.max(np.abs(M - M.T), initial=0.0) > SYMMETRY_RTOL * scale:
            raise ValueError("M must be symmetric")
        if self.labels is not None and len(self.labels) != d:
            raise DimensionMismatch("labels must have one entry per coordinate")
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "C", C)

    @property
    def dim(self) -> int:
        return self.M.shape[0]

    def drift(self, basis: np.ndarray | None = None) -> float:
        """``max|C A B| / max|A|``: zero when the flow preserves the constraints."""
        if self.C.shape[0] == 0:
            return 0.0
        B = constraint_null_basis(self.C) if basis is None else basis
        scale = max(np.max(np.abs(self.A)), np.finfo(float).tiny)
        return float(np.max(np.abs(self.C @ self.A @ B), initial=0.0) / scale)


@dataclass(frozen=True)
class BracketMatrix:
    """Antisymmetric bracket matrix with the residuals of its identification."""

    theta: np.ndarray = field(repr=False)
    basis: np.ndarray = field(repr=False)
    antisymmetry_residual: float
    hamilton_residual: float
    constraint_residual: float

    @property
    def dim(self) -> int:
        return self.theta.shape[0]


def constraint_null_basis(C: np.ndarray, rtol: float = RANK_RTOL) -> np.ndarray:
    """
    Orthonormal basis of ``ker C`` as the columns of a ``d x r`` matrix.

    The rank of ``C`` counts singular values above ``rtol`` times the largest.
    """
    C = np.atleast_2d(np.asarray(C, dtype=float))
    d = C.shape[1]
    if C.shape[0] == 0 or not np.any(C):
        return np.eye(d)
    _, s, vt = np.linalg.svd(C, full_matrices=True)
    rank = int(np.sum(s > rtol * s[0]))
    return vt[rank:].T.copy()


def _rel(num: float, den: float) -> float:
    return num / den if den > 0 else num


def solve_brackets(
    sys: QuadraticSystem,
    *,
    rank_rtol: float = RANK_RTOL,
    cond_max: float = COND_MAX,
) -> BracketMatrix:
    """
    Identify ``Theta`` from ``A xi = Theta M xi`` on the constraint surface.

    With ``B`` an orthonormal basis of ``ker C``, the reduced problem is
    ``Theta_r M_r = A_r`` with ``M_r = B^T M B`` and ``A_r = B^T A B``; the
    answer is ``Theta = B Theta_r B^T``.  When ``M_r`` is invertible,
    ``Theta_r = A_r M_r^-1``.

    Directions on which the reduced Hamiltonian vanishes carry no
    information through ``M xi``, so the columns of ``Theta_r`` along them are
    not fixed by the identification.  They are filled in from the rows, which
    are fixed, by antisymmetry.  This is only admissible when ``A_r`` also
    vanishes on those directions; otherwise the system is degenerate.

    Raises
    ------
    ConstraintDrift
        ``A`` does not map ``ker C`` into itself.
    DegenerateHamiltonian
        ``M_r`` vanishes, or has null directions not annihilated by ``A_r``.
    InconsistentSystem
        The identified ``Theta`` is far from antisymmetric.
    """
    M, A, C = sys.M, sys.A, sys.C
    B = constraint_null_basis(C, rank_rtol)
    drift = sys.drift(B)
    if drift > DRIFT_RTOL:
        raise ConstraintDrift(f"flow leaves the constraint surface: |CAB|/|A| = {drift:.3e}")

    M_r = B.T @ M @ B
    A_r = B.T @ A @ B
    w, V = np.linalg.eigh(M_r)
    top = float(np.max(np.abs(w), initial=0.0))
    if top == 0.0:
        raise DegenerateHamiltonian("Hamiltonian vanishes on the constraint surface")
    live = np.abs(w) > top / cond_max
    V_live, V_null = V[:, live], V[:, ~live]
    if V_null.shape[1]:
        a_scale = max(np.linalg.norm(A_r), np.finfo(float).tiny)
        leak = np.linalg.norm(A_r @ V_null) / a_scale
        if leak > HAMILTON_RTOL:
            raise DegenerateHamiltonian(
                f"{V_null.shape[1]} null direction(s) of the reduced Hamiltonian "
                f"are moved by the dynamics (relative {leak:.3e}); "
                "condition number exceeds the bound"
            )
    theta_r = (A_r @ V_live / w[live]) @ V_live.T
    if V_null.shape[1]:
        P = V_null @ V_null.T
        theta_r = theta_r - theta_r.T @ P

    theta = B @ theta_r @ B.T
    t_norm = np.linalg.norm(theta)
    antisym = _rel(np.linalg.norm(theta + theta.T), t_norm)
    AB = A @ B
    hamilton = _rel(np.linalg.norm(AB - theta @ M @ B), np.linalg.norm(AB))
    if C.shape[0]:
        constraint = _rel(np.linalg.norm(C @ theta), np.linalg.norm(C) * t_norm)
    else:
        constraint = 0.0
    if antisym >= INCONSISTENT_RTOL:
        raise InconsistentSystem(
            f"identified bracket is not antisymmetric (relative residual {antisym:.3e})"
        )
    return BracketMatrix(theta, B, float(antisym), float(hamilton), float(constraint))


def hamiltonian_value(sys: QuadraticSystem, state) -> float:
    x = np.asarray(state, dtype=float)
    return 0.5 * float(x @ sys.M @ x)


def taylor_first_order(sys: QuadraticSystem, state, t: float) -> np.ndarray:
    """First-order expansion ``xi + t A xi`` about the initial state."""
    x = np.asarray(state, dtype=float)
    return x + t * (sys.A @ x)


def _check_surface(sys: QuadraticSystem, x: np.ndarray, tol: float):
    if sys.C.shape[0] == 0:
        return
    resid = np.linalg.norm(sys.C @ x)
    bound = tol * np.linalg.norm(sys.C) * max(np.linalg.norm(x), np.finfo(float).tiny)
    if resid > bound:
        raise ConstraintViolation(f"state is off the constraint surface: |C xi| = {resid:.3e}")


def propagator(sys: QuadraticSystem, t: float) -> np.ndarray:
    return scipy.linalg.expm(sys.A * t)


def evolve_exact(sys: QuadraticSystem, state, t: float, tol: float = STATE_RTOL) -> np.ndarray:
    """
    ``exp(A t) xi``.  ``state`` may be a vector or a ``d x m`` stack of columns.
    """
    x = np.asarray(state, dtype=float)
    _check_surface(sys, x, tol)
    if t == 0:
        return x.copy()
    return propagator(sys, t) @ x


def random_surface_states(
    sys: QuadraticSystem, count: int, rng: np.random.Generator, basis: np.ndarray | None = None
) -> np.ndarray:
    """``count`` random admissible states as columns of a ``d x count`` array."""
    B = constraint_null_basis(sys.C) if basis is None else basis
    return B @ rng.standard_normal((B.shape[1], count))


def verify_time_covariance(
    sys: QuadraticSystem,
    brackets: BracketMatrix,
    times: Sequence[float],
    trials: int,
    rng: np.random.Generator | int | None = None,
) -> float:
    """
    Largest relative residual of ``A xi(t) = Theta M xi(t)`` along exact flows.

    The same ``Theta`` must reproduce the dynamics at every later time.
    """
    rng = np.random.default_rng(rng)
    X0 = random_surface_states(sys, trials, rng, brackets.basis)
    TM = brackets.theta @ sys.M
    worst = 0.0
    for t in times:
        X = evolve_exact(sys, X0, t)
        lhs = sys.A @ X
        resid = np.linalg.norm(lhs - TM @ X, axis=0) / np.linalg.norm(lhs, axis=0)
        worst = max(worst, float(np.max(resid)))
    return worst
