"""
End-to-end verification runs and their JSON reports.

Random configurations come from ``numpy.random.default_rng(seed)``, i.e. the
PCG64 generator (O'Neill 2014, 128-bit LCG state with XSL-RR output), whose
stream for a given seed is fixed across platforms and numpy versions.
"""

from __future__ import annotations

import json
import logging
import math
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from ciq.errors import CIQError, FormatError
from ciq.fieldio import read_field_file, write_field_file
from ciq.helmholtz import longitudinal_project, transverse_project
from ciq.lattice import LatticeGrid, ScalarField, VectorField
from ciq.momentum import (
    ModeCoefficients,
    alpha_to_scalar,
    alphabeta_to_vector,
    bracket_in_modes,
    build_polarization_basis,
    check_closure,
    check_orthonormal,
    check_parity,
    expected_mode_table,
    kg_mode_maps,
    maxwell_mode_maps,
    momentum_hamiltonian_kg,
    momentum_hamiltonian_maxwell,
)
from ciq.scenarios import (
    KGScenario,
    MaxwellScenario,
    build_kg_system,
    build_maxwell_system,
    compare_brackets,
    expected_kg_bracket,
    expected_maxwell_bracket,
)
from ciq.solver import (
    evolve_exact,
    hamiltonian_value,
    random_surface_states,
    solve_brackets,
    verify_time_covariance,
)

log = logging.getLogger(__name__)

CLOSURE_TOL = 1e-12
SCENARIOS = ("kg", "maxwell")


@dataclass
class RunConfig:
    scenario: str
    n_points: int
    spacing: float = 1.0
    mass: float = 1.0
    tolerance: float = 1e-9
    covariance_times: list[float] = field(default_factory=lambda: [0.1, 1.0])
    trials: int = 8
    seed: int = 0
    output_path: str | None = None

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ValueError(f"scenario must be one of {SCENARIOS}")
        if int(self.n_points) != self.n_points or self.n_points < 3:
            raise ValueError("n_points must be an integer >= 3")
        if self.n_points % 2 == 0:
            raise ValueError("n_points must be odd")
        if not self.spacing > 0:
            raise ValueError("spacing must be positive")
        if not self.mass > 0:
            raise ValueError("mass must be positive")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.seed < 0:
            raise ValueError("seed must be unsigned")
        if self.scenario == "maxwell" and self.mass != 1.0:
            log.warning("mass is ignored for the maxwell scenario")


@dataclass
class VerificationReport:
    command: str
    config: dict
    metrics: dict
    tolerances: dict
    passed: bool
    runtime_ms: int
    error: str | None = None

    def to_json(self) -> dict:
        out = {
            "command": self.command,
            "config": self.config,
            "metrics": self.metrics,
            "tolerances": self.tolerances,
            "pass": self.passed,
            "runtime_ms": self.runtime_ms,
        }
        if self.error is not None:
            out["error"] = self.error
        return out

    def write(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n")


def _judge(metrics: dict, tolerances: dict) -> bool:
    for name, tol in tolerances.items():
        value = metrics.get(name)
        if value is None or not math.isfinite(value) or value > tol:
            return False
    return True


def _energy_drift(sys, times, states) -> float:
    h0 = np.einsum("ij,ij->j", states, sys.M @ states)
    worst = 0.0
    for t in times:
        X = evolve_exact(sys, states, t)
        ht = np.einsum("ij,ij->j", X, sys.M @ X)
        worst = max(worst, float(np.max(np.abs(ht - h0) / np.abs(h0))))
    return worst


def _mode_table_error(tables: dict, expected_ab: np.ndarray) -> float:
    return max(
        float(np.max(np.abs(tables["alpha_beta"] - expected_ab))),
        float(np.max(np.abs(tables["alpha_alpha"]))),
        float(np.max(np.abs(tables["beta_beta"]))),
    )


def _kg_checks(cfg: RunConfig, grid: LatticeGrid, rng) -> dict:
    sys = build_kg_system(KGScenario(grid, cfg.mass))
    br = solve_brackets(sys)
    m = _bracket_metrics(sys, br, expected_kg_bracket(grid), cfg, rng)

    S_a, S_b = kg_mode_maps(grid)
    tables = bracket_in_modes(br, S_a, S_b)
    m["mode_bracket_max_err"] = _mode_table_error(tables, expected_mode_table(S_a.shape[0], grid, +1))

    alpha = ModeCoefficients(grid, rng.standard_normal(grid.shape))
    beta = ModeCoefficients(grid, rng.standard_normal(grid.shape))
    xi = np.concatenate([alpha_to_scalar(alpha).values, alpha_to_scalar(beta).values])
    h_pos = hamiltonian_value(sys, xi)
    h_mom = momentum_hamiltonian_kg(alpha, beta, cfg.mass, grid)
    m["hamiltonian_rel_err"] = abs(h_pos - h_mom) / abs(h_mom)
    return m


def _maxwell_checks(cfg: RunConfig, grid: LatticeGrid, rng) -> dict:
    sys = build_maxwell_system(MaxwellScenario(grid))
    br = solve_brackets(sys)
    m = _bracket_metrics(sys, br, expected_maxwell_bracket(grid), cfg, rng)

    basis = build_polarization_basis(grid)
    m["closure_max_err"] = check_closure(basis)
    S_a, S_b = maxwell_mode_maps(basis)
    tables = bracket_in_modes(br, S_a, S_b)
    m["mode_bracket_max_err"] = _mode_table_error(tables, expected_mode_table(S_a.shape[0], grid, -1))

    shape = (2,) + grid.shape
    alpha = _random_transverse_modes(grid, shape, rng)
    beta = _random_transverse_modes(grid, shape, rng)
    xi = np.concatenate(
        [alphabeta_to_vector(alpha, basis).values.ravel(), alphabeta_to_vector(beta, basis).values.ravel()]
    )
    h_pos = hamiltonian_value(sys, xi)
    h_mom = momentum_hamiltonian_maxwell(alpha, beta, grid)
    m["hamiltonian_rel_err"] = abs(h_pos - h_mom) / abs(h_mom)
    return m


def _random_transverse_modes(grid, shape, rng) -> ModeCoefficients:
    vals = rng.standard_normal(shape)
    vals[:, grid.k_squared == 0] = 0.0
    return ModeCoefficients(grid, vals, rng.standard_normal(3))


def _bracket_metrics(sys, br, expected, cfg: RunConfig, rng) -> dict:
    m = {
        "bracket_max_err": compare_brackets(br, expected),
        "antisymmetry_residual": br.antisymmetry_residual,
        "hamilton_residual": br.hamilton_residual,
        "constraint_residual": br.constraint_residual,
    }
    m["covariance_residual"] = verify_time_covariance(
        sys, br, cfg.covariance_times, cfg.trials, rng
    )
    states = random_surface_states(sys, cfg.trials, rng, br.basis)
    m["energy_drift"] = _energy_drift(sys, cfg.covariance_times, states)
    return m


def _tolerances(cfg: RunConfig) -> dict:
    tol = cfg.tolerance
    names = [
        "antisymmetry_residual",
        "hamilton_residual",
        "constraint_residual",
        "covariance_residual",
        "mode_bracket_max_err",
        "hamiltonian_rel_err",
        "energy_drift",
    ]
    out = {name: tol for name in names}
    # bracket entries scale like delta_{x,y} / spacing**3
    out["bracket_max_err"] = tol / cfg.spacing**3
    if cfg.scenario == "maxwell":
        out["closure_max_err"] = CLOSURE_TOL
    return out


def run_verify(cfg: RunConfig) -> VerificationReport:
    """
    Build the scenario, identify its brackets and check them every way we can.

    Solver errors are caught and produce a failed report carrying ``error``.
    """
    start = time.perf_counter()
    grid = LatticeGrid(cfg.n_points, cfg.spacing)
    rng = np.random.default_rng(cfg.seed)
    tolerances = _tolerances(cfg)
    error = None
    try:
        checks = _kg_checks if cfg.scenario == "kg" else _maxwell_checks
        metrics = checks(cfg, grid, rng)
    except CIQError as exc:
        metrics = {}
        error = f"{type(exc).__name__}: {exc}"
    metrics = {k: float(v) for k, v in metrics.items()}
    report = VerificationReport(
        command="verify",
        config=asdict(cfg),
        metrics=metrics,
        tolerances=tolerances,
        passed=error is None and _judge(metrics, tolerances),
        runtime_ms=int(round(1000 * (time.perf_counter() - start))),
        error=error,
    )
    if cfg.output_path:
        report.write(cfg.output_path)
    return report


def run_basis_check(n_points: int, output_path=None) -> VerificationReport:
    """Closure, parity and orthonormality of the polarization basis."""
    start = time.perf_counter()
    grid = LatticeGrid(n_points)
    basis = build_polarization_basis(grid)
    metrics = {
        "closure_max_err": check_closure(basis),
        "parity_max_err": check_parity(basis),
        "orthonormality_max_err": check_orthonormal(basis),
    }
    tolerances = {
        "closure_max_err": CLOSURE_TOL,
        "parity_max_err": 0.0,
        "orthonormality_max_err": CLOSURE_TOL,
    }
    report = VerificationReport(
        command="basis",
        config={"n_points": n_points, "output_path": output_path},
        metrics=metrics,
        tolerances=tolerances,
        passed=_judge(metrics, tolerances),
        runtime_ms=int(round(1000 * (time.perf_counter() - start))),
    )
    if output_path:
        report.write(output_path)
    return report


def run_decompose(input_path, transverse_path, longitudinal_path) -> tuple[VectorField, VectorField]:
    """Split a 3-component CIQF field into its transverse and longitudinal files."""
    v = read_field_file(input_path)
    if not isinstance(v, VectorField):
        raise FormatError("decompose needs a 3-component field", 20)
    vt = transverse_project(v)
    vl = longitudinal_project(v)
    write_field_file(transverse_path, vt)
    write_field_file(longitudinal_path, vl)
    return vt, vl
