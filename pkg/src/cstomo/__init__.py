"""Tomography of low-rank quantum states from randomly sampled Pauli
measurements corrupted by sparse structured noise.

The package simulates the full pipeline: state generation (`qstate`),
Pauli sampling and finite-shot data acquisition (`measurement`), noise
injection (`noise`), convex reconstruction of the state and the noise
(`solvers`), quality metrics (`metrics`), and a config-driven experiment
runner with paper-style presets (`harness`).
"""

from cstomo.measurement import (
    MeasurementPlan,
    MeasurementRecord,
    acquire,
    adjoint_map,
    apply_map,
    expectation,
    pauli_matrix,
    sample_paulis,
    simulate_shots,
)
from cstomo.metrics import MetricReport, fidelity, lk_norm, mse, rel_l2_error, trace_norm
from cstomo.noise import (
    NoiseKind,
    NoiseSpec,
    bounded_sparse,
    scaled_gaussian_ball,
    sparse_gaussian,
    sparse_poisson,
)
from cstomo.qstate import (
    DensityMatrix,
    StateFamily,
    StateKind,
    apply_local_depolarizing,
    haar_random_pure,
    partial_trace,
    random_rank_r,
    w_state,
)
from cstomo.solvers import (
    ReconstructionResult,
    SolverOptions,
    kkt_residual_regularized,
    project_l1_ball,
    project_l2_ball,
    prox_trace_psd,
    renormalize,
    soft_threshold,
    solve_constrained,
    solve_matrix_lasso,
    solve_penalized,
    solve_regularized,
)

__version__ = "0.1.0"
