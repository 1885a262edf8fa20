import numpy as np
import pytest

from cstomo.measurement import (
    MeasurementPlan,
    MeasurementRecord,
    acquire,
    apply_map,
    sample_paulis,
)
from cstomo.metrics import fidelity
from cstomo.noise import scaled_gaussian_ball, sparse_gaussian
from cstomo.qstate import DensityMatrix, haar_random_pure
from cstomo.solvers import (
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
from oracles import (
    objective_regularized,
    plain_prox_grad,
    project_l1_ball_oracle_2d,
    prox_trace_psd_oracle,
    refine_scalar_min,
    scalar_prox_l1_bisect,
)


def random_hermitian(d, rng):
    x = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return (x + x.conj().T) / 2


def zero_state(d=2):
    m = np.zeros((d, d), dtype=complex)
    m[0, 0] = 1.0
    return DensityMatrix.from_matrix(m)


# --- proximal building blocks -------------------------------------------


def test_prox_trace_psd_diagonal():
    out = prox_trace_psd(np.diag([2.0, -1.0]).astype(complex), 0.5)
    assert np.allclose(out, np.diag([1.5, 0.0]), atol=1e-12)


def test_prox_trace_psd_zero_shift_is_projection():
    rng = np.random.default_rng(0)
    M = random_hermitian(4, rng)
    out = prox_trace_psd(M, 0.0)
    w, u = np.linalg.eigh(M)
    proj = (u * np.clip(w, 0, None)) @ u.conj().T
    assert np.max(np.abs(out - proj)) < 1e-12


def test_prox_trace_psd_against_projected_gradient_oracle():
    rng = np.random.default_rng(1)
    M = random_hermitian(4, rng)
    fast = prox_trace_psd(M, 0.3)
    slow = prox_trace_psd_oracle(M, 0.3)
    assert np.max(np.abs(fast - slow)) < 1e-7


def test_prox_trace_psd_output_is_psd():
    rng = np.random.default_rng(2)
    for _ in range(20):
        out = prox_trace_psd(random_hermitian(6, rng), rng.uniform(0, 2))
        assert np.linalg.eigvalsh(out)[0] >= -1e-10


def test_prox_trace_psd_keeps_diagonal_inputs_diagonal():
    out = prox_trace_psd(np.diag([2.0, -1.0, 0.3, 0.7]).astype(complex), 0.5)
    off = out - np.diag(np.diag(out))
    assert np.max(np.abs(off)) == 0.0


def test_prox_trace_psd_rejects_non_hermitian():
    with pytest.raises(ValueError):
        prox_trace_psd(np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex), 0.1)


def test_soft_threshold_values():
    assert np.allclose(soft_threshold(np.array([3.0, -0.5]), 1.0), [2.0, 0.0])
    x = np.array([0.4, -2.2, 0.0])
    assert np.array_equal(soft_threshold(x, 0.0), x)


def test_soft_threshold_against_scalar_oracles():
    rng = np.random.default_rng(3)
    x = rng.normal(size=8) * 2
    t = 0.16
    fast = soft_threshold(x, t)
    for xi, fi in zip(x, fast):
        # subgradient bisection pins the scalar minimizer to full precision
        assert abs(fi - scalar_prox_l1_bisect(xi, t)) < 1e-12
        # value-based grid refinement agrees to its own resolution
        ui = refine_scalar_min(lambda u: 0.5 * (u - xi) ** 2 + t * abs(u), -6.0, 6.0)
        assert abs(fi - ui) < 1e-7


def test_project_l1_ball_values():
    out = project_l1_ball(np.array([3.0, 1.0]), 2.0)
    assert np.allclose(out, [2.0, 0.0], atol=1e-12)
    oracle = project_l1_ball_oracle_2d(np.array([3.0, 1.0]), 2.0)
    assert np.max(np.abs(out - oracle)) < 1e-7
    inside = np.array([0.5, -0.5])
    assert np.array_equal(project_l1_ball(inside, 2.0), inside)
    assert np.all(project_l1_ball(np.array([3.0, -4.0]), 0.0) == 0)


def test_project_l1_ball_against_boundary_oracle():
    rng = np.random.default_rng(4)
    for _ in range(10):
        x = rng.normal(size=2) * 3
        radius = rng.uniform(0.2, 2.0)
        fast = project_l1_ball(x, radius)
        slow = project_l1_ball_oracle_2d(x, radius)
        assert np.max(np.abs(fast - slow)) < 1e-7
        assert np.abs(fast).sum() <= radius + 1e-12


def test_project_l2_ball():
    assert np.array_equal(project_l2_ball(np.array([3.0, 4.0]), 5.0), [3.0, 4.0])
    assert np.allclose(project_l2_ball(np.array([3.0, 4.0]), 1.0), [0.6, 0.8], atol=1e-15)
    assert np.all(project_l2_ball(np.array([3.0, 4.0]), 0.0) == 0)


def test_renormalize():
    rng = np.random.default_rng(5)
    rho = haar_random_pure(2, rng)
    state, degenerate = renormalize(2.0 * rho.matrix)
    assert not degenerate
    assert np.allclose(state.matrix, rho.matrix, atol=1e-12)
    same, degenerate = renormalize(rho.matrix)
    assert not degenerate
    assert np.allclose(same.matrix, rho.matrix, atol=1e-15)
    mixed, degenerate = renormalize(np.zeros((4, 4)))
    assert degenerate
    assert np.allclose(mixed.matrix, np.eye(4) / 4, atol=1e-15)


# --- regularized estimator ----------------------------------------------


def single_qubit_exact_record():
    plan = MeasurementPlan(1, ("I", "X", "Y", "Z"))
    return acquire(plan, zero_state(), None)


def test_regularized_single_qubit_recovers_state():
    rec = single_qubit_exact_record()
    res = solve_regularized(rec, 0.044, 0.16)
    assert res.converged
    assert np.all(res.v_hat == 0.0)
    assert fidelity(zero_state(), res.rho_hat) >= 0.99
    # objective agrees with the long-run unaccelerated oracle
    X_star, v_star = plain_prox_grad(rec, 0.044, 0.16)
    obj_star = objective_regularized(rec, X_star, v_star, 0.044, 0.16)
    obj_fast = objective_regularized(rec, res.rho_raw, res.v_hat, 0.044, 0.16)
    assert abs(obj_fast - obj_star) <= 1e-9 * max(1.0, abs(obj_star))


def test_regularized_zero_data_hits_degenerate_fallback():
    # maximally mixed input and a traceless plan give y = 0 exactly, whose
    # minimizer is the origin; renormalization falls back to I/d with a flag
    plan = MeasurementPlan(1, ("X", "Y", "Z"))
    mixed = DensityMatrix.from_matrix(np.eye(2, dtype=complex) / 2)
    rec = acquire(plan, mixed, None)
    assert np.all(rec.y == 0)
    res = solve_regularized(rec, 0.05, 0.16)
    assert res.degenerate
    assert np.max(np.abs(res.rho_raw)) < 1e-6
    assert np.allclose(res.rho_hat.matrix, np.eye(2) / 2, atol=1e-12)


def noisy_two_qubit_record(seed=6, m=12, shots=100):
    rng = np.random.default_rng(seed)
    rho = haar_random_pure(2, rng)
    plan = sample_paulis(2, m, rng)
    v = sparse_gaussian(m, 2, 1.0, rng)
    return rho, v, acquire(plan, rho, shots, v, rng=rng)


def test_regularized_matches_oracle_objective_on_two_qubits():
    _, _, rec = noisy_two_qubit_record()
    tau1, tau2 = 0.011 * rec.plan.m, 0.16
    res = solve_regularized(rec, tau1, tau2)
    assert res.converged
    X_star, v_star = plain_prox_grad(rec, tau1, tau2, max_iters=200000)
    obj_star = objective_regularized(rec, X_star, v_star, tau1, tau2)
    obj_fast = objective_regularized(rec, res.rho_raw, res.v_hat, tau1, tau2)
    assert abs(obj_fast - obj_star) <= 1e-6 * max(1.0, abs(obj_star))


def test_regularized_objective_trace_is_monotone():
    _, _, rec = noisy_two_qubit_record(seed=7)
    res = solve_regularized(rec, 0.1, 0.16)
    diffs = np.diff(res.objective_trace)
    assert np.all(diffs <= 1e-12)


def test_regularized_kkt_certificate():
    _, _, rec = noisy_two_qubit_record(seed=8)
    res = solve_regularized(rec, 0.1, 0.16)
    assert res.converged
    assert res.kkt_residual <= SolverOptions().kkt_tol
    recomputed = kkt_residual_regularized(res.rho_raw, res.v_hat, rec, 0.1, 0.16)
    assert abs(recomputed - res.kkt_residual) < 1e-12


def test_regularized_rejects_bad_parameters():
    _, _, rec = noisy_two_qubit_record(seed=9, m=6)
    with pytest.raises(ValueError):
        solve_regularized(rec, 0.0, 0.1)
    with pytest.raises(ValueError):
        solve_regularized(rec, 0.1, -0.2)


def test_kkt_residual_behavior():
    rec = single_qubit_exact_record()
    X_star, v_star = plain_prox_grad(rec, 0.044, 0.16)
    assert kkt_residual_regularized(X_star, v_star, rec, 0.044, 0.16) <= 1e-7
    origin = kkt_residual_regularized(
        np.zeros((2, 2), dtype=complex), np.zeros(4), rec, 0.044, 0.16
    )
    assert origin > 1e-3
    again = kkt_residual_regularized(
        np.zeros((2, 2), dtype=complex), np.zeros(4), rec, 0.044, 0.16
    )
    assert origin == again


def test_regularized_scaling_covariance():
    # scaling y, v, z and both taus by c rescales the raw minimizer by c,
    # so the renormalized state is unchanged
    rng = np.random.default_rng(10)
    rho = haar_random_pure(1, rng)
    plan = MeasurementPlan(1, ("I", "X", "Y", "Z"))
    v = sparse_gaussian(4, 1, 1.0, rng)
    rec = acquire(plan, rho, 100, v, rng=rng)
    c = 0.5
    scaled = MeasurementRecord(
        plan=plan,
        true_expectations=rec.true_expectations,
        shots_per_setting=rec.shots_per_setting,
        shot_estimates=c * rec.shot_estimates,
        v_true=c * rec.v_true,
        z_true=c * rec.z_true,
        y=c * rec.y,
    )
    tight = SolverOptions(kkt_tol=1e-11, max_iters=200000)
    tau1, tau2 = 0.05, 0.16
    base = solve_regularized(rec, tau1, tau2, tight)
    resc = solve_regularized(scaled, c * tau1, c * tau2, tight)
    assert np.max(np.abs(resc.rho_raw - c * base.rho_raw)) <= 1e-8
    assert np.max(np.abs(resc.v_hat - c * base.v_hat)) <= 1e-8
    assert np.max(np.abs(resc.rho_hat.matrix - base.rho_hat.matrix)) <= 1e-7


def test_regularized_without_restart_still_converges():
    _, _, rec = noisy_two_qubit_record(seed=11)
    res = solve_regularized(rec, 0.12, 0.16, SolverOptions(restart=False))
    assert res.converged
    assert res.kkt_residual <= 1e-6


def test_regularized_backtracking_matches_exact_step():
    _, _, rec = noisy_two_qubit_record(seed=12)
    exact = solve_regularized(rec, 0.12, 0.16)
    bt = solve_regularized(rec, 0.12, 0.16, SolverOptions(exact_step=False))
    assert bt.converged
    oe = objective_regularized(rec, exact.rho_raw, exact.v_hat, 0.12, 0.16)
    ob = objective_regularized(rec, bt.rho_raw, bt.v_hat, 0.12, 0.16)
    assert abs(oe - ob) <= 1e-6 * max(1.0, abs(oe))


def test_rel_obj_stop_is_optional_weaker_certificate():
    _, _, rec = noisy_two_qubit_record(seed=13)
    res = solve_regularized(rec, 0.12, 0.16, SolverOptions(rel_obj_tol=1e-3, max_iters=500))
    assert res.converged  # window stop engaged long before the KKT gap closes


def test_solver_options_validation():
    with pytest.raises(ValueError):
        SolverOptions(max_iters=0)
    with pytest.raises(ValueError):
        SolverOptions(kkt_tol=0.0)
    with pytest.raises(ValueError):
        SolverOptions(admm_rho=-1.0)


# --- constrained / penalized estimators ---------------------------------


def constrained_instance(seed=14):
    rng = np.random.default_rng(seed)
    rho = haar_random_pure(2, rng)
    plan = sample_paulis(2, 12, rng)
    v = sparse_gaussian(12, 2, 1.0, rng)
    z = scaled_gaussian_ball(12, 0.1, rng)
    rec = acquire(plan, rho, 100, v, z, rng=rng)
    return rho, v, rec


def test_constrained_feasibility_contract():
    _, v, rec = constrained_instance()
    budget = 2.5 * float(np.abs(v).sum())
    delta = 0.1
    res = solve_constrained(rec, budget, delta)
    assert res.converged
    assert float(np.abs(res.v_hat).sum()) <= budget * (1.0 + 1e-6)
    residual = np.linalg.norm(rec.y - apply_map(rec.plan, res.rho_raw) - res.v_hat)
    assert residual <= delta * (1.0 + 1e-6)
    assert np.linalg.eigvalsh(res.rho_raw)[0] >= -1e-10


def test_constrained_origin_is_degenerate():
    rng = np.random.default_rng(15)
    rho = haar_random_pure(2, rng)
    plan = sample_paulis(2, 10, rng)
    rec = acquire(plan, rho, None)
    delta = 1.1 * float(np.linalg.norm(rec.y))
    res = solve_constrained(rec, 0.0, delta)
    assert res.degenerate
    assert np.all(res.v_hat == 0.0)
    assert np.allclose(res.rho_hat.matrix, np.eye(4) / 4, atol=1e-12)


def test_constrained_rejects_negative_inputs():
    _, _, rec = constrained_instance(seed=16)
    with pytest.raises(ValueError):
        solve_constrained(rec, -1.0, 0.1)
    with pytest.raises(ValueError):
        solve_constrained(rec, 1.0, -0.1)


def test_penalized_residual_contract():
    _, _, rec = constrained_instance(seed=17)
    delta = 0.1
    res = solve_penalized(rec, 0.012, 0.0139, delta)
    assert res.converged
    residual = np.linalg.norm(rec.y - apply_map(rec.plan, res.rho_raw) - res.v_hat)
    assert residual <= delta * (1.0 + 1e-6)


def test_penalized_origin_is_degenerate():
    rng = np.random.default_rng(18)
    rho = haar_random_pure(2, rng)
    plan = sample_paulis(2, 10, rng)
    rec = acquire(plan, rho, None)
    delta = 1.1 * float(np.linalg.norm(rec.y))
    res = solve_penalized(rec, 0.01, 0.01, delta)
    assert res.degenerate
    assert np.max(np.abs(res.v_hat)) < 1e-6


def test_penalized_rejects_bad_parameters():
    _, _, rec = constrained_instance(seed=19)
    with pytest.raises(ValueError):
        solve_penalized(rec, 0.0, 0.1, 0.1)
    with pytest.raises(ValueError):
        solve_penalized(rec, 0.1, 0.1, -0.5)


# --- matrix-Lasso baseline ----------------------------------------------


def test_matrix_lasso_noiseless_consistency():
    rng = np.random.default_rng(20)
    rho = haar_random_pure(2, rng)
    plan = sample_paulis(2, 16, rng)
    rec = acquire(plan, rho, None)
    res = solve_matrix_lasso(rec, 1e-6)
    assert res.converged
    assert fidelity(rho, res.rho_hat) >= 1.0 - 1e-4
    assert np.all(res.v_hat == 0.0)


def test_matrix_lasso_monotone_and_certified():
    rng = np.random.default_rng(21)
    rho = haar_random_pure(2, rng)
    plan = sample_paulis(2, 12, rng)
    rec = acquire(plan, rho, 80, rng=rng)
    res = solve_matrix_lasso(rec, 0.011 * 12)
    assert res.converged
    assert res.kkt_residual <= 1e-6
    assert np.all(np.diff(res.objective_trace) <= 1e-12)
    with pytest.raises(ValueError):
        solve_matrix_lasso(rec, 0.0)


def test_result_diagnostics_json_downsampled():
    _, _, rec = noisy_two_qubit_record(seed=22)
    res = solve_regularized(rec, 0.1, 0.16)
    import json

    obj = json.loads(res.diagnostics_json())
    assert obj["converged"] is True
    assert len(obj["objective_trace"]) <= 1000
    assert obj["kkt_residual"] == res.kkt_residual
