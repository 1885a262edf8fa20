"""Convex reconstruction engines.

All estimators minimize a trace-norm / l1 composite objective over the PSD
cone. On that cone the trace norm equals the trace, so the matrix proximal
map is a single eigenvalue shrink-and-clip. Two first-order engines cover
the four estimators:

* accelerated proximal gradient with adaptive restart for the regularized
  estimator and the matrix-Lasso baseline, with the exact step size from the
  Pauli Gram identity (the sampling map satisfies A A* = d I, so the joint
  smooth term has Lipschitz constant d + 1, or d without the noise variable);
* a linearized splitting method (augmented Lagrangian with a proximal
  linearization) for the constrained and penalized estimators, which handle
  the residual ball through an auxiliary variable w with
  A(X) + v + w = y enforced by the multiplier.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from cstomo.measurement import MeasurementRecord, adjoint_map, apply_map
from cstomo.qstate import DensityMatrix

DEGENERATE_TRACE = 1e-8

# penalty rebalancing cadence and warm-up horizon for the splitting solvers
_BALANCE_EVERY = 50
_BALANCE_UNTIL = 2000


def prox_trace_psd(M: np.ndarray, t: float) -> np.ndarray:
    """Proximal operator of t*Tr(.) + indicator(PSD): eigenvalues are shifted
    down by t and clipped at zero in the input's eigenbasis."""
    M = np.asarray(M, dtype=complex)
    if t < 0:
        raise ValueError(f"t={t} must be >= 0")
    herm = np.max(np.abs(M - M.conj().T)) if M.size else 0.0
    if herm > 1e-9:
        raise ValueError(f"input not Hermitian: max |M - M^dag| = {herm:.3e}")
    w, u = np.linalg.eigh(M)
    w = np.maximum(w - t, 0.0)
    pos = w > 0.0
    if not np.any(pos):
        return np.zeros_like(M)
    uk = u[:, pos]
    return (uk * w[pos]) @ uk.conj().T


def soft_threshold(x: np.ndarray, t: float) -> np.ndarray:
    """Componentwise sign(x) * max(|x| - t, 0)."""
    if t < 0:
        raise ValueError(f"t={t} must be >= 0")
    x = np.asarray(x, dtype=float)
    return np.sign(x) * np.maximum(np.abs(x) - t, 0.0)


def project_l1_ball(x: np.ndarray, radius: float) -> np.ndarray:
    """Exact Euclidean projection onto {u : ||u||_1 <= radius} by the
    sort-and-threshold rule."""
    if radius < 0:
        raise ValueError(f"radius={radius} must be >= 0")
    x = np.asarray(x, dtype=float)
    if radius == 0.0:
        return np.zeros_like(x)
    a = np.abs(x)
    if a.sum() <= radius:
        return x.copy()
    u = np.sort(a)[::-1]
    cumsum = np.cumsum(u)
    thresholds = (cumsum - radius) / np.arange(1, u.size + 1)
    k = np.max(np.flatnonzero(u > thresholds))
    return np.sign(x) * np.maximum(a - thresholds[k], 0.0)


def project_l2_ball(x: np.ndarray, radius: float) -> np.ndarray:
    """x unchanged if inside the ball, radially rescaled otherwise."""
    if radius < 0:
        raise ValueError(f"radius={radius} must be >= 0")
    x = np.asarray(x, dtype=float)
    nrm = np.linalg.norm(x)
    if nrm <= radius:
        return x.copy()
    if radius == 0.0:
        return np.zeros_like(x)
    return x * (radius / nrm)


def renormalize(X: np.ndarray) -> tuple[DensityMatrix, bool]:
    """Scale a PSD matrix to unit trace.

    Returns (state, degenerate). When Tr(X) <= 1e-8 the maximally mixed
    state is returned instead and the degenerate flag is set.
    """
    X = np.asarray(X, dtype=complex)
    d = X.shape[0]
    tr = np.trace(X).real
    if tr <= DEGENERATE_TRACE:
        return DensityMatrix.from_matrix(np.eye(d, dtype=complex) / d, check=False), True
    return DensityMatrix.from_matrix(X / tr, check=False), False


@dataclass(frozen=True)
class SolverOptions:
    """Knobs shared by all solvers. Defaults favor a checkable certificate:
    iteration stops on the proximal-gradient fixed-point gap (kkt_tol), the
    relative-objective window stop is off unless rel_obj_tol > 0."""

    max_iters: int = 20000
    rel_obj_tol: float = 0.0
    kkt_tol: float = 1e-6
    admm_rho: float = 1.0
    restart: bool = True
    exact_step: bool = True

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.kkt_tol <= 0 or self.admm_rho <= 0 or self.rel_obj_tol < 0:
            raise ValueError("tolerances must be positive (rel_obj_tol may be 0 to disable)")


@dataclass
class ReconstructionResult:
    rho_hat: DensityMatrix
    rho_raw: np.ndarray
    v_hat: np.ndarray
    iterations: int
    objective_trace: np.ndarray
    kkt_residual: float
    converged: bool
    degenerate: bool

    def diagnostics_json(self) -> str:
        trace = self.objective_trace
        if trace.size > 1000:
            idx = np.linspace(0, trace.size - 1, 1000).round().astype(int)
            trace = trace[idx]
        return json.dumps(
            {
                "iterations": self.iterations,
                "converged": self.converged,
                "degenerate": self.degenerate,
                "kkt_residual": self.kkt_residual,
                "objective_trace": trace.tolist(),
            }
        )


def _pg_gap(record, X, v, tau1, tau2, step, with_v=True):
    """Norm of the proximal-gradient fixed-point displacement, scaled by the
    step: a checkable bound on the distance to first-order optimality."""
    plan = record.plan
    r = record.y - apply_map(plan, X) - (v if with_v else 0.0)
    grad_X = -adjoint_map(plan, r)
    Xp = prox_trace_psd(X - step * grad_X, step * tau1)
    gap2 = np.linalg.norm(X - Xp) ** 2
    if with_v:
        vp = soft_threshold(v - step * (-r), step * tau2)
        gap2 += np.linalg.norm(v - vp) ** 2
    return float(np.sqrt(gap2) / step)


def kkt_residual_regularized(
    X: np.ndarray, v: np.ndarray, record: MeasurementRecord, tau1: float, tau2: float
) -> float:
    """Fixed-point gap of the regularized objective at (X, v); zero exactly
    at minimizers."""
    step = 1.0 / (record.plan.dim + 1.0)
    return _pg_gap(record, np.asarray(X, dtype=complex), np.asarray(v, dtype=float),
                   tau1, tau2, step)


def _accelerated_pg(record, tau1, tau2, opts, with_v):
    """FISTA with function-value adaptive restart on
    0.5 ||y - A(X) - v||^2 + tau1 Tr(X) + tau2 ||v||_1 over PSD X
    (the v block is dropped for the matrix-Lasso baseline)."""
    plan = record.plan
    y = record.y
    d = plan.dim
    lipschitz = d + 1.0 if with_v else float(d)

    def objective(X, v, r):
        val = 0.5 * float(r @ r) + tau1 * float(np.trace(X).real)
        if with_v:
            val += tau2 * float(np.abs(v).sum())
        return val

    local_l = lipschitz if opts.exact_step else max(1.0, lipschitz / 16.0)

    def pg_step(Xb, vb):
        """Proximal-gradient step from (Xb, vb); with exact_step the fixed
        1/(d+1) step applies, otherwise the local constant is doubled until
        the quadratic majorization holds."""
        nonlocal local_l
        rb = y - apply_map(plan, Xb) - (vb if with_v else 0.0)
        fb = 0.5 * float(rb @ rb)
        grad_x = -adjoint_map(plan, rb)
        while True:
            step = 1.0 / local_l
            Xn = prox_trace_psd(Xb - step * grad_x, step * tau1)
            vn = soft_threshold(vb + step * rb, step * tau2) if with_v else vb
            rn = y - apply_map(plan, Xn) - (vn if with_v else 0.0)
            if opts.exact_step:
                return Xn, vn, rn
            dx = Xn - Xb
            lin = fb + float(np.vdot(grad_x, dx).real)
            quad = 0.5 * local_l * float(np.vdot(dx, dx).real)
            if with_v:
                dv = vn - vb
                lin += float(-rb @ dv)
                quad += 0.5 * local_l * float(dv @ dv)
            if 0.5 * float(rn @ rn) <= lin + quad + 1e-12:
                return Xn, vn, rn
            local_l *= 2.0

    X = np.eye(d, dtype=complex) / d
    v = np.zeros(plan.m)
    X_prev, v_prev = X, v
    t_momentum = 1.0
    r0 = y - apply_map(plan, X) - (v if with_v else 0.0)
    obj_last = objective(X, v, r0)
    trace = []
    converged = False
    iterations = 0
    step = 1.0 / lipschitz

    for it in range(opts.max_iters):
        iterations = it + 1
        t_next = (1.0 + np.sqrt(1.0 + 4.0 * t_momentum**2)) / 2.0
        beta = (t_momentum - 1.0) / t_next if it > 0 else 0.0
        Xe = X + beta * (X - X_prev)
        ve = v + beta * (v - v_prev) if with_v else v
        Xn, vn, rn = pg_step(Xe, ve)
        obj = objective(Xn, vn, rn)
        if opts.restart and obj > obj_last + 1e-12:
            # momentum overshoot: restart and take a plain descent step,
            # which the step-size rule guarantees is monotone
            Xn, vn, rn = pg_step(X, v)
            obj = objective(Xn, vn, rn)
            t_next = 1.0
        X_prev, v_prev = X, v
        X, v = Xn, vn
        t_momentum = t_next
        obj_last = obj
        trace.append(obj)
        if it % 10 == 0 or it == opts.max_iters - 1:
            gap = _pg_gap(record, X, v, tau1, tau2, step, with_v)
            if gap <= opts.kkt_tol:
                converged = True
                break
        if opts.rel_obj_tol > 0 and len(trace) > 10:
            window = abs(trace[-11] - trace[-1])
            if window < opts.rel_obj_tol * max(1.0, abs(trace[-1])):
                converged = True
                break

    kkt = _pg_gap(record, X, v, tau1, tau2, step, with_v)
    rho_hat, degenerate = renormalize(X)
    return ReconstructionResult(
        rho_hat=rho_hat,
        rho_raw=X,
        v_hat=v,
        iterations=iterations,
        objective_trace=np.array(trace),
        kkt_residual=kkt,
        converged=converged or kkt <= opts.kkt_tol,
        degenerate=degenerate,
    )


def solve_regularized(
    record: MeasurementRecord, tau1: float, tau2: float, opts: SolverOptions = SolverOptions()
) -> ReconstructionResult:
    """Jointly estimate the state and the structured noise by minimizing

        0.5 ||y - A(X) - v||_2^2 + tau1 Tr(X) + tau2 ||v||_1,  X >= 0.

    The returned state is renormalized to unit trace.
    """
    if tau1 <= 0 or tau2 <= 0:
        raise ValueError("tau1 and tau2 must be > 0")
    return _accelerated_pg(record, tau1, tau2, opts, with_v=True)


def solve_matrix_lasso(
    record: MeasurementRecord, mu: float, opts: SolverOptions = SolverOptions()
) -> ReconstructionResult:
    """Trace-regularized least squares without a corruption variable:

        0.5 ||y - A(X)||_2^2 + mu Tr(X),  X >= 0.

    v_hat is identically zero by construction.
    """
    if mu <= 0:
        raise ValueError("mu must be > 0")
    return _accelerated_pg(record, mu, 0.0, opts, with_v=False)


def _solve_splitting(record, prox_x, prox_v, v_admissible, delta, objective, opts):
    """Linearized method of multipliers for

        min f_X(X) + f_v(v)  s.t.  A(X) + v + w = y,  ||w||_2 <= delta,

    where prox_x / prox_v evaluate the proximal maps of f_X / f_v with a
    given weight. Each iteration linearizes the augmented quadratic about
    the current point (majorization constant rho * ||K||^2 with
    ||K||^2 = d + 2), so the three blocks reduce to one eigenvalue
    shrink-and-clip and two ball projections. The penalty rho is rebalanced
    by factors of 2 whenever the primal and dual residuals drift apart 10x,
    on a fixed cadence and only during a warm-up window; afterwards rho is
    frozen so the fixed-penalty convergence guarantee applies.
    """
    plan = record.plan
    y = record.y
    d = plan.dim
    m = plan.m
    norm_k2 = d + 2.0
    rho = opts.admm_rho

    X = np.eye(d, dtype=complex) / d
    v = np.zeros(m)
    w = np.zeros(m)
    u = np.zeros(m)  # scaled multiplier
    y_scale = max(1.0, float(np.linalg.norm(y)))
    trace = []
    converged = False
    iterations = 0
    primal = dual = np.inf

    for it in range(opts.max_iters):
        iterations = it + 1
        mu_lin = rho * norm_k2
        g = apply_map(plan, X) + v + w - y + u
        grad_x = adjoint_map(plan, g)
        Xn = prox_x(X - (rho / mu_lin) * grad_x, 1.0 / mu_lin)
        vn = prox_v(v - (rho / mu_lin) * g, 1.0 / mu_lin)
        wn = project_l2_ball(w - (rho / mu_lin) * g, delta)
        residual = apply_map(plan, Xn) + vn + wn - y
        u = u + residual
        primal = float(np.linalg.norm(residual))
        dual = mu_lin * float(
            np.sqrt(
                np.linalg.norm(Xn - X) ** 2
                + np.linalg.norm(vn - v) ** 2
                + np.linalg.norm(wn - w) ** 2
            )
        )
        X, v, w = Xn, vn, wn
        trace.append(objective(X, v))
        dual_scale = max(1.0, rho * float(np.linalg.norm(u)))
        if primal <= opts.kkt_tol * y_scale and dual <= opts.kkt_tol * dual_scale:
            converged = True
            break
        if it < _BALANCE_UNTIL and (it + 1) % _BALANCE_EVERY == 0:
            if primal > 10.0 * dual:
                rho *= 2.0
                u /= 2.0
            elif dual > 10.0 * primal:
                rho /= 2.0
                u *= 2.0

    # fold the residual of the linear constraint into v when f_v allows it,
    # so the returned pair satisfies ||y - A(X) - v|| <= delta exactly
    leftover = y - apply_map(plan, X) - v - w
    v_corrected = v + leftover
    if v_admissible(v_corrected):
        v = v_corrected

    kkt = max(primal / y_scale, dual / max(1.0, rho * float(np.linalg.norm(u))))
    rho_hat, degenerate = renormalize(X)
    return ReconstructionResult(
        rho_hat=rho_hat,
        rho_raw=X,
        v_hat=v,
        iterations=iterations,
        objective_trace=np.array(trace),
        kkt_residual=float(kkt),
        converged=converged,
        degenerate=degenerate,
    )


def solve_constrained(
    record: MeasurementRecord,
    l1_budget: float,
    delta: float,
    opts: SolverOptions = SolverOptions(),
) -> ReconstructionResult:
    """Minimize Tr(X) over PSD X subject to ||v||_1 <= l1_budget and
    ||y - A(X) - v||_2 <= delta (prior-knowledge setting)."""
    if l1_budget < 0 or delta < 0:
        raise ValueError("l1_budget and delta must be >= 0")
    return _solve_splitting(
        record,
        prox_x=lambda M, t: prox_trace_psd(M, t),
        prox_v=lambda x, t: project_l1_ball(x, l1_budget),
        v_admissible=lambda x: float(np.abs(x).sum()) <= l1_budget * (1.0 + 1e-12) + 1e-15,
        delta=delta,
        objective=lambda X, v: float(np.trace(X).real),
        opts=opts,
    )


def solve_penalized(
    record: MeasurementRecord,
    lambda1: float,
    lambda2: float,
    delta: float,
    opts: SolverOptions = SolverOptions(),
) -> ReconstructionResult:
    """Minimize lambda1 Tr(X) + lambda2 ||v||_1 over PSD X subject to
    ||y - A(X) - v||_2 <= delta (noise-strength prior only)."""
    if lambda1 <= 0 or lambda2 <= 0:
        raise ValueError("lambda1 and lambda2 must be > 0")
    if delta < 0:
        raise ValueError("delta must be >= 0")
    return _solve_splitting(
        record,
        prox_x=lambda M, t: prox_trace_psd(M, t * lambda1),
        prox_v=lambda x, t: soft_threshold(x, t * lambda2),
        v_admissible=lambda x: True,
        delta=delta,
        objective=lambda X, v: lambda1 * float(np.trace(X).real)
        + lambda2 * float(np.abs(v).sum()),
        opts=opts,
    )
