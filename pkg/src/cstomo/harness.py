"""Config-driven experiment runner.

An experiment sweeps one axis (measurement count m by default; sparsity
ratio, noise level, or copy count via ``sweep``) over repeated seeded runs:
each run draws one state, and every grid point within the run samples a
fresh Pauli plan, fresh noise, acquires a record, solves with the configured
estimator, and reports metrics as one CSV row. Sub-seeds derive from
(seed, run_index, grid_index), so results are identical regardless of
worker count or execution order.
"""

from __future__ import annotations

import ast
import csv
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path

import numpy as np

import cstomo
from cstomo.measurement import acquire, sample_paulis
from cstomo.metrics import fidelity, mse, rel_l2_error
from cstomo.noise import NoiseKind, NoiseSpec
from cstomo.qstate import StateFamily, StateKind
from cstomo.solvers import (
    SolverOptions,
    solve_constrained,
    solve_matrix_lasso,
    solve_penalized,
    solve_regularized,
)


class ConfigError(ValueError):
    """Invalid experiment configuration; message names the offending field."""


class Estimator(str, Enum):
    REGULARIZED = "regularized"
    CONSTRAINED = "constrained"
    PENALIZED = "penalized"
    MATRIX_LASSO = "matrix_lasso"


_PARAM_KEYS = {
    Estimator.REGULARIZED: {"tau1", "tau2"},
    Estimator.CONSTRAINED: {"beta", "delta"},
    Estimator.PENALIZED: {"lambda1", "lambda2", "delta"},
    Estimator.MATRIX_LASSO: {"mu"},
}
_NONNEGATIVE_PARAMS = {"delta"}

SWEEP_AXES = ("eta", "noise_level", "copies")

RESULT_HEADER = [
    "experiment_id", "run_index", "m", "N", "eta", "sigma_or_lambda",
    "estimator", "fidelity", "mse", "rel_l2", "iterations", "converged",
    "degenerate_flag", "wall_time_seconds", "seed",
]

AGGREGATE_HEADER = [
    "experiment_id", "m", "N", "eta", "sigma_or_lambda", "estimator",
    "fidelity_mean", "fidelity_std", "fidelity_sem",
    "mse_mean", "mse_std", "mse_sem",
    "rel_l2_mean", "rel_l2_std", "count",
]


def eval_rule(rule: str | int | float, m: int) -> float:
    """Evaluate an estimator-parameter rule at a given m.

    Rules are numbers or strings over the grammar: numeric literals, the
    name ``m``, + - * /, unary minus, parentheses, and floor(...). Anything
    else is rejected.
    """
    if isinstance(rule, (int, float)) and not isinstance(rule, bool):
        return float(rule)
    if not isinstance(rule, str):
        raise ConfigError(f"parameter rule must be a number or string, got {rule!r}")
    try:
        tree = ast.parse(rule, mode="eval")
    except SyntaxError as exc:
        raise ConfigError(f"cannot parse rule {rule!r}: {exc}") from None

    def ev(node) -> float:
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "m":
            return float(m)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            val = ev(node.operand)
            return -val if isinstance(node.op, ast.USub) else val
        if isinstance(node, ast.BinOp):
            left, right = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            if isinstance(node.op, ast.Div):
                return left / right
        if (
            isinstance(node, ast.Call)
            and isinstance(node.func, ast.Name)
            and node.func.id == "floor"
            and len(node.args) == 1
            and not node.keywords
        ):
            return float(math.floor(ev(node.args[0])))
        raise ConfigError(f"disallowed construct in rule {rule!r}")

    return ev(tree)


@dataclass(frozen=True)
class SweepSpec:
    """Sweep an axis other than m (m itself is swept through m_grid)."""

    axis: str
    values: tuple

    def __post_init__(self):
        if self.axis not in SWEEP_AXES:
            raise ConfigError(f"sweep axis {self.axis!r} not one of {SWEEP_AXES}")
        if not self.values:
            raise ConfigError("sweep needs at least one value")
        object.__setattr__(self, "values", tuple(self.values))


@dataclass(frozen=True)
class ExperimentConfig:
    experiment_id: str
    state: StateFamily
    copies: int | None  # None = exact expectations
    m_grid: tuple[int, ...]
    runs: int
    noise: NoiseSpec
    estimator: Estimator
    params: dict
    seed: int
    z_spec: NoiseSpec | None = None
    sweep: SweepSpec | None = None
    solver: SolverOptions = SolverOptions()
    parallelism: int = 1

    def __post_init__(self):
        object.__setattr__(self, "m_grid", tuple(int(m) for m in self.m_grid))
        if not self.experiment_id:
            raise ConfigError("experiment_id must be nonempty")
        if self.runs < 1:
            raise ConfigError(f"runs={self.runs} must be >= 1")
        if self.parallelism < 1:
            raise ConfigError(f"parallelism={self.parallelism} must be >= 1")
        if self.copies is not None and self.copies < 1:
            raise ConfigError("copies must be >= 1 or null for exact expectations")
        if not self.m_grid:
            raise ConfigError("m_grid must be nonempty")
        full = 4**self.state.n
        for m in self.m_grid:
            if not 1 <= m <= full:
                raise ConfigError(f"m={m} outside [1, {full}]")
        if self.sweep is not None:
            if len(self.m_grid) != 1:
                raise ConfigError("a non-m sweep requires a single-entry m_grid")
            if self.sweep.axis == "eta" and self.noise.kind == NoiseKind.NONE:
                raise ConfigError("eta sweep needs a sparse noise kind")
            if self.sweep.axis == "noise_level" and self.noise.kind == NoiseKind.NONE:
                raise ConfigError("noise_level sweep needs a noise kind")
            if self.sweep.axis == "copies":
                for val in self.sweep.values:
                    if int(val) != val or val < 1:
                        raise ConfigError(f"copies sweep value {val!r} must be a positive integer")
        keys = set(self.params)
        expected = _PARAM_KEYS[self.estimator]
        if keys != expected:
            raise ConfigError(
                f"estimator {self.estimator.value} expects params {sorted(expected)}, got {sorted(keys)}"
            )
        for key, rule in self.params.items():
            for m in self.m_grid:
                val = eval_rule(rule, m)
                if key in _NONNEGATIVE_PARAMS:
                    if val < 0:
                        raise ConfigError(f"param {key}={val} at m={m} must be >= 0")
                elif val <= 0:
                    raise ConfigError(f"param {key}={val} at m={m} must be > 0")

    @property
    def n(self) -> int:
        return self.state.n

    @property
    def grid_size(self) -> int:
        return len(self.sweep.values) if self.sweep is not None else len(self.m_grid)

    def cell(self, grid_index: int) -> tuple[int, int | None, NoiseSpec]:
        """Resolve grid point -> (m, copies, effective noise spec)."""
        m = self.m_grid[0] if self.sweep is not None else self.m_grid[grid_index]
        copies = self.copies
        noise = self.noise
        if self.sweep is not None:
            val = self.sweep.values[grid_index]
            if self.sweep.axis == "eta":
                noise = replace(noise, eta=float(val), s=None)
            elif self.sweep.axis == "noise_level":
                noise = noise.with_level(float(val))
            else:
                copies = int(val)
        return m, copies, noise

    def to_dict(self) -> dict:
        out = {
            "experiment_id": self.experiment_id,
            "state": {
                "kind": self.state.kind.value,
                "n": self.state.n,
                "r": self.state.r,
                "depolarizing_gamma": self.state.depolarizing_gamma,
            },
            "copies": self.copies,
            "m_grid": list(self.m_grid),
            "runs": self.runs,
            "noise": self.noise.to_dict(),
            "estimator": self.estimator.value,
            "params": dict(self.params),
            "seed": self.seed,
            "parallelism": self.parallelism,
        }
        if self.z_spec is not None:
            out["z"] = self.z_spec.to_dict()
        if self.sweep is not None:
            out["sweep"] = {"axis": self.sweep.axis, "values": list(self.sweep.values)}
        defaults = SolverOptions()
        solver = {
            k: getattr(self.solver, k)
            for k in ("max_iters", "rel_obj_tol", "kkt_tol", "admm_rho", "restart", "exact_step")
            if getattr(self.solver, k) != getattr(defaults, k)
        }
        if solver:
            out["solver"] = solver
        return out

    @classmethod
    def from_dict(cls, obj: dict) -> "ExperimentConfig":
        if not isinstance(obj, dict):
            raise ConfigError("config must be a JSON object")
        known = {
            "experiment_id", "state", "copies", "m_grid", "runs", "noise",
            "estimator", "params", "seed", "parallelism", "z", "sweep", "solver",
        }
        unknown = set(obj) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        missing = {"experiment_id", "state", "copies", "m_grid", "runs", "noise",
                   "estimator", "params", "seed"} - set(obj)
        if missing:
            raise ConfigError(f"missing config keys: {sorted(missing)}")
        state_obj = obj["state"]
        unknown_state = set(state_obj) - {"kind", "n", "r", "depolarizing_gamma"}
        if unknown_state:
            raise ConfigError(f"unknown state keys: {sorted(unknown_state)}")
        try:
            state = StateFamily(
                kind=StateKind(state_obj["kind"]),
                n=int(state_obj["n"]),
                r=int(state_obj.get("r", 1)),
                depolarizing_gamma=float(state_obj.get("depolarizing_gamma", 0.0)),
            )
            noise = NoiseSpec.from_dict(obj["noise"])
            z_spec = NoiseSpec.from_dict(obj["z"]) if "z" in obj else None
            estimator = Estimator(obj["estimator"])
        except (ValueError, KeyError) as exc:
            raise ConfigError(str(exc)) from None
        sweep = None
        if "sweep" in obj:
            sweep_obj = obj["sweep"]
            unknown_sweep = set(sweep_obj) - {"axis", "values"}
            if unknown_sweep:
                raise ConfigError(f"unknown sweep keys: {sorted(unknown_sweep)}")
            sweep = SweepSpec(axis=sweep_obj["axis"], values=tuple(sweep_obj["values"]))
        solver = SolverOptions()
        if "solver" in obj:
            solver_obj = obj["solver"]
            known_solver = {"max_iters", "rel_obj_tol", "kkt_tol", "admm_rho", "restart", "exact_step"}
            unknown_solver = set(solver_obj) - known_solver
            if unknown_solver:
                raise ConfigError(f"unknown solver keys: {sorted(unknown_solver)}")
            solver = SolverOptions(**solver_obj)
        copies = obj["copies"]
        if copies == "exact":
            copies = None
        try:
            return cls(
                experiment_id=str(obj["experiment_id"]),
                state=state,
                copies=None if copies is None else int(copies),
                m_grid=tuple(obj["m_grid"]),
                runs=int(obj["runs"]),
                noise=noise,
                estimator=estimator,
                params=dict(obj["params"]),
                seed=int(obj["seed"]),
                z_spec=z_spec,
                sweep=sweep,
                solver=solver,
                parallelism=int(obj.get("parallelism", 1)),
            )
        except (ValueError, TypeError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(str(exc)) from None


def read_config(path) -> ExperimentConfig:
    text = Path(path).read_text()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON in {path}: {exc}") from None
    return ExperimentConfig.from_dict(obj)


def write_config(config: ExperimentConfig, path) -> None:
    Path(path).write_text(json.dumps(config.to_dict(), indent=2) + "\n")


@dataclass(frozen=True)
class ResultRow:
    experiment_id: str
    run_index: int
    m: int
    copies: int | None
    eta: float
    noise_level: float
    estimator: str
    fidelity: float
    mse: float
    rel_l2: float | None
    iterations: int
    converged: bool
    degenerate: bool
    wall_time_seconds: float
    seed: int


@dataclass(frozen=True)
class AggregateRow:
    experiment_id: str
    m: int
    copies: int | None
    eta: float
    noise_level: float
    estimator: str
    fidelity_mean: float
    fidelity_std: float
    fidelity_sem: float
    mse_mean: float
    mse_std: float
    mse_sem: float
    rel_l2_mean: float | None
    rel_l2_std: float | None
    count: int


def _cell_seed(seed: int, run_index: int, grid_index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(run_index, 1 + grid_index)))


def _state_rng(seed: int, run_index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(run_index, 0)))


def _run_cell(config: ExperimentConfig, run_index: int, grid_index: int) -> ResultRow:
    start = time.perf_counter()
    m, copies, noise_spec = config.cell(grid_index)
    state = config.state.sample(_state_rng(config.seed, run_index))
    rng = _cell_seed(config.seed, run_index, grid_index)
    plan = sample_paulis(config.n, m, rng)
    v = noise_spec.sample(m, rng)
    z = config.z_spec.sample(m, rng) if config.z_spec is not None else None
    record = acquire(plan, state, copies, v, z, rng=rng)

    params = {k: eval_rule(rule, m) for k, rule in config.params.items()}
    if config.estimator == Estimator.REGULARIZED:
        result = solve_regularized(record, params["tau1"], params["tau2"], config.solver)
    elif config.estimator == Estimator.CONSTRAINED:
        budget = params["beta"] * float(np.abs(v).sum())
        result = solve_constrained(record, budget, params["delta"], config.solver)
    elif config.estimator == Estimator.PENALIZED:
        result = solve_penalized(
            record, params["lambda1"], params["lambda2"], params["delta"], config.solver
        )
    else:
        result = solve_matrix_lasso(record, params["mu"], config.solver)

    if noise_spec.kind == NoiseKind.NONE:
        eta = 0.0
    elif noise_spec.kind == NoiseKind.SCALED_GAUSSIAN_BALL:
        eta = 1.0
    else:
        eta = noise_spec.eta if noise_spec.eta is not None else noise_spec.resolve_s(m) / m
    return ResultRow(
        experiment_id=config.experiment_id,
        run_index=run_index,
        m=m,
        copies=copies,
        eta=float(eta),
        noise_level=float(noise_spec.level()),
        estimator=config.estimator.value,
        fidelity=fidelity(state, result.rho_hat),
        mse=mse(v, result.v_hat),
        rel_l2=rel_l2_error(v, result.v_hat),
        iterations=result.iterations,
        converged=result.converged,
        degenerate=result.degenerate,
        wall_time_seconds=time.perf_counter() - start,
        seed=config.seed,
    )


def _run_cell_args(args) -> tuple[int, int, ResultRow]:
    config_dict, run_index, grid_index = args
    config = ExperimentConfig.from_dict(config_dict)
    return run_index, grid_index, _run_cell(config, run_index, grid_index)


def run_experiment(config: ExperimentConfig) -> list[ResultRow]:
    """Execute every (run, grid point) cell and return rows in deterministic
    (run_index, grid_index) order regardless of parallelism."""
    cells = [(r, g) for r in range(config.runs) for g in range(config.grid_size)]
    if config.parallelism == 1:
        return [_run_cell(config, r, g) for r, g in cells]
    results: dict[tuple[int, int], ResultRow] = {}
    config_dict = config.to_dict()
    with ProcessPoolExecutor(max_workers=config.parallelism) as pool:
        for r, g, row in pool.map(
            _run_cell_args,
            [(config_dict, r, g) for r, g in cells],
            chunksize=max(1, len(cells) // (8 * config.parallelism)),
        ):
            results[(r, g)] = row
    return [results[cell] for cell in cells]


def aggregate(rows: list[ResultRow]) -> list[AggregateRow]:
    """Per grid point: mean, sample standard deviation (n-1 denominator,
    reported as 0 for a single row), standard error, and row count."""
    groups: dict[tuple, list[ResultRow]] = {}
    for row in rows:
        groups.setdefault((row.m, row.copies, row.eta, row.noise_level, row.estimator), []).append(row)

    def stats(values):
        arr = np.asarray(values, dtype=float)
        mean = float(arr.mean())
        std = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
        return mean, std, std / math.sqrt(arr.size)

    def sort_key(k):
        m, copies, eta, level, estimator = k
        return (m, -1 if copies is None else copies, eta, level, estimator)

    out = []
    for key in sorted(groups, key=sort_key):
        members = groups[key]
        m, copies, eta, level, estimator = key
        f_mean, f_std, f_sem = stats([r.fidelity for r in members])
        m_mean, m_std, m_sem = stats([r.mse for r in members])
        rel = [r.rel_l2 for r in members if r.rel_l2 is not None]
        rel_mean, rel_std = (stats(rel)[:2]) if rel else (None, None)
        out.append(
            AggregateRow(
                experiment_id=members[0].experiment_id,
                m=m,
                copies=copies,
                eta=eta,
                noise_level=level,
                estimator=estimator,
                fidelity_mean=f_mean,
                fidelity_std=f_std,
                fidelity_sem=f_sem,
                mse_mean=m_mean,
                mse_std=m_std,
                mse_sem=m_sem,
                rel_l2_mean=rel_mean,
                rel_l2_std=rel_std,
                count=len(members),
            )
        )
    return out


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_results_csv(rows: list[ResultRow], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(RESULT_HEADER)
        for r in rows:
            writer.writerow(
                [
                    r.experiment_id, r.run_index, r.m,
                    "exact" if r.copies is None else r.copies,
                    _fmt(r.eta), _fmt(r.noise_level), r.estimator,
                    _fmt(r.fidelity), _fmt(r.mse), _fmt(r.rel_l2),
                    r.iterations, _fmt(r.converged), _fmt(r.degenerate),
                    _fmt(r.wall_time_seconds), r.seed,
                ]
            )


def write_aggregate_csv(rows: list[AggregateRow], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(AGGREGATE_HEADER)
        for r in rows:
            writer.writerow(
                [
                    r.experiment_id, r.m,
                    "exact" if r.copies is None else r.copies,
                    _fmt(r.eta), _fmt(r.noise_level), r.estimator,
                    _fmt(r.fidelity_mean), _fmt(r.fidelity_std), _fmt(r.fidelity_sem),
                    _fmt(r.mse_mean), _fmt(r.mse_std), _fmt(r.mse_sem),
                    _fmt(r.rel_l2_mean), _fmt(r.rel_l2_std), r.count,
                ]
            )


def read_results_csv(path) -> list[ResultRow]:
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != RESULT_HEADER:
            raise ValueError(f"unexpected results header: {header}")
        for rec in reader:
            d = dict(zip(RESULT_HEADER, rec))
            rows.append(
                ResultRow(
                    experiment_id=d["experiment_id"],
                    run_index=int(d["run_index"]),
                    m=int(d["m"]),
                    copies=None if d["N"] == "exact" else int(d["N"]),
                    eta=float(d["eta"]),
                    noise_level=float(d["sigma_or_lambda"]),
                    estimator=d["estimator"],
                    fidelity=float(d["fidelity"]),
                    mse=float(d["mse"]),
                    rel_l2=None if d["rel_l2"] == "" else float(d["rel_l2"]),
                    iterations=int(d["iterations"]),
                    converged=d["converged"] == "true",
                    degenerate=d["degenerate_flag"] == "true",
                    wall_time_seconds=float(d["wall_time_seconds"]),
                    seed=int(d["seed"]),
                )
            )
    return rows


def run_to_directory(config: ExperimentConfig, out_dir) -> tuple[Path, Path, Path]:
    """Run an experiment and write results.csv, aggregate.csv, run_meta.json."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = run_experiment(config)
    results_path = out / "results.csv"
    aggregate_path = out / "aggregate.csv"
    meta_path = out / "run_meta.json"
    write_results_csv(rows, results_path)
    write_aggregate_csv(aggregate(rows), aggregate_path)
    meta = {
        "artifact_version": cstomo.__version__,
        "seed": config.seed,
        "config": config.to_dict(),
    }
    meta_path.write_text(json.dumps(meta, indent=2) + "\n")
    return results_path, aggregate_path, meta_path


# --- presets -----------------------------------------------------------

_M_FULL_GRID = tuple(range(64, 1025, 64))


def _gaussian(eta=0.04, sigma=1.0) -> NoiseSpec:
    return NoiseSpec(kind=NoiseKind.SPARSE_GAUSSIAN, eta=eta, sigma=sigma)


def _preset_fig2(name: str, copies: int, seed: int) -> ExperimentConfig:
    return ExperimentConfig(
        experiment_id=name,
        state=StateFamily(StateKind.HAAR_PURE, n=5),
        copies=copies,
        m_grid=_M_FULL_GRID,
        runs=120,
        noise=_gaussian(),
        estimator=Estimator.REGULARIZED,
        params={"tau1": "0.011*m", "tau2": 0.16},
        seed=seed,
    )


def _build_presets() -> dict:
    presets = {
        "fig2a": lambda: _preset_fig2("fig2a", 50, 11050),
        "fig2b": lambda: _preset_fig2("fig2b", 100, 11100),
        "fig2c": lambda: _preset_fig2("fig2c", 150, 11150),
        "fig2d": lambda: _preset_fig2("fig2d", 200, 11200),
        "fig3": lambda: ExperimentConfig(
            experiment_id="fig3",
            state=StateFamily(StateKind.HAAR_PURE, n=5),
            copies=100,
            m_grid=(512,),
            runs=120,
            noise=_gaussian(eta=0.0),
            estimator=Estimator.REGULARIZED,
            params={"tau1": "0.011*m", "tau2": 0.16},
            seed=11300,
            sweep=SweepSpec("eta", (0.0, 0.04, 0.08, 0.12, 0.16, 0.2, 0.24, 0.28)),
        ),
        "fig4": lambda: ExperimentConfig(
            experiment_id="fig4",
            state=StateFamily(StateKind.HAAR_PURE, n=5),
            copies=100,
            m_grid=(512,),
            runs=120,
            noise=_gaussian(),
            estimator=Estimator.REGULARIZED,
            params={"tau1": "0.011*m", "tau2": 0.16},
            seed=11400,
            sweep=SweepSpec("noise_level", (0.0, 0.5, 1.0, 2.0, 3.0)),
        ),
        "fig5a": lambda: ExperimentConfig(
            experiment_id="fig5a",
            state=StateFamily(StateKind.RANK_R, n=5, r=2),
            copies=100,
            m_grid=_M_FULL_GRID,
            runs=120,
            noise=_gaussian(),
            estimator=Estimator.REGULARIZED,
            params={"tau1": "0.0055*m", "tau2": 0.15},
            seed=11500,
        ),
        "fig5b": lambda: ExperimentConfig(
            experiment_id="fig5b",
            state=StateFamily(StateKind.RANK_R, n=5, r=2),
            copies=200,
            m_grid=_M_FULL_GRID,
            runs=120,
            noise=_gaussian(),
            estimator=Estimator.REGULARIZED,
            params={"tau1": "0.0055*m", "tau2": 0.15},
            seed=11550,
        ),
        "fig6a": lambda: ExperimentConfig(
            experiment_id="fig6a",
            state=StateFamily(StateKind.HAAR_PURE, n=5, depolarizing_gamma=0.01),
            copies=100,
            m_grid=_M_FULL_GRID,
            runs=120,
            noise=_gaussian(),
            estimator=Estimator.REGULARIZED,
            params={"tau1": "0.011*m", "tau2": 0.16},
            seed=11600,
        ),
        "fig6b": lambda: ExperimentConfig(
            experiment_id="fig6b",
            state=StateFamily(StateKind.HAAR_PURE, n=5, depolarizing_gamma=0.01),
            copies=200,
            m_grid=_M_FULL_GRID,
            runs=120,
            noise=_gaussian(),
            estimator=Estimator.REGULARIZED,
            params={"tau1": "0.011*m", "tau2": 0.16},
            seed=11650,
        ),
        "figA": lambda: ExperimentConfig(
            experiment_id="figA",
            state=StateFamily(StateKind.HAAR_PURE, n=5),
            copies=250,
            m_grid=_M_FULL_GRID,
            runs=120,
            noise=_gaussian(),
            estimator=Estimator.CONSTRAINED,
            params={"beta": 2.5, "delta": 0.1},
            seed=11700,
            z_spec=NoiseSpec(kind=NoiseKind.SCALED_GAUSSIAN_BALL, delta=0.1),
        ),
        "figB": lambda: ExperimentConfig(
            experiment_id="figB",
            state=StateFamily(StateKind.HAAR_PURE, n=5),
            copies=150,
            m_grid=_M_FULL_GRID,
            runs=120,
            noise=_gaussian(),
            estimator=Estimator.PENALIZED,
            params={"lambda1": "0.001*m", "lambda2": "0.014 + 0.002*(m - 64)/m", "delta": 0.1},
            seed=11800,
            z_spec=NoiseSpec(kind=NoiseKind.SCALED_GAUSSIAN_BALL, delta=0.1),
        ),
        "figW": lambda: ExperimentConfig(
            experiment_id="figW",
            state=StateFamily(StateKind.W_STATE, n=5),
            copies=100,
            m_grid=_M_FULL_GRID,
            runs=120,
            noise=_gaussian(),
            estimator=Estimator.REGULARIZED,
            params={"tau1": "0.011*m", "tau2": 0.16},
            seed=11900,
        ),
        "figN": lambda: ExperimentConfig(
            experiment_id="figN",
            state=StateFamily(StateKind.HAAR_PURE, n=5),
            copies=100,
            m_grid=(512,),
            runs=120,
            noise=_gaussian(),
            estimator=Estimator.REGULARIZED,
            params={"tau1": "0.011*m", "tau2": 0.16},
            seed=12000,
            sweep=SweepSpec("copies", (100, 215, 464, 1000, 2154, 4642)),
        ),
        "figE": lambda: ExperimentConfig(
            experiment_id="figE",
            state=StateFamily(StateKind.HAAR_PURE, n=5),
            copies=100,
            m_grid=(512,),
            runs=120,
            noise=_gaussian(),
            estimator=Estimator.REGULARIZED,
            params={"tau1": "0.011*m", "tau2": 0.16},
            seed=12100,
            sweep=SweepSpec(
                "noise_level", (0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0)
            ),
        ),
        "figF": lambda: ExperimentConfig(
            experiment_id="figF",
            state=StateFamily(StateKind.HAAR_PURE, n=6),
            copies=100,
            m_grid=(512, 1024, 1536, 2048),
            runs=20,
            noise=_gaussian(),
            estimator=Estimator.REGULARIZED,
            params={"tau1": "0.0055*m", "tau2": 0.16},
            seed=12200,
        ),
        "figG": lambda: ExperimentConfig(
            experiment_id="figG",
            state=StateFamily(StateKind.HAAR_PURE, n=5),
            copies=100,
            m_grid=_M_FULL_GRID,
            runs=120,
            noise=NoiseSpec(kind=NoiseKind.BOUNDED_SPARSE, eta=0.04, delta0=2.0),
            estimator=Estimator.REGULARIZED,
            params={"tau1": "0.011*m", "tau2": 0.16},
            seed=12300,
        ),
    }
    return presets


_PRESETS = _build_presets()

PRESET_NAMES = tuple(sorted(_PRESETS))


def preset(name: str) -> ExperimentConfig:
    """Paper-matched experiment configuration with a documented default seed."""
    if name not in _PRESETS:
        raise ConfigError(f"unknown preset {name!r}; valid presets: {', '.join(PRESET_NAMES)}")
    return _PRESETS[name]()
