"""Pauli operator sampling, the linear sampling map and its adjoint, and
finite-shot simulation of expectation values.

A length-n Pauli word is a plain string over ``IXYZ``; the full operator is
the Kronecker product of the single-qubit factors, leftmost letter acting on
the most significant qubit. Every Pauli has exactly one nonzero entry per
row (value in {+-1, +-i}), so the sampling map and its adjoint are evaluated
by index arithmetic instead of materializing d x d Kronecker products.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from cstomo.qstate import _PAULI_1Q, DensityMatrix

PAULI_LETTERS = "IXYZ"


def _check_pauli(p: str) -> str:
    if not p or any(ch not in PAULI_LETTERS for ch in p):
        raise ValueError(f"invalid Pauli string {p!r}: need a nonempty word over IXYZ")
    return p


def pauli_from_index(index: int, n: int) -> str:
    """Decode the base-4 index (I=0, X=1, Y=2, Z=3, leftmost letter = most
    significant digit) into an n-letter Pauli word."""
    if not 0 <= index < 4**n:
        raise ValueError(f"index {index} outside [0, 4^{n})")
    return "".join(PAULI_LETTERS[(index >> (2 * (n - 1 - i))) & 3] for i in range(n))


def pauli_index(p: str) -> int:
    _check_pauli(p)
    idx = 0
    for ch in p:
        idx = 4 * idx + PAULI_LETTERS.index(ch)
    return idx


def pauli_matrix(p: str) -> np.ndarray:
    """Dense matrix of the Pauli word as a Kronecker product."""
    _check_pauli(p)
    out = _PAULI_1Q[p[0]]
    for ch in p[1:]:
        out = np.kron(out, _PAULI_1Q[ch])
    return out


def _pauli_structure(p: str) -> tuple[int, np.ndarray]:
    """Sparse structure of a Pauli word: P[a, a ^ flip] = phase[a], all other
    entries zero."""
    n = len(p)
    a = np.arange(2**n)
    flip = 0
    phase = np.ones(2**n, dtype=complex)
    for i, ch in enumerate(p):
        bitpos = n - 1 - i
        bit = (a >> bitpos) & 1
        if ch == "X":
            flip |= 1 << bitpos
        elif ch == "Y":
            flip |= 1 << bitpos
            phase = phase * (1j * (2 * bit - 1))
        elif ch == "Z":
            phase = phase * (1 - 2 * bit)
    return flip, phase


class _PlanStructure:
    """Per-plan cache grouping Pauli words by their bit-flip mask so the
    sampling map and adjoint reduce to one mat-vec per group."""

    def __init__(self, plan: "MeasurementPlan"):
        d = 2**plan.n
        m = plan.m
        flips = np.empty(m, dtype=np.int64)
        phases = np.empty((m, d), dtype=complex)
        for k, p in enumerate(plan.paulis):
            flips[k], phases[k] = _pauli_structure(p)
        perm = np.argsort(flips, kind="stable")
        self.d = d
        self.perm = perm
        self.inv_perm = np.argsort(perm, kind="stable")
        self.phases_perm = np.ascontiguousarray(phases[perm])
        sorted_flips = flips[perm]
        bounds = np.flatnonzero(np.diff(sorted_flips)) + 1
        starts = np.concatenate(([0], bounds))
        stops = np.concatenate((bounds, [m]))
        self.groups = [
            (int(sorted_flips[a]), slice(int(a), int(b))) for a, b in zip(starts, stops)
        ]
        self.rows = np.arange(d)


@dataclass(frozen=True, eq=False)
class MeasurementPlan:
    """An ordered set of m distinct Pauli words on n qubits."""

    n: int
    paulis: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "paulis", tuple(self.paulis))
        if self.n < 1:
            raise ValueError(f"need at least one qubit, got n={self.n}")
        for p in self.paulis:
            _check_pauli(p)
            if len(p) != self.n:
                raise ValueError(f"Pauli {p!r} has length {len(p)}, plan has n={self.n}")
        if not 1 <= len(self.paulis) <= 4**self.n:
            raise ValueError(f"m={len(self.paulis)} outside [1, 4^{self.n}]")
        if len(set(self.paulis)) != len(self.paulis):
            raise ValueError("plan contains duplicate Pauli words")

    @property
    def m(self) -> int:
        return len(self.paulis)

    @property
    def dim(self) -> int:
        return 2**self.n

    @cached_property
    def _structure(self) -> _PlanStructure:
        return _PlanStructure(self)


@dataclass(frozen=True, eq=False)
class MeasurementRecord:
    """Everything one data-acquisition pass produces: the plan, the noiseless
    expectations, the finite-shot estimates, the injected noise terms, and the
    assembled data vector y = shot_estimates + v + z."""

    plan: MeasurementPlan
    true_expectations: np.ndarray
    shots_per_setting: int | None  # None means exact expectations (N -> infinity)
    shot_estimates: np.ndarray
    v_true: np.ndarray
    z_true: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        m = self.plan.m
        for name in ("true_expectations", "shot_estimates", "v_true", "z_true", "y"):
            vec = np.asarray(getattr(self, name), dtype=float)
            if vec.shape != (m,):
                raise ValueError(f"{name} has shape {vec.shape}, expected ({m},)")
            vec.setflags(write=False)
            object.__setattr__(self, name, vec)
        if self.shots_per_setting is not None and self.shots_per_setting < 1:
            raise ValueError("shots_per_setting must be >= 1 (or None for exact)")
        gap = np.max(np.abs(self.y - (self.shot_estimates + self.v_true + self.z_true)))
        if gap > 1e-12:
            raise ValueError(f"y != shot_estimates + v + z (max gap {gap:.3e})")
        if np.any(np.abs(self.shot_estimates) > 1.0 + 1e-12):
            raise ValueError("shot estimates must lie in [-1, 1]")

    def to_json(self) -> str:
        return json.dumps(
            {
                "n": self.plan.n,
                "paulis": list(self.plan.paulis),
                "true_expectations": self.true_expectations.tolist(),
                "shots_per_setting": self.shots_per_setting,
                "shot_estimates": self.shot_estimates.tolist(),
                "v_true": self.v_true.tolist(),
                "z_true": self.z_true.tolist(),
                "y": self.y.tolist(),
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "MeasurementRecord":
        obj = json.loads(text)
        plan = MeasurementPlan(obj["n"], tuple(obj["paulis"]))
        return cls(
            plan=plan,
            true_expectations=np.array(obj["true_expectations"]),
            shots_per_setting=obj["shots_per_setting"],
            shot_estimates=np.array(obj["shot_estimates"]),
            v_true=np.array(obj["v_true"]),
            z_true=np.array(obj["z_true"]),
            y=np.array(obj["y"]),
        )


def sample_paulis(n: int, m: int, rng: np.random.Generator) -> MeasurementPlan:
    """Draw m distinct Pauli words uniformly without replacement from all 4^n
    (the identity word included), in random order."""
    if not 1 <= m <= 4**n:
        raise ValueError(f"m={m} outside [1, 4^{n}]")
    indices = rng.choice(4**n, size=m, replace=False)
    return MeasurementPlan(n, tuple(pauli_from_index(int(i), n) for i in indices))


def expectation(p: str, rho: DensityMatrix) -> float:
    """Tr(P rho) for a density matrix.

    Uses the one-nonzero-per-row structure of the Pauli word and an exactly
    rounded (fsum) accumulation, so parity identities like the all-Z
    expectation of a single-excitation state hold bitwise.
    """
    mat = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho)
    d = 2 ** len(p)
    if mat.shape != (d, d):
        raise ValueError(f"Pauli dim {d} != state dim {mat.shape[0]}")
    flip, phase = _pauli_structure(_check_pauli(p))
    rows = np.arange(d)
    terms = phase * mat[rows ^ flip, rows]
    re = math.fsum(terms.real.tolist())
    im = math.fsum(terms.imag.tolist())
    if abs(im) > 1e-9:
        raise AssertionError(f"expectation not real: {re} + {im}j")
    if abs(re) > 1.0 + 1e-9:
        raise AssertionError(f"expectation {re!r} outside [-1, 1]")
    return float(re)


def _as_matrix(X) -> np.ndarray:
    return X.matrix if isinstance(X, DensityMatrix) else np.asarray(X, dtype=complex)


def apply_map(plan: MeasurementPlan, X) -> np.ndarray:
    """Evaluate the sampling map: the vector of Tr(P_k X) over the plan.

    X must be Hermitian for the result to be real; the imaginary part is
    discarded.
    """
    mat = _as_matrix(X)
    st = plan._structure
    if mat.shape != (st.d, st.d):
        raise ValueError(f"matrix shape {mat.shape} != ({st.d}, {st.d})")
    out = np.empty(plan.m)
    for flip, sl in st.groups:
        xf = mat[st.rows ^ flip, st.rows]  # X[a ^ flip, a]
        out[sl] = (st.phases_perm[sl] @ xf).real
    return out[st.inv_perm]


def adjoint_map(plan: MeasurementPlan, c: np.ndarray) -> np.ndarray:
    """Adjoint of the sampling map: sum_k c_k P_k, Hermitian for real c."""
    c = np.asarray(c, dtype=float)
    if c.shape != (plan.m,):
        raise ValueError(f"coefficient shape {c.shape} != ({plan.m},)")
    st = plan._structure
    out = np.zeros((st.d, st.d), dtype=complex)
    c_perm = c[st.perm]
    for flip, sl in st.groups:
        out[st.rows, st.rows ^ flip] = c_perm[sl] @ st.phases_perm[sl]
    return out


def simulate_shots(mu: float, shots: int, rng: np.random.Generator) -> float:
    """Mean of `shots` independent +-1 outcomes with P(+1) = (1 + mu)/2.

    Drawn as a single binomial count; unbiased for mu with variance
    (1 - mu^2)/shots.
    """
    if shots < 1:
        raise ValueError(f"need at least one copy, got {shots}")
    if abs(mu) > 1.0 + 1e-9:
        raise ValueError(f"expectation {mu!r} outside [-1, 1]")
    p = min(max((1.0 + mu) / 2.0, 0.0), 1.0)
    k = rng.binomial(shots, p)
    return (2.0 * k - shots) / shots


def acquire(
    plan: MeasurementPlan,
    rho: DensityMatrix,
    shots: int | None,
    v: np.ndarray | None = None,
    z: np.ndarray | None = None,
    rng: np.random.Generator | None = None,
) -> MeasurementRecord:
    """Simulate the whole measurement pass and assemble y = estimates + v + z.

    ``shots=None`` selects the exact-expectation mode (no statistical noise),
    useful for isolating optimization error from shot noise. Absent noise
    vectors default to zero.
    """
    m = plan.m
    v = np.zeros(m) if v is None else np.asarray(v, dtype=float)
    z = np.zeros(m) if z is None else np.asarray(z, dtype=float)
    if v.shape != (m,) or z.shape != (m,):
        raise ValueError(f"noise vectors must have shape ({m},)")
    mu = apply_map(plan, rho)
    if shots is None:
        estimates = mu.copy()
    else:
        if rng is None:
            raise ValueError("finite-shot acquisition needs an rng")
        estimates = np.array([simulate_shots(float(t), shots, rng) for t in mu])
    return MeasurementRecord(
        plan=plan,
        true_expectations=mu,
        shots_per_setting=shots,
        shot_estimates=estimates,
        v_true=v,
        z_true=z,
        y=estimates + v + z,
    )
