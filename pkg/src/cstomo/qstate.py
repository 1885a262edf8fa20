"""Quantum state construction: Haar-random pure and rank-r mixed states,
W states, and the local depolarizing channel."""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum

import numpy as np

HERMITICITY_TOL = 1e-12
PSD_TOL = 1e-10
TRACE_TOL = 1e-10

_PAULI_1Q = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "Y": np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    "Z": np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
}


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A d x d Hermitian, positive-semidefinite, unit-trace matrix.

    Instances are validated on construction; pass ``check=False`` to
    :meth:`from_matrix` only for matrices already known to be valid.
    """

    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "matrix", np.asarray(self.matrix, dtype=complex))
        m = self.matrix
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {m.shape}")
        m.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def from_matrix(cls, matrix: np.ndarray, check: bool = True) -> "DensityMatrix":
        rho = cls(np.array(matrix, dtype=complex))
        if check:
            rho.validate()
        return rho

    def validate(self) -> None:
        """Raise ValueError if Hermiticity, PSD, or unit trace fails tolerance."""
        m = self.matrix
        herm = np.max(np.abs(m - m.conj().T))
        if herm > HERMITICITY_TOL:
            raise ValueError(f"not Hermitian: max |M - M^dag| = {herm:.3e}")
        tr = np.trace(m).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"trace {tr!r} deviates from 1 beyond {TRACE_TOL}")
        min_eig = float(np.linalg.eigvalsh(m)[0])
        if min_eig < -PSD_TOL:
            raise ValueError(f"not PSD: min eigenvalue {min_eig:.3e}")

    def to_json(self) -> str:
        return json.dumps(
            {
                "dim": self.dim,
                "re": self.matrix.real.tolist(),
                "im": self.matrix.imag.tolist(),
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "DensityMatrix":
        obj = json.loads(text)
        m = np.array(obj["re"], dtype=float) + 1j * np.array(obj["im"], dtype=float)
        if m.shape != (obj["dim"], obj["dim"]):
            raise ValueError("dim field inconsistent with matrix shape")
        return cls.from_matrix(m)


class StateKind(str, Enum):
    HAAR_PURE = "haar_pure"
    RANK_R = "rank_r"
    W_STATE = "w_state"


@dataclass(frozen=True)
class StateFamily:
    """What state to draw for an experiment run, plus optional local
    depolarizing noise applied after generation."""

    kind: StateKind
    n: int
    r: int = 1
    depolarizing_gamma: float = 0.0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"need at least one qubit, got n={self.n}")
        if not 1 <= self.r <= 2**self.n:
            raise ValueError(f"rank r={self.r} outside [1, {2 ** self.n}]")
        if not 0.0 <= self.depolarizing_gamma <= 1.0:
            raise ValueError(f"gamma={self.depolarizing_gamma} outside [0, 1]")
        if self.kind == StateKind.W_STATE and self.n < 2:
            raise ValueError("W state needs n >= 2")

    def sample(self, rng: np.random.Generator) -> DensityMatrix:
        if self.kind == StateKind.HAAR_PURE:
            rho = haar_random_pure(self.n, rng)
        elif self.kind == StateKind.RANK_R:
            rho = random_rank_r(self.n, self.r, rng)
        else:
            rho = w_state(self.n)
        if self.depolarizing_gamma > 0.0:
            rho = apply_local_depolarizing(rho, self.depolarizing_gamma)
        return rho


def haar_random_pure(n: int, rng: np.random.Generator) -> DensityMatrix:
    """Rank-1 projector onto a Haar-distributed pure state of n qubits.

    A vector of i.i.d. standard complex Gaussians, normalized, is exactly
    Haar-distributed on the unit sphere.
    """
    if n < 1:
        raise ValueError(f"need at least one qubit, got n={n}")
    d = 2**n
    psi = rng.normal(size=d) + 1j * rng.normal(size=d)
    psi /= np.linalg.norm(psi)
    return DensityMatrix.from_matrix(np.outer(psi, psi.conj()), check=False)


def random_rank_r(n: int, r: int, rng: np.random.Generator) -> DensityMatrix:
    """Random rank-r mixed state: a Haar pure state on a (2^n * r)-dimensional
    space with the r-dimensional ancilla traced out."""
    d = 2**n
    if not 1 <= r <= d:
        raise ValueError(f"rank r={r} outside [1, {d}]")
    psi = rng.normal(size=d * r) + 1j * rng.normal(size=d * r)
    psi /= np.linalg.norm(psi)
    return partial_trace(psi, d, r)


def w_state(n: int) -> DensityMatrix:
    """Projector onto the n-qubit W state, the equal superposition of all n
    single-excitation basis states with amplitude 1/sqrt(n).

    Entries are written as 1/n directly (not as squared amplitudes), so the
    matrix is exact to one rounding of 1/n.
    """
    if n < 2:
        raise ValueError(f"W state needs n >= 2, got n={n}")
    d = 2**n
    support = [1 << (n - 1 - i) for i in range(n)]
    rho = np.zeros((d, d), dtype=complex)
    rho[np.ix_(support, support)] = 1.0 / n
    return DensityMatrix.from_matrix(rho, check=False)


def apply_local_depolarizing(rho: DensityMatrix, gamma: float) -> DensityMatrix:
    """Apply the single-qubit depolarizing channel of strength gamma
    independently to every qubit.

    The channel maps a qubit to gamma*I/2 + (1-gamma)*rho, realized here by
    the Kraus set {sqrt(1-3g/4) I, sqrt(g/4) X, sqrt(g/4) Y, sqrt(g/4) Z}.
    """
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"gamma={gamma} outside [0, 1]")
    m = rho.matrix
    if gamma == 0.0:
        return rho
    d = m.shape[0]
    n = d.bit_length() - 1
    if 2**n != d:
        raise ValueError(f"dimension {d} is not a power of two")
    coeffs = {"I": 1.0 - 0.75 * gamma, "X": 0.25 * gamma, "Y": 0.25 * gamma, "Z": 0.25 * gamma}
    out = m
    for q in range(n):
        left = np.eye(2**q, dtype=complex)
        right = np.eye(2 ** (n - q - 1), dtype=complex)
        acc = np.zeros_like(out)
        for letter, c in coeffs.items():
            k = np.kron(np.kron(left, _PAULI_1Q[letter]), right)
            acc += c * (k @ out @ k.conj().T)
        out = acc
    return DensityMatrix.from_matrix(out, check=False)


def partial_trace(state: np.ndarray, keep: int, drop: int) -> DensityMatrix:
    """Reduced density matrix of a pure state on a keep*drop dimensional
    space, tracing out the trailing drop-dimensional factor."""
    psi = np.asarray(state, dtype=complex).ravel()
    if psi.size != keep * drop:
        raise ValueError(f"vector length {psi.size} != keep*drop = {keep * drop}")
    block = psi.reshape(keep, drop)
    return DensityMatrix.from_matrix(block @ block.conj().T, check=False)
