"""Quality measures for reconstructed states and noise vectors."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from cstomo.qstate import DensityMatrix

_EIG_CLIP = -1e-10


def _clean_spectrum(w: np.ndarray, what: str) -> np.ndarray:
    """Clip a Hermitian spectrum for square roots: negatives within -1e-10
    are rounding noise, as are positives below the numerical-rank cutoff
    (whose square roots would otherwise pollute the result)."""
    if w[0] < _EIG_CLIP:
        raise ValueError(f"{what} not PSD within tolerance (min eig {w[0]:.3e})")
    cutoff = w.size * np.finfo(float).eps * max(float(w[-1]), 0.0)
    return np.where(w < cutoff, 0.0, w)


def _psd_sqrt(m: np.ndarray) -> np.ndarray:
    w, u = np.linalg.eigh(m)
    w = _clean_spectrum(w, "matrix")
    return (u * np.sqrt(w)) @ u.conj().T


def fidelity(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Squared fidelity (Tr sqrt(sqrt(sigma) rho sqrt(sigma)))^2, in [0, 1]."""
    a = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho)
    b = sigma.matrix if isinstance(sigma, DensityMatrix) else np.asarray(sigma)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    sq = _psd_sqrt(b)
    inner = sq @ a @ sq
    w = _clean_spectrum(np.linalg.eigvalsh(inner), "inner matrix")
    val = float(np.sum(np.sqrt(w)) ** 2)
    return min(max(val, 0.0), 1.0)


def mse(v: np.ndarray, v_hat: np.ndarray) -> float:
    """Mean squared error (1/m) sum (v_i - v_hat_i)^2."""
    v = np.asarray(v, dtype=float)
    v_hat = np.asarray(v_hat, dtype=float)
    if v.shape != v_hat.shape or v.ndim != 1 or v.size == 0:
        raise ValueError(f"need equal-length nonempty vectors, got {v.shape} vs {v_hat.shape}")
    return float(np.mean((v - v_hat) ** 2))


def rel_l2_error(v: np.ndarray, v_hat: np.ndarray) -> float | None:
    """||v_hat - v||_2 / ||v||_2, or None when ||v||_2 = 0 (undefined)."""
    v = np.asarray(v, dtype=float)
    v_hat = np.asarray(v_hat, dtype=float)
    if v.shape != v_hat.shape:
        raise ValueError(f"length mismatch: {v.shape} vs {v_hat.shape}")
    denom = np.linalg.norm(v)
    if denom == 0.0:
        return None
    return float(np.linalg.norm(v_hat - v) / denom)


def lk_norm(x: np.ndarray, kappa: float) -> float:
    """(sum |x_i|^kappa)^(1/kappa) for kappa >= 1."""
    if kappa < 1:
        raise ValueError(f"kappa={kappa} must be >= 1")
    x = np.asarray(x, dtype=float)
    if kappa == 1:
        return float(np.sum(np.abs(x)))
    if kappa == 2:
        return float(np.linalg.norm(x))
    return float(np.sum(np.abs(x) ** kappa) ** (1.0 / kappa))


def trace_norm(X: np.ndarray) -> float:
    """Sum of singular values; for Hermitian input, sum of |eigenvalues|."""
    X = np.asarray(X)
    if X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise ValueError(f"need a square matrix, got shape {X.shape}")
    if np.max(np.abs(X - X.conj().T)) < 1e-12:
        return float(np.sum(np.abs(np.linalg.eigvalsh(X))))
    return float(np.sum(np.linalg.svd(X, compute_uv=False)))


def trace_distance(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    a = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho)
    b = sigma.matrix if isinstance(sigma, DensityMatrix) else np.asarray(sigma)
    return 0.5 * trace_norm(a - b)


@dataclass(frozen=True)
class MetricReport:
    fidelity: float
    mse: float
    rel_l2: float | None
    trace_distance: float


def report(rho, rho_hat, v: np.ndarray, v_hat: np.ndarray) -> MetricReport:
    return MetricReport(
        fidelity=fidelity(rho, rho_hat),
        mse=mse(v, v_hat),
        rel_l2=rel_l2_error(v, v_hat),
        trace_distance=trace_distance(rho, rho_hat),
    )
