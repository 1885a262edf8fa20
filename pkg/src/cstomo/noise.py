"""Generators for structured corruption and unstructured noise vectors."""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from enum import Enum

import numpy as np


class NoiseKind(str, Enum):
    SPARSE_GAUSSIAN = "sparse_gaussian"
    SPARSE_POISSON = "sparse_poisson"
    BOUNDED_SPARSE = "bounded_sparse"
    SCALED_GAUSSIAN_BALL = "scaled_gaussian_ball"
    NONE = "none"


def _support(m: int, s: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform size-s subset of {0..m-1}, without replacement."""
    if not 0 <= s <= m:
        raise ValueError(f"sparsity s={s} outside [0, {m}]")
    return rng.choice(m, size=s, replace=False)


def sparse_gaussian(m: int, s: int, sigma: float, rng: np.random.Generator) -> np.ndarray:
    """Vector with exactly s nonzeros, i.i.d. N(0, sigma^2) on a uniformly
    random support, zero elsewhere."""
    if sigma < 0:
        raise ValueError(f"sigma={sigma} must be >= 0")
    v = np.zeros(m)
    v[_support(m, s, rng)] = rng.normal(0.0, sigma, size=s) if sigma > 0 else 0.0
    return v


def sparse_poisson(
    m: int, s: int, lam: float, rng: np.random.Generator, centered: bool = False
) -> np.ndarray:
    """Vector with s entries drawn i.i.d. Poisson(lam) on a random support.

    Entries are used raw (mean lam); set ``centered`` to subtract the mean.
    """
    if lam < 0:
        raise ValueError(f"lambda={lam} must be >= 0")
    v = np.zeros(m)
    draws = rng.poisson(lam, size=s).astype(float)
    if centered:
        draws -= lam
    v[_support(m, s, rng)] = draws
    return v


def bounded_sparse(m: int, s: int, delta0: float, rng: np.random.Generator) -> np.ndarray:
    """s-sparse standard-Gaussian vector rescaled to l2 norm delta0 * sqrt(s)."""
    if delta0 < 0:
        raise ValueError(f"delta0={delta0} must be >= 0")
    if s == 0:
        if delta0 > 0:
            raise ValueError("cannot meet a positive norm target with s=0")
        return np.zeros(m)
    v = np.zeros(m)
    supp = _support(m, s, rng)
    g = rng.normal(size=s)
    nrm = np.linalg.norm(g)
    while nrm == 0.0:  # probability-zero redraw guard
        g = rng.normal(size=s)
        nrm = np.linalg.norm(g)
    v[supp] = g * (delta0 * math.sqrt(s) / nrm)
    return v


def scaled_gaussian_ball(m: int, delta: float, rng: np.random.Generator) -> np.ndarray:
    """Dense Gaussian direction rescaled to l2 norm exactly delta."""
    if delta < 0:
        raise ValueError(f"delta={delta} must be >= 0")
    if delta == 0.0:
        return np.zeros(m)
    g = rng.normal(size=m)
    nrm = np.linalg.norm(g)
    while nrm == 0.0:
        g = rng.normal(size=m)
        nrm = np.linalg.norm(g)
    return g * (delta / nrm)


@dataclass(frozen=True)
class NoiseSpec:
    """Declarative description of one noise vector.

    For sparse kinds the support size comes either from an absolute count
    ``s`` or from the ratio ``eta`` via s = floor(eta * m), resolved against
    the measurement count at sampling time.
    """

    kind: NoiseKind
    s: int | None = None
    eta: float | None = None
    sigma: float = 1.0
    lam: float = 1.0
    delta0: float = 0.0
    delta: float = 0.0
    centered: bool = False

    _SPARSE = (NoiseKind.SPARSE_GAUSSIAN, NoiseKind.SPARSE_POISSON, NoiseKind.BOUNDED_SPARSE)

    def __post_init__(self):
        if self.kind in self._SPARSE:
            if (self.s is None) == (self.eta is None):
                raise ValueError("sparse noise needs exactly one of s or eta")
            if self.s is not None and self.s < 0:
                raise ValueError(f"s={self.s} must be >= 0")
            if self.eta is not None and not 0.0 <= self.eta <= 1.0:
                raise ValueError(f"eta={self.eta} outside [0, 1]")
        if min(self.sigma, self.lam, self.delta0, self.delta) < 0:
            raise ValueError("noise scales must be >= 0")

    def resolve_s(self, m: int) -> int:
        if self.s is not None:
            return self.s
        return int(math.floor(self.eta * m))

    def level(self) -> float:
        """The scalar noise level this spec sweeps over (sigma, lambda,
        delta0, or delta depending on kind)."""
        return {
            NoiseKind.SPARSE_GAUSSIAN: self.sigma,
            NoiseKind.SPARSE_POISSON: self.lam,
            NoiseKind.BOUNDED_SPARSE: self.delta0,
            NoiseKind.SCALED_GAUSSIAN_BALL: self.delta,
            NoiseKind.NONE: 0.0,
        }[self.kind]

    def with_level(self, level: float) -> "NoiseSpec":
        field_name = {
            NoiseKind.SPARSE_GAUSSIAN: "sigma",
            NoiseKind.SPARSE_POISSON: "lam",
            NoiseKind.BOUNDED_SPARSE: "delta0",
            NoiseKind.SCALED_GAUSSIAN_BALL: "delta",
        }.get(self.kind)
        if field_name is None:
            raise ValueError("cannot set a level on kind 'none'")
        from dataclasses import replace

        return replace(self, **{field_name: level})

    def sample(self, m: int, rng: np.random.Generator) -> np.ndarray:
        if self.kind == NoiseKind.NONE:
            return np.zeros(m)
        if self.kind == NoiseKind.SCALED_GAUSSIAN_BALL:
            return scaled_gaussian_ball(m, self.delta, rng)
        s = self.resolve_s(m)
        if self.kind == NoiseKind.SPARSE_GAUSSIAN:
            return sparse_gaussian(m, s, self.sigma, rng)
        if self.kind == NoiseKind.SPARSE_POISSON:
            return sparse_poisson(m, s, self.lam, rng, centered=self.centered)
        return bounded_sparse(m, s, self.delta0, rng)

    def to_dict(self) -> dict:
        out = {"kind": self.kind.value}
        for f in fields(self):
            if f.name == "kind":
                continue
            val = getattr(self, f.name)
            if val != f.default:
                out[f.name] = val
        return out

    @classmethod
    def from_dict(cls, obj: dict) -> "NoiseSpec":
        if "kind" not in obj:
            raise ValueError("noise spec needs a 'kind' field")
        known = {f.name for f in fields(cls)}
        unknown = set(obj) - known
        if unknown:
            raise ValueError(f"unknown noise spec keys: {sorted(unknown)}")
        kwargs = dict(obj)
        kwargs["kind"] = NoiseKind(kwargs["kind"])
        return cls(**kwargs)
