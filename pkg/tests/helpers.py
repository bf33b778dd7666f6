"""Shared random-object builders for the test suite.

These deliberately construct inputs from raw numpy draws rather than through
the package's own samplers, so tests of the samplers stay independent.
"""

from __future__ import annotations

import numpy as np

from pathduality import (
    DensityMatrix,
    Ensemble,
    InterferometerConfig,
    PathDistribution,
    build_config,
)
from pathduality.model import DetectorSet


def rng_for(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_hermitian(rng: np.random.Generator, dim: int, scale: float = 1.0) -> np.ndarray:
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return scale * (g + g.conj().T) / 2.0


def random_psd(rng: np.random.Generator, dim: int) -> np.ndarray:
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return g @ g.conj().T


def random_density(rng: np.random.Generator, dim: int) -> DensityMatrix:
    m = random_psd(rng, dim)
    return DensityMatrix(m / np.trace(m).real)


def random_probs(rng: np.random.Generator, n: int) -> np.ndarray:
    p = rng.random(n)
    return p / p.sum()


def random_state(rng: np.random.Generator, dim: int) -> np.ndarray:
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_pure_config(rng: np.random.Generator, n: int, d: int) -> InterferometerConfig:
    states = np.stack([random_state(rng, d) for _ in range(n)])
    return build_config(random_probs(rng, n), states)


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def orthonormal_config(
    rng: np.random.Generator, n: int, d: int | None = None,
    uniform: bool = False,
) -> InterferometerConfig:
    """Config whose detector states are n rows of a random d x d unitary."""
    d = n if d is None else d
    assert d >= n
    states = random_unitary(rng, d)[:n]
    probs = np.full(n, 1.0 / n) if uniform else random_probs(rng, n)
    return InterferometerConfig(PathDistribution(probs), DetectorSet(states))


def identical_config(
    n: int, d: int, probs: np.ndarray | None = None
) -> InterferometerConfig:
    """Every path marks the same detector state."""
    state = np.zeros(d, dtype=complex)
    state[0] = 1.0
    states = np.tile(state, (n, 1))
    p = np.full(n, 1.0 / n) if probs is None else np.asarray(probs, float)
    return InterferometerConfig(PathDistribution(p), DetectorSet(states))


def overlap_config(c: float, probs=(0.5, 0.5)) -> InterferometerConfig:
    """Two paths, real detector overlap c."""
    states = [[1.0, 0.0], [c, np.sqrt(1.0 - c * c)]]
    return build_config(list(probs), states)


def random_mixed_ensemble(rng: np.random.Generator, n: int, d: int) -> Ensemble:
    priors = PathDistribution(random_probs(rng, n))
    states = tuple(random_density(rng, d) for _ in range(n))
    return Ensemble(priors, states)
