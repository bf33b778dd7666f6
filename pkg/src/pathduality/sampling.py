"""Randomized configuration and measurement sampling.

Reproducibility contract: every random object is drawn from a counter-based
Philox generator whose stream is derived from (seed, *path) through
numpy's SeedSequence spawn keys. Distinct paths give statistically
independent streams, and a stream's output never depends on what was drawn
from any other stream, so sweep cells and samples can be generated in any
order (or skipped) without changing each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .discrimination import Povm
from .linalg import hermitian_part, pinv_sqrt
from .model import DetectorSet, InterferometerConfig, PathDistribution

__all__ = [
    "RNG_ALGORITHM",
    "SweepCell",
    "SweepSpec",
    "iter_sweep",
    "rng_stream",
    "sample_config",
    "sample_dirichlet",
    "sample_haar_state",
    "sample_haar_unitary",
    "sample_random_povm",
]

#: Identifier of the bit generator behind every stream, echoed into output
#: artifacts so results can be replayed.
RNG_ALGORITHM = "philox4x64"

PRIOR_MODES = ("dirichlet", "uniform")


def rng_stream(seed: int, *path: int) -> np.random.Generator:
    """Independent generator for the stream addressed by (seed, *path)."""
    sequence = np.random.SeedSequence(entropy=seed, spawn_key=tuple(path))
    return np.random.Generator(np.random.Philox(seed=sequence))


def sample_haar_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Unit vector distributed uniformly on the sphere in C^dim."""
    if dim < 1:
        raise ValueError(f"dimension must be >= 1, got {dim}")
    vec = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return vec / np.linalg.norm(vec)


def sample_haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via the phase-fixed QR of a Ginibre matrix."""
    if dim < 1:
        raise ValueError(f"dimension must be >= 1, got {dim}")
    ginibre = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim)))
    q, r = np.linalg.qr(ginibre)
    phases = np.diag(r).copy()
    phases /= np.abs(phases)
    return q * phases


def sample_dirichlet(n: int, alpha: float, rng: np.random.Generator) -> PathDistribution:
    """Symmetric Dirichlet(alpha) draw over n paths; alpha = 1 is uniform on
    the simplex, small alpha favors lopsided priors."""
    if n < 2:
        raise ValueError(f"need at least two paths, got {n}")
    if not alpha > 0.0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    return PathDistribution(rng.dirichlet(np.full(n, alpha)))


def sample_config(
    n: int,
    d: int,
    rng: np.random.Generator,
    prior_mode: str = "dirichlet",
    alpha: float = 1.0,
) -> InterferometerConfig:
    """Random configuration: Haar detector states plus priors per mode.

    prior_mode "dirichlet" draws the priors from Dirichlet(alpha);
    "uniform" fixes them at 1/n.
    """
    if prior_mode == "uniform":
        priors = PathDistribution(np.full(n, 1.0 / n))
    elif prior_mode == "dirichlet":
        priors = sample_dirichlet(n, alpha, rng)
    else:
        raise ValueError(f"unknown prior mode {prior_mode!r}, expected {PRIOR_MODES}")
    states = np.stack([sample_haar_state(d, rng) for _ in range(n)])
    return InterferometerConfig(priors, DetectorSet(states))


def sample_random_povm(n_elements: int, dim: int, rng: np.random.Generator) -> Povm:
    """Random n-outcome POVM from normalized Wishart matrices.

    Draws W_i = G_i G_i+ with Ginibre G_i and conjugates each by the inverse
    square root of the sum, which makes the elements sum to the projector on
    the span; any leftover kernel is split evenly across outcomes.
    """
    if n_elements < 1:
        raise ValueError(f"need at least one element, got {n_elements}")
    wisharts = []
    for _ in range(n_elements):
        g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        wisharts.append(g @ g.conj().T)
    root = pinv_sqrt(hermitian_part(sum(wisharts)))
    elements = [hermitian_part(root @ w @ root) for w in wisharts]
    remainder = hermitian_part(np.eye(dim) - sum(elements))
    share = remainder / n_elements
    return Povm(tuple(e + share for e in elements))


@dataclass(frozen=True)
class SweepSpec:
    """Grid description for randomized verification sweeps.

    n_paths is an inclusive (low, high) range. detector_dims is either an
    inclusive range applied to every N, or None for the default ladder
    d = 1 .. 2N per N. samples counts configurations per (N, d) cell.
    """

    n_paths: tuple[int, int] = (2, 6)
    detector_dims: tuple[int, int] | None = None
    samples: int = 100
    seed: int = 0
    prior_mode: str = "dirichlet"
    alpha: float = 1.0

    def __post_init__(self) -> None:
        lo, hi = self.n_paths
        if lo < 2 or hi < lo:
            raise ValueError(f"bad n_paths range {self.n_paths}")
        if self.detector_dims is not None:
            dlo, dhi = self.detector_dims
            if dlo < 1 or dhi < dlo:
                raise ValueError(f"bad detector_dims range {self.detector_dims}")
        if self.samples < 1:
            raise ValueError(f"samples must be >= 1, got {self.samples}")
        if self.prior_mode not in PRIOR_MODES:
            raise ValueError(
                f"unknown prior mode {self.prior_mode!r}, expected {PRIOR_MODES}"
            )
        if not self.alpha > 0.0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")

    def cells(self) -> list[tuple[int, int]]:
        """(N, d) grid cells in deterministic row-major order."""
        out: list[tuple[int, int]] = []
        for n in range(self.n_paths[0], self.n_paths[1] + 1):
            if self.detector_dims is None:
                dims = range(1, 2 * n + 1)
            else:
                dims = range(self.detector_dims[0], self.detector_dims[1] + 1)
            out.extend((n, d) for d in dims)
        return out

    @property
    def total_configs(self) -> int:
        return len(self.cells()) * self.samples


@dataclass(frozen=True)
class SweepCell:
    """One sampled configuration with its grid coordinates."""

    n: int
    d: int
    sample_index: int
    config: InterferometerConfig


def iter_sweep(spec: SweepSpec) -> Iterator[SweepCell]:
    """Generate every configuration of the sweep grid.

    The stream for sample k of cell c is (seed, c, k), so a configuration is
    fully determined by its grid position and the seed.
    """
    for cell_index, (n, d) in enumerate(spec.cells()):
        for k in range(spec.samples):
            rng = rng_stream(spec.seed, cell_index, k)
            config = sample_config(n, d, rng, prior_mode=spec.prior_mode, alpha=spec.alpha)
            yield SweepCell(n, d, k, config)
