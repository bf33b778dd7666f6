"""Interferometer configuration model.

A configuration couples a prior distribution over N paths to one detector
state per path. The joint particle+detector state is pure, and the two
reduced density matrices (particle side, detector side) are what every
downstream quantity consumes.

JSON schema for configurations, which is also the CLI input format::

    {
      "probs": [0.5, 0.5],
      "detectors": {
        "dim": 2,
        "states": [
          [[1.0, 0.0], [0.0, 0.0]],
          [[0.6, 0.0], [0.8, 0.0]]
        ]
      }
    }

``probs`` lists the path priors. Each entry of ``detectors.states`` is one
detector state: a length-``dim`` list of ``[re, im]`` pairs. The parser
renormalizes probabilities and state vectors that are within 1e-6 of
normalized (to absorb rounding in hand-written files) and rejects anything
farther off.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Any, Mapping, Sequence

import numpy as np

from .linalg import hermitian_part, hermiticity_defect

if TYPE_CHECKING:
    from .discrimination import Povm

__all__ = [
    "ConfigFormatError",
    "DensityMatrix",
    "DetectorSet",
    "InterferometerConfig",
    "LengthMismatchError",
    "NegativeProbabilityError",
    "NotNormalizedError",
    "PathDistribution",
    "PovmValidation",
    "build_config",
    "config_from_json",
    "config_to_json",
    "detector_density",
    "particle_density",
    "validate_povm",
]

#: Strict normalization tolerance enforced by the value types.
NORMALIZATION_TOL = 1e-9

#: Looser window inside which build_config repairs (renormalizes) inputs.
REPAIR_TOL = 1e-6

#: Hermiticity / positivity / unit-trace tolerance for DensityMatrix.
DENSITY_TOL = 1e-9

#: Per-element tolerance for POVM checks (Hermiticity and positivity).
POVM_ELEMENT_TOL = 1e-9

#: Entrywise tolerance for the POVM completeness sum against the identity.
POVM_COMPLETENESS_TOL = 1e-8


class LengthMismatchError(ValueError):
    """Paired sequences (priors and states, say) have different lengths."""


class NotNormalizedError(ValueError):
    """A probability vector or state vector is too far from normalized."""


class NegativeProbabilityError(ValueError):
    """A probability is negative beyond any rounding allowance."""


class ConfigFormatError(ValueError):
    """A JSON configuration document does not match the schema."""


def _freeze(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class PathDistribution:
    """Prior probabilities for the N paths. Entries are >= 0 and sum to 1."""

    probs: np.ndarray

    def __post_init__(self) -> None:
        p = np.array(self.probs, dtype=np.float64)
        if p.ndim != 1:
            raise ValueError(f"probabilities must be a 1-d sequence, got shape {p.shape}")
        if p.size < 2:
            raise ValueError(f"need at least two paths, got {p.size}")
        if not np.all(np.isfinite(p)):
            raise ValueError("probabilities must be finite")
        if np.any(p < 0.0):
            raise NegativeProbabilityError(f"negative probability: {p.min()}")
        total = float(p.sum())
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise NotNormalizedError(f"probabilities sum to {total!r}, expected 1")
        object.__setattr__(self, "probs", _freeze(p))

    @property
    def n_paths(self) -> int:
        return int(self.probs.size)


@dataclass(frozen=True)
class DetectorSet:
    """Unit-norm detector states, one per path, as rows of an (N, d) array.

    The states may be linearly dependent and d may be smaller than N; down
    to d = 1 everything downstream still applies.
    """

    states: np.ndarray

    def __post_init__(self) -> None:
        a = np.array(self.states, dtype=np.complex128)
        if a.ndim != 2:
            raise ValueError(f"states must be a 2-d array, got shape {a.shape}")
        if a.shape[0] < 2:
            raise ValueError(f"need at least two detector states, got {a.shape[0]}")
        if a.shape[1] < 1:
            raise ValueError("detector dimension must be at least 1")
        if not np.all(np.isfinite(a)):
            raise ValueError("state amplitudes must be finite")
        norms = np.linalg.norm(a, axis=1)
        worst = float(np.abs(norms - 1.0).max())
        if worst > NORMALIZATION_TOL:
            raise NotNormalizedError(f"state norms deviate from 1 by up to {worst:.3e}")
        object.__setattr__(self, "states", _freeze(a))

    @property
    def n_states(self) -> int:
        return int(self.states.shape[0])

    @property
    def dim(self) -> int:
        return int(self.states.shape[1])

    def overlap_gram(self) -> np.ndarray:
        """Gram matrix G with G[i, j] = <state_j | state_i>."""
        return self.states @ self.states.conj().T


@dataclass(frozen=True)
class InterferometerConfig:
    """Path priors plus the detector states they mark."""

    priors: PathDistribution
    detectors: DetectorSet

    def __post_init__(self) -> None:
        if self.priors.n_paths != self.detectors.n_states:
            raise LengthMismatchError(
                f"{self.priors.n_paths} priors but {self.detectors.n_states} detector states"
            )

    @property
    def n_paths(self) -> int:
        return self.priors.n_paths

    @property
    def detector_dim(self) -> int:
        return self.detectors.dim


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, positive semidefinite, unit-trace matrix (within DENSITY_TOL)."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("matrix entries must be finite")
        defect = hermiticity_defect(m)
        if defect > DENSITY_TOL:
            raise ValueError(f"not Hermitian: defect {defect:.3e}")
        trace = float(np.trace(m).real)
        if abs(trace - 1.0) > DENSITY_TOL:
            raise ValueError(f"trace is {trace!r}, expected 1")
        smallest = float(np.linalg.eigvalsh((m + m.conj().T) / 2.0)[0])
        if smallest < -DENSITY_TOL:
            raise ValueError(f"not positive semidefinite: eigenvalue {smallest:.3e}")
        object.__setattr__(self, "matrix", _freeze(m))

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])

    @classmethod
    def pure(cls, state: Sequence[complex] | np.ndarray) -> "DensityMatrix":
        """Projector onto a unit vector."""
        v = np.asarray(state, dtype=np.complex128)
        if v.ndim != 1:
            raise ValueError(f"state must be a vector, got shape {v.shape}")
        return cls(np.outer(v, v.conj()))


@dataclass(frozen=True)
class PovmValidation:
    """Outcome of a POVM check: empty ``violations`` means the POVM is valid."""

    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def build_config(
    probs: Sequence[float] | np.ndarray,
    states: Sequence[Sequence[complex]] | np.ndarray,
) -> InterferometerConfig:
    """Assemble a configuration from raw sequences, repairing mild rounding.

    Probabilities whose sum is within REPAIR_TOL of 1 are renormalized, as
    are state vectors whose norm is within REPAIR_TOL of 1. Anything farther
    off raises NotNormalizedError; negative probabilities raise
    NegativeProbabilityError regardless of magnitude.
    """
    p = np.asarray(probs, dtype=np.float64)
    if p.ndim != 1:
        raise ValueError(f"probabilities must be a 1-d sequence, got shape {p.shape}")
    a = np.asarray(states, dtype=np.complex128)
    if a.ndim != 2:
        raise ValueError(f"states must be a 2-d array, got shape {a.shape}")
    if p.size != a.shape[0]:
        raise LengthMismatchError(f"{p.size} probabilities but {a.shape[0]} states")
    if not np.all(np.isfinite(p)):
        raise ValueError("probabilities must be finite")
    if np.any(p < 0.0):
        raise NegativeProbabilityError(f"negative probability: {p.min()}")
    total = float(p.sum())
    if abs(total - 1.0) > REPAIR_TOL:
        raise NotNormalizedError(f"probabilities sum to {total!r}, expected 1")
    if not np.all(np.isfinite(a)):
        raise ValueError("state amplitudes must be finite")
    norms = np.linalg.norm(a, axis=1)
    worst = float(np.abs(norms - 1.0).max())
    if worst > REPAIR_TOL:
        raise NotNormalizedError(f"state norms deviate from 1 by up to {worst:.3e}")
    return InterferometerConfig(
        PathDistribution(p / total), DetectorSet(a / norms[:, None])
    )


def particle_density(config: InterferometerConfig) -> DensityMatrix:
    """Reduced state of the particle in the path basis.

    Entry (i, j) is sqrt(p_i p_j) <detector_j | detector_i>, so the detector
    overlaps damp the off-diagonal interference terms while the diagonal
    carries the priors exactly (bitwise, not merely within tolerance).
    """
    p = config.priors.probs
    gram = config.detectors.overlap_gram()
    amp = np.sqrt(p)
    rho = hermitian_part(np.multiply.outer(amp, amp) * gram)
    np.fill_diagonal(rho, p)
    return DensityMatrix(rho)


def detector_density(config: InterferometerConfig) -> DensityMatrix:
    """Reduced state of the detectors: the prior-weighted mixture of markers.

    Shares its nonzero spectrum with the particle state, both being partial
    traces of one pure joint state.
    """
    a = config.detectors.states
    rho = np.einsum("i,ik,il->kl", config.priors.probs, a, a.conj())
    return DensityMatrix(hermitian_part(rho))


def validate_povm(povm: "Povm", dim: int) -> PovmValidation:
    """Check POVM sanity: element shape, Hermiticity, positivity, completeness.

    Elements must be ``dim`` x ``dim``, Hermitian and positive semidefinite
    within POVM_ELEMENT_TOL, and must sum to the identity within
    POVM_COMPLETENESS_TOL entrywise. Returns the full list of violations
    rather than stopping at the first.
    """
    violations: list[str] = []
    total = np.zeros((dim, dim), dtype=np.complex128)
    for idx, element in enumerate(povm.elements):
        if element.shape != (dim, dim):
            violations.append(f"element {idx}: shape {element.shape}, expected {(dim, dim)}")
            continue
        defect = hermiticity_defect(element)
        if defect > POVM_ELEMENT_TOL:
            violations.append(f"element {idx}: not Hermitian (defect {defect:.3e})")
            continue
        smallest = float(np.linalg.eigvalsh(hermitian_part(element))[0])
        if smallest < -POVM_ELEMENT_TOL:
            violations.append(f"element {idx}: negative eigenvalue {smallest:.3e}")
        total += element
    gap = float(np.abs(total - np.eye(dim)).max())
    if gap > POVM_COMPLETENESS_TOL:
        violations.append(f"completeness: sum deviates from identity by {gap:.3e}")
    return PovmValidation(tuple(violations))


def _require(condition: bool, path: str, message: str) -> None:
    if not condition:
        raise ConfigFormatError(f"{path}: {message}")


def _as_number(value: Any, path: str) -> float:
    _require(
        isinstance(value, (int, float)) and not isinstance(value, bool),
        path,
        f"expected a number, got {type(value).__name__}",
    )
    return float(value)


def config_from_json(data: Any) -> InterferometerConfig:
    """Parse the JSON configuration schema documented at module top.

    Raises ConfigFormatError naming the offending field for structural
    problems; normalization problems surface as the build_config errors.
    """
    _require(isinstance(data, Mapping), "top level", "expected an object")
    unknown = set(data) - {"probs", "detectors"}
    _require(not unknown, "top level", f"unknown keys {sorted(unknown)}")
    _require("probs" in data, "probs", "missing required key")
    _require("detectors" in data, "detectors", "missing required key")

    raw_probs = data["probs"]
    _require(isinstance(raw_probs, Sequence) and not isinstance(raw_probs, (str, bytes)),
             "probs", "expected a list of numbers")
    probs = [_as_number(v, f"probs[{i}]") for i, v in enumerate(raw_probs)]

    det = data["detectors"]
    _require(isinstance(det, Mapping), "detectors", "expected an object")
    unknown = set(det) - {"dim", "states"}
    _require(not unknown, "detectors", f"unknown keys {sorted(unknown)}")
    _require("dim" in det, "detectors.dim", "missing required key")
    _require("states" in det, "detectors.states", "missing required key")
    dim_raw = det["dim"]
    _require(isinstance(dim_raw, int) and not isinstance(dim_raw, bool),
             "detectors.dim", "expected an integer")
    _require(dim_raw >= 1, "detectors.dim", f"must be >= 1, got {dim_raw}")

    raw_states = det["states"]
    _require(isinstance(raw_states, Sequence) and not isinstance(raw_states, (str, bytes)),
             "detectors.states", "expected a list of states")
    vectors = np.zeros((len(raw_states), dim_raw), dtype=np.complex128)
    for i, state in enumerate(raw_states):
        path = f"detectors.states[{i}]"
        _require(isinstance(state, Sequence) and not isinstance(state, (str, bytes)),
                 path, "expected a list of [re, im] pairs")
        _require(len(state) == dim_raw,
                 path, f"has {len(state)} amplitudes, expected dim = {dim_raw}")
        for k, pair in enumerate(state):
            entry = f"{path}[{k}]"
            _require(isinstance(pair, Sequence) and not isinstance(pair, (str, bytes))
                     and len(pair) == 2, entry, "expected an [re, im] pair")
            vectors[i, k] = complex(_as_number(pair[0], entry + "[0]"),
                                    _as_number(pair[1], entry + "[1]"))
    return build_config(probs, vectors)


def config_to_json(config: InterferometerConfig) -> dict[str, Any]:
    """Serialize a configuration back into the JSON schema."""
    states = [
        [[float(z.real), float(z.imag)] for z in row]
        for row in config.detectors.states
    ]
    return {
        "probs": [float(p) for p in config.priors.probs],
        "detectors": {"dim": config.detector_dim, "states": states},
    }
