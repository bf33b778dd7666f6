"""Dense Hermitian linear algebra kernels.

Every matrix in this package is small (dimension of order the number of
paths or the detector dimension, a few dozen at most) and dense, so a full
eigendecomposition is the single workhorse here. All functions are pure and
hold no shared state, so concurrent use is safe.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "HERMITICITY_TOL",
    "RELATIVE_RANK_CUTOFF",
    "EigenDecomposition",
    "NotHermitianError",
    "NotPsdError",
    "eig_hermitian",
    "hermitian_part",
    "hermiticity_defect",
    "pinv_sqrt",
    "positive_part_trace",
    "trace_norm",
]

#: Largest allowed max-entry deviation from H = H+ before an input is rejected.
HERMITICITY_TOL = 1e-9

#: Relative cutoff (times the largest eigenvalue) below which pinv_sqrt
#: treats an eigenvalue as an exact zero.
RELATIVE_RANK_CUTOFF = 1e-12


class NotHermitianError(ValueError):
    """Matrix is farther from Hermitian than the allowed tolerance."""


class NotPsdError(ValueError):
    """Matrix has an eigenvalue below the allowed negative tolerance."""


@dataclass(frozen=True)
class EigenDecomposition:
    """Spectral decomposition H = V diag(w) V+ of a Hermitian matrix.

    ``eigenvalues`` is real and sorted ascending; column k of
    ``eigenvectors`` is the unit eigenvector for ``eigenvalues[k]``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self) -> None:
        w = np.asarray(self.eigenvalues, dtype=np.float64)
        v = np.asarray(self.eigenvectors, dtype=np.complex128)
        w.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "eigenvalues", w)
        object.__setattr__(self, "eigenvectors", v)

    def reconstruct(self) -> np.ndarray:
        """Reassemble V diag(w) V+."""
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def _as_square_matrix(matrix: np.ndarray) -> np.ndarray:
    out = np.asarray(matrix, dtype=np.complex128)
    if out.ndim != 2 or out.shape[0] != out.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {out.shape}")
    if out.shape[0] == 0:
        raise ValueError("matrix dimension must be at least 1")
    if not np.all(np.isfinite(out)):
        raise ValueError("matrix entries must be finite")
    return out


def hermitian_part(matrix: np.ndarray) -> np.ndarray:
    """(H + H+) / 2, the Hermitian part of a square matrix."""
    m = _as_square_matrix(matrix)
    return (m + m.conj().T) / 2.0


def hermiticity_defect(matrix: np.ndarray) -> float:
    """Largest entrywise magnitude of H - H+."""
    m = _as_square_matrix(matrix)
    return float(np.abs(m - m.conj().T).max())


def eig_hermitian(
    matrix: np.ndarray, hermiticity_tol: float = HERMITICITY_TOL
) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix.

    The input is symmetrized to (H + H+) / 2 before the solve so that
    round-off dust off the Hermitian axis cannot leak into the result, but
    only after its defect has been checked against ``hermiticity_tol``.

    Raises:
        NotHermitianError: if max |H - H+| exceeds ``hermiticity_tol``.
    """
    m = _as_square_matrix(matrix)
    defect = float(np.abs(m - m.conj().T).max())
    if defect > hermiticity_tol:
        raise NotHermitianError(
            f"matrix is not Hermitian: defect {defect:.3e} exceeds {hermiticity_tol:.3e}"
        )
    eigenvalues, eigenvectors = np.linalg.eigh((m + m.conj().T) / 2.0)
    return EigenDecomposition(eigenvalues, eigenvectors)


def trace_norm(matrix: np.ndarray) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix.

    For Hermitian H this equals the sum of singular values, so it is the
    Schatten 1-norm restricted to the inputs this package produces.
    """
    return float(np.abs(eig_hermitian(matrix).eigenvalues).sum())


def positive_part_trace(matrix: np.ndarray) -> float:
    """Sum of the strictly positive eigenvalues of a Hermitian matrix.

    Identity worth remembering: for any Hermitian H,
    positive_part_trace(H) == (trace(H) + trace_norm(H)) / 2.
    """
    w = eig_hermitian(matrix).eigenvalues
    return float(w[w > 0.0].sum())


def pinv_sqrt(matrix: np.ndarray, rank_tol: float | None = None) -> np.ndarray:
    """Pseudo-inverse square root M^(-1/2) of a positive semidefinite matrix.

    Eigenvalues at or below the rank cutoff are treated as zeros and excluded,
    so the result acts as the inverse square root on the support of M and as
    zero on its kernel. The default cutoff is relative:
    ``RELATIVE_RANK_CUTOFF`` times the largest eigenvalue.

    Raises:
        NotHermitianError: if the input is not Hermitian.
        NotPsdError: if an eigenvalue lies below minus the cutoff.
    """
    dec = eig_hermitian(matrix)
    w, v = dec.eigenvalues, dec.eigenvectors
    if rank_tol is None:
        cutoff = RELATIVE_RANK_CUTOFF * max(float(w[-1]), 0.0)
    else:
        cutoff = float(rank_tol)
    if float(w[0]) < -cutoff:
        raise NotPsdError(
            f"matrix is not positive semidefinite: eigenvalue {w[0]:.3e} below {-cutoff:.3e}"
        )
    keep = w > cutoff
    if not np.any(keep):
        return np.zeros_like(v)
    vk = v[:, keep]
    out = (vk / np.sqrt(w[keep])) @ vk.conj().T
    return (out + out.conj().T) / 2.0
