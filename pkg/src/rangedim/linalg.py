"""Dense complex matrix primitives.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  Composite
indices are subsystem-1-major everywhere: the basis vector ``|i>|j>`` of a
``dA x dB`` space sits at position ``i * dB + j``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import NegativityError, ShapeError, SizingError, SymmetryError

MAX_MATRIX_DIM = 4096
DEFAULT_RANK_TOL = 1e-9
HERMITIAN_TOL = 1e-10


def as_matrix(a) -> np.ndarray:
    """Coerce ``a`` to a finite 2-D complex array."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise ShapeError(f"expected a 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def tensor_product(a, b, max_dim: int = MAX_MATRIX_DIM) -> np.ndarray:
    """Kronecker product, subsystem-1-major.

    Entry ``[i_a * b.rows + i_b, k_a * b.cols + k_b]`` equals ``a[i_a, k_a] * b[i_b, k_b]``.
    """
    a = as_matrix(a)
    b = as_matrix(b)
    rows = a.shape[0] * b.shape[0]
    cols = a.shape[1] * b.shape[1]
    if rows > max_dim or cols > max_dim:
        raise SizingError(f"product of size {rows}x{cols} exceeds {max_dim}x{max_dim}")
    return np.kron(a, b)


def hermiticity_defect(h: np.ndarray) -> float:
    return float(np.max(np.abs(h - h.conj().T))) if h.size else 0.0


def _check_hermitian(h, tol: float = HERMITIAN_TOL) -> np.ndarray:
    h = as_matrix(h)
    if h.shape[0] != h.shape[1]:
        raise ShapeError(f"expected a square matrix, got {h.shape}")
    defect = hermiticity_defect(h)
    if defect > tol:
        raise SymmetryError(f"max |h - h^dagger| = {defect:.3e} exceeds {tol:.0e}")
    return h


@dataclass(frozen=True)
class EigenSystem:
    """Eigenvalues in ascending order with matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def hermitian_eigensystem(h) -> EigenSystem:
    """Eigendecomposition of a Hermitian matrix.

    Deterministic for bit-identical input; degenerate eigenvectors come back in
    whatever (reproducible) basis LAPACK picks.
    """
    h = _check_hermitian(h)
    w, v = np.linalg.eigh(h)
    return EigenSystem(eigenvalues=w, eigenvectors=v)


def rank_cutoff(largest: float, rank_tol: float) -> float:
    return rank_tol * max(1.0, largest)


def rank_from_eigenvalues(w: np.ndarray, rank_tol: float = DEFAULT_RANK_TOL) -> int:
    """Count eigenvalues above ``rank_tol * max(1, max(w))``; reject negative ones."""
    if w.size == 0:
        return 0
    cutoff = rank_cutoff(float(np.max(w)), rank_tol)
    lowest = float(np.min(w))
    if lowest < -cutoff:
        raise NegativityError(f"eigenvalue {lowest:.3e} below -{cutoff:.0e}")
    return int(np.count_nonzero(w > cutoff))


def numerical_rank(h, rank_tol: float = DEFAULT_RANK_TOL) -> int:
    """Numerical rank of a Hermitian positive semidefinite matrix."""
    h = _check_hermitian(h)
    return rank_from_eigenvalues(np.linalg.eigvalsh(h), rank_tol)


def frobenius_distance(a, b) -> float:
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise ShapeError(f"shape mismatch {a.shape} vs {b.shape}")
    return float(np.sqrt(np.sum(np.abs(a - b) ** 2)))


def random_unitary(dim: int, seed: int | Sequence[int], max_dim: int = MAX_MATRIX_DIM) -> np.ndarray:
    """Haar-distributed unitary from the QR factorization of a seeded Ginibre matrix.

    ``seed`` is anything ``numpy.random.default_rng`` accepts as entropy
    (a non-negative int or a sequence of them).
    """
    if dim < 1 or dim > max_dim:
        raise SizingError(f"unitary dimension {dim} outside [1, {max_dim}]")
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    # fix the column phases so the distribution is Haar and the output unique
    d = np.diagonal(r)
    return q * (d / np.abs(d))
