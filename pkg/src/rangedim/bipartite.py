"""Bipartite density operators, partial traces and rank triples."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import NormalizationError, ShapeError, SizingError, ValidationError
from .linalg import (
    DEFAULT_RANK_TOL,
    MAX_MATRIX_DIM,
    frobenius_distance,
    hermiticity_defect,
    numerical_rank,
    rank_cutoff,
    tensor_product,
)

DEFAULT_PROD_TOL = 1e-8
# residuals between the product threshold and this are reported as ambiguous
AMBIGUOUS_UPPER = 1e-6
STATE_TOL = 1e-10


@dataclass(frozen=True)
class BipartiteDims:
    dimA: int
    dimB: int

    def __post_init__(self):
        if self.dimA < 1 or self.dimB < 1:
            raise SizingError(f"factor dimensions must be >= 1, got ({self.dimA}, {self.dimB})")
        if self.dimA * self.dimB > MAX_MATRIX_DIM:
            raise SizingError(
                f"composite dimension {self.dimA * self.dimB} exceeds {MAX_MATRIX_DIM}"
            )

    @property
    def total(self) -> int:
        return self.dimA * self.dimB

    def swapped(self) -> BipartiteDims:
        return BipartiteDims(self.dimB, self.dimA)


@dataclass(frozen=True)
class DensityOperator:
    """A validated state on ``C^dimA (x) C^dimB``.

    The matrix is copied and frozen on construction.  Validation raises
    :class:`ValidationError` naming the first violated invariant.
    """

    dims: BipartiteDims
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.complex128)
        n = self.dims.total
        if m.shape != (n, n):
            raise ValidationError("shape", f"expected {n}x{n} for dims {self.dims}, got {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValidationError("finite", "matrix has NaN or infinite entries")
        defect = hermiticity_defect(m)
        if defect > STATE_TOL:
            raise ValidationError("hermitian", f"max |m - m^dagger| = {defect:.3e}")
        tr = np.trace(m)
        if abs(tr - 1.0) > STATE_TOL:
            raise ValidationError("trace", f"trace = {tr.real:.17g}{tr.imag:+.3e}j")
        lowest = float(np.linalg.eigvalsh(m)[0])
        if lowest < -STATE_TOL:
            raise ValidationError("psd", f"minimum eigenvalue {lowest:.3e}")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_vector(cls, psi, dims: BipartiteDims) -> DensityOperator:
        psi = np.asarray(psi, dtype=np.complex128).reshape(-1)
        return cls(dims, np.outer(psi, psi.conj()))

    def tensor_blocks(self) -> np.ndarray:
        """View the matrix as ``t[i, j, i', j']``."""
        dA, dB = self.dims.dimA, self.dims.dimB
        return self.matrix.reshape(dA, dB, dA, dB)


class RankTriple(NamedTuple):
    d1: int
    d2: int
    d3: int


class CorrelationVerdict(NamedTuple):
    uncorrelated: bool
    residual: float
    ambiguous: bool


def partial_trace_over_2(rho3: DensityOperator) -> np.ndarray:
    """Reduced operator of subsystem 1: ``[i, i'] = sum_j rho[(i,j), (i',j)]``."""
    return np.einsum("ijkj->ik", rho3.tensor_blocks())


def partial_trace_over_1(rho3: DensityOperator) -> np.ndarray:
    """Reduced operator of subsystem 2: ``[j, j'] = sum_i rho[(i,j), (i,j')]``."""
    return np.einsum("ijil->jl", rho3.tensor_blocks())


def rank_triple(rho3: DensityOperator, rank_tol: float = DEFAULT_RANK_TOL) -> RankTriple:
    return RankTriple(
        numerical_rank(partial_trace_over_2(rho3), rank_tol),
        numerical_rank(partial_trace_over_1(rho3), rank_tol),
        numerical_rank(rho3.matrix, rank_tol),
    )


def coefficient_matrix(psi, dims: BipartiteDims) -> np.ndarray:
    psi = np.asarray(psi, dtype=np.complex128).reshape(-1)
    if psi.size != dims.total:
        raise ShapeError(f"vector of length {psi.size} does not fit dims {dims}")
    return psi.reshape(dims.dimA, dims.dimB)


def schmidt_coefficients(psi, dims: BipartiteDims) -> np.ndarray:
    """Singular values of the ``dimA x dimB`` coefficient matrix, descending."""
    return np.linalg.svd(coefficient_matrix(psi, dims), compute_uv=False)


def schmidt_rank(psi, dims: BipartiteDims, rank_tol: float = DEFAULT_RANK_TOL) -> int:
    psi = np.asarray(psi, dtype=np.complex128).reshape(-1)
    norm = float(np.linalg.norm(psi))
    if abs(norm - 1.0) > STATE_TOL:
        raise NormalizationError(f"state vector has norm {norm:.17g}")
    s = schmidt_coefficients(psi, dims)
    return int(np.count_nonzero(s > rank_cutoff(float(s[0]), rank_tol)))


def product_residual(rho3: DensityOperator) -> float:
    """Frobenius distance from ``rho3`` to the product of its own marginals."""
    product = tensor_product(partial_trace_over_2(rho3), partial_trace_over_1(rho3))
    return frobenius_distance(rho3.matrix, product)


def is_uncorrelated(rho3: DensityOperator, prod_tol: float = DEFAULT_PROD_TOL) -> CorrelationVerdict:
    """Exact product-form test ``rho3 == rho1 (x) rho2`` up to ``prod_tol`` (Frobenius).

    The verdict is flagged ambiguous when the residual falls between
    ``prod_tol`` and ``1e-6``.
    """
    residual = product_residual(rho3)
    return CorrelationVerdict(
        residual < prod_tol, residual, prod_tol <= residual < AMBIGUOUS_UPPER
    )


def swap_subsystems(rho3: DensityOperator) -> DensityOperator:
    """Exchange the two factors: composite index ``i*dB + j`` moves to ``j*dA + i``."""
    dims = rho3.dims.swapped()
    m = rho3.tensor_blocks().transpose(1, 0, 3, 2).reshape(dims.total, dims.total)
    return DensityOperator(dims, m)


def basis_ket(i: int, j: int, dims: BipartiteDims) -> np.ndarray:
    psi = np.zeros(dims.total, dtype=np.complex128)
    psi[i * dims.dimB + j] = 1.0
    return psi


def bell_state() -> DensityOperator:
    """``|Phi+><Phi+|`` with ``|Phi+> = (|00> + |11>)/sqrt(2)``."""
    dims = BipartiteDims(2, 2)
    psi = (basis_ket(0, 0, dims) + basis_ket(1, 1, dims)) / np.sqrt(2.0)
    return DensityOperator.from_vector(psi, dims)


def product_state(rho1, rho2) -> DensityOperator:
    rho1 = np.asarray(rho1, dtype=np.complex128)
    rho2 = np.asarray(rho2, dtype=np.complex128)
    dims = BipartiteDims(rho1.shape[0], rho2.shape[0])
    return DensityOperator(dims, tensor_product(rho1, rho2))


def purity(rho3: DensityOperator) -> float:
    """``trace(rho^2)``."""
    return float(np.real(np.vdot(rho3.matrix, rho3.matrix)))
