"""Feasibility of rank triples and witness states realizing them.

A rank triple ``(d1, d2, d3)`` collects the ranks of the two marginals and
of the composite state.  It is realizable iff the cyclic inequalities

    d1 <= d2*d3,   d2 <= d3*d1,   d3 <= d1*d2

hold; realizable by a correlated state iff additionally ``d1, d2 >= 2``; and
realizable by a product state iff ``d3 == d1*d2``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .bipartite import (
    DEFAULT_PROD_TOL,
    BipartiteDims,
    DensityOperator,
    RankTriple,
    is_uncorrelated,
    rank_triple,
    swap_subsystems,
)
from .errors import (
    AmplitudeError,
    ConstructionError,
    DomainError,
    InfeasibleError,
    OrderingError,
    ShapeError,
)
from .linalg import DEFAULT_RANK_TOL, random_unitary

VIOLATES_INEQ_1 = "VIOLATES_INEQ_1"  # d1 > d2*d3
VIOLATES_INEQ_2 = "VIOLATES_INEQ_2"  # d2 > d3*d1
VIOLATES_INEQ_3 = "VIOLATES_INEQ_3"  # d3 > d1*d2
LOWER_BOUND_FAIL = "LOWER_BOUND_FAIL"
PRODUCT_MATCH = "PRODUCT_MATCH"
PRODUCT_MISMATCH = "PRODUCT_MISMATCH"
ONE_INFINITE = "ONE_INFINITE"

INF = math.inf
ExtendedDim = Union[int, float]

MAX_CORRELATION_RETRIES = 8
WEIGHT_TOL = 1e-12


class Kind(enum.Enum):
    ANY = "any"
    CORRELATED = "correlated"
    UNCORRELATED = "uncorrelated"


@dataclass(frozen=True)
class TripleClass:
    exists: bool
    correlated_exists: bool
    uncorrelated_exists: bool
    reasons: tuple[str, ...] = field(default_factory=tuple)

    def allows(self, kind: Kind) -> bool:
        if kind is Kind.CORRELATED:
            return self.correlated_exists
        if kind is Kind.UNCORRELATED:
            return self.uncorrelated_exists
        return self.exists

    def reasons_against(self, kind: Kind) -> list[str]:
        ineq = [r for r in self.reasons if r.startswith("VIOLATES_INEQ")]
        if kind is Kind.CORRELATED:
            return ineq + [r for r in self.reasons if r == LOWER_BOUND_FAIL]
        if kind is Kind.UNCORRELATED:
            return [r for r in self.reasons if r == PRODUCT_MISMATCH]
        return ineq


@dataclass(frozen=True)
class ExtendedVerdict:
    exists: bool
    reasons: tuple[str, ...]


def _cyclic_violations(d1, d2, d3) -> list[str]:
    reasons = []
    if not d1 <= d2 * d3:
        reasons.append(VIOLATES_INEQ_1)
    if not d2 <= d3 * d1:
        reasons.append(VIOLATES_INEQ_2)
    if not d3 <= d1 * d2:
        reasons.append(VIOLATES_INEQ_3)
    return reasons


def classify_triple(d1: int, d2: int, d3: int) -> TripleClass:
    """Which kinds of states (any / correlated / uncorrelated) have ranks ``(d1, d2, d3)``."""
    for d in (d1, d2, d3):
        if isinstance(d, bool) or int(d) != d or d < 1:
            raise DomainError(f"dimensions must be natural numbers >= 1, got {(d1, d2, d3)}")
    reasons = _cyclic_violations(d1, d2, d3)
    exists = not reasons
    lower_ok = d1 >= 2 and d2 >= 2
    if not lower_ok:
        reasons.append(LOWER_BOUND_FAIL)
    product = d3 == d1 * d2
    reasons.append(PRODUCT_MATCH if product else PRODUCT_MISMATCH)
    return TripleClass(exists, exists and lower_ok, product, tuple(reasons))


def parse_extended_dim(token) -> ExtendedDim:
    """``"inf"`` (any case) or ``math.inf`` -> ``INF``; otherwise a natural >= 1."""
    if isinstance(token, str):
        t = token.strip().lower()
        if t in ("inf", "infinity", "∞"):
            return INF
        try:
            token = int(t)
        except ValueError:
            raise DomainError(f"not a dimension: {token!r}") from None
    if token == INF:
        return INF
    if isinstance(token, bool) or not float(token).is_integer() or token < 1:
        raise DomainError(f"finite dimensions must be naturals >= 1, got {token!r}")
    return int(token)


def classify_triple_extended(d1, d2, d3) -> ExtendedVerdict:
    """Cyclic inequalities over the naturals extended by ``INF``.

    Uses ``INF * x = INF`` for ``x >= 1``; ``x <= INF`` always; ``INF <= finite``
    never.  A triple with exactly one infinite entry is never feasible.
    """
    dims = [parse_extended_dim(d) for d in (d1, d2, d3)]
    # float inf already obeys the extended rules for products of values >= 1
    reasons = _cyclic_violations(*dims)
    if sum(d == INF for d in dims) == 1:
        reasons.append(ONE_INFINITE)
    return ExtendedVerdict(not reasons, tuple(reasons))


def check_weights(weights, length: int, name: str = "weights") -> np.ndarray:
    w = np.asarray(weights, dtype=float).reshape(-1)
    if w.size != length:
        raise ShapeError(f"{name} has length {w.size}, expected {length}")
    if not np.all(w > 0):
        raise DomainError(f"{name} must be strictly positive")
    if abs(w.sum() - 1.0) > WEIGHT_TOL:
        raise DomainError(f"{name} sum to {w.sum():.17g}, not 1")
    return w


def default_weights(n: int) -> np.ndarray:
    """Strictly decreasing weights proportional to ``n, n-1, ..., 1``."""
    w = np.arange(n, 0, -1, dtype=float)
    return w / w.sum()


def product_mixture_pairs(d1: int, d2: int, d3: int) -> list[tuple[int, int]]:
    """Zero-based ``(i, j)`` label pairs used by :func:`construct_product_mixture`.

    Diagonal pairs first, then the remaining first-factor labels paired with
    ``j = 0``, then the earliest unused pairs in lexicographic order.
    """
    pairs = [(k, k) for k in range(d2)] + [(i, 0) for i in range(d2, d1)]
    used = set(pairs)
    rest = (p for p in ((i, j) for i in range(d1) for j in range(d2)) if p not in used)
    pairs.extend(p for _, p in zip(range(d3 - d1), rest))
    return pairs


def construct_product_mixture(d1: int, d2: int, d3: int, weights=None) -> DensityOperator:
    """Mixture of ``d3`` orthogonal product basis projectors ``|i><i| (x) |j><j|``.

    Requires ``d2 <= d1 <= d3 <= d1*d2``.
    """
    if not (1 <= d2 <= d1 <= d3 <= d1 * d2):
        raise OrderingError(f"need d2 <= d1 <= d3 <= d1*d2, got {(d1, d2, d3)}")
    w = default_weights(d3) if weights is None else check_weights(weights, d3)
    dims = BipartiteDims(d1, d2)
    diag = np.zeros(dims.total)
    for wn, (i, j) in zip(w, product_mixture_pairs(d1, d2, d3)):
        diag[i * d2 + j] = wn
    return DensityOperator(dims, np.diag(diag).astype(np.complex128))


def block_sizes(d1: int, d3: int) -> list[int]:
    """Split ``d1`` labels into ``d3`` consecutive blocks, larger blocks first."""
    q, r = divmod(d1, d3)
    return [q + 1] * r + [q] * (d3 - r)


def subbasis_amplitudes(sizes: Sequence[int], amplitude_seed: int | None) -> list[np.ndarray]:
    """Per-block amplitudes, each block normalized to unit norm.

    With a seed, moduli are drawn from ``[0.3, 1]`` and phases uniformly;
    ``None`` gives equal real amplitudes.
    """
    rng = None if amplitude_seed is None else np.random.default_rng(amplitude_seed)
    out = []
    for size in sizes:
        if rng is None:
            a = np.ones(size, dtype=np.complex128)
        else:
            a = rng.uniform(0.3, 1.0, size) * np.exp(2j * np.pi * rng.uniform(size=size))
        if np.any(a == 0):
            raise AmplitudeError("zero amplitude drawn")
        out.append(a / np.linalg.norm(a))
    return out


def construct_subbasis_mixture(d1: int, d2: int, d3: int, spectrum=None,
                               amplitude_seed: int | None = 0) -> DensityOperator:
    """Mixture of ``d3`` orthonormal vectors supported on disjoint first-factor blocks.

    The first-factor labels ``0..d1-1`` are cut into ``d3`` consecutive
    blocks.  Label ``i`` is paired with second-factor label ``i mod d2``, so
    the pairing counts upward across blocks and wraps around cyclically.
    Requires ``d2 <= d1``, ``d3 <= d1`` and ``d1 <= d2*d3``.
    """
    if not (1 <= d2 <= d1 and 1 <= d3 <= d1 <= d2 * d3):
        raise OrderingError(f"need d2 <= d1, d3 <= d1 <= d2*d3, got {(d1, d2, d3)}")
    r = default_weights(d3) if spectrum is None else check_weights(spectrum, d3, "spectrum")
    dims = BipartiteDims(d1, d2)
    sizes = block_sizes(d1, d3)
    amplitudes = subbasis_amplitudes(sizes, amplitude_seed)
    psis = np.zeros((d3, dims.total), dtype=np.complex128)
    start = 0
    for n, (size, alpha) in enumerate(zip(sizes, amplitudes)):
        for k in range(size):
            i = start + k
            psis[n, i * d2 + i % d2] = alpha[k]
        start += size
    m = (psis.T * r) @ psis.conj()
    return DensityOperator(dims, m)


def construct_uncorrelated(d1: int, d2: int, spectrumA=None, spectrumB=None) -> DensityOperator:
    """``diag(spectrumA) (x) diag(spectrumB)``."""
    if d1 < 1 or d2 < 1:
        raise DomainError(f"dimensions must be >= 1, got {(d1, d2)}")
    a = default_weights(d1) if spectrumA is None else check_weights(spectrumA, d1, "spectrumA")
    b = default_weights(d2) if spectrumB is None else check_weights(spectrumB, d2, "spectrumB")
    return DensityOperator(BipartiteDims(d1, d2), np.diag(np.kron(a, b)).astype(np.complex128))


def _perturb(w: np.ndarray, seed: int) -> np.ndarray:
    draw = np.random.default_rng(seed).uniform(0.5, 1.5, w.size)
    w = 0.9 * w + 0.1 * draw / draw.sum()
    return w / w.sum()


def _build(d1: int, d2: int, d3: int, weights: np.ndarray, seed: int) -> DensityOperator:
    if d3 >= max(d1, d2):
        if d1 < d2:
            return swap_subsystems(construct_product_mixture(d2, d1, d3, weights))
        return construct_product_mixture(d1, d2, d3, weights)
    if d1 < d2:
        return swap_subsystems(construct_subbasis_mixture(d2, d1, d3, weights, seed))
    return construct_subbasis_mixture(d1, d2, d3, weights, seed)


def construct_witness(d1: int, d2: int, d3: int, kind: Kind | str = Kind.ANY, seed: int = 0,
                      rank_tol: float = DEFAULT_RANK_TOL,
                      prod_tol: float = DEFAULT_PROD_TOL) -> DensityOperator:
    """A state on ``C^d1 (x) C^d2`` with rank triple ``(d1, d2, d3)`` of the requested kind.

    Raises :class:`InfeasibleError` when no such state exists.
    """
    kind = Kind(kind) if not isinstance(kind, Kind) else kind
    cls = classify_triple(d1, d2, d3)
    if not cls.allows(kind):
        raise InfeasibleError((d1, d2, d3), kind.value, cls.reasons_against(kind))
    target = RankTriple(d1, d2, d3)

    if kind is Kind.UNCORRELATED:
        rho = construct_uncorrelated(d1, d2)
        if rank_triple(rho, rank_tol) != target:
            raise ConstructionError(f"product witness has ranks {rank_triple(rho, rank_tol)}")
        return rho

    weights = default_weights(d3)
    for attempt in range(MAX_CORRELATION_RETRIES + 1):
        rho = _build(d1, d2, d3, weights, seed)
        got = rank_triple(rho, rank_tol)
        if got != target:
            raise ConstructionError(f"witness for {tuple(target)} has ranks {tuple(got)}")
        if kind is not Kind.CORRELATED or not is_uncorrelated(rho, prod_tol).uncorrelated:
            return rho
        weights = _perturb(weights, seed + attempt + 1)
    raise ConstructionError(
        f"no correlated witness for {tuple(target)} after {MAX_CORRELATION_RETRIES} retries"
    )


def sample_random_state(dims: BipartiteDims, mix_rank: int, seed) -> DensityOperator:
    """Wishart-type random state ``G G^dagger / tr(G G^dagger)`` with ``G`` of width ``mix_rank``."""
    if not 1 <= mix_rank <= dims.total:
        raise DomainError(f"mix_rank {mix_rank} outside [1, {dims.total}]")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dims.total, mix_rank)) + 1j * rng.standard_normal((dims.total, mix_rank))
    m = g @ g.conj().T
    m = (m + m.conj().T) / 2
    return DensityOperator(dims, m / np.trace(m).real)


def scramble_local(rho3: DensityOperator, seed: int) -> DensityOperator:
    """Conjugate by ``U1 (x) U2`` with seeded local unitaries; ``seed == 0`` is the identity."""
    if seed == 0:
        return rho3
    u = np.kron(random_unitary(rho3.dims.dimA, (seed, 1)), random_unitary(rho3.dims.dimB, (seed, 2)))
    m = u @ rho3.matrix @ u.conj().T
    return DensityOperator(rho3.dims, (m + m.conj().T) / 2)
