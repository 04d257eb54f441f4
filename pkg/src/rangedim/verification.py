"""Numerical checks of the rank-triple theorem on concrete states."""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import NamedTuple

import numpy as np

from .bipartite import (
    AMBIGUOUS_UPPER,
    DEFAULT_PROD_TOL,
    BipartiteDims,
    DensityOperator,
    RankTriple,
    is_uncorrelated,
    partial_trace_over_1,
    partial_trace_over_2,
    purity,
    rank_triple,
    schmidt_rank,
)
from .constructions import (
    Kind,
    classify_triple,
    construct_witness,
    sample_random_state,
    scramble_local,
)
from .errors import InfeasibleError, NegativityError, RangeDimError, SizingError
from .linalg import DEFAULT_RANK_TOL, MAX_MATRIX_DIM, hermitian_eigensystem

SPAN_TOL = 1e-8


class EigenRecord(NamedTuple):
    r: float
    schmidt1: int
    schmidt2: int


@dataclass(frozen=True)
class NecessityReport:
    eigen_count: int
    per_eigenvector: tuple[EigenRecord, ...]
    d1: int
    d2: int
    schmidt_equal: bool
    bounds_ok_1: bool
    bounds_ok_2: bool
    span_ok: bool
    span_residual_1: float
    span_residual_2: float

    @property
    def all_ok(self) -> bool:
        return self.schmidt_equal and self.bounds_ok_1 and self.bounds_ok_2 and self.span_ok

    def to_dict(self) -> dict:
        d = asdict(self)
        d["per_eigenvector"] = [rec._asdict() for rec in self.per_eigenvector]
        d["all_ok"] = self.all_ok
        return d


def _batched_ranks(mats: np.ndarray, rank_tol: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Eigendecompose a stack of PSD matrices; return ranks, eigenvalues, eigenvectors."""
    w, v = np.linalg.eigh(mats)
    cut = rank_tol * np.maximum(1.0, w[:, -1])
    if np.any(w[:, 0] < -cut):
        raise NegativityError("reduced operator of an eigenvector is not PSD")
    return np.count_nonzero(w > cut[:, None], axis=1), w, v


def _projector(vectors: np.ndarray) -> np.ndarray:
    return vectors @ vectors.conj().T


def _span_projector(v: np.ndarray, ranks: np.ndarray, dim: int) -> np.ndarray:
    # eigh sorts ascending, so the supporting eigenvectors are the last `rank` columns
    cols = [v[n][:, dim - k:] for n, k in enumerate(ranks)]
    stacked = np.concatenate(cols, axis=1)
    u, s, _ = np.linalg.svd(stacked, full_matrices=False)
    k = int(np.count_nonzero(s > SPAN_TOL * s[0])) if s.size else 0
    return _projector(u[:, :k])


def _range_projector(h: np.ndarray, rank_tol: float) -> tuple[int, np.ndarray]:
    es = hermitian_eigensystem(h)
    cut = rank_tol * max(1.0, float(es.eigenvalues[-1]))
    keep = es.eigenvalues > cut
    return int(np.count_nonzero(keep)), _projector(es.eigenvectors[:, keep])


def verify_necessity_chain(rho3: DensityOperator, rank_tol: float = DEFAULT_RANK_TOL) -> NecessityReport:
    """Check the proof steps of the cyclic inequalities on one state.

    ``rho3`` is split into its eigenvectors; for each, the two reduced ranks
    must agree, each marginal rank must lie between the largest per-vector
    reduced rank and their sum, and the marginal's range must equal the span
    of the per-vector reduced supports.
    """
    dA, dB = rho3.dims.dimA, rho3.dims.dimB
    es = hermitian_eigensystem(rho3.matrix)
    cut = rank_tol * max(1.0, float(es.eigenvalues[-1]))
    keep = es.eigenvalues > cut
    r = es.eigenvalues[keep]
    coeffs = es.eigenvectors[:, keep].T.reshape(-1, dA, dB)

    red1 = coeffs @ coeffs.conj().transpose(0, 2, 1)
    red2 = coeffs.transpose(0, 2, 1) @ coeffs.conj()
    s1, _, v1 = _batched_ranks(red1, rank_tol)
    s2, _, v2 = _batched_ranks(red2, rank_tol)

    d1, p1 = _range_projector(partial_trace_over_2(rho3), rank_tol)
    d2, p2 = _range_projector(partial_trace_over_1(rho3), rank_tol)

    span1 = float(np.linalg.norm(_span_projector(v1, s1, dA) - p1))
    span2 = float(np.linalg.norm(_span_projector(v2, s2, dB) - p2))
    records = tuple(EigenRecord(float(rn), int(a), int(b)) for rn, a, b in zip(r, s1, s2))
    return NecessityReport(
        eigen_count=len(records),
        per_eigenvector=records,
        d1=d1,
        d2=d2,
        schmidt_equal=bool(np.all(s1 == s2)),
        bounds_ok_1=bool(np.all(s1 <= d1) and d1 <= s1.sum()),
        bounds_ok_2=bool(np.all(s2 <= d2) and d2 <= s2.sum()),
        span_ok=span1 < SPAN_TOL and span2 < SPAN_TOL,
        span_residual_1=span1,
        span_residual_2=span2,
    )


@dataclass(frozen=True)
class AnalysisReport:
    ranks: RankTriple
    purity: float
    uncorrelated: bool
    residual: float
    ambiguous: bool
    necessity: NecessityReport

    @property
    def correlated(self) -> bool:
        return not self.uncorrelated

    def to_dict(self) -> dict:
        return {
            "ranks": list(self.ranks),
            "purity": self.purity,
            "correlated": self.correlated,
            "uncorrelated": self.uncorrelated,
            "residual": self.residual,
            "ambiguous": self.ambiguous,
            "product_rank": self.ranks.d3 == self.ranks.d1 * self.ranks.d2,
            "necessity": self.necessity.to_dict(),
        }


def analyze_state(rho3: DensityOperator, rank_tol: float = DEFAULT_RANK_TOL,
                  prod_tol: float = DEFAULT_PROD_TOL) -> AnalysisReport:
    verdict = is_uncorrelated(rho3, prod_tol)
    return AnalysisReport(
        ranks=rank_triple(rho3, rank_tol),
        purity=purity(rho3),
        uncorrelated=verdict.uncorrelated,
        residual=verdict.residual,
        ambiguous=verdict.ambiguous,
        necessity=verify_necessity_chain(rho3, rank_tol),
    )


# ---------------------------------------------------------------------------
# sweep


class Failure(NamedTuple):
    triple: tuple[int, int, int]
    stage: str
    detail: str


@dataclass
class SweepReport:
    max_dim: int
    triples_checked: int = 0
    feasible_count: int = 0
    correlated_count: int = 0
    uncorrelated_count: int = 0
    samples_checked: int = 0
    failures: list[Failure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        d = asdict(self)
        d["failures"] = [
            {"triple": list(f.triple), "stage": f.stage, "detail": f.detail} for f in self.failures
        ]
        return d


def derive_seed(*parts: int) -> int:
    """Stable 32-bit seed from non-negative integers."""
    return int(np.random.SeedSequence(list(parts)).generate_state(1)[0])


def check_state_claims(rho3: DensityOperator, rank_tol: float, prod_tol: float,
                       ranks: RankTriple | None = None) -> list[tuple[str, str]]:
    """Claims every state must satisfy; returns ``(stage, detail)`` for each violation."""
    problems = []
    if ranks is None:
        ranks = rank_triple(rho3, rank_tol)
    if not classify_triple(*ranks).exists:
        problems.append(("cyclic", f"ranks {tuple(ranks)} violate the cyclic inequalities"))
    verdict = is_uncorrelated(rho3, prod_tol)
    if verdict.uncorrelated and ranks.d3 != ranks.d1 * ranks.d2:
        problems.append(("product-rank", f"uncorrelated but d3={ranks.d3} != d1*d2"))
    if min(ranks.d1, ranks.d2) == 1 and not verdict.uncorrelated:
        problems.append(("lemma", f"marginal rank 1 but residual {verdict.residual:.3e}"))
    if ranks.d3 == 1:
        psi = hermitian_eigensystem(rho3.matrix).eigenvectors[:, -1]
        k = schmidt_rank(psi, rho3.dims, rank_tol)
        if not ranks.d1 == ranks.d2 == k:
            problems.append(("pure-rank", f"pure state ranks {tuple(ranks)}, schmidt rank {k}"))
    nec = verify_necessity_chain(rho3, rank_tol)
    if not nec.all_ok:
        problems.append(("necessity", repr(nec)))
    return problems


class TripleTally(NamedTuple):
    exists: bool
    correlated: bool
    uncorrelated: bool


def _check_triple(args) -> tuple[TripleTally, list[Failure]]:
    triple, seed, rank_tol, prod_tol = args
    d1, d2, d3 = triple
    cls = classify_triple(d1, d2, d3)
    failures = []
    tseed = derive_seed(seed, d1, d2, d3)
    for kind in Kind:
        try:
            rho = construct_witness(d1, d2, d3, kind, tseed, rank_tol, prod_tol)
        except InfeasibleError:
            if cls.allows(kind):
                failures.append(Failure(triple, f"construct-{kind.value}", "rejected a feasible request"))
            continue
        except RangeDimError as exc:
            failures.append(Failure(triple, f"construct-{kind.value}", f"{type(exc).__name__}: {exc}"))
            continue
        if not cls.allows(kind):
            failures.append(Failure(triple, f"construct-{kind.value}", "built an infeasible witness"))
            continue
        verdict = is_uncorrelated(rho, prod_tol)
        if kind is Kind.CORRELATED and verdict.residual <= AMBIGUOUS_UPPER:
            failures.append(Failure(triple, "correlated", f"residual {verdict.residual:.3e}"))
        if kind is Kind.UNCORRELATED and not verdict.uncorrelated:
            failures.append(Failure(triple, "uncorrelated", f"residual {verdict.residual:.3e}"))
        for stage, detail in check_state_claims(rho, rank_tol, prod_tol):
            failures.append(Failure(triple, f"witness-{kind.value}-{stage}", detail))

        scrambled = scramble_local(rho, tseed + 1)
        got = rank_triple(scrambled, rank_tol)
        if got != triple:
            failures.append(Failure(triple, f"scramble-{kind.value}", f"ranks became {tuple(got)}"))
        if is_uncorrelated(scrambled, prod_tol).uncorrelated != verdict.uncorrelated:
            failures.append(Failure(triple, f"scramble-{kind.value}", "correlation verdict changed"))
        for stage, detail in check_state_claims(scrambled, rank_tol, prod_tol):
            failures.append(Failure(triple, f"scramble-{kind.value}-{stage}", detail))
    return TripleTally(cls.exists, cls.correlated_exists, cls.uncorrelated_exists), failures


def _check_samples(args) -> tuple[int, list[Failure]]:
    (dA, dB, mix_rank), samples, seed, rank_tol, prod_tol = args
    dims = BipartiteDims(dA, dB)
    failures = []
    for k in range(samples):
        s = derive_seed(seed, dA, dB, mix_rank, k)
        rho = sample_random_state(dims, mix_rank, s)
        ranks = rank_triple(rho, rank_tol)
        where = f"ambient ({dA},{dB}) mix_rank {mix_rank} sample {k}"
        if ranks.d3 != mix_rank:
            failures.append(Failure(tuple(ranks), "sample-rank", f"{where}: d3 != mix_rank"))
        for stage, detail in check_state_claims(rho, rank_tol, prod_tol, ranks):
            failures.append(Failure(tuple(ranks), f"sample-{stage}", f"{where}: {detail}"))
    return samples, failures


def _run(fn, jobs, workers: int):
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, jobs, chunksize=4))
    return [fn(job) for job in jobs]


def sweep_theorem(max_dim: int, samples_per_config: int, seed: int = 0,
                  rank_tol: float = DEFAULT_RANK_TOL, prod_tol: float = DEFAULT_PROD_TOL,
                  workers: int = 1) -> SweepReport:
    """Reconcile classification, construction and random sampling on every small triple.

    Every triple in ``[1, max_dim]^3`` is classified and a witness of each kind
    requested; witnesses and their local scrambles are checked against every
    claim.  Then ``samples_per_config`` random states are drawn for each
    ambient ``(dA, dB)`` and mixing rank.  Failures are collected, never raised.
    """
    if max_dim < 1 or max_dim * max_dim > MAX_MATRIX_DIM:
        raise SizingError(f"max_dim {max_dim} needs composite dimension {max_dim ** 2} > {MAX_MATRIX_DIM}")
    rng = range(1, max_dim + 1)
    report = SweepReport(max_dim=max_dim)

    triple_jobs = [(t, seed, rank_tol, prod_tol) for t in itertools.product(rng, rng, rng)]
    for tally, failures in _run(_check_triple, triple_jobs, workers):
        report.triples_checked += 1
        report.feasible_count += tally.exists
        report.correlated_count += tally.correlated
        report.uncorrelated_count += tally.uncorrelated
        report.failures.extend(failures)

    configs = [(dA, dB, m) for dA in rng for dB in rng for m in range(1, dA * dB + 1)]
    sample_jobs = [(c, samples_per_config, seed, rank_tol, prod_tol) for c in configs]
    for n, failures in _run(_check_samples, sample_jobs, workers):
        report.samples_checked += n
        report.failures.extend(failures)

    report.failures.sort()
    return report
