"""Seeded Monte Carlo experiments for the two limit theorems.

Reproducibility contract: repetition i draws from
``numpy.random.PCG64(SeedSequence(entropy=seed, spawn_key=(i,)))`` and
outcomes come from one uniform per symbol with fixed thresholds
(p, p+q1) mapping to (success, type-I failure, type-II failure).
Results are collected by repetition index, so they are bit-identical
for any worker count.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterator, Optional

import numpy as np

from .analytic import alpha_correction, m_of_n, window_probability
from .model import TrialDistribution, ValidationError
from .scan import ChunkScanner

RNG_SCHEME_ID = "pcg64-seedseq-spawnkey-invcdf-v1"
HITTING_SAFETY_CAP = 10 ** 9
_CHUNK = 1 << 20


def repetition_rng(seed: int, rep: int) -> np.random.Generator:
    """The documented per-repetition generator derivation."""
    return np.random.Generator(
        np.random.PCG64(np.random.SeedSequence(entropy=seed, spawn_key=(rep,)))
    )


def _draw_chunk(rng: np.random.Generator, dist_floats, n: int) -> np.ndarray:
    p, q1, _ = dist_floats
    u = rng.random(n)
    return ((u >= p).view(np.uint8) + (u >= p + q1).view(np.uint8))


def outcome_chunks(dist: TrialDistribution, rng: np.random.Generator,
                   total: int, chunk_size: int = _CHUNK) -> Iterator[np.ndarray]:
    """Pull-based source of `total` i.i.d. outcomes in uint8 chunks."""
    floats = dist.as_floats()
    remaining = total
    while remaining > 0:
        n = min(chunk_size, remaining)
        yield _draw_chunk(rng, floats, n)
        remaining -= n


def simulate_sequence(dist: TrialDistribution, N: int, stream_seed: int) -> np.ndarray:
    """Materialized sequence of N outcomes for the given stream seed."""
    rng = repetition_rng(stream_seed, 0)
    return np.concatenate(list(outcome_chunks(dist, rng, N)))


@dataclass(frozen=True)
class ExperimentConfig:
    dist: TrialDistribution
    N: int
    s: int
    seed: int
    mode: str  # 'longest' | 'hitting'
    m: Optional[int] = None

    def __post_init__(self):
        if self.mode not in ("longest", "hitting"):
            raise ValidationError(f"mode must be 'longest' or 'hitting', got {self.mode!r}")
        if self.N < 1 or self.s < 1:
            raise ValidationError(f"need N >= 1 and s >= 1, got N={self.N}, s={self.s}")
        if self.mode == "hitting" and (self.m is None or self.m < 1):
            raise ValidationError("hitting mode requires a window length m >= 1")


@dataclass(frozen=True)
class EmpiricalDistribution:
    """Weighted support points; support strictly increasing."""

    support: np.ndarray
    weights: np.ndarray
    total: int

    def __post_init__(self):
        if len(self.support) != len(self.weights):
            raise ValidationError("support and weights must have equal length")
        if np.any(np.diff(self.support) <= 0):
            raise ValidationError("support must be strictly increasing")
        if int(self.weights.sum()) != self.total:
            raise ValidationError("weights must sum to total")

    @classmethod
    def from_samples(cls, values) -> "EmpiricalDistribution":
        values = np.asarray(values)
        support, counts = np.unique(values, return_counts=True)
        return cls(support=support, weights=counts.astype(np.int64), total=int(len(values)))

    def cdf(self, x: float) -> float:
        """Empirical P(value <= x)."""
        idx = np.searchsorted(self.support, x, side="right")
        return float(self.weights[:idx].sum()) / self.total

    def cumulative(self) -> np.ndarray:
        return np.cumsum(self.weights) / self.total


@dataclass(frozen=True)
class ExperimentResult:
    config: ExperimentConfig
    empirical: EmpiricalDistribution
    excluded: int = 0  # hitting repetitions that hit the safety cap


def _map_reps(fn: Callable[[int], float], s: int, workers: int) -> list:
    if workers <= 1:
        return [fn(i) for i in range(s)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(s), chunksize=max(1, s // (8 * workers))))


def run_longest_experiment(cfg: ExperimentConfig, workers: int = 1) -> ExperimentResult:
    """Empirical law of mu(N) - [m(N)] over s fused simulate+scan runs."""
    if cfg.mode != "longest":
        raise ValidationError("config mode must be 'longest'")
    center = m_of_n(cfg.dist, cfg.N).integer_part

    def one(rep: int) -> int:
        rng = repetition_rng(cfg.seed, rep)
        scanner = ChunkScanner()
        for chunk in outcome_chunks(cfg.dist, rng, cfg.N):
            scanner.push(chunk)
        return scanner.best - center

    offsets = _map_reps(one, cfg.s, workers)
    return ExperimentResult(config=cfg,
                            empirical=EmpiricalDistribution.from_samples(offsets))


def run_hitting_experiment(cfg: ExperimentConfig, workers: int = 1) -> ExperimentResult:
    """Empirical law of tau_m * alpha * P(A1) over s unbounded-horizon runs."""
    if cfg.mode != "hitting":
        raise ValidationError("config mode must be 'hitting'")
    m = cfg.m
    scale = float(alpha_correction(cfg.dist, m).alpha) * float(window_probability(cfg.dist, m))
    # expected tau is 1/scale; chunk a few multiples at a time
    chunk_size = int(min(_CHUNK, max(4 * m, 2.0 / scale)))
    floats = cfg.dist.as_floats()

    def one(rep: int) -> float:
        rng = repetition_rng(cfg.seed, rep)
        scanner = ChunkScanner()
        while scanner.position < HITTING_SAFETY_CAP:
            n = min(chunk_size, HITTING_SAFETY_CAP - scanner.position)
            hit = scanner.push_until_hit(_draw_chunk(rng, floats, n), m)
            if hit is not None:
                return hit * scale
        return math.nan  # capped; excluded from the empirical law

    scaled = np.asarray(_map_reps(one, cfg.s, workers))
    capped = int(np.isnan(scaled).sum())
    return ExperimentResult(
        config=cfg,
        empirical=EmpiricalDistribution.from_samples(scaled[~np.isnan(scaled)]),
        excluded=capped,
    )


def sup_distance(empirical: EmpiricalDistribution,
                 reference_cdf) -> float:
    """Kolmogorov-Smirnov statistic against a fixed reference CDF.

    The reference is either a callable, treated as a continuous CDF and
    compared against both the ECDF value and its left limit at every
    support point, or another EmpiricalDistribution, in which case both
    step functions are compared on the union of their supports (so a
    distribution against itself gives exactly 0).
    """
    if empirical.total == 0:
        raise ValidationError("empirical distribution must be non-empty")
    if isinstance(reference_cdf, EmpiricalDistribution):
        return sup_distance_step(empirical, reference_cdf)
    cum = empirical.cumulative()
    left = np.concatenate(([0.0], cum[:-1]))
    ref = np.array([reference_cdf(float(x)) for x in empirical.support])
    return float(np.max(np.maximum(np.abs(cum - ref), np.abs(left - ref))))


def sup_distance_step(a: EmpiricalDistribution, b: EmpiricalDistribution) -> float:
    """Sup distance between two empirical (right-continuous step) CDFs.

    Attained at a jump point of either, so evaluated on the union of
    supports; identical distributions give exactly 0.
    """
    grid = np.union1d(a.support, b.support)
    return float(max(abs(a.cdf(float(x)) - b.cdf(float(x))) for x in grid))


def sup_distance_lattice(empirical: EmpiricalDistribution,
                         reference_cdf_below: Callable[[int], float]) -> float:
    """Sup distance for integer-valued samples against a lattice law.

    Both step functions jump only at integers, so the supremum over the
    real line is attained on the grid: max over integer k of
    |empirical P(value < k) - reference P(value < k)|.
    """
    if empirical.total == 0:
        raise ValidationError("empirical distribution must be non-empty")
    lo = int(empirical.support.min())
    hi = int(empirical.support.max()) + 1
    best = 0.0
    for k in range(lo, hi + 1):
        emp_below = empirical.cdf(k - 1)  # P(value <= k-1) = P(value < k)
        best = max(best, abs(emp_below - reference_cdf_below(k)))
    return best
