"""
Monte Carlo risk of sieve estimators and log-log rate fits.

Replicate r at sample size n draws its sample from the stream
``replicate_rng(seed, n, r)``, so every loss is a pure function of
(estimator, truth, seed, n, r) and threads only change wall time. The
truth itself comes from ``replicate_rng(seed, TRUTH_STREAM)``, a stream the
pool sampler never touches.
"""

import logging
import math
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike
from scipy import stats

from sievelab.core.errors import ConfigurationError, DomainError, GenerationError, InputError
from sievelab.core.models import GridDensity, RiskRow, RiskSweepReport
from sievelab.core.protocols import TracedEstimator
from sievelab.engines.classes import ClassSpec, membership, sample_member
from sievelab.engines.divergences import hellinger, kl_divergence, l2_distance
from sievelab.engines.packing import CandidatePool
from sievelab.harness.sampling import replicate_rng, sample_iid

logger = logging.getLogger(__name__)

MIN_SWEEP_POINTS = 4
CONFIDENCE = 0.95
TRUTH_STREAM = 0  # single-key stream, disjoint from the (n, r) replicate streams
TRUTH_ATTEMPTS = 10


@dataclass(frozen=True)
class Losses:
    """Losses of one estimate against the truth."""

    l2_squared: float
    kl: float  # KL(truth || estimate); inf if the estimate vanishes where truth does not
    hellinger_squared: float


def estimate_losses(estimate: GridDensity, truth: GridDensity) -> Losses:
    """Squared L2, KL and squared Hellinger loss of ``estimate``."""
    try:
        kl = kl_divergence(truth, estimate)
    except DomainError:
        kl = math.inf
    return Losses(
        l2_squared=l2_distance(estimate, truth) ** 2,
        kl=kl,
        hellinger_squared=hellinger(estimate, truth) ** 2,
    )


def _require_member(spec: ClassSpec, f_true: GridDensity) -> None:
    report = membership(spec, f_true)
    if not report.is_member:
        raise InputError(
            f"True density is not a {spec.variant!r} member: violates {report.violated}"
        )


def draw_truth(spec: ClassSpec, pool: CandidatePool, seed: int) -> GridDensity:
    """
    A class member that is not in the pool.

    Raises:
        GenerationError: If every draw coincides with a pool member
    """
    rng = replicate_rng(seed, TRUTH_STREAM)
    for _ in range(TRUTH_ATTEMPTS):
        f_true = sample_member(spec, rng, m=pool.m)
        gap = float(pool.distances_to(f_true).min())
        if gap > 0.0:
            logger.info("drew %s truth at distance %.3g from the pool", spec.variant, gap)
            return f_true
    raise GenerationError(f"No off-pool {spec.variant!r} truth in {TRUTH_ATTEMPTS} draws")


def _replicate(
    estimator: TracedEstimator, f_true: GridDensity, n: int, seed: int, r: int
) -> tuple[Losses, int]:
    rng = replicate_rng(seed, n, r)
    samples = sample_iid(f_true, n, rng)
    estimate, trace = estimator.estimate(samples)
    return estimate_losses(estimate, f_true), trace.depth


def run_replicates(
    estimator: TracedEstimator,
    f_true: GridDensity,
    n: int,
    replicates: int,
    seed: int,
    threads: int = 1,
) -> list[tuple[Losses, int]]:
    """(losses, sieve depth) per replicate, in replicate order."""
    if replicates < 1:
        raise DomainError(f"replicates must be positive, got {replicates}")
    if threads <= 1:
        return [_replicate(estimator, f_true, n, seed, r) for r in range(replicates)]
    with ThreadPoolExecutor(max_workers=threads) as executor:
        return list(
            executor.map(lambda r: _replicate(estimator, f_true, n, seed, r), range(replicates))
        )


def _summarize(n: int, results: Sequence[tuple[Losses, int]]) -> RiskRow:
    l2 = np.array([loss.l2_squared for loss, _ in results])
    kl = np.array([loss.kl for loss, _ in results])
    hell = np.array([loss.hellinger_squared for loss, _ in results])
    depth = np.array([d for _, d in results], dtype=float)
    stderr = float(l2.std(ddof=1) / math.sqrt(l2.size)) if l2.size > 1 else 0.0
    return RiskRow(
        n=n,
        replicates=l2.size,
        mean=float(l2.mean()),
        stderr=stderr,
        kl_mean=float(kl.mean()),
        hellinger_mean=float(hell.mean()),
        mean_depth=float(depth.mean()),
    )


def risk_estimate(
    spec: ClassSpec,
    f_true: GridDensity,
    n: int,
    replicates: int,
    estimator: TracedEstimator,
    seed: int,
    threads: int = 1,
) -> RiskRow:
    """
    Mean squared L2 risk of the estimator at sample size n.

    Raises:
        InputError: If f_true is not a member of spec
    """
    _require_member(spec, f_true)
    return _summarize(n, run_replicates(estimator, f_true, n, replicates, seed, threads))


def fit_rate(ns: ArrayLike, risks: ArrayLike) -> tuple[float, float, float, float]:
    """
    OLS fit of log risk on log n.

    Returns:
        (slope, intercept, slope standard error, 95% half-width of the slope)

    Raises:
        InputError: If fewer than three points are given or a risk is not positive
    """
    x = np.asarray(ns, dtype=float)
    y = np.asarray(risks, dtype=float)
    if x.size != y.size or x.size < 3:
        raise InputError("fit_rate needs at least three (n, risk) pairs")
    if np.any(x <= 0) or np.any(y <= 0):
        raise InputError("fit_rate needs positive sample sizes and risks")
    fit = stats.linregress(np.log(x), np.log(y))
    t_crit = stats.t.ppf(0.5 + CONFIDENCE / 2.0, x.size - 2)
    return float(fit.slope), float(fit.intercept), float(fit.stderr), float(t_crit * fit.stderr)


def pool_resolution(pool: CandidatePool) -> float:
    """Median nearest-neighbour distance of the pool (0 for a singleton)."""
    if len(pool) < 2:
        return 0.0
    return float(np.median(pool.nearest_neighbor_distances()))


def pool_limit_reasons(rows: Sequence[RiskRow], resolution: float) -> tuple[str, ...]:
    """
    Diagnostics that the risk ladder is set by the pool rather than by n.

    - ``resolution``: squared pool resolution above half the smallest risk
    - ``non-monotone``: the mean risk rises somewhere along the n ladder
    - ``depth-pinned``: the sieve never leaves the root at the largest n
    """
    means = [row.mean for row in rows]
    reasons = []
    if resolution**2 > 0.5 * min(means):
        reasons.append("resolution")
    if any(later > earlier for earlier, later in zip(means, means[1:])):
        reasons.append("non-monotone")
    if rows[-1].mean_depth <= 1.0:
        reasons.append("depth-pinned")
    return tuple(reasons)


def rate_sweep(
    spec: ClassSpec,
    n_list: Sequence[int],
    replicates: int,
    estimator: TracedEstimator,
    f_true: GridDensity,
    seed: int,
    pool: CandidatePool,
    threads: int = 1,
) -> RiskSweepReport:
    """
    Risk at every n and the fitted log-log slope.

    The regime is flagged pool-limited (see ``pool_limit_reasons``) when the
    pool resolution, not n, sets the risk; the slope is then reported but
    not expected to match the class exponent.

    Raises:
        ConfigurationError: If n_list holds fewer than four distinct sizes
        InputError: If f_true is not a member of spec
    """
    sizes = sorted({int(n) for n in n_list})
    if len(sizes) < MIN_SWEEP_POINTS:
        raise ConfigurationError(
            f"A rate sweep needs at least {MIN_SWEEP_POINTS} distinct sample sizes, got {sizes}"
        )
    _require_member(spec, f_true)

    rows: list[RiskRow] = []
    losses: list[tuple[int, int, float]] = []
    for n in sizes:
        results = run_replicates(estimator, f_true, n, replicates, seed, threads)
        row = _summarize(n, results)
        rows.append(row)
        losses.extend((n, r, loss.l2_squared) for r, (loss, _) in enumerate(results))
        logger.info("n=%d risk=%.4g (+/- %.2g) depth=%.2f", n, row.mean, row.stderr, row.mean_depth)

    means = [row.mean for row in rows]
    if min(means) > 0.0:
        slope, intercept, slope_se, half_width = fit_rate(sizes, means)
    else:
        logger.warning("zero mean risk at some n; the slope is undefined")
        slope = intercept = slope_se = half_width = math.nan

    resolution = pool_resolution(pool)
    limited_by = pool_limit_reasons(rows, resolution)
    if limited_by:
        logger.warning(
            "pool-limited regime (%s): pool size %d, resolution^2=%.3g, smallest risk %.3g",
            ", ".join(limited_by),
            len(pool),
            resolution**2,
            min(means),
        )
    return RiskSweepReport(
        variant=spec.variant,
        rows=tuple(rows),
        slope=slope,
        intercept=intercept,
        slope_stderr=slope_se,
        half_width=half_width,
        theoretical_exponent=spec.rate_exponent,
        seed=seed,
        pool_size=len(pool),
        pool_resolution=resolution,
        limited_by=limited_by,
        losses=tuple(losses),
    )
