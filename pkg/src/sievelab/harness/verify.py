"""
Property suites behind ``sievelab verify``.

Each suite checks one family of inequalities on seeded random inputs and
returns a PropertyResult: how many checks ran, how many failed, and the
smallest slack seen (negative means violated).
"""

import logging
import math
from collections.abc import Callable, Sequence

import numpy as np

from sievelab.core.builder import SieveBuilder
from sievelab.core.config import RunConfig
from sievelab.core.models import (
    INEQUALITY_SLACK,
    BoundsSpec,
    GridDensity,
    PropertyResult,
    VerificationReport,
)
from sievelab.engines.classes import (
    AmbientSpec,
    BVSpec,
    ClassSpec,
    ConvMixSpec,
    LipschitzSpec,
    QuadSpec,
    convex_combine,
    membership,
    sample_member,
    sin_family,
)
from sievelab.engines.divergences import (
    chi_square,
    elementary_log_slack,
    equivalence_constants,
    h_derivative,
    h_function,
    hellinger,
    kl_divergence,
    l2_distance,
    l2_matrix,
)
from sievelab.engines.packing import (
    EXACT_PACKING_LIMIT,
    CandidatePool,
    contract_packing,
    global_local_gap_check,
    greedy_maximal_packing,
)
from sievelab.engines.sieve import check_trajectory
from sievelab.harness.sampling import replicate_rng, sample_iid

logger = logging.getLogger(__name__)

SANDWICH_SLACK = 1e-10
SINE_TOLERANCE = 0.01
CONTRACTION_SCALE = 4.0
# L of the trajectory runs when none is configured; the Bernstein L stops every run at depth 1
TRAJECTORY_LIKELIHOOD_CONSTANT = 25.0

# Stream keys of the suites under the master seed
_PAIRS, _CLOSURE, _CONTRACTION, _TRAJECTORY = range(1, 5)


class _Tally:
    """Accumulates checks and the smallest slack of one suite."""

    def __init__(self, name: str) -> None:
        self.name = name
        self.checked = 0
        self.violations = 0
        self.worst = math.inf
        self.notes: list[str] = []

    def add(self, slack: float, tolerance: float = 0.0, note: str = "") -> None:
        self.checked += 1
        self.worst = min(self.worst, slack)
        if slack < -tolerance:
            self.violations += 1
            if note and len(self.notes) < 5:
                self.notes.append(note)

    def add_many(self, slacks: np.ndarray, tolerance: float = 0.0) -> None:
        if slacks.size == 0:
            return
        self.checked += int(slacks.size)
        self.worst = min(self.worst, float(slacks.min()))
        self.violations += int(np.count_nonzero(slacks < -tolerance))

    def result(self) -> PropertyResult:
        worst = self.worst if math.isfinite(self.worst) else 0.0
        res = PropertyResult(
            name=self.name,
            checked=self.checked,
            violations=self.violations,
            worst_slack=worst,
            details="; ".join(self.notes),
        )
        level = logging.INFO if res.passed else logging.WARNING
        logger.log(level, "%s: %d checks, %d violations", self.name, res.checked, res.violations)
        return res


def example_specs(bounds: BoundsSpec, m: int) -> list[ClassSpec]:
    """The example classes exercised by the suites, on a grid of m cells."""
    return [
        LipschitzSpec(gamma=1.0, q=2.0, psi=3.0, bounds=bounds),
        BVSpec(zeta=1.5, bounds=bounds),
        QuadSpec(gamma=8.0, bounds=bounds),
        ConvMixSpec.from_sine(k=3, m=m, sine_alpha=0.5, bounds=bounds),
    ]


# ---------------------------------------------------------------------------
# Divergence suites
# ---------------------------------------------------------------------------


def sandwich_suite(
    bounds: BoundsSpec, m: int, pairs: int, rng: np.random.Generator
) -> list[PropertyResult]:
    """
    KL, Hellinger and chi-square against squared L2 on random ambient pairs.

    c_ab ||f-g||^2 <= KL <= ||f-g||^2/alpha, ||f-g||^2/(4 beta) <= H^2 <= ||f-g||^2/alpha
    and KL <= chi^2, each within 1e-10. Also bounds every distance by 2 sqrt(beta).
    """
    spec = AmbientSpec(bounds=bounds)
    c_ab = equivalence_constants(bounds).c_ab
    kl_tally = _Tally("kl-l2-sandwich")
    hell_tally = _Tally("hellinger-l2-sandwich")
    chi_tally = _Tally("kl-chi-square")
    diam_tally = _Tally("diameter-bound")
    diameter = 2.0 * math.sqrt(bounds.beta)
    for _ in range(pairs):
        f = sample_member(spec, rng, m=m)
        g = sample_member(spec, rng, m=m)
        l2 = l2_distance(f, g)
        l2sq = l2 * l2
        kl = kl_divergence(f, g)
        h2 = hellinger(f, g) ** 2
        kl_tally.add(min(kl - c_ab * l2sq, l2sq / bounds.alpha - kl), SANDWICH_SLACK)
        hell_tally.add(
            min(h2 - l2sq / (4.0 * bounds.beta), l2sq / bounds.alpha - h2), SANDWICH_SLACK
        )
        chi_tally.add(chi_square(f, g) - kl, SANDWICH_SLACK)
        diam_tally.add(diameter - l2)
    return [t.result() for t in (kl_tally, hell_tally, chi_tally, diam_tally)]


def log_inequality_suite(points: int) -> list[PropertyResult]:
    """
    Elementary log bound on a (gamma, x) grid, and the shape of h.

    gamma runs over a log grid in (0, 100] and x over a log grid of (0, gamma].
    h must be strictly decreasing on a log grid of [1e-3, 1e3], equal 1/2 at
    gamma = 1, and agree in sign with centered finite differences.
    """
    side = max(int(math.isqrt(points)), 2)
    gammas = np.geomspace(1e-3, 100.0, side)
    fractions = np.geomspace(1e-6, 1.0, side)
    grid_gamma = np.repeat(gammas, side)
    grid_x = (gammas[:, None] * fractions[None, :]).ravel()
    grid_x = np.minimum(grid_x, grid_gamma)
    log_tally = _Tally("elementary-log-inequality")
    log_tally.add_many(elementary_log_slack(grid_gamma, grid_x), INEQUALITY_SLACK)

    shape = _Tally("h-decreasing")
    grid = np.geomspace(1e-3, 1e3, side)
    h = np.asarray(h_function(grid))
    shape.add_many(h[:-1] - h[1:])
    shape.add(-abs(float(h_function(1.0)) - 0.5))
    step = 1e-5 * grid
    central = (np.asarray(h_function(grid + step)) - np.asarray(h_function(grid - step))) / (
        2.0 * step
    )
    shape.add_many(-central)
    shape.add_many(-np.asarray(h_derivative(grid)))
    return [log_tally.result(), shape.result()]


def sine_family_suite(alpha: float = 0.5, m: int = 4096, count: int = 8) -> PropertyResult:
    """Pairwise squared distances of sin_family j = 1..count equal (1 - alpha)^2 +/- 0.01."""
    tally = _Tally("sine-family-separation")
    members = np.vstack([sin_family(j, alpha, m).values for j in range(1, count + 1)])
    dist = l2_matrix(members) ** 2
    target = (1.0 - alpha) ** 2
    upper = np.triu_indices(count, k=1)
    tally.add_many(SINE_TOLERANCE - np.abs(dist[upper] - target))
    return tally.result()


# ---------------------------------------------------------------------------
# Class and packing suites
# ---------------------------------------------------------------------------


def closure_suite(
    specs: Sequence[ClassSpec], trials: int, m: int, rng: np.random.Generator
) -> list[PropertyResult]:
    """Random convex combinations of two members stay members."""
    results = []
    for spec in specs:
        tally = _Tally(f"convexity-closure:{spec.variant}")
        for _ in range(trials):
            f = sample_member(spec, rng, m=m)
            g = sample_member(spec, rng, m=m)
            report = membership(spec, convex_combine(f, g, float(rng.uniform())))
            tally.add(min(report.slacks.values()), report.tolerance, ",".join(report.violated))
        results.append(tally.result())
    return results


def contraction_suite(
    specs: Sequence[ClassSpec],
    trials: int,
    m: int,
    pool_size: int,
    seed: int,
    rng: np.random.Generator,
    c: float = CONTRACTION_SCALE,
) -> list[PropertyResult]:
    """
    Contracting random local packings to eps/2 and eps/3.

    The contracted set must keep its cardinality, lie within eps' of the
    center, stay eps'/c-separated and stay in the class.
    """
    results = []
    for spec in specs:
        tally = _Tally(f"contraction-packing:{spec.variant}")
        pool = CandidatePool.from_spec(spec, pool_size, seed, m=m)
        for _ in range(trials):
            center = int(rng.integers(len(pool)))
            distances = pool.distances_to(center)
            eps = float(rng.uniform(0.25, 1.0)) * float(distances.max() or 1.0)
            packing = greedy_maximal_packing(pool, eps / c, center=center, radius=eps)
            theta = pool[center]
            dens = [pool[i] for i in packing.center_indices]
            for ratio in (0.5, 1.0 / 3.0):
                eps_prime = eps * ratio
                out = contract_packing(theta, eps, eps_prime, dens, c=c)
                tally.add(float(len(out) == len(dens)) - 1.0)
                for g in out:
                    tally.add(eps_prime - l2_distance(g, theta), INEQUALITY_SLACK)
                    report = membership(spec, g)
                    tally.add(min(report.slacks.values()), report.tolerance)
                if len(out) > 1:
                    dist = l2_matrix(np.vstack([g.values for g in out]))
                    np.fill_diagonal(dist, np.inf)
                    tally.add(float(dist.min()) - eps_prime / c)
        results.append(tally.result())
    return results


def gap_suite(
    specs: Sequence[ClassSpec],
    m: int,
    pool_size: int,
    seed: int,
    epsilons: Sequence[float],
    c: float = CONTRACTION_SCALE,
) -> list[PropertyResult]:
    """Global/local entropy sandwich at each radius; small pools get exact counts."""
    results = []
    for spec in specs:
        tally = _Tally(f"global-local-gap:{spec.variant}")
        pool = CandidatePool.from_spec(spec, pool_size, seed, m=m)
        for eps in epsilons:
            report = global_local_gap_check(spec, eps, c, pool)
            lower = report.log_local - (report.log_global_fine - report.log_global_coarse)
            upper = report.log_global_fine - report.log_local
            tally.add(min(lower, upper), report.slack + INEQUALITY_SLACK)
        results.append(tally.result())
    return results


def trajectory_suite(
    specs: Sequence[ClassSpec],
    runs: int,
    config: RunConfig,
    rng: np.random.Generator,
) -> PropertyResult:
    """Sieve paths obey ||Y_J - Y_J'|| <= d/2^(J'-2) and stay in their parents' balls."""
    tally = _Tally("trajectory-cauchy-bound")
    per_spec = max(runs // max(len(specs), 1), 1)
    for spec in specs:
        builder = (
            SieveBuilder(spec)
            .with_grid(config.m)
            .with_pool(size=config.pool_size, seed=config.seed)
            .with_scale(config.c)
            .with_likelihood_constant(config.likelihood_constant or TRAJECTORY_LIKELIHOOD_CONSTANT)
            .with_depth(config.J_cap)
            .with_centers(config.centers)
        )
        estimator = builder.build()
        n_values = [int(n) for n in config.n_list]
        for _ in range(per_spec):
            truth = estimator.pool[int(rng.integers(len(estimator.pool)))]
            n = n_values[int(rng.integers(len(n_values)))]
            _, trace = estimator.estimate(sample_iid(truth, n, rng))
            violations = check_trajectory(trace, estimator.pool)
            if not violations:
                tally.add(0.0)
            for jp, j, excess in violations:
                tally.add(-excess, note=f"{spec.variant}: ({jp}, {j}) by {excess:.3g}")
    return tally.result()


# ---------------------------------------------------------------------------
# Aggregate
# ---------------------------------------------------------------------------


def run_verification(
    config: RunConfig,
    progress: Callable[[str], None] | None = None,
) -> VerificationReport:
    """
    Every property suite under one config.

    Args:
        config: Validated run configuration (sizes of every suite)
        progress: Optional callback told the name of each suite as it starts
    """
    bounds = config.bounds
    specs = example_specs(bounds, config.m)

    def step(name: str) -> None:
        if progress is not None:
            progress(name)

    results: list[PropertyResult] = []
    step("sandwiches")
    results += sandwich_suite(
        bounds, config.m, config.verify_pairs, replicate_rng(config.seed, _PAIRS)
    )
    step("log inequality")
    results += log_inequality_suite(config.verify_grid)
    step("sine family")
    results.append(sine_family_suite())
    step("convexity closure")
    results += closure_suite(
        specs, config.verify_closure, config.m, replicate_rng(config.seed, _CLOSURE)
    )
    step("contraction packings")
    results += contraction_suite(
        specs,
        config.verify_contractions,
        config.m,
        min(config.pool_size, 60),
        config.seed,
        replicate_rng(config.seed, _CONTRACTION),
    )
    step("entropy gap")
    results += gap_suite(
        specs, config.m, min(config.pool_size, EXACT_PACKING_LIMIT), config.seed, config.epsilon_list
    )
    step("sieve trajectories")
    results.append(
        trajectory_suite(specs, config.verify_runs, config, replicate_rng(config.seed, _TRAJECTORY))
    )
    report = VerificationReport(results=tuple(results))
    logger.info("verification %s", "passed" if report.passed else "FAILED")
    return report

