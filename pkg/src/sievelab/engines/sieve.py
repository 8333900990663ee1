"""
Multistage sieve maximum likelihood estimation.

The estimator descends a tree of maximal packings. Level k holds a greedy
packing of the ball B(node, d/2^(k-1)) at separation d/(2^k (C+1)); the
child with the largest log-likelihood becomes the next node, ties going to
the smallest pool index. Children depend on the node only, never on the
data, so the tree is built online and memoised across runs.
"""

import logging
import math
import threading
from collections.abc import Callable, Sequence
from typing import Any

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.optimize import brentq

from sievelab.core.errors import ConfigurationError, DimensionError, DomainError
from sievelab.core.models import (
    INEQUALITY_SLACK,
    BoundsSpec,
    GridDensity,
    PackingResult,
    SieveConstants,
    SieveLevel,
    SieveTrace,
    StopReason,
    cell_counts,
)
from sievelab.core.protocols import DensityEstimator, EntropyFunction
from sievelab.engines.classes import ClassSpec
from sievelab.engines.divergences import diameter_upper_bound, equivalence_constants
from sievelab.engines.packing import (
    CandidatePool,
    EntropyCurve,
    adaptive_local_entropy,
    greedy_maximal_packing,
    local_entropy_estimate,
)

logger = logging.getLogger(__name__)

# Node entropy callback of the adaptive sieve: (node index, radius, scale) -> log count
NodeEntropy = Callable[[int, float, float], float]


# ---------------------------------------------------------------------------
# Constants and schedule
# ---------------------------------------------------------------------------


def minimal_c(bounds: BoundsSpec) -> float:
    """Smallest c clearing the Bernstein threshold: 2(2 + sqrt(1/(alpha c_ab)))."""
    eq = equivalence_constants(bounds)
    return 2.0 * (2.0 + math.sqrt(1.0 / (bounds.alpha * eq.c_ab)))


def compute_constants(
    bounds: BoundsSpec,
    c: float,
    d: float | None = None,
    likelihood_constant: float | None = None,
) -> SieveConstants:
    """
    Derive the sieve constants from the bounds and the scale c.

    Args:
        bounds: Ambient bounds (alpha > 0)
        c: Local entropy scale, c = 2(C + 1)
        d: Diameter used by the schedule (capped at 2 sqrt(beta))
        likelihood_constant: Override for the L used by the epsilon schedule

    Raises:
        ConfigurationError: If C = c/2 - 1 does not exceed 1 + sqrt(1/(alpha c_ab))
    """
    bounds.require_positive()
    eq = equivalence_constants(bounds)
    C = c / 2.0 - 1.0
    threshold = 1.0 + math.sqrt(1.0 / (bounds.alpha * eq.c_ab))
    if C <= threshold:
        raise ConfigurationError(
            f"c={c:g} violates the Bernstein threshold C = c/2 - 1 > "
            f"1 + sqrt(1/(alpha c_ab)) = {threshold:.6g}; "
            f"minimal admissible c is {minimal_c(bounds):.6g}"
        )
    L = (math.sqrt(eq.c_ab) * (C - 1.0) - math.sqrt(1.0 / bounds.alpha)) ** 2 / (
        2.0 * (2.0 * eq.K_ab + (2.0 / 3.0) * math.log(bounds.beta / bounds.alpha))
    )
    diameter = diameter_upper_bound(bounds)
    if d is not None:
        diameter = min(diameter, d)
    if likelihood_constant is not None and likelihood_constant <= 0.0:
        raise ConfigurationError(
            f"likelihood_constant must be positive, got {likelihood_constant}"
        )
    return SieveConstants(
        c=c,
        C=C,
        c_ab=eq.c_ab,
        K_ab=eq.K_ab,
        L=L,
        d=diameter,
        bounds=bounds,
        L_schedule=likelihood_constant or 0.0,
    )


def epsilon_schedule(J: int, constants: SieveConstants) -> float:
    """eps_J = sqrt(L) d / (2^(J-2) c)."""
    if J < 1:
        raise DomainError(f"J must be positive, got {J}")
    return math.sqrt(constants.L_schedule) * constants.d / (2.0 ** (J - 2) * constants.c)


def level_radius(level: int, constants: SieveConstants) -> float:
    """Ball radius d / 2^(k-1) around the level-k node."""
    return constants.d / 2.0 ** (level - 1)


def level_separation(level: int, constants: SieveConstants) -> float:
    """Packing separation d / (2^k (C+1)) at level k."""
    return constants.d / (2.0**level * (constants.C + 1.0))


def solve_J_bar(
    n: int,
    spec: ClassSpec,
    constants: SieveConstants,
    entropy_fn: EntropyFunction,
    J_cap: int,
    radius_multiplier: float = 1.0,
) -> int:
    """
    Largest J <= J_cap with n eps_J^2 > max(2 entropy(eps_J c / sqrt(L)), log 2).

    ``entropy_fn`` is evaluated at radius_multiplier * eps_J c / sqrt(L).
    Returns 1 when no J qualifies.
    """
    if J_cap < 1:
        raise DomainError(f"J_cap must be positive, got {J_cap}")
    sqrt_l = math.sqrt(constants.L_schedule)
    for J in range(J_cap, 0, -1):
        eps = epsilon_schedule(J, constants)
        radius = radius_multiplier * eps * constants.c / sqrt_l
        if n * eps * eps > max(2.0 * entropy_fn(radius), math.log(2.0)):
            logger.info("J_bar=%d for %s at n=%d", J, spec.variant, n)
            return J
    return 1


def log_likelihood_diff(g: GridDensity, g_prime: GridDensity, samples: ArrayLike) -> float:
    """
    sum_i log g(X_i) - sum_i log g'(X_i), evaluating each density by cell.

    Raises:
        DomainError: If either density vanishes on a cell holding a sample
    """
    if g.m != g_prime.m:
        raise DimensionError(f"Grid sizes differ: {g.m} != {g_prime.m}")
    counts = cell_counts(samples, g.m)
    occupied = counts > 0
    if np.any(g.values[occupied] <= 0.0) or np.any(g_prime.values[occupied] <= 0.0):
        raise DomainError("log-likelihood undefined: zero density at an observed cell")
    c = counts[occupied]
    return float(c @ np.log(g.values[occupied]) - c @ np.log(g_prime.values[occupied]))


def pool_log_likelihoods(
    pool: CandidatePool, indices: Sequence[int], counts: NDArray[np.int64]
) -> NDArray[np.float64]:
    """Log-likelihood of each listed pool element (-inf if it vanishes on data)."""
    occupied = counts > 0
    logs = pool.log_values[np.ix_(np.asarray(indices, dtype=np.intp), np.flatnonzero(occupied))]
    return logs @ counts[occupied].astype(float)


# ---------------------------------------------------------------------------
# Packing tree
# ---------------------------------------------------------------------------


class PackingTree:
    """
    Online maximal packing tree over a candidate pool.

    Children of (level, node) are computed on first request and memoised;
    after many runs the cache is the explored part of the full tree.
    Safe to share between threads.
    """

    def __init__(
        self,
        pool: CandidatePool,
        constants: SieveConstants,
        spec: ClassSpec | None = None,
        radius_multiplier: float = 1.0,
    ) -> None:
        self.pool = pool
        self.constants = constants
        self.spec = spec if spec is not None else pool.spec
        self.radius_multiplier = radius_multiplier
        self._children: dict[tuple[int, int], PackingResult] = {}
        self._entropy: dict[tuple[int, int], float] = {}
        self._lock = threading.Lock()

    def children(self, level: int, node: int) -> PackingResult:
        """Greedy packing of B(node, d/2^(level-1)) at separation d/(2^level (C+1))."""
        key = (level, node)
        with self._lock:
            cached = self._children.get(key)
        if cached is not None:
            return cached
        packing = greedy_maximal_packing(
            self.pool,
            level_separation(level, self.constants),
            center=node,
            radius=level_radius(level, self.constants),
        )
        with self._lock:
            cached = self._children.setdefault(key, packing)
            size = len(self._children)
        if size % 1000 == 0:
            logger.debug("packing tree cache holds %d nodes", size)
        return cached

    def adaptive_entropy(self, J: int, node: int) -> float:
        """Adaptive local entropy at the node, radius 2 eps_J c/sqrt(L), scale 2c."""
        key = (J, node)
        with self._lock:
            cached = self._entropy.get(key)
        if cached is not None:
            return cached
        if self.spec is None:
            raise DomainError("adaptive entropy needs the pool's class spec")
        eps = epsilon_schedule(J, self.constants)
        radius = (
            2.0 * self.radius_multiplier * eps * self.constants.c
            / math.sqrt(self.constants.L_schedule)
        )
        value = adaptive_local_entropy(
            self.spec, node, radius, 2.0 * self.constants.c, self.pool
        ).log_count
        with self._lock:
            return self._entropy.setdefault(key, value)

    def __len__(self) -> int:
        return len(self._children)


# ---------------------------------------------------------------------------
# Estimators
# ---------------------------------------------------------------------------


def _select(
    pool: CandidatePool, packing: PackingResult, counts: NDArray[np.int64]
) -> tuple[int, int]:
    """(selected pool index, number of other children tied with it)."""
    idx = packing.center_indices
    loglik = pool_log_likelihoods(pool, idx, counts)
    best = int(np.argmax(loglik))  # first max = smallest pool index
    ties = int(np.count_nonzero(loglik == loglik[best])) - 1
    return idx[best], ties


def _trace(
    path: list[int],
    levels: list[SieveLevel],
    J_bar: int,
    constants: SieveConstants,
    stop: StopReason,
    adaptive: bool,
) -> SieveTrace:
    schedule = tuple(epsilon_schedule(J, constants) for J in range(1, J_bar + 1))
    return SieveTrace(
        path=tuple(path),
        levels=tuple(levels),
        J_bar=J_bar,
        epsilon_schedule=schedule,
        constants=constants,
        stop_reason=stop,
        adaptive=adaptive,
    )


def _counts(samples: ArrayLike | None, counts: NDArray[np.int64] | None, m: int) -> NDArray[np.int64]:
    if counts is not None:
        return counts
    if samples is None:
        raise DomainError("either samples or counts are required")
    return cell_counts(samples, m)


def run_sieve(
    samples: ArrayLike | None,
    spec: ClassSpec,
    constants: SieveConstants,
    pool: CandidatePool,
    J_bar: int,
    tree: PackingTree | None = None,
    counts: NDArray[np.int64] | None = None,
) -> tuple[GridDensity, SieveTrace]:
    """
    Run the sieve to depth J_bar from the root pool[0].

    Args:
        samples: Observations in [0, 1] (may be None when counts is given)
        spec: Class of the pool
        constants: Sieve constants
        pool: Candidate pool
        J_bar: Number of nodes on the path (the root counts as one)
        tree: Shared packing tree (a private one is built otherwise)
        counts: Precomputed cell counts of the samples

    Returns:
        (final node, trace); an empty packing ends the run early
    """
    tree = tree or PackingTree(pool, constants, spec)
    cell = _counts(samples, counts, pool.m)
    path = [0]
    levels: list[SieveLevel] = []
    stop = StopReason.DEPTH
    for k in range(1, J_bar):
        node = path[-1]
        packing = tree.children(k, node)
        if packing.size == 0:
            stop = StopReason.EMPTY_PACKING
            logger.warning("empty packing at level %d; truncating the sieve", k)
            break
        child, ties = _select(pool, packing, cell)
        levels.append(
            SieveLevel(
                level=k,
                node_index=node,
                selected_index=child,
                packing_size=packing.size,
                ties=ties,
                radius=level_radius(k, constants),
                separation=level_separation(k, constants),
            )
        )
        path.append(child)
    return pool[path[-1]], _trace(path, levels, J_bar, constants, stop, adaptive=False)


def run_adaptive_sieve(
    samples: ArrayLike | None,
    spec: ClassSpec,
    constants: SieveConstants,
    pool: CandidatePool,
    entropy_fn: NodeEntropy | None,
    J_cap: int,
    tree: PackingTree | None = None,
    budget: int | None = None,
    counts: NDArray[np.int64] | None = None,
) -> tuple[GridDensity, SieveTrace]:
    """
    Sieve whose depth is chosen online.

    From the node at level J the run descends to J + 1 only while
    n eps_{J+1}^2 > max(2 entropy, log 2), with the adaptive local entropy
    taken at the current node (radius 2 eps_{J+1} c/sqrt(L), scale 2c).
    It also stops before a packing larger than ``budget`` and stays at the
    root of a one-element pool. Any other node whose ball holds no other
    pool element carries forward as its own child, so the depth matches the
    non-adaptive J_bar under the same entropy.

    Args:
        entropy_fn: (node, radius, scale) -> log count; None uses the pool
        J_cap: Maximal depth
        budget: Largest packing the run may descend through
    """
    tree = tree or PackingTree(pool, constants, spec)
    cell = _counts(samples, counts, pool.m)
    n = int(cell.sum())
    sqrt_l = math.sqrt(constants.L_schedule)

    def node_entropy(J: int, node: int) -> float:
        if entropy_fn is None:
            return tree.adaptive_entropy(J, node)
        eps = epsilon_schedule(J, constants)
        radius = 2.0 * tree.radius_multiplier * eps * constants.c / sqrt_l
        return entropy_fn(node, radius, 2.0 * constants.c)

    path = [0]
    levels: list[SieveLevel] = []
    stop = StopReason.DEPTH if len(pool) > 1 else StopReason.SINGLE_MEMBER
    for k in range(1, J_cap if len(pool) > 1 else 1):
        node = path[-1]
        eps_next = epsilon_schedule(k + 1, constants)
        if not n * eps_next**2 > max(2.0 * node_entropy(k + 1, node), math.log(2.0)):
            stop = StopReason.ADAPTIVE_CONDITION
            break
        packing = tree.children(k, node)
        if packing.size == 0:
            stop = StopReason.EMPTY_PACKING
            break
        if budget is not None and packing.size > budget:
            stop = StopReason.BUDGET
            break
        child, ties = _select(pool, packing, cell)
        levels.append(
            SieveLevel(
                level=k,
                node_index=node,
                selected_index=child,
                packing_size=packing.size,
                ties=ties,
                radius=level_radius(k, constants),
                separation=level_separation(k, constants),
            )
        )
        path.append(child)
    if stop is not StopReason.DEPTH:
        logger.debug("adaptive sieve stopped at depth %d (%s)", len(path), stop.value)
    return pool[path[-1]], _trace(path, levels, len(path), constants, stop, adaptive=True)


def check_trajectory(trace: SieveTrace, pool: CandidatePool) -> list[tuple[int, int, float]]:
    """
    Cauchy bound ||node_J - node_J'|| <= d / 2^(J'-2) for all J' < J.

    Also checks that every child lies in its parent's ball.

    Returns:
        (J', J, excess) for every violated pair (1-based levels)
    """
    d = trace.constants.d
    violations: list[tuple[int, int, float]] = []
    path = trace.path
    for jp in range(len(path)):
        dist = pool.distances[path[jp], list(path[jp + 1:])] if jp + 1 < len(path) else []
        bound = d / 2.0 ** (jp + 1 - 2)
        for offset, value in enumerate(dist):
            if value > bound + INEQUALITY_SLACK:
                violations.append((jp + 1, jp + 2 + offset, float(value - bound)))
    for lvl in trace.levels:
        gap = float(pool.distances[lvl.node_index, lvl.selected_index]) - lvl.radius
        if gap > INEQUALITY_SLACK:
            violations.append((lvl.level, lvl.level + 1, gap))
    return violations


# ---------------------------------------------------------------------------
# Sieve estimator facade
# ---------------------------------------------------------------------------


class SieveEstimator:
    """
    A configured sieve: pool, constants, packing tree and entropy curve.

    Built by ``SieveBuilder``. Calling the estimator on samples returns the
    estimate; ``estimate`` also returns the trace. J_bar is solved once per
    sample size from a monotone local entropy curve over the radii the
    stopping rule needs.
    """

    def __init__(
        self,
        spec: ClassSpec,
        pool: CandidatePool,
        constants: SieveConstants,
        J_cap: int,
        centers: Sequence[int] | None = None,
        radius_multiplier: float = 1.0,
        adaptive: bool = False,
        budget: int | None = None,
    ) -> None:
        self.spec = spec
        self.pool = pool
        self.constants = constants
        self.J_cap = J_cap
        self.centers = list(centers) if centers is not None else list(range(min(32, len(pool))))
        self.radius_multiplier = radius_multiplier
        self.adaptive = adaptive
        self.budget = budget
        self.tree = PackingTree(pool, constants, spec, radius_multiplier)
        self._curve: EntropyCurve | None = None
        self._J_bar: dict[int, int] = {}
        self._lock = threading.Lock()

    @property
    def entropy_curve(self) -> EntropyCurve:
        """Monotone local-sup entropy over the radii used by solve_J_bar."""
        if self._curve is None:
            sqrt_l = math.sqrt(self.constants.L_schedule)
            radii = [
                self.radius_multiplier * epsilon_schedule(J, self.constants) * self.constants.c / sqrt_l
                for J in range(1, self.J_cap + 1)
            ]
            estimates = [
                local_entropy_estimate(self.spec, r, self.constants.c, self.pool, self.centers)
                for r in radii
            ]
            self._curve = EntropyCurve.from_estimates(estimates)
        return self._curve

    def J_bar(self, n: int) -> int:
        with self._lock:
            if n not in self._J_bar:
                self._J_bar[n] = solve_J_bar(
                    n,
                    self.spec,
                    self.constants,
                    self.entropy_curve,
                    self.J_cap,
                    self.radius_multiplier,
                )
            return self._J_bar[n]

    def estimate(
        self, samples: ArrayLike | None = None, counts: NDArray[np.int64] | None = None
    ) -> tuple[GridDensity, SieveTrace]:
        cell = _counts(samples, counts, self.pool.m)
        if self.adaptive:
            return run_adaptive_sieve(
                None,
                self.spec,
                self.constants,
                self.pool,
                None,
                self.J_cap,
                tree=self.tree,
                budget=self.budget,
                counts=cell,
            )
        return run_sieve(
            None,
            self.spec,
            self.constants,
            self.pool,
            self.J_bar(int(cell.sum())),
            tree=self.tree,
            counts=cell,
        )

    def __call__(self, samples: ArrayLike) -> GridDensity:
        return self.estimate(samples)[0]

    def describe(self) -> dict[str, Any]:
        return {
            "variant": self.spec.variant,
            "pool_size": len(self.pool),
            "centers": len(self.centers),
            "J_cap": self.J_cap,
            "adaptive": self.adaptive,
            "radius_multiplier": self.radius_multiplier,
            **self.constants.to_dict(),
        }


# ---------------------------------------------------------------------------
# Mixture lift
# ---------------------------------------------------------------------------


def project_bounded(values: ArrayLike, upper: float = math.inf) -> GridDensity:
    """
    Closest density in {0 <= v <= upper, mean(v) = 1} of the form clip(v - tau).

    Raises:
        DomainError: If upper < 1 (no density fits)
    """
    v = np.asarray(values, dtype=float)
    if upper < 1.0:
        raise DomainError(f"no density is bounded by {upper} < 1")

    def excess(tau: float) -> float:
        return float(np.clip(v - tau, 0.0, upper).mean() - 1.0)

    lo, hi = float(v.min()) - 1.0, float(v.max())
    tau = 0.0 if excess(0.0) == 0.0 else brentq(excess, lo, hi, xtol=1e-15)
    out = np.clip(v - tau, 0.0, upper)
    return GridDensity(out / out.mean())


def mixture_lift(
    f_alpha: GridDensity,
    estimate_fn: DensityEstimator,
    samples: ArrayLike,
    rng: np.random.Generator,
    rounds: int,
    beta: float = math.inf,
) -> GridDensity:
    """
    Estimate a density that may touch 0 through the mixture (f_alpha + f)/2.

    Each round replaces every observation by a draw from f_alpha with
    probability 1/2, estimates the mixture, and unmixes with 2 fhat - f_alpha.
    The rounds are averaged and projected back onto densities bounded by beta.
    """
    if rounds < 1:
        raise DomainError(f"rounds must be positive, got {rounds}")
    x = np.asarray(samples, dtype=float)
    total = np.zeros(f_alpha.m)
    for _ in range(rounds):
        coins = rng.random(x.size) < 0.5
        synthetic = f_alpha.sample(x.size, rng)
        z = np.where(coins, synthetic, x)
        fhat = estimate_fn(z)
        total += 2.0 * fhat.values - f_alpha.values
    lifted = total / rounds
    return project_bounded(lifted, beta)
