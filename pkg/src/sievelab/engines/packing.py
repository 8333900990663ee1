"""
Packings of finite candidate pools and metric entropy estimates.

A CandidatePool is the finite surrogate for a density class. Every packing
here is a first-fit greedy packing in pool order, which makes it maximal
(every eligible element lies within the separation of some center) and
deterministic. Entropy values are therefore lower estimates.
"""

import logging
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.optimize import isotonic_regression

from sievelab.core.errors import ContractError, DimensionError, DomainError, InputError
from sievelab.core.models import (
    INEQUALITY_SLACK,
    EntropyEstimate,
    EntropyMode,
    GapReport,
    GridDensity,
    LowerBound,
    PackingResult,
)
from sievelab.core.protocols import EntropyFunction
from sievelab.engines.classes import (
    DEFAULT_MAX_ATTEMPTS,
    ClassSpec,
    convex_combine,
    membership,
    sample_member,
)
from sievelab.engines.divergences import diameter_upper_bound, l2_distance, l2_matrix

logger = logging.getLogger(__name__)

BISECTION_ITERATIONS = 60
BISECTION_RTOL = 1e-3
EXACT_PACKING_LIMIT = 20

Center = GridDensity | int


@dataclass(frozen=True, eq=False)
class CandidatePool:
    """
    Finite ordered set of class members.

    Order is significant: it fixes greedy packings and likelihood tie-breaks.
    The pairwise distance matrix is computed once, on first use.
    """

    densities: tuple[GridDensity, ...]
    spec: ClassSpec | None = None
    seed: int | None = None
    anchors: int = 0  # leading densities supplied by the caller

    def __post_init__(self) -> None:
        dens = tuple(self.densities)
        object.__setattr__(self, "densities", dens)
        if not dens:
            raise InputError("A candidate pool needs at least one density")
        sizes = {d.m for d in dens}
        if len(sizes) != 1:
            raise DimensionError(f"Pool densities use different grids: {sorted(sizes)}")

    @classmethod
    def from_spec(
        cls,
        spec: ClassSpec,
        size: int,
        seed: int,
        m: int | None = None,
        anchors: Sequence[GridDensity] = (),
        max_attempts: int = DEFAULT_MAX_ATTEMPTS,
    ) -> "CandidatePool":
        """
        Sample a pool of class members.

        Args:
            spec: Class to sample from
            size: Total pool size (anchors included)
            seed: Seed of the pool's random stream
            m: Grid size (defaults to the spec's own grid)
            anchors: Members placed first, in order (e.g. the true density)
            max_attempts: Sampler rejection budget per density

        Raises:
            InputError: If an anchor is not a member of the class
        """
        grid = m if m is not None else spec.grid_size
        for i, anchor in enumerate(anchors):
            report = membership(spec, anchor)
            if not report.is_member:
                raise InputError(
                    f"Anchor {i} is not a {spec.variant!r} member: violates {report.violated}"
                )
        rng = np.random.default_rng(seed)
        densities = list(anchors)
        while len(densities) < size:
            densities.append(sample_member(spec, rng, m=grid, max_attempts=max_attempts))
        logger.info(
            "built %s pool: size=%d seed=%d anchors=%d", spec.variant, len(densities), seed, len(anchors)
        )
        return cls(tuple(densities), spec=spec, seed=seed, anchors=len(anchors))

    @property
    def m(self) -> int:
        return self.densities[0].m

    @cached_property
    def values(self) -> NDArray[np.float64]:
        """(size, m) matrix of density values."""
        return np.vstack([d.values for d in self.densities])

    @cached_property
    def distances(self) -> NDArray[np.float64]:
        """(size, size) L2 distance matrix."""
        dist = l2_matrix(self.values)
        np.fill_diagonal(dist, 0.0)
        return dist

    @cached_property
    def log_values(self) -> NDArray[np.float64]:
        """Elementwise log of the values (-inf on zero cells)."""
        with np.errstate(divide="ignore"):
            return np.log(self.values)

    @property
    def diameter(self) -> float:
        return float(self.distances.max())

    def distances_to(self, center: Center) -> NDArray[np.float64]:
        """L2 distance from a center (pool index or density) to every pool element."""
        if isinstance(center, (int, np.integer)):
            return self.distances[int(center)]
        if center.m != self.m:
            raise DimensionError(f"Center has m={center.m}, pool has m={self.m}")
        return l2_matrix(center.values, self.values)[0]

    def nearest_neighbor_distances(self) -> NDArray[np.float64]:
        """Distance from each element to its nearest other element (inf for a singleton)."""
        dist = self.distances.copy()
        np.fill_diagonal(dist, np.inf)
        return dist.min(axis=1)

    def __len__(self) -> int:
        return len(self.densities)

    def __getitem__(self, index: int) -> GridDensity:
        return self.densities[index]

    def __repr__(self) -> str:
        variant = self.spec.variant if self.spec is not None else "custom"
        return f"CandidatePool({variant}, size={len(self)}, m={self.m}, seed={self.seed})"


# ---------------------------------------------------------------------------
# Packings
# ---------------------------------------------------------------------------


def greedy_maximal_packing(
    pool: CandidatePool,
    separation: float,
    center: Center | None = None,
    radius: float | None = None,
) -> PackingResult:
    """
    First-fit greedy packing in pool order.

    An element is admitted iff it is farther than ``separation`` from every
    admitted element. With a center and radius, only elements of the closed
    ball B(center, radius) are eligible.

    Args:
        pool: Candidate pool
        separation: Strict separation between centers (> 0)
        center: Optional ball center (pool index or density)
        radius: Ball radius (required with center)

    Returns:
        PackingResult, empty when no element is eligible
    """
    if separation <= 0.0:
        raise DomainError(f"separation must be positive, got {separation}")
    if center is None:
        eligible = np.ones(len(pool), dtype=bool)
    else:
        if radius is None:
            raise DomainError("A restricted packing needs a radius")
        eligible = pool.distances_to(center) <= radius
    return _greedy(pool.distances, np.flatnonzero(eligible), separation, radius)


def _greedy(
    distances: NDArray[np.float64],
    eligible_idx: NDArray[np.intp],
    separation: float,
    radius: float | None,
) -> PackingResult:
    blocked = np.zeros(distances.shape[0], dtype=bool)
    chosen: list[int] = []
    for i in eligible_idx:
        if blocked[i]:
            continue
        chosen.append(int(i))
        blocked |= distances[i] <= separation
    return PackingResult(
        center_indices=tuple(chosen),
        separation=separation,
        maximal=True,
        radius=radius,
        eligible_indices=tuple(int(i) for i in eligible_idx),
    )


def verify_packing(pool: CandidatePool, result: PackingResult) -> list[str]:
    """
    Check a packing against the pool.

    Returns:
        Descriptions of every violated property (empty when valid)
    """
    problems: list[str] = []
    idx = np.asarray(result.center_indices, dtype=np.intp)
    if idx.size > 1:
        sub = pool.distances[np.ix_(idx, idx)]
        np.fill_diagonal(sub, np.inf)
        closest = float(sub.min())
        if closest <= result.separation:
            problems.append(
                f"centers only {closest:.6g} apart (separation {result.separation:.6g})"
            )
    if result.maximal and result.eligible_indices:
        elig = np.asarray(result.eligible_indices, dtype=np.intp)
        if idx.size == 0:
            problems.append("empty packing over a nonempty eligible set")
        else:
            gaps = pool.distances[np.ix_(elig, idx)].min(axis=1)
            uncovered = elig[gaps > result.separation]
            if uncovered.size:
                problems.append(f"not maximal: {uncovered.size} eligible elements uncovered")
    return problems


def exact_packing_number(
    pool: CandidatePool,
    separation: float,
    center: Center | None = None,
    radius: float | None = None,
) -> int:
    """
    Maximum packing cardinality by branch and bound (pools of <= 20 elements).

    Raises:
        DomainError: If more than 20 elements are eligible
    """
    if center is None:
        elig = list(range(len(pool)))
    else:
        if radius is None:
            raise DomainError("A restricted packing needs a radius")
        elig = [int(i) for i in np.flatnonzero(pool.distances_to(center) <= radius)]
    if len(elig) > EXACT_PACKING_LIMIT:
        raise DomainError(
            f"exact packing is limited to {EXACT_PACKING_LIMIT} elements, got {len(elig)}"
        )
    conflict = pool.distances <= separation
    best = 0

    def search(candidates: list[int], size: int) -> None:
        nonlocal best
        if size + len(candidates) <= best:
            return
        if not candidates:
            best = size
            return
        head, rest = candidates[0], candidates[1:]
        search([j for j in rest if not conflict[head, j]], size + 1)
        search(rest, size)

    search(elig, 0)
    return best


# ---------------------------------------------------------------------------
# Entropy estimates
# ---------------------------------------------------------------------------


def _check_grid(spec: ClassSpec, pool: CandidatePool) -> None:
    grid = spec.grid_size
    if grid is not None and grid != pool.m:
        raise DimensionError(f"Spec uses m={grid}, pool has m={pool.m}")


def global_entropy_estimate(pool: CandidatePool, epsilon: float, c: float = 1.0) -> EntropyEstimate:
    """log of a greedy packing of the whole pool at epsilon / c."""
    packing = greedy_maximal_packing(pool, epsilon / c)
    return EntropyEstimate(
        epsilon=epsilon, c=c, log_count=packing.log_count, mode=EntropyMode.GLOBAL
    )


def local_entropy_estimate(
    spec: ClassSpec,
    epsilon: float,
    c: float,
    pool: CandidatePool,
    centers: Sequence[Center],
    mode: EntropyMode = EntropyMode.LOCAL_SUP,
) -> EntropyEstimate:
    """
    max over centers of log |packing of B(center, epsilon) at epsilon / c|.

    The sup over the class is replaced by a max over ``centers``; the first
    center attaining the max is recorded.
    """
    if c <= 1.0:
        raise DomainError(f"c must exceed 1, got {c}")
    if not centers:
        raise DomainError("At least one center is required")
    _check_grid(spec, pool)
    best_log, best_center = -1.0, 0
    for i, center in enumerate(centers):
        packing = greedy_maximal_packing(pool, epsilon / c, center=center, radius=epsilon)
        if packing.log_count > best_log:
            best_log, best_center = packing.log_count, i
    return EntropyEstimate(
        epsilon=epsilon,
        c=c,
        log_count=max(best_log, 0.0),
        mode=mode,
        center_used=best_center,
    )


def adaptive_local_entropy(
    spec: ClassSpec,
    theta: Center,
    epsilon: float,
    c: float,
    pool: CandidatePool,
) -> EntropyEstimate:
    """Local entropy at the single center theta (no sup)."""
    return local_entropy_estimate(
        spec, epsilon, c, pool, [theta], mode=EntropyMode.ADAPTIVE
    )


def contract_packing(
    theta: GridDensity,
    eps: float,
    eps_prime: float,
    densities: Sequence[GridDensity],
    c: float | None = None,
) -> list[GridDensity]:
    """
    Map a local packing at (eps, eps/c) to one at (eps', eps'/c).

    Each g_j goes to theta(1 - eps'/eps) + (eps'/eps) g_j, which scales every
    distance by eps'/eps and stays in any convex class holding theta and g_j.

    Args:
        theta: Ball center
        eps: Radius of the original ball
        eps_prime: Target radius, 0 < eps' <= eps
        densities: The packing g_1..g_M
        c: Scale constant; when given, pairwise separation > eps/c is checked

    Raises:
        ContractError: If a precondition fails
    """
    if not 0.0 < eps_prime <= eps:
        raise ContractError(f"need 0 < eps' <= eps, got eps={eps}, eps'={eps_prime}")
    for j, g in enumerate(densities):
        dist = l2_distance(g, theta)
        if dist > eps + INEQUALITY_SLACK:
            raise ContractError(f"g_{j} lies {dist:.6g} from theta, outside radius {eps}")
    if c is not None and len(densities) > 1:
        vals = np.vstack([g.values for g in densities])
        dist = l2_matrix(vals)
        np.fill_diagonal(dist, np.inf)
        if float(dist.min()) <= eps / c:
            raise ContractError(f"densities are not {eps / c:.6g}-separated")
    if eps_prime == eps:
        return list(densities)
    ratio = eps_prime / eps
    return [convex_combine(g, theta, ratio) for g in densities]


class EntropyCurve:
    """
    Nonincreasing step function epsilon -> log packing count.

    Raw estimates on a grid of radii are fitted by isotonic (nonincreasing)
    regression. Between grid radii the curve takes the value at the next
    larger radius; beyond the grid it is flat.
    """

    def __init__(self, epsilons: ArrayLike, log_counts: ArrayLike) -> None:
        eps = np.asarray(epsilons, dtype=float)
        raw = np.asarray(log_counts, dtype=float)
        if eps.shape != raw.shape or eps.ndim != 1 or eps.size == 0:
            raise DimensionError("epsilons and log_counts must be matching 1-D arrays")
        if np.any(eps <= 0.0):
            raise DomainError("radii must be positive")
        order = np.argsort(eps, kind="stable")
        self._eps = eps[order]
        self._raw = raw[order]
        fitted = isotonic_regression(self._raw, increasing=False).x
        self._fitted = np.maximum(np.asarray(fitted, dtype=float), 0.0)

    @classmethod
    def from_estimates(cls, estimates: Sequence[EntropyEstimate]) -> "EntropyCurve":
        return cls([e.epsilon for e in estimates], [e.log_count for e in estimates])

    @property
    def epsilons(self) -> NDArray[np.float64]:
        return self._eps

    @property
    def raw(self) -> NDArray[np.float64]:
        return self._raw

    @property
    def fitted(self) -> NDArray[np.float64]:
        return self._fitted

    def __call__(self, epsilon: float) -> float:
        i = int(np.searchsorted(self._eps, epsilon, side="left"))
        return float(self._fitted[min(i, self._fitted.size - 1)])

    def rows(self) -> list[tuple[float, float, float]]:
        """(epsilon, raw, monotone) triples."""
        return [
            (float(e), float(r), float(f))
            for e, r, f in zip(self._eps, self._raw, self._fitted, strict=True)
        ]

    def __repr__(self) -> str:
        return f"EntropyCurve(points={self._eps.size})"


@dataclass(frozen=True)
class EntropyProfile:
    """Entropy estimates over a radius grid in each mode."""

    estimates: tuple[EntropyEstimate, ...]
    curves: dict[EntropyMode, EntropyCurve] = field(default_factory=dict)

    def curve(self, mode: EntropyMode) -> EntropyCurve:
        return self.curves[mode]


def entropy_profile(
    spec: ClassSpec,
    eps_list: Sequence[float],
    c: float,
    pool: CandidatePool,
    centers: Sequence[Center],
    theta: Center = 0,
) -> EntropyProfile:
    """
    Global, local-sup and adaptive estimates for every radius.

    Args:
        spec: Class the pool was drawn from
        eps_list: Radii
        c: Scale constant (> 1)
        pool: Candidate pool
        centers: Centers for the local sup
        theta: Center for the adaptive mode (default: first pool element)
    """
    rows: list[EntropyEstimate] = []
    by_mode: dict[EntropyMode, list[EntropyEstimate]] = {mode: [] for mode in EntropyMode}
    for eps in eps_list:
        for est in (
            global_entropy_estimate(pool, eps, c),
            local_entropy_estimate(spec, eps, c, pool, centers),
            adaptive_local_entropy(spec, theta, eps, c, pool),
        ):
            rows.append(est)
            by_mode[est.mode].append(est)
    curves = {mode: EntropyCurve.from_estimates(ests) for mode, ests in by_mode.items()}
    return EntropyProfile(estimates=tuple(rows), curves=curves)


# ---------------------------------------------------------------------------
# Critical radii
# ---------------------------------------------------------------------------


def _bisect_largest(feasible: Callable[[float], bool], upper: float) -> float:
    """Largest eps in (0, upper] with feasible(eps), for a feasible set (0, eps*]."""
    if feasible(upper):
        return upper
    lo, hi = 0.0, upper
    for _ in range(BISECTION_ITERATIONS):
        if hi - lo <= BISECTION_RTOL * hi and lo > 0.0:
            break
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            lo = mid
        else:
            hi = mid
    return lo


def solve_critical_epsilon(
    n: int,
    spec: ClassSpec,
    c: float,
    entropy_fn: EntropyFunction,
    upper: float | None = None,
) -> float:
    """
    sup{eps : n eps^2 <= entropy(eps)} over (0, upper].

    ``upper`` defaults to the class diameter bound. Returns 0 when no
    positive radius qualifies.
    """
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    d = diameter_upper_bound(spec.bounds) if upper is None else upper
    eps_star = _bisect_largest(lambda eps: n * eps * eps <= entropy_fn(eps), d)
    logger.debug("critical radius n=%d c=%g: %.6g", n, c, eps_star)
    return eps_star


def lower_bound_condition(n: int, epsilon: float, alpha: float, entropy_value: float) -> bool:
    """Whether entropy > 2 n eps^2 / alpha + 2 log 2 (strict)."""
    if alpha <= 0.0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    return entropy_value > 2.0 * n * epsilon**2 / alpha + 2.0 * math.log(2.0)


def lower_bound_radius(
    n: int,
    alpha: float,
    c: float,
    entropy_fn: EntropyFunction,
    upper: float,
) -> LowerBound:
    """Largest radius in (0, upper] meeting lower_bound_condition (0 if none)."""
    eps = _bisect_largest(
        lambda e: lower_bound_condition(n, e, alpha, entropy_fn(e)), upper
    )
    return LowerBound(n=n, epsilon=eps, c=c)


def global_local_gap_check(
    spec: ClassSpec,
    epsilon: float,
    c: float,
    pool: CandidatePool,
    centers: Sequence[Center] | None = None,
    slack: float = 0.0,
    exact: bool | None = None,
) -> GapReport:
    """
    Compare log M(eps/c) - log M(eps) <= log M_loc(eps, c) <= log M(eps/c).

    Pools of at most EXACT_PACKING_LIMIT elements use exact packing numbers,
    under which both inequalities are theorems on the pool. Larger pools use
    the raw greedy counts; the local term also counts the fine centers in
    each coarse ball, which are themselves a local packing.

    Args:
        centers: Centers for the local sup (default: every pool element)
        exact: Force exact (True) or greedy (False) counts
    """
    _check_grid(spec, pool)
    all_centers: list[Center] = list(centers) if centers is not None else list(range(len(pool)))
    if exact is None:
        exact = len(pool) <= EXACT_PACKING_LIMIT

    if exact:
        log_fine = math.log(exact_packing_number(pool, epsilon / c))
        log_coarse = math.log(exact_packing_number(pool, epsilon))
        log_local = max(
            math.log(max(exact_packing_number(pool, epsilon / c, ctr, epsilon), 1))
            for ctr in all_centers
        )
    else:
        fine = greedy_maximal_packing(pool, epsilon / c)
        coarse = greedy_maximal_packing(pool, epsilon)
        log_fine, log_coarse = fine.log_count, coarse.log_count
        log_local = local_entropy_estimate(spec, epsilon, c, pool, all_centers).log_count
        fine_idx = np.asarray(fine.center_indices, dtype=np.intp)
        for i in coarse.center_indices:
            inside = int(np.count_nonzero(pool.distances[i, fine_idx] <= epsilon))
            if inside:
                log_local = max(log_local, math.log(inside))

    return GapReport(
        epsilon=epsilon,
        c=c,
        log_global_fine=log_fine,
        log_global_coarse=log_coarse,
        log_local=log_local,
        slack=slack,
        exact=exact,
    )
