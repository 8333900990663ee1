"""
Immutable data models for density estimation experiments.

These are pure data containers - validation only, no estimation logic.

They represent the INPUTS and OUTPUTS of the engines: densities on a grid,
packings, entropy estimates, sieve trajectories and Monte Carlo reports.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import numpy as np
from numpy.typing import ArrayLike, NDArray

from sievelab.core.errors import DimensionError, DomainError, NormalizationError

# Tolerances shared across the package
NORMALIZATION_TOL = 1e-9
INEQUALITY_SLACK = 1e-12
MEMBERSHIP_TOL = 1e-9

SCHEMA_VERSION = "v1"


def cell_index(points: ArrayLike, m: int) -> NDArray[np.intp]:
    """Map points of [0, 1] to grid cells.

    Cells are right-closed, (i/m, (i+1)/m]; x = 0 belongs to the first cell
    and x = 1 to the last.

    Args:
        points: Sample points in [0, 1]
        m: Number of grid cells

    Returns:
        Integer array of cell indices in [0, m-1]
    """
    x = np.asarray(points, dtype=float)
    if np.any((x < 0.0) | (x > 1.0)) or not np.all(np.isfinite(x)):
        raise DomainError("sample points must lie in [0, 1]")
    idx = np.ceil(x * m).astype(np.intp) - 1
    return np.clip(idx, 0, m - 1)


def cell_counts(points: ArrayLike, m: int) -> NDArray[np.int64]:
    """Histogram of points over the m grid cells (same cell rule as cell_index)."""
    return np.bincount(cell_index(points, m), minlength=m).astype(np.int64)


@dataclass(frozen=True)
class BoundsSpec:
    """Lower and upper density bounds of the ambient class F^[alpha, beta]."""

    alpha: float
    beta: float

    def __post_init__(self) -> None:
        """Validate 0 <= alpha < beta < inf."""
        if not (np.isfinite(self.alpha) and np.isfinite(self.beta)):
            raise DomainError(f"Bounds must be finite, got ({self.alpha}, {self.beta})")
        if not 0.0 <= self.alpha < self.beta:
            raise DomainError(
                f"Bounds must satisfy 0 <= alpha < beta, got ({self.alpha}, {self.beta})"
            )

    def require_positive(self) -> None:
        """Raise unless alpha > 0 (needed for KL and the sieve constants)."""
        if self.alpha <= 0.0:
            raise DomainError(
                f"alpha must be strictly positive here, got alpha={self.alpha}"
            )

    def to_dict(self) -> dict[str, float]:
        return {"alpha": self.alpha, "beta": self.beta}


@dataclass(frozen=True, eq=False)
class GridDensity:
    """
    Piecewise-constant density on a uniform grid of m cells over [0, 1].

    ``values[i]`` is the density on cell i under normalised Lebesgue measure,
    so the integral is ``values.mean()``. The array is copied and frozen on
    construction.
    """

    values: NDArray[np.float64]

    def __post_init__(self) -> None:
        """Copy, freeze and validate the values."""
        arr = np.array(self.values, dtype=float)
        if arr.ndim != 1 or arr.size == 0:
            raise DimensionError(f"Expected a non-empty 1-D array, got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise DomainError("Density values must be finite")
        mass = float(arr.mean())
        if abs(mass - 1.0) > NORMALIZATION_TOL:
            raise NormalizationError(f"Density integrates to {mass!r}, expected 1")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @classmethod
    def from_values(cls, values: ArrayLike, normalize: bool = False) -> "GridDensity":
        """Build a density, optionally rescaling values to integrate to one."""
        arr = np.asarray(values, dtype=float)
        if normalize:
            total = arr.mean()
            if total <= 0.0:
                raise NormalizationError("Cannot normalise values with mean <= 0")
            arr = arr / total
        return cls(arr)

    @property
    def m(self) -> int:
        """Number of grid cells."""
        return int(self.values.size)

    @property
    def midpoints(self) -> NDArray[np.float64]:
        """Cell midpoints (i + 1/2)/m."""
        return (np.arange(self.m) + 0.5) / self.m

    @property
    def masses(self) -> NDArray[np.float64]:
        """Probability mass of each cell."""
        return self.values / self.m

    def evaluate(self, points: ArrayLike) -> NDArray[np.float64]:
        """Density value at each point (value of the containing cell)."""
        return self.values[cell_index(points, self.m)]

    def sample(self, n: int, rng: np.random.Generator) -> NDArray[np.float64]:
        """
        Draw n points by inverse-CDF sampling.

        A uniform u selects the cell through the cumulative cell masses; a
        second uniform places the point inside the cell. Points land in
        (i/m, (i+1)/m], matching the right-closed cell convention.
        """
        if n < 0:
            raise DomainError(f"n must be nonnegative, got {n}")
        if np.any(self.values < 0.0):
            raise DomainError("cannot sample from a density with negative values")
        cdf = np.cumsum(self.masses)
        cdf /= cdf[-1]
        u = rng.random(n)
        idx = np.minimum(np.searchsorted(cdf, u, side="right"), self.m - 1)
        v = rng.random(n)
        return (idx + 1.0 - v) / self.m

    def to_dict(self) -> dict[str, Any]:
        """Serialise as {"m": int, "values": [float]}."""
        return {"m": self.m, "values": [float(v) for v in self.values]}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "GridDensity":
        values = data["values"]
        if "m" in data and int(data["m"]) != len(values):
            raise DimensionError(
                f"Declared m={data['m']} but got {len(values)} values"
            )
        return cls(np.asarray(values, dtype=float))

    def __len__(self) -> int:
        return self.m

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GridDensity):
            return NotImplemented
        return bool(np.array_equal(self.values, other.values))

    def __hash__(self) -> int:
        return hash(self.values.tobytes())

    def __repr__(self) -> str:
        lo, hi = float(self.values.min()), float(self.values.max())
        return f"GridDensity(m={self.m}, range=[{lo:.4g}, {hi:.4g}])"


@dataclass(frozen=True)
class EquivalenceConstants:
    """Constants of the KL / squared-L2 equivalence for given bounds."""

    h_of_ratio: float  # h(beta/alpha)
    c_ab: float  # h(beta/alpha) / beta
    K_ab: float  # beta / (alpha^2 c_ab)

    def __post_init__(self) -> None:
        if min(self.h_of_ratio, self.c_ab, self.K_ab) <= 0.0:
            raise DomainError("Equivalence constants must be strictly positive")


@dataclass(frozen=True)
class MembershipReport:
    """
    Result of a class membership test.

    ``slacks`` maps constraint name to (allowed - observed); a constraint is
    satisfied when its slack is >= -tolerance.
    """

    variant: str
    slacks: dict[str, float]
    tolerance: float = MEMBERSHIP_TOL

    is_member: bool = field(init=False)

    def __post_init__(self) -> None:
        ok = all(s >= -self.tolerance for s in self.slacks.values())
        object.__setattr__(self, "is_member", ok)

    @property
    def violated(self) -> list[str]:
        """Names of violated constraints."""
        return [k for k, s in self.slacks.items() if s < -self.tolerance]

    def __bool__(self) -> bool:
        return self.is_member


@dataclass(frozen=True, eq=False)
class GramMatrix:
    """Gram matrix G_ij = mean(f_i f_j) of mixture components."""

    matrix: NDArray[np.float64]
    min_eigenvalue: float

    @property
    def positive_definite(self) -> bool:
        return self.min_eigenvalue > 0.0

    @property
    def k(self) -> int:
        return int(self.matrix.shape[0])


@dataclass(frozen=True)
class PackingResult:
    """A greedy epsilon-packing of (a ball in) a candidate pool."""

    center_indices: tuple[int, ...]
    separation: float
    maximal: bool = True
    radius: float | None = None  # None = unrestricted
    eligible_indices: tuple[int, ...] = ()  # pool elements inside the ball

    @property
    def size(self) -> int:
        return len(self.center_indices)

    @property
    def eligible(self) -> int:
        return len(self.eligible_indices)

    @property
    def log_count(self) -> float:
        """Natural log of the packing size (0 for an empty packing)."""
        return float(np.log(self.size)) if self.size else 0.0


@dataclass(frozen=True)
class GapReport:
    """Global/local entropy sandwich at one (epsilon, c)."""

    epsilon: float
    c: float
    log_global_fine: float  # log M(eps / c)
    log_global_coarse: float  # log M(eps)
    log_local: float  # log M_loc(eps, c)
    slack: float = 0.0
    exact: bool = False  # exact packing numbers rather than greedy counts

    @property
    def lower_holds(self) -> bool:
        """log M(eps/c) - log M(eps) <= log M_loc(eps, c)."""
        return (
            self.log_global_fine - self.log_global_coarse
            <= self.log_local + self.slack + INEQUALITY_SLACK
        )

    @property
    def upper_holds(self) -> bool:
        """log M_loc(eps, c) <= log M(eps/c)."""
        return self.log_local <= self.log_global_fine + self.slack + INEQUALITY_SLACK

    @property
    def holds(self) -> bool:
        return self.lower_holds and self.upper_holds


@dataclass(frozen=True)
class LowerBound:
    """Largest radius meeting the packing lower-bound condition."""

    n: int
    epsilon: float
    c: float

    @property
    def risk_lower_bound(self) -> float:
        """Implied minimax lower bound eps^2 / (8 c^2)."""
        return self.epsilon**2 / (8.0 * self.c**2)


class EntropyMode(Enum):
    """How an entropy estimate was obtained."""

    GLOBAL = "global"
    LOCAL_SUP = "local-sup"
    ADAPTIVE = "adaptive"


@dataclass(frozen=True)
class EntropyEstimate:
    """A (lower) estimate of a log packing number."""

    epsilon: float
    c: float
    log_count: float
    mode: EntropyMode
    center_used: int | None = None

    def __post_init__(self) -> None:
        if self.log_count < 0:
            raise DomainError(f"log_count must be >= 0, got {self.log_count}")

    def to_row(self) -> list[Any]:
        """CSV row: epsilon,c,mode,log_count,center_index."""
        center = "" if self.center_used is None else self.center_used
        return [self.epsilon, self.c, self.mode.value, self.log_count, center]


@dataclass(frozen=True)
class SieveConstants:
    """
    Constants driving the multistage sieve.

    ``L`` is the Bernstein constant L(alpha, beta, C); ``L_schedule`` is the
    value used by the epsilon_J schedule (equal to L unless overridden).
    """

    c: float
    C: float
    c_ab: float
    K_ab: float
    L: float
    d: float
    bounds: BoundsSpec
    L_schedule: float = 0.0

    def __post_init__(self) -> None:
        if self.L_schedule <= 0.0:
            object.__setattr__(self, "L_schedule", self.L)

    def to_dict(self) -> dict[str, float]:
        return {
            "c": self.c,
            "C": self.C,
            "c_ab": self.c_ab,
            "K_ab": self.K_ab,
            "L": self.L,
            "L_schedule": self.L_schedule,
            "d": self.d,
            "alpha": self.bounds.alpha,
            "beta": self.bounds.beta,
        }


@dataclass(frozen=True)
class SieveLevel:
    """One descent step of the sieve: packing around node, selected child."""

    level: int
    node_index: int
    selected_index: int
    packing_size: int
    ties: int
    radius: float
    separation: float

    def to_row(self) -> list[Any]:
        """CSV row: level,selected_index,packing_size,ties,radius,separation."""
        return [
            self.level,
            self.selected_index,
            self.packing_size,
            self.ties,
            self.radius,
            self.separation,
        ]


class StopReason(Enum):
    """Why a sieve traversal ended."""

    DEPTH = "depth"
    ADAPTIVE_CONDITION = "adaptive-condition"
    BUDGET = "budget"
    EMPTY_PACKING = "empty-packing"
    SINGLE_MEMBER = "single-member"  # the pool holds only the root


@dataclass(frozen=True)
class SieveTrace:
    """
    Full trajectory of one sieve run, root first.

    ``path`` holds pool indices of the visited nodes; ``levels`` the descent
    steps between them (len(levels) == len(path) - 1).
    """

    path: tuple[int, ...]
    levels: tuple[SieveLevel, ...]
    J_bar: int
    epsilon_schedule: tuple[float, ...]
    constants: SieveConstants
    stop_reason: StopReason = StopReason.DEPTH
    adaptive: bool = False

    def __post_init__(self) -> None:
        if len(self.levels) != len(self.path) - 1:
            raise ValueError(
                f"Trace has {len(self.path)} nodes but {len(self.levels)} levels"
            )

    @property
    def depth(self) -> int:
        """Number of nodes actually visited."""
        return len(self.path)

    @property
    def final_index(self) -> int:
        return self.path[-1]

    @property
    def truncated(self) -> bool:
        return self.stop_reason is StopReason.EMPTY_PACKING

    def to_rows(self) -> list[list[Any]]:
        return [lvl.to_row() for lvl in self.levels]

    def to_dict(self) -> dict[str, Any]:
        return {
            "J_bar": self.J_bar,
            "depth": self.depth,
            "adaptive": self.adaptive,
            "stop_reason": self.stop_reason.value,
            "path": list(self.path),
            "epsilon_schedule": list(self.epsilon_schedule),
            "constants": self.constants.to_dict(),
            "levels": [
                {
                    "level": lvl.level,
                    "node_index": lvl.node_index,
                    "selected_index": lvl.selected_index,
                    "packing_size": lvl.packing_size,
                    "ties": lvl.ties,
                    "radius": lvl.radius,
                    "separation": lvl.separation,
                }
                for lvl in self.levels
            ],
        }


@dataclass(frozen=True)
class RiskRow:
    """Monte Carlo risk at one sample size."""

    n: int
    replicates: int
    mean: float  # mean squared L2 loss
    stderr: float
    kl_mean: float
    hellinger_mean: float  # mean squared Hellinger loss
    mean_depth: float

    def __post_init__(self) -> None:
        if self.mean < 0:
            raise DomainError(f"Risk must be nonnegative, got {self.mean}")


@dataclass(frozen=True)
class RiskSweepReport:
    """Risk as a function of n with a fitted log-log slope."""

    variant: str
    rows: tuple[RiskRow, ...]
    slope: float
    intercept: float
    slope_stderr: float
    half_width: float
    theoretical_exponent: float
    seed: int
    pool_size: int
    pool_resolution: float
    limited_by: tuple[str, ...] = ()  # reasons the pool, not n, sets the risk
    losses: tuple[tuple[int, int, float], ...] = ()  # (n, replicate, loss)

    @property
    def slope_gap(self) -> float:
        """Fitted slope minus the theoretical exponent."""
        return self.slope - self.theoretical_exponent

    @property
    def pool_limited(self) -> bool:
        """True when any pool-limit diagnostic fired."""
        return bool(self.limited_by)


@dataclass(frozen=True)
class ConcentrationReport:
    """Empirical exceedance frequency against its theoretical bound."""

    kind: str  # "bernstein" or "packing-mle"
    n: int
    delta: float
    C: float
    L: float
    frequency: float
    bound: float
    replicates: int

    def __post_init__(self) -> None:
        if not 0.0 <= self.frequency <= 1.0:
            raise DomainError(f"Frequency must lie in [0, 1], got {self.frequency}")

    @property
    def stderr(self) -> float:
        """Binomial standard error of the frequency."""
        if self.replicates == 0:
            return 0.0
        p = self.frequency
        return float(np.sqrt(p * (1.0 - p) / self.replicates))

    @property
    def passed(self) -> bool:
        """frequency <= bound + 3 standard errors."""
        return self.frequency <= self.bound + 3.0 * self.stderr


@dataclass(frozen=True)
class PropertyResult:
    """Outcome of one property suite."""

    name: str
    checked: int
    violations: int
    worst_slack: float
    details: str = ""

    @property
    def passed(self) -> bool:
        return self.violations == 0


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of every property suite in a verify run."""

    results: tuple[PropertyResult, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_dict(self) -> dict[str, Any]:
        return {
            "passed": self.passed,
            "suites": [
                {
                    "name": r.name,
                    "passed": r.passed,
                    "checked": r.checked,
                    "violations": r.violations,
                    "worst_slack": r.worst_slack,
                    "details": r.details,
                }
                for r in self.results
            ],
        }
