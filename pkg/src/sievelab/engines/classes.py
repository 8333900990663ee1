"""
Convex density classes: declarative specs, membership tests and samplers.

Every spec describes a convex subset of the ambient class F^[alpha, beta] on
the unit interval. Membership is decided on the grid (exactly for bounds,
normalisation and total variation; through discrete proxies for the
Lipschitz and second-derivative functionals).

Samplers draw f = 1 + t*p for a zero-mean direction p. Every class
functional used here is homogeneous in t, so the admissible step along p
is known in closed form and t is drawn uniformly below it.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, ClassVar

import numpy as np
from numpy.typing import NDArray

from sievelab.core.errors import (
    ConfigurationError,
    DimensionError,
    DomainError,
    GenerationError,
    ResolutionError,
)
from sievelab.core.models import (
    MEMBERSHIP_TOL,
    BoundsSpec,
    GramMatrix,
    GridDensity,
    MembershipReport,
)
from sievelab.core.registry import get_class_by_alias
from sievelab.engines.divergences import l2_distance
from sievelab.engines.simplex import fit_simplex_weights

logger = logging.getLogger(__name__)

DEFAULT_MAX_ATTEMPTS = 100
MIXTURE_RESIDUAL_TOL = 1e-8
# sin_family needs at least this many cells per period
CELLS_PER_PERIOD = 16


def default_bounds() -> BoundsSpec:
    return BoundsSpec(alpha=0.5, beta=2.0)


def _q_norm(x: NDArray[np.float64], q: float) -> float:
    """L_q norm under normalised Lebesgue measure."""
    ax = np.abs(x)
    if math.isinf(q):
        return float(ax.max())
    return float(np.mean(ax**q) ** (1.0 / q))


def shift_moduli(values: NDArray[np.float64], q: float) -> NDArray[np.float64]:
    """
    ||f(. + s/m) - f||_q for shifts s = 1..m-1.

    Points shifted past 1 take the value of the last cell.
    """
    m = values.size
    idx = np.arange(m)
    out = np.empty(max(m - 1, 0))
    for s in range(1, m):
        out[s - 1] = _q_norm(values[np.minimum(idx + s, m - 1)] - values, q)
    return out


def second_differences(values: NDArray[np.float64]) -> NDArray[np.float64]:
    """m^2 |f_{i+1} - 2 f_i + f_{i-1}|; the end stencils coincide with the first/last interior one."""
    m = values.size
    if m < 3:
        return np.zeros(0)
    return m * m * np.abs(values[2:] - 2.0 * values[1:-1] + values[:-2])


def total_variation(values: NDArray[np.float64]) -> float:
    return float(np.abs(np.diff(values)).sum())


# ---------------------------------------------------------------------------
# Class specs
# ---------------------------------------------------------------------------


class _SpecBase:
    """Shared behaviour of the class specs (not a protocol)."""

    variant: ClassVar[str] = ""
    bounds: BoundsSpec

    @property
    def lower_limit(self) -> float:
        return self.bounds.alpha

    @property
    def upper_limit(self) -> float:
        return self.bounds.beta

    @property
    def grid_size(self) -> int | None:
        """Grid size the spec is tied to (None = any)."""
        return None

    @property
    def rate_exponent(self) -> float:
        """Exponent r of the squared-L2 minimax rate n^r (0 = no uniform rate)."""
        return 0.0

    def functional_slacks(self, values: NDArray[np.float64]) -> dict[str, float]:
        return {}

    def perturbation(self, m: int, rng: np.random.Generator) -> NDArray[np.float64]:
        return rng.standard_normal(m)

    def perturbation_budget(self, p: NDArray[np.float64]) -> float:
        """Largest t for which the class functional of 1 + t*p stays admissible."""
        return math.inf

    def _params(self) -> dict[str, Any]:
        return {}

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {"variant": self.variant}
        data.update(self._params())
        data["bounds"] = [self.bounds.alpha, self.bounds.beta]
        return data


@dataclass(frozen=True)
class AmbientSpec(_SpecBase):
    """The whole class F^[alpha, beta] (not totally bounded)."""

    bounds: BoundsSpec = field(default_factory=default_bounds)

    variant: ClassVar[str] = "ambient"


def _fourier_perturbation(
    m: int, rng: np.random.Generator, decay: float
) -> NDArray[np.float64]:
    modes = max(1, min(16, m // 8))
    x = (np.arange(m) + 0.5) / m
    j = np.arange(1, modes + 1)
    amp = rng.standard_normal(modes) * j ** (-decay)
    phase = rng.uniform(0.0, 2.0 * np.pi, modes)
    waves = np.cos(2.0 * np.pi * j[:, None] * x[None, :] + phase[:, None])
    return np.asarray(amp @ waves)


@dataclass(frozen=True)
class LipschitzSpec(_SpecBase):
    """
    (gamma, q, psi)-Lipschitz densities.

    The shift modulus is checked at grid shifts h = k/m only, so for q < inf
    on a coarse grid membership is a proxy for the continuous condition.
    """

    gamma: float
    q: float
    psi: float
    bounds: BoundsSpec = field(default_factory=default_bounds)

    variant: ClassVar[str] = "lipschitz"

    def __post_init__(self) -> None:
        if self.q < 1.0:
            raise DomainError(f"q must be >= 1, got {self.q}")
        floor = max(1.0 / self.q - 0.5, 0.0)
        if not floor < self.gamma <= 1.0:
            raise DomainError(
                f"gamma must satisfy {floor:g} < gamma <= 1, got {self.gamma}"
            )
        if self.psi <= 1.0:
            raise DomainError(f"psi must exceed 1, got {self.psi}")

    @property
    def upper_limit(self) -> float:
        return min(self.bounds.beta, self.psi)

    @property
    def rate_exponent(self) -> float:
        return -2.0 * self.gamma / (2.0 * self.gamma + 1.0)

    def functional_slacks(self, values: NDArray[np.float64]) -> dict[str, float]:
        m = values.size
        slacks = {"q_norm": self.psi - _q_norm(values, self.q)}
        if m > 1:
            h = np.arange(1, m) / m
            slacks["shift_modulus"] = float(
                np.min(self.psi * h**self.gamma - shift_moduli(values, self.q))
            )
        return slacks

    def perturbation(self, m: int, rng: np.random.Generator) -> NDArray[np.float64]:
        return _fourier_perturbation(m, rng, decay=self.gamma + 0.5)

    def perturbation_budget(self, p: NDArray[np.float64]) -> float:
        m = p.size
        if m < 2:
            return math.inf
        moduli = shift_moduli(p, self.q)
        allowed = self.psi * (np.arange(1, m) / m) ** self.gamma
        active = moduli > 0
        if not np.any(active):
            return math.inf
        return float(np.min(allowed[active] / moduli[active]))

    def _params(self) -> dict[str, Any]:
        q: float | str = "inf" if math.isinf(self.q) else self.q
        return {"gamma": self.gamma, "q": q, "psi": self.psi}


@dataclass(frozen=True)
class BVSpec(_SpecBase):
    """Densities of total variation at most zeta (and sup-norm at most zeta)."""

    zeta: float
    bounds: BoundsSpec = field(default_factory=default_bounds)

    variant: ClassVar[str] = "bv"

    def __post_init__(self) -> None:
        if self.zeta <= 1.0:
            raise DomainError(f"zeta must exceed 1, got {self.zeta}")

    @property
    def upper_limit(self) -> float:
        return min(self.bounds.beta, self.zeta)

    @property
    def rate_exponent(self) -> float:
        return -2.0 / 3.0

    def functional_slacks(self, values: NDArray[np.float64]) -> dict[str, float]:
        return {"variation": self.zeta - total_variation(values)}

    def perturbation(self, m: int, rng: np.random.Generator) -> NDArray[np.float64]:
        if m < 2:
            return np.zeros(m)
        n_breaks = int(rng.integers(1, min(8, m - 1) + 1))
        breaks = np.sort(rng.choice(np.arange(1, m), size=n_breaks, replace=False))
        levels = rng.standard_normal(n_breaks + 1)
        return levels[np.searchsorted(breaks, np.arange(m), side="right")]

    def perturbation_budget(self, p: NDArray[np.float64]) -> float:
        tv = total_variation(p)
        return self.zeta / tv if tv > 0 else math.inf

    def _params(self) -> dict[str, Any]:
        return {"zeta": self.zeta}


@dataclass(frozen=True)
class QuadSpec(_SpecBase):
    """Densities with |f''| <= gamma (grid second differences)."""

    gamma: float
    bounds: BoundsSpec = field(default_factory=default_bounds)

    variant: ClassVar[str] = "quad"

    def __post_init__(self) -> None:
        if self.gamma <= 1.0:
            raise DomainError(f"gamma must exceed 1, got {self.gamma}")

    @property
    def rate_exponent(self) -> float:
        return -4.0 / 5.0

    def functional_slacks(self, values: NDArray[np.float64]) -> dict[str, float]:
        d2 = second_differences(values)
        if d2.size == 0:
            return {}
        return {"curvature": self.gamma - float(d2.max())}

    def perturbation(self, m: int, rng: np.random.Generator) -> NDArray[np.float64]:
        return _fourier_perturbation(m, rng, decay=2.5)

    def perturbation_budget(self, p: NDArray[np.float64]) -> float:
        d2 = second_differences(p)
        peak = float(d2.max()) if d2.size else 0.0
        return self.gamma / peak if peak > 0 else math.inf

    def _params(self) -> dict[str, Any]:
        return {"gamma": self.gamma}


@dataclass(frozen=True)
class ConvMixSpec(_SpecBase):
    """Convex hull of k fixed component densities."""

    components: tuple[GridDensity, ...]
    bounds: BoundsSpec = field(default_factory=default_bounds)

    variant: ClassVar[str] = "convmix"

    def __post_init__(self) -> None:
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        if not comps:
            raise DomainError("A mixture class needs at least one component")
        sizes = {c.m for c in comps}
        if len(sizes) != 1:
            raise DimensionError(f"Mixture components use different grids: {sorted(sizes)}")
        for i, comp in enumerate(comps):
            lo, hi = float(comp.values.min()), float(comp.values.max())
            if lo < self.bounds.alpha - MEMBERSHIP_TOL or hi > self.bounds.beta + MEMBERSHIP_TOL:
                raise DomainError(
                    f"Component {i} leaves the ambient bounds "
                    f"[{self.bounds.alpha}, {self.bounds.beta}]: range [{lo:.4g}, {hi:.4g}]"
                )

    @classmethod
    def from_sine(
        cls, k: int, m: int, sine_alpha: float = 0.5, bounds: BoundsSpec | None = None
    ) -> "ConvMixSpec":
        """Mixtures of sin_family members j = 1..k."""
        comps = tuple(sin_family(j, sine_alpha, m) for j in range(1, k + 1))
        return cls(components=comps, bounds=bounds or default_bounds())

    @property
    def k(self) -> int:
        return len(self.components)

    @property
    def grid_size(self) -> int:
        return self.components[0].m

    @property
    def component_matrix(self) -> NDArray[np.float64]:
        return np.vstack([c.values for c in self.components])

    @property
    def rate_exponent(self) -> float:
        return -1.0

    def functional_slacks(self, values: NDArray[np.float64]) -> dict[str, float]:
        _, residual = fit_simplex_weights(self.component_matrix, values)
        return {"mixture_residual": MIXTURE_RESIDUAL_TOL - residual}

    def _params(self) -> dict[str, Any]:
        return {
            "k": self.k,
            "m": self.grid_size,
            "components": [[float(v) for v in c.values] for c in self.components],
        }


ClassSpec = AmbientSpec | LipschitzSpec | BVSpec | QuadSpec | ConvMixSpec

SPEC_TYPES: dict[str, type] = {
    cls.variant: cls for cls in (AmbientSpec, LipschitzSpec, BVSpec, QuadSpec, ConvMixSpec)
}


def spec_from_dict(data: dict[str, Any], m: int | None = None) -> ClassSpec:
    """
    Build a ClassSpec from its JSON form.

    Args:
        data: Mapping with a "variant" discriminator (name or registry alias)
            and the variant's parameters
        m: Grid size for mixture components given as "sine" (overridden by data["m"])

    Raises:
        ConfigurationError: Unknown variant or missing parameter
    """
    try:
        variant = str(data["variant"]).lower()
        if variant not in SPEC_TYPES and (info := get_class_by_alias(variant)) is not None:
            variant = info.name
        raw_bounds = data.get("bounds", [0.5, 2.0])
        bounds = BoundsSpec(float(raw_bounds[0]), float(raw_bounds[1]))
        if variant == "ambient":
            return AmbientSpec(bounds=bounds)
        if variant == "lipschitz":
            q = data.get("q", 2.0)
            return LipschitzSpec(
                gamma=float(data["gamma"]),
                q=math.inf if q in ("inf", "infinity", None) else float(q),
                psi=float(data["psi"]),
                bounds=bounds,
            )
        if variant == "bv":
            return BVSpec(zeta=float(data["zeta"]), bounds=bounds)
        if variant == "quad":
            return QuadSpec(gamma=float(data["gamma"]), bounds=bounds)
        if variant == "convmix":
            comps = data.get("components", "sine")
            if comps == "sine":
                grid = int(data.get("m", m or 0))
                if grid <= 0:
                    raise ConfigurationError("sine mixture components need a grid size m")
                return ConvMixSpec.from_sine(
                    k=int(data["k"]),
                    m=grid,
                    sine_alpha=float(data.get("sine_alpha", 0.5)),
                    bounds=bounds,
                )
            densities = tuple(GridDensity(np.asarray(c, dtype=float)) for c in comps)
            if "k" in data and int(data["k"]) != len(densities):
                raise ConfigurationError(
                    f"Declared k={data['k']} but {len(densities)} components given"
                )
            return ConvMixSpec(components=densities, bounds=bounds)
    except KeyError as e:
        raise ConfigurationError(f"Class spec is missing parameter {e}") from e
    raise ConfigurationError(
        f"Unknown class variant {data.get('variant')!r}; expected one of {sorted(SPEC_TYPES)}"
    )


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------


def membership(spec: ClassSpec, f: GridDensity) -> MembershipReport:
    """
    Test whether f belongs to the class described by spec.

    Raises:
        DimensionError: If spec is tied to a grid of another size
    """
    grid = spec.grid_size
    if grid is not None and grid != f.m:
        raise DimensionError(f"Spec uses m={grid}, density has m={f.m}")
    values = f.values
    slacks = {
        "normalization": -abs(float(values.mean()) - 1.0),
        "lower": float(values.min()) - spec.lower_limit,
        "upper": spec.upper_limit - float(values.max()),
    }
    slacks.update(spec.functional_slacks(values))
    return MembershipReport(variant=spec.variant, slacks=slacks)


def convex_combine(f: GridDensity, g: GridDensity, kappa: float) -> GridDensity:
    """kappa*f + (1 - kappa)*g."""
    if not 0.0 <= kappa <= 1.0:
        raise DomainError(f"kappa must lie in [0, 1], got {kappa}")
    if f.m != g.m:
        raise DimensionError(f"Grid sizes differ: {f.m} != {g.m}")
    if kappa == 1.0:
        return f
    if kappa == 0.0:
        return g
    return GridDensity(kappa * f.values + (1.0 - kappa) * g.values)


def uniform_density(m: int) -> GridDensity:
    """The uniform density on m cells."""
    if m < 1:
        raise DimensionError(f"m must be positive, got {m}")
    return GridDensity(np.ones(m))


def sin_family(j: int, alpha: float, m: int) -> GridDensity:
    """
    1 + (1 - alpha) sin(2 pi j x) at cell midpoints, renormalised.

    Members for different j are at squared L2 distance (1 - alpha)^2
    (up to quadrature error), so the ambient class is not totally bounded.

    Raises:
        ResolutionError: If m < 16 j
    """
    if j < 1:
        raise DomainError(f"j must be positive, got {j}")
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    if m < CELLS_PER_PERIOD * j:
        raise ResolutionError(
            f"m={m} is too coarse for frequency j={j} (need m >= {CELLS_PER_PERIOD * j})"
        )
    x = (np.arange(m) + 0.5) / m
    values = 1.0 + (1.0 - alpha) * np.sin(2.0 * np.pi * j * x)
    return GridDensity(values / values.mean())


def gram_matrix(spec: ConvMixSpec) -> GramMatrix:
    """G_ij = mean(f_i f_j) with its smallest eigenvalue."""
    if not isinstance(spec, ConvMixSpec):
        raise DomainError(f"Gram matrix needs a mixture spec, got {spec.variant!r}")
    comps = spec.component_matrix
    G = comps @ comps.T / spec.grid_size
    G = 0.5 * (G + G.T)
    return GramMatrix(matrix=G, min_eigenvalue=float(np.linalg.eigvalsh(G).min()))


def _bounds_budget(p: NDArray[np.float64], lo: float, hi: float) -> float:
    budget = math.inf
    top, bottom = float(p.max()), float(p.min())
    if top > 0:
        budget = min(budget, (hi - 1.0) / top)
    if bottom < 0:
        budget = min(budget, (1.0 - lo) / -bottom)
    return budget


def sample_member(
    spec: ClassSpec,
    rng: np.random.Generator,
    m: int | None = None,
    max_attempts: int = DEFAULT_MAX_ATTEMPTS,
) -> GridDensity:
    """
    Draw a member of the class.

    Mixtures use symmetric Dirichlet weights; the other classes perturb the
    uniform density along a random zero-mean direction by a uniformly drawn
    fraction of the largest admissible step.

    Args:
        spec: Class to sample from
        rng: Seeded generator (the only source of randomness)
        m: Grid size (ignored for mixtures, required otherwise)
        max_attempts: Rejections allowed before giving up

    Raises:
        GenerationError: If no member was produced within max_attempts
    """
    if isinstance(spec, ConvMixSpec):
        weights = rng.dirichlet(np.ones(spec.k))
        return GridDensity.from_values(weights @ spec.component_matrix, normalize=True)

    if m is None:
        raise DimensionError(f"A grid size is required to sample from {spec.variant!r}")
    lo, hi = spec.lower_limit, spec.upper_limit
    if not lo <= 1.0 <= hi:
        raise GenerationError(
            f"Class {spec.variant!r} with limits [{lo}, {hi}] contains no density"
        )
    if m == 1:
        return uniform_density(1)

    for attempt in range(1, max_attempts + 1):
        p = spec.perturbation(m, rng)
        p = p - p.mean()
        t_max = min(_bounds_budget(p, lo, hi), spec.perturbation_budget(p))
        if not np.isfinite(t_max) or t_max <= 0.0:
            continue
        t = rng.uniform() * t_max
        candidate = GridDensity(1.0 + t * p)
        report = membership(spec, candidate)
        if report.is_member:
            return candidate
        logger.debug(
            "rejected %s sample (attempt %d): %s", spec.variant, attempt, report.violated
        )

    raise GenerationError(
        f"No {spec.variant!r} member found after {max_attempts} attempts"
    )


def sample_near(
    spec: ClassSpec,
    theta: GridDensity,
    radius: float,
    rng: np.random.Generator,
    max_attempts: int = DEFAULT_MAX_ATTEMPTS,
) -> GridDensity:
    """A member within L2 distance ``radius`` of the member theta (contraction toward theta)."""
    g = sample_member(spec, rng, m=theta.m, max_attempts=max_attempts)
    dist = l2_distance(g, theta)
    if dist == 0.0:
        return g
    kappa = min(1.0, radius * rng.uniform() / dist)
    return convex_combine(g, theta, kappa)
