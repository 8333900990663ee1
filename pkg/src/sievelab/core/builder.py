"""
SieveBuilder: the main API for configuring sieve estimators.

The builder gathers the class, the candidate pool and the sieve constants,
then produces a ready ``SieveEstimator``.
"""

import logging
from collections.abc import Sequence

from sievelab.core.config import RunConfig
from sievelab.core.errors import ConfigurationError
from sievelab.core.models import BoundsSpec, GridDensity
from sievelab.engines.classes import DEFAULT_MAX_ATTEMPTS, ClassSpec
from sievelab.engines.packing import CandidatePool
from sievelab.engines.sieve import SieveEstimator, compute_constants

logger = logging.getLogger(__name__)


class SieveBuilder:
    """
    Fluent builder for sieve estimators.

    Usage:
        estimator = (
            SieveBuilder(spec)
            .with_grid(64)
            .with_pool(size=200, seed=7)
            .with_scale(14.0)
            .with_likelihood_constant(25.0)
            .build()
        )
        estimate, trace = estimator.estimate(samples)
    """

    def __init__(self, spec: ClassSpec) -> None:
        self._spec = spec

        # Pool
        self._pool: CandidatePool | None = None
        self._pool_size = 200
        self._seed = 0
        self._m: int | None = spec.grid_size
        self._anchors: list[GridDensity] = []
        self._max_attempts = DEFAULT_MAX_ATTEMPTS

        # Sieve
        self._c = 14.0
        self._likelihood_constant: float | None = None
        self._J_cap = 10
        self._centers = 32
        self._radius_multiplier = 1.0
        self._adaptive = False
        self._budget: int | None = None

    @classmethod
    def from_config(cls, config: RunConfig) -> "SieveBuilder":
        """Builder carrying every sieve setting of a validated RunConfig."""
        builder = cls(config.class_spec_object())
        builder._pool_size = config.pool_size
        builder._seed = config.seed
        builder._m = config.m
        builder._max_attempts = config.max_attempts
        builder._c = config.c
        builder._likelihood_constant = config.likelihood_constant
        builder._J_cap = config.J_cap
        builder._centers = config.centers
        builder._radius_multiplier = config.radius_multiplier
        builder._adaptive = config.adaptive
        builder._budget = config.adaptive_budget
        return builder

    @classmethod
    def from_preset(cls, name: str) -> "SieveBuilder":
        """
        Builder for a bundled preset.

        Raises:
            ConfigurationError: If no preset has that name
        """
        return cls.from_config(RunConfig.from_preset(name).validate())

    # ---- Fluent configuration methods ---
    def with_grid(self, m: int) -> "SieveBuilder":
        """Grid size of sampled pool members (fixed by the components for mixtures)."""
        grid = self._spec.grid_size
        if grid is not None and grid != m:
            raise ConfigurationError(f"Class {self._spec.variant!r} lives on m={grid}, not {m}")
        self._m = m
        return self

    def with_pool(self, size: int = 200, seed: int = 0) -> "SieveBuilder":
        """Sample a pool of ``size`` class members from ``seed``."""
        if size < 1:
            raise ConfigurationError(f"Pool size must be positive, got {size}")
        self._pool_size = size
        self._seed = seed
        self._pool = None
        return self

    def with_candidate_pool(self, pool: CandidatePool) -> "SieveBuilder":
        """Use a prebuilt pool (anchors and sampling settings are ignored)."""
        self._pool = pool
        return self

    def with_anchors(self, anchors: Sequence[GridDensity]) -> "SieveBuilder":
        """Densities placed first in the pool; the first one is the sieve root."""
        self._anchors = list(anchors)
        return self

    def with_scale(self, c: float) -> "SieveBuilder":
        """Local entropy scale c (validated against the Bernstein threshold at build)."""
        self._c = c
        return self

    def with_likelihood_constant(self, value: float | None) -> "SieveBuilder":
        """Override L in the epsilon schedule (None restores the Bernstein constant)."""
        self._likelihood_constant = value
        return self

    def with_depth(self, J_cap: int) -> "SieveBuilder":
        if J_cap < 1:
            raise ConfigurationError(f"J_cap must be positive, got {J_cap}")
        self._J_cap = J_cap
        return self

    def with_centers(self, count: int) -> "SieveBuilder":
        """Number of pool elements used as centers of the local entropy sup."""
        if count < 1:
            raise ConfigurationError(f"Center count must be positive, got {count}")
        self._centers = count
        return self

    def with_radius_multiplier(self, multiplier: float) -> "SieveBuilder":
        if multiplier <= 0:
            raise ConfigurationError("radius multiplier must be positive")
        self._radius_multiplier = multiplier
        return self

    def adaptive(self, enabled: bool = True, budget: int | None = None) -> "SieveBuilder":
        """Choose the depth online instead of solving J_bar up front."""
        self._adaptive = enabled
        if budget is not None:
            self._budget = budget
        return self

    # --- Build ---

    def _build_pool(self) -> CandidatePool:
        if self._pool is not None:
            return self._pool
        return CandidatePool.from_spec(
            self._spec,
            self._pool_size,
            self._seed,
            m=self._m,
            anchors=self._anchors,
            max_attempts=self._max_attempts,
        )

    def build(self) -> SieveEstimator:
        """
        Sample the pool, derive the constants and assemble the estimator.

        The schedule diameter is the smaller of 2 sqrt(beta) and the pool's
        own diameter.

        Raises:
            ConfigurationError: If c misses the Bernstein threshold
        """
        pool = self._build_pool()
        bounds: BoundsSpec = self._spec.bounds
        constants = compute_constants(
            bounds,
            self._c,
            d=pool.diameter if len(pool) > 1 else None,
            likelihood_constant=self._likelihood_constant,
        )
        centers = list(range(min(self._centers, len(pool))))
        logger.info(
            "sieve for %s: pool=%d c=%g L=%.3g d=%.4g adaptive=%s",
            self._spec.variant,
            len(pool),
            constants.c,
            constants.L_schedule,
            constants.d,
            self._adaptive,
        )
        return SieveEstimator(
            self._spec,
            pool,
            constants,
            self._J_cap,
            centers=centers,
            radius_multiplier=self._radius_multiplier,
            adaptive=self._adaptive,
            budget=self._budget,
        )
