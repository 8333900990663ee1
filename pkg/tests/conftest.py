"""
Pytest Configuration and Shared Test Fixtures.

Reusable densities, class specs, pools and sieve constants for the test
files. Pools and estimators are small (m <= 64, a few dozen members) so the
default run stays fast; full-size Monte Carlo runs carry the ``slow`` marker.

=== WHEN TO USE EACH FIXTURE ===

   BOUNDS FIXTURES:
   - Use `bounds` for the default ambient class F^[0.5, 2]
   - Use `wide_bounds` when a density has to touch zero (alpha = 0)

   DENSITY FIXTURES:
   - Use `uniform` / `sine_pair` for closed-form distances
   - Use `line_pool` when exact pairwise distances matter (packings)

   CLASS SPEC FIXTURES:
   - Use `bv_spec`, `quad_spec`, `lip_spec`, `mix_spec` for class-specific tests
   - Use `example_specs` to run a check over every bounded class

   POOL / CONSTANT FIXTURES:
   - Use `bv_pool` for a sampled pool, `constants` for the default c = 14
   - Use `bv_estimator` for an end-to-end sieve on a small pool

   CONFIG FIXTURES:
   - Use `smoke_config` for CLI-sized runs, `tiny_verify_config` for a fast verify

=== AVAILABLE FIXTURES ===
"""

import json

import numpy as np
import pytest

from sievelab.core.builder import SieveBuilder
from sievelab.core.config import RunConfig
from sievelab.core.models import BoundsSpec, GridDensity
from sievelab.engines.classes import (
    BVSpec,
    ConvMixSpec,
    LipschitzSpec,
    QuadSpec,
    sin_family,
    uniform_density,
)
from sievelab.engines.packing import CandidatePool
from sievelab.engines.sieve import compute_constants

# ============================================================================
# BOUNDS FIXTURES
# ============================================================================


@pytest.fixture
def bounds() -> BoundsSpec:
    """
    The default ambient bounds [0.5, 2].

    Use this when: A test needs the standard ambient class.
    Example: Equivalence constants, sieve constants, samplers.
    """
    return BoundsSpec(alpha=0.5, beta=2.0)


@pytest.fixture
def wide_bounds() -> BoundsSpec:
    """
    Bounds with alpha = 0.

    Use this when: Densities may vanish on some cells (mixture lift).
    """
    return BoundsSpec(alpha=0.0, beta=2.0)


# ============================================================================
# DENSITY FIXTURES
# ============================================================================


@pytest.fixture
def uniform() -> GridDensity:
    """The uniform density on 64 cells."""
    return uniform_density(64)


@pytest.fixture
def sine_pair() -> tuple[GridDensity, GridDensity]:
    """
    sin_family members j = 1 and j = 2 on 64 cells (alpha = 0.5).

    Use this when: You need two bounded densities a known distance apart.
    """
    return sin_family(1, 0.5, 64), sin_family(2, 0.5, 64)


def _line_densities(steps: list[float], m: int = 8) -> list[GridDensity]:
    """1 + t*p for an alternating +/-1 pattern p, so ||f_s - f_t|| = |s - t|."""
    p = np.tile([1.0, -1.0], m // 2)
    return [GridDensity(1.0 + t * p) for t in steps]


@pytest.fixture
def line_pool() -> CandidatePool:
    """
    Six densities on a line at t = 0, 0.1, ..., 0.5.

    Use this when: Exact pairwise distances are needed (distance = |s - t|).
    Example: Greedy packings, exact packing numbers, entropy curves.
    """
    return CandidatePool(tuple(_line_densities([0.0, 0.1, 0.2, 0.3, 0.4, 0.5])))


# ============================================================================
# CLASS SPEC FIXTURES
# ============================================================================


@pytest.fixture
def bv_spec(bounds) -> BVSpec:
    """Total variation at most 1.5."""
    return BVSpec(zeta=1.5, bounds=bounds)


@pytest.fixture
def quad_spec(bounds) -> QuadSpec:
    """Second differences at most 8."""
    return QuadSpec(gamma=8.0, bounds=bounds)


@pytest.fixture
def lip_spec(bounds) -> LipschitzSpec:
    """(1, 2, 3)-Lipschitz densities."""
    return LipschitzSpec(gamma=1.0, q=2.0, psi=3.0, bounds=bounds)


@pytest.fixture
def mix_spec(bounds) -> ConvMixSpec:
    """
    Mixtures of three sine components on 64 cells.

    Use this when: You need a finite-dimensional class with a parametric rate.
    """
    return ConvMixSpec.from_sine(k=3, m=64, sine_alpha=0.5, bounds=bounds)


@pytest.fixture
def example_specs(bv_spec, quad_spec, lip_spec, mix_spec) -> list:
    """Every bounded example class."""
    return [lip_spec, bv_spec, quad_spec, mix_spec]


# ============================================================================
# POOL AND CONSTANT FIXTURES
# ============================================================================


@pytest.fixture
def bv_pool(bv_spec) -> CandidatePool:
    """
    30 sampled BV members on 32 cells (seed 3).

    Use this when: A test needs a realistic pool but not a specific geometry.
    """
    return CandidatePool.from_spec(bv_spec, size=30, seed=3, m=32)


@pytest.fixture
def constants(bounds):
    """Sieve constants at c = 14 with the desk-scale schedule constant L = 25."""
    return compute_constants(bounds, 14.0, likelihood_constant=25.0)


@pytest.fixture
def bv_estimator(bv_spec):
    """
    A built sieve estimator over a small BV pool.

    Use this when: You need estimate() / trace output end to end.
    """
    return (
        SieveBuilder(bv_spec)
        .with_grid(32)
        .with_pool(size=30, seed=3)
        .with_scale(14.0)
        .with_likelihood_constant(25.0)
        .with_depth(6)
        .with_centers(8)
        .build()
    )


# ============================================================================
# RNG FIXTURES
# ============================================================================


@pytest.fixture
def rng() -> np.random.Generator:
    """A seeded generator; every test gets a fresh one."""
    return np.random.default_rng(12345)


# ============================================================================
# CONFIG FIXTURES
# ============================================================================


@pytest.fixture
def smoke_config() -> RunConfig:
    """The bundled ``smoke`` preset, validated."""
    return RunConfig.quick().validate()


@pytest.fixture
def tiny_verify_config(tmp_path) -> str:
    """
    Path of a JSON config that makes ``verify`` finish in seconds.

    Use this when: Driving the verify command through the CLI runner.
    """
    path = tmp_path / "tiny.json"
    path.write_text(
        json.dumps(
            {
                "class_spec": {"variant": "ambient"},
                "m": 64,
                "pool_size": 20,
                "centers": 4,
                "J_cap": 5,
                "likelihood_constant": 25.0,
                "n_list": [100, 400],
                "epsilon_list": [0.2, 0.8],
                "verify_pairs": 20,
                "verify_grid": 100,
                "verify_closure": 3,
                "verify_contractions": 2,
                "verify_runs": 4,
            }
        )
    )
    return str(path)
