"""Tests for SieveBuilder."""

import math

import pytest

from sievelab.core.builder import SieveBuilder
from sievelab.core.config import RunConfig
from sievelab.core.errors import ConfigurationError
from sievelab.engines.classes import BVSpec, uniform_density
from sievelab.engines.sieve import SieveEstimator
from sievelab.harness.sampling import sample_iid


def test_build_produces_an_estimator(bv_estimator):
    assert isinstance(bv_estimator, SieveEstimator)
    assert len(bv_estimator.pool) == 30
    assert bv_estimator.pool.m == 32
    assert bv_estimator.constants.L_schedule == 25.0
    assert len(bv_estimator.centers) == 8
    assert bv_estimator.J_cap == 6


def test_diameter_comes_from_the_pool(bv_estimator):
    assert bv_estimator.constants.d == pytest.approx(bv_estimator.pool.diameter)
    assert bv_estimator.constants.d <= 2.0 * math.sqrt(2.0)


def test_builds_are_reproducible(bv_spec):
    def build():
        return SieveBuilder(bv_spec).with_grid(32).with_pool(size=12, seed=4).build()

    assert build().pool.densities == build().pool.densities


def test_anchor_is_the_root(bv_spec, rng):
    anchor = uniform_density(32)
    estimator = (
        SieveBuilder(bv_spec)
        .with_grid(32)
        .with_anchors([anchor])
        .with_pool(size=10, seed=1)
        .with_likelihood_constant(25.0)
        .with_depth(4)
        .build()
    )
    assert estimator.pool[0] == anchor
    _, trace = estimator.estimate(sample_iid(anchor, 50, rng))
    assert trace.path[0] == 0


def test_prebuilt_pool(line_pool):
    from sievelab.engines.classes import AmbientSpec

    estimator = SieveBuilder(AmbientSpec()).with_candidate_pool(line_pool).build()
    assert estimator.pool is line_pool
    assert estimator.constants.d == pytest.approx(0.5)


def test_adaptive_settings(bv_spec):
    estimator = SieveBuilder(bv_spec).with_grid(32).with_pool(size=8).adaptive(budget=5).build()
    assert estimator.adaptive
    assert estimator.budget == 5


def test_builder_validation(bv_spec, mix_spec):
    with pytest.raises(ConfigurationError):
        SieveBuilder(mix_spec).with_grid(32)
    with pytest.raises(ConfigurationError):
        SieveBuilder(bv_spec).with_pool(size=0)
    with pytest.raises(ConfigurationError):
        SieveBuilder(bv_spec).with_depth(0)
    with pytest.raises(ConfigurationError):
        SieveBuilder(bv_spec).with_centers(0)
    with pytest.raises(ConfigurationError):
        SieveBuilder(bv_spec).with_radius_multiplier(-1.0)
    with pytest.raises(ConfigurationError, match="minimal admissible c"):
        SieveBuilder(bv_spec).with_grid(16).with_pool(size=4).with_scale(10.0).build()


def test_mixture_grid_is_inferred(mix_spec):
    estimator = SieveBuilder(mix_spec).with_pool(size=6, seed=2).build()
    assert estimator.pool.m == 64


def test_from_config_carries_settings(smoke_config):
    config = smoke_config.merged({"class_spec": {"variant": "bv", "zeta": 1.5}, "adaptive": True})
    estimator = SieveBuilder.from_config(config).build()
    assert isinstance(estimator.spec, BVSpec)
    assert len(estimator.pool) == config.pool_size
    assert estimator.J_cap == config.J_cap
    assert estimator.adaptive
    assert estimator.constants.L_schedule == config.likelihood_constant


def test_from_preset():
    estimator = SieveBuilder.from_preset("smoke").build()
    assert estimator.spec.variant == "convmix"
    assert len(estimator.pool) == RunConfig.quick().pool_size
    with pytest.raises(ConfigurationError):
        SieveBuilder.from_preset("missing-preset")


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
