"""
Tests for class specs, membership and samplers.

Every example class is convex; samplers and convex combinations must stay
inside it.
"""

import math

import numpy as np
import pytest

from sievelab.core.errors import (
    ConfigurationError,
    DimensionError,
    DomainError,
    GenerationError,
    ResolutionError,
)
from sievelab.core.models import BoundsSpec, GridDensity
from sievelab.engines.classes import (
    AmbientSpec,
    BVSpec,
    ConvMixSpec,
    LipschitzSpec,
    QuadSpec,
    convex_combine,
    gram_matrix,
    membership,
    sample_member,
    sample_near,
    sin_family,
    spec_from_dict,
    uniform_density,
)
from sievelab.engines.divergences import l2_distance

# ============================================================================
# SPEC VALIDATION
# ============================================================================


class TestSpecValidation:
    """Parameter ranges of each class."""

    def test_lipschitz_ranges(self):
        LipschitzSpec(gamma=1.0, q=2.0, psi=3.0)
        LipschitzSpec(gamma=0.8, q=math.inf, psi=1.5)
        with pytest.raises(DomainError):
            LipschitzSpec(gamma=1.5, q=2.0, psi=3.0)
        with pytest.raises(DomainError):
            LipschitzSpec(gamma=1.0, q=2.0, psi=1.0)
        with pytest.raises(DomainError):
            LipschitzSpec(gamma=1.0, q=0.5, psi=3.0)
        # q = 1 needs gamma > 1/2
        with pytest.raises(DomainError):
            LipschitzSpec(gamma=0.5, q=1.0, psi=3.0)

    def test_bv_and_quad_ranges(self):
        with pytest.raises(DomainError):
            BVSpec(zeta=1.0)
        with pytest.raises(DomainError):
            QuadSpec(gamma=0.9)

    def test_mixture_components_must_share_grid(self):
        with pytest.raises(DimensionError):
            ConvMixSpec(components=(uniform_density(16), uniform_density(32)))
        with pytest.raises(DomainError):
            ConvMixSpec(components=())

    def test_mixture_components_must_respect_bounds(self):
        spike = GridDensity(np.array([3.0, 0.5, 0.25, 0.25]))
        with pytest.raises(DomainError):
            ConvMixSpec(components=(spike,))

    def test_rate_exponents(self, lip_spec, bv_spec, quad_spec, mix_spec):
        assert lip_spec.rate_exponent == pytest.approx(-2.0 / 3.0)
        assert bv_spec.rate_exponent == pytest.approx(-2.0 / 3.0)
        assert quad_spec.rate_exponent == pytest.approx(-0.8)
        assert mix_spec.rate_exponent == -1.0
        assert AmbientSpec().rate_exponent == 0.0


# ============================================================================
# JSON FORM
# ============================================================================


class TestSpecDicts:
    def test_round_trip_of_parametric_classes(self, lip_spec, bv_spec, quad_spec):
        for spec in (lip_spec, bv_spec, quad_spec, AmbientSpec()):
            assert spec_from_dict(spec.to_dict()) == spec

    def test_infinite_q_is_spelled_out(self):
        spec = LipschitzSpec(gamma=1.0, q=math.inf, psi=2.0)
        assert spec.to_dict()["q"] == "inf"
        assert spec_from_dict(spec.to_dict()).q == math.inf

    def test_mixture_components_are_explicit(self, mix_spec):
        data = mix_spec.to_dict()
        assert data["k"] == 3
        assert len(data["components"]) == 3
        assert spec_from_dict(data) == mix_spec

    def test_sine_shorthand_needs_grid(self):
        spec = spec_from_dict({"variant": "convmix", "k": 2, "components": "sine"}, m=64)
        assert spec.k == 2
        assert spec.grid_size == 64
        with pytest.raises(ConfigurationError):
            spec_from_dict({"variant": "convmix", "k": 2, "components": "sine"})

    def test_bad_documents(self):
        with pytest.raises(ConfigurationError):
            spec_from_dict({"variant": "gaussian"})
        with pytest.raises(ConfigurationError):
            spec_from_dict({"variant": "bv"})
        with pytest.raises(ConfigurationError):
            spec_from_dict({"variant": "convmix", "k": 3, "components": [[1.0, 1.0]]})


# ============================================================================
# MEMBERSHIP
# ============================================================================


def test_uniform_is_in_every_class(example_specs):
    for spec in example_specs[:3]:
        assert membership(spec, uniform_density(64)).is_member


def test_sine_member_breaks_variation_bound(bv_spec):
    """1 + 0.5 sin(2 pi x) has total variation about 2 > 1.5."""
    report = membership(bv_spec, sin_family(1, 0.5, 64))
    assert not report.is_member
    assert "variation" in report.violated


def test_bounds_are_checked():
    spec = AmbientSpec(bounds=BoundsSpec(0.8, 1.2))
    report = membership(spec, GridDensity(np.array([0.5, 1.5])))
    assert set(report.violated) == {"lower", "upper"}


def test_mixture_membership(mix_spec):
    inside = GridDensity(
        0.2 * mix_spec.components[0].values
        + 0.3 * mix_spec.components[1].values
        + 0.5 * mix_spec.components[2].values
    )
    assert membership(mix_spec, inside).is_member
    assert not membership(mix_spec, sin_family(4, 0.5, 64)).is_member

    with pytest.raises(DimensionError):
        membership(mix_spec, uniform_density(32))


def test_quad_detects_kinks(quad_spec):
    kink = GridDensity.from_values(np.r_[np.linspace(0.6, 1.4, 32), np.linspace(1.4, 0.6, 32)], normalize=True)
    report = membership(quad_spec, kink)
    assert "curvature" in report.violated


# ============================================================================
# CONSTRUCTIONS
# ============================================================================


def test_convex_combine(sine_pair):
    f, g = sine_pair
    assert convex_combine(f, g, 1.0) is f
    assert convex_combine(f, g, 0.0) is g
    mid = convex_combine(f, g, 0.5)
    assert l2_distance(mid, f) == pytest.approx(0.5 * l2_distance(f, g))

    with pytest.raises(DomainError):
        convex_combine(f, g, 1.5)


def test_sin_family_resolution():
    with pytest.raises(ResolutionError):
        sin_family(2, 0.5, 16)
    with pytest.raises(DomainError):
        sin_family(1, 1.5, 64)
    f = sin_family(2, 0.5, 32)
    assert f.values.min() >= 0.5 - 1e-12
    assert f.values.max() <= 1.5 + 1e-12


def test_gram_matrix_of_sine_components(mix_spec):
    gram = gram_matrix(mix_spec)
    assert gram.k == 3
    assert gram.positive_definite
    # mean(f_i f_j) = 1 + 0.125 on the diagonal, 1 off it
    np.testing.assert_allclose(np.diag(gram.matrix), 1.125, atol=1e-6)
    assert gram.matrix[0, 1] == pytest.approx(1.0, abs=1e-6)

    with pytest.raises(DomainError):
        gram_matrix(BVSpec(zeta=1.5))  # type: ignore[arg-type]


# ============================================================================
# SAMPLERS
# ============================================================================


@pytest.mark.parametrize("index", [0, 1, 2, 3])
def test_samples_are_members(example_specs, rng, index):
    spec = example_specs[index]
    for _ in range(5):
        f = sample_member(spec, rng, m=64)
        assert membership(spec, f).is_member


def test_samplers_are_deterministic(bv_spec):
    a = sample_member(bv_spec, np.random.default_rng(7), m=32)
    b = sample_member(bv_spec, np.random.default_rng(7), m=32)
    assert a == b


def test_convex_combinations_stay_members(example_specs, rng):
    for spec in example_specs:
        for _ in range(3):
            f = sample_member(spec, rng, m=64)
            g = sample_member(spec, rng, m=64)
            combo = convex_combine(f, g, float(rng.uniform()))
            assert membership(spec, combo).is_member


def test_sample_near_stays_in_ball(bv_spec, rng):
    theta = sample_member(bv_spec, rng, m=32)
    for _ in range(10):
        g = sample_near(bv_spec, theta, 0.05, rng)
        assert l2_distance(g, theta) <= 0.05 + 1e-12
        assert membership(bv_spec, g).is_member


def test_sampler_needs_a_grid(bv_spec, rng):
    with pytest.raises(DimensionError):
        sample_member(bv_spec, rng)


def test_empty_class_raises_generation_error(rng):
    """Limits [1.2, 1.5] exclude every density."""
    spec = BVSpec(zeta=1.5, bounds=BoundsSpec(1.2, 2.0))
    with pytest.raises(GenerationError):
        sample_member(spec, rng, m=16)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
