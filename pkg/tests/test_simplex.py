"""Tests for simplex projection and simplex-constrained least squares."""

import numpy as np
import pytest

from sievelab.engines.simplex import fit_simplex_weights, project_to_simplex


def test_projection_keeps_simplex_points():
    w = np.array([0.2, 0.3, 0.5])
    np.testing.assert_allclose(project_to_simplex(w), w)


def test_projection_of_a_vertex_direction():
    np.testing.assert_allclose(project_to_simplex([2.0, 0.0, 0.0]), [1.0, 0.0, 0.0])
    np.testing.assert_allclose(project_to_simplex([0.0, 0.0]), [0.5, 0.5])


def test_projection_lands_in_the_simplex(rng):
    for _ in range(20):
        w = project_to_simplex(rng.normal(size=6) * 3)
        assert np.all(w >= 0)
        assert w.sum() == pytest.approx(1.0)


def test_fit_recovers_mixture_weights(mix_spec):
    weights = np.array([0.6, 0.1, 0.3])
    target = weights @ mix_spec.component_matrix
    fitted, residual = fit_simplex_weights(mix_spec.component_matrix, target)
    np.testing.assert_allclose(fitted, weights, atol=1e-6)
    assert residual < 1e-8


def test_fit_reports_distance_to_hull(mix_spec):
    target = np.ones(64) + 0.5 * np.sin(2 * np.pi * 4 * (np.arange(64) + 0.5) / 64)
    _, residual = fit_simplex_weights(mix_spec.component_matrix, target)
    assert residual > 0.1


def test_fit_checks_shapes(mix_spec):
    with pytest.raises(ValueError):
        fit_simplex_weights(mix_spec.component_matrix, np.ones(10))


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
