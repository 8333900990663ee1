"""
Tests for packings, entropy estimates and critical radii.

The line pool (densities 1 + t*p with ||f_s - f_t|| = |s - t|) gives packings
whose cardinality can be worked out by hand.
"""

import math

import numpy as np
import pytest

from sievelab.core.errors import ContractError, DimensionError, DomainError, InputError
from sievelab.core.models import EntropyMode, GapReport, GridDensity, PackingResult
from sievelab.engines.classes import (
    AmbientSpec,
    BVSpec,
    membership,
    sin_family,
    uniform_density,
)
from sievelab.engines.divergences import l2_distance
from sievelab.engines.packing import (
    CandidatePool,
    EntropyCurve,
    adaptive_local_entropy,
    contract_packing,
    entropy_profile,
    exact_packing_number,
    global_entropy_estimate,
    global_local_gap_check,
    greedy_maximal_packing,
    local_entropy_estimate,
    lower_bound_condition,
    lower_bound_radius,
    solve_critical_epsilon,
    verify_packing,
)

# ============================================================================
# CANDIDATE POOL
# ============================================================================


class TestCandidatePool:
    def test_line_pool_distances(self, line_pool):
        assert len(line_pool) == 6
        assert line_pool.distances[0, 3] == pytest.approx(0.3)
        assert line_pool.diameter == pytest.approx(0.5)
        np.testing.assert_allclose(line_pool.nearest_neighbor_distances(), 0.1)

    def test_distances_to_density(self, line_pool):
        dist = line_pool.distances_to(line_pool[2])
        np.testing.assert_allclose(dist, line_pool.distances[2], atol=1e-12)

    def test_rejects_mixed_grids_and_empty_pools(self):
        with pytest.raises(DimensionError):
            CandidatePool((uniform_density(4), uniform_density(8)))
        with pytest.raises(InputError):
            CandidatePool(())

    def test_from_spec_is_seeded(self, bv_spec):
        a = CandidatePool.from_spec(bv_spec, size=10, seed=5, m=16)
        b = CandidatePool.from_spec(bv_spec, size=10, seed=5, m=16)
        assert a.densities == b.densities
        assert all(membership(bv_spec, f).is_member for f in a.densities)

    def test_anchors_come_first(self, bv_spec):
        anchor = uniform_density(16)
        pool = CandidatePool.from_spec(bv_spec, size=5, seed=1, m=16, anchors=[anchor])
        assert pool[0] == anchor
        assert pool.anchors == 1

    def test_non_member_anchor_is_rejected(self):
        spec = BVSpec(zeta=1.1)
        zigzag = GridDensity(np.tile([0.6, 1.4], 8))
        with pytest.raises(InputError):
            CandidatePool.from_spec(spec, size=5, seed=1, m=16, anchors=[zigzag])


# ============================================================================
# PACKINGS
# ============================================================================


def test_greedy_packing_in_pool_order(line_pool):
    result = greedy_maximal_packing(line_pool, 0.15)
    assert result.center_indices == (0, 2, 4)
    assert verify_packing(line_pool, result) == []


@pytest.mark.parametrize("separation, expected", [(0.45, 8), (0.8, 1)])
def test_greedy_packing_of_the_sine_family(separation, expected):
    """Distinct sine members sit 0.5 apart at alpha = 0.5."""
    pool = CandidatePool(tuple(sin_family(j, 0.5, 256) for j in range(1, 9)))
    result = greedy_maximal_packing(pool, separation)
    assert result.size == expected
    assert result.center_indices == tuple(range(expected))
    assert verify_packing(pool, result) == []


def test_restricted_packing(line_pool):
    result = greedy_maximal_packing(line_pool, 0.15, center=0, radius=0.25)
    assert result.eligible_indices == (0, 1, 2)
    assert result.center_indices == (0, 2)


def test_empty_ball_gives_empty_packing(line_pool):
    far = GridDensity(1.0 + 0.5 * np.tile([-1.0, 1.0], 4))
    result = greedy_maximal_packing(line_pool, 0.05, center=far, radius=0.1)
    assert result.size == 0
    assert result.log_count == 0.0


def test_packing_validation(line_pool):
    with pytest.raises(DomainError):
        greedy_maximal_packing(line_pool, 0.0)
    with pytest.raises(DomainError):
        greedy_maximal_packing(line_pool, 0.1, center=0)


def test_verify_packing_flags_problems(line_pool):
    not_maximal = PackingResult(
        center_indices=(0,), separation=0.15, eligible_indices=tuple(range(6))
    )
    assert any("not maximal" in p for p in verify_packing(line_pool, not_maximal))

    too_close = PackingResult(center_indices=(0, 1), separation=0.15, maximal=False)
    assert any("apart" in p for p in verify_packing(line_pool, too_close))


def test_exact_packing_number(line_pool):
    assert exact_packing_number(line_pool, 0.15) == 3
    assert exact_packing_number(line_pool, 0.05) == 6
    assert exact_packing_number(line_pool, 0.6) == 1
    assert exact_packing_number(line_pool, 0.15, center=0, radius=0.25) == 2


def test_greedy_is_a_lower_bound_of_exact(bv_spec):
    pool = CandidatePool.from_spec(bv_spec, size=15, seed=11, m=16)
    for separation in (0.05, 0.1, 0.2):
        assert greedy_maximal_packing(pool, separation).size <= exact_packing_number(
            pool, separation
        )


def test_exact_packing_size_limit(bv_spec):
    pool = CandidatePool.from_spec(bv_spec, size=21, seed=2, m=16)
    with pytest.raises(DomainError):
        exact_packing_number(pool, 0.1)


# ============================================================================
# ENTROPY ESTIMATES
# ============================================================================


def test_global_entropy_estimate(line_pool):
    est = global_entropy_estimate(line_pool, 0.3, c=2.0)
    assert est.mode is EntropyMode.GLOBAL
    assert est.log_count == pytest.approx(math.log(3))


def test_local_entropy_takes_max_over_centers(line_pool):
    spec = AmbientSpec()
    est = local_entropy_estimate(spec, 0.25, 2.0, line_pool, centers=[0, 2])
    # ball around index 2 holds 0.0..0.4; a 0.125-packing of it has 3 elements
    assert est.log_count == pytest.approx(math.log(3))
    assert est.center_used == 1

    with pytest.raises(DomainError):
        local_entropy_estimate(spec, 0.25, 1.0, line_pool, centers=[0])
    with pytest.raises(DomainError):
        local_entropy_estimate(spec, 0.25, 2.0, line_pool, centers=[])


def test_adaptive_entropy_uses_one_center(line_pool):
    est = adaptive_local_entropy(AmbientSpec(), 0, 0.25, 2.0, line_pool)
    assert est.mode is EntropyMode.ADAPTIVE
    assert est.log_count == pytest.approx(math.log(2))


@pytest.mark.parametrize("epsilon", [0.13, 0.22, 0.37])
def test_adaptive_entropy_grows_with_a_doubled_ball(line_pool, epsilon):
    """B(nu, eps) sits inside B(mu, 2 eps) when ||nu - mu|| <= eps."""
    spec = AmbientSpec()
    for nu in range(len(line_pool)):
        for mu in range(len(line_pool)):
            if line_pool.distances[nu, mu] > epsilon:
                continue
            near = adaptive_local_entropy(spec, nu, epsilon, 3.0, line_pool)
            wide = adaptive_local_entropy(spec, mu, 2.0 * epsilon, 6.0, line_pool)
            assert near.log_count <= wide.log_count


@pytest.mark.parametrize("epsilon", [0.05, 0.1, 0.2, 0.4])
def test_mixture_local_entropy_is_bounded_by_dimension(mix_spec, epsilon):
    """A k-component mixture ball packs at most (1 + 2c)^(k-1) points."""
    c = 4.0
    pool = CandidatePool.from_spec(mix_spec, size=300, seed=2)
    est = local_entropy_estimate(mix_spec, epsilon, c, pool, centers=list(range(20)))
    assert est.log_count <= (mix_spec.k - 1) * math.log(1.0 + 2.0 * c) + 1e-12


def test_singleton_pool_has_zero_entropy():
    pool = CandidatePool((uniform_density(8),))
    spec = AmbientSpec()
    profile = entropy_profile(spec, [0.05, 0.1, 0.5], 4.0, pool, centers=[0])
    assert all(e.log_count == 0.0 for e in profile.estimates)
    curve = profile.curve(EntropyMode.LOCAL_SUP)
    assert solve_critical_epsilon(1000, spec, 4.0, curve) == 0.0


def test_entropy_profile_modes(bv_pool, bv_spec):
    eps = [0.05, 0.1, 0.2, 0.4]
    profile = entropy_profile(bv_spec, eps, 4.0, bv_pool, centers=list(range(5)))
    assert len(profile.estimates) == 3 * len(eps)
    assert set(profile.curves) == set(EntropyMode)
    for curve in profile.curves.values():
        assert np.all(np.diff(curve.fitted) <= 1e-12)


def test_local_entropy_grid_mismatch(mix_spec, line_pool):
    with pytest.raises(DimensionError):
        local_entropy_estimate(mix_spec, 0.1, 2.0, line_pool, centers=[0])


# ============================================================================
# ENTROPY CURVE
# ============================================================================


class TestEntropyCurve:
    def test_isotonic_fit(self):
        curve = EntropyCurve([0.1, 0.2, 0.4], [1.0, 3.0, 2.0])
        np.testing.assert_allclose(curve.fitted, [2.0, 2.0, 2.0])
        assert curve.raw.tolist() == [1.0, 3.0, 2.0]

    def test_step_lookup(self):
        curve = EntropyCurve([0.4, 0.1, 0.2], [0.5, 3.0, 2.0])
        assert curve.epsilons.tolist() == [0.1, 0.2, 0.4]
        assert curve(0.15) == pytest.approx(2.0)
        assert curve(0.01) == pytest.approx(3.0)
        assert curve(10.0) == pytest.approx(0.5)

    def test_rows(self):
        curve = EntropyCurve([0.1, 0.2], [2.0, 1.0])
        assert curve.rows() == [(0.1, 2.0, 2.0), (0.2, 1.0, 1.0)]

    def test_validation(self):
        with pytest.raises(DimensionError):
            EntropyCurve([0.1, 0.2], [1.0])
        with pytest.raises(DomainError):
            EntropyCurve([0.0, 0.2], [1.0, 0.5])


# ============================================================================
# CONTRACTION
# ============================================================================


def test_contract_packing_scales_distances(line_pool):
    theta = line_pool[0]
    dens = [line_pool[2], line_pool[4]]
    out = contract_packing(theta, 0.4, 0.2, dens, c=4.0)
    assert len(out) == 2
    assert l2_distance(out[0], theta) == pytest.approx(0.1)
    assert l2_distance(out[1], theta) == pytest.approx(0.2)
    assert l2_distance(out[0], out[1]) == pytest.approx(0.1)


def test_contract_packing_identity(line_pool):
    dens = [line_pool[1]]
    assert contract_packing(line_pool[0], 0.2, 0.2, dens) == dens


def test_contract_packing_preconditions(line_pool):
    theta = line_pool[0]
    with pytest.raises(ContractError):
        contract_packing(theta, 0.2, 0.3, [line_pool[1]])
    with pytest.raises(ContractError):
        contract_packing(theta, 0.2, 0.1, [line_pool[4]])
    with pytest.raises(ContractError):
        contract_packing(theta, 0.5, 0.1, [line_pool[1], line_pool[2]], c=2.0)


# ============================================================================
# CRITICAL RADII
# ============================================================================


@pytest.mark.parametrize("n", [100, 10_000, 1_000_000])
def test_critical_radius_of_synthetic_entropy(n):
    """Entropy 1/eps puts the critical radius at n^(-1/3)."""
    eps = solve_critical_epsilon(n, AmbientSpec(), 4.0, lambda e: 1.0 / e)
    assert eps == pytest.approx(n ** (-1.0 / 3.0), rel=0.02)


def test_critical_radius_respects_upper_bound():
    eps = solve_critical_epsilon(10, AmbientSpec(), 4.0, lambda e: 1e9, upper=0.3)
    assert eps == 0.3

    with pytest.raises(DomainError):
        solve_critical_epsilon(0, AmbientSpec(), 4.0, lambda e: 1.0)


def test_lower_bound_radius():
    bound = lower_bound_radius(100, 0.5, 4.0, lambda e: 1.0 / e, upper=2.0)
    assert bound.epsilon > 0
    assert lower_bound_condition(100, bound.epsilon * 0.999, 0.5, 1.0 / (bound.epsilon * 0.999))
    assert bound.risk_lower_bound == pytest.approx(bound.epsilon**2 / 128.0)

    flat = lower_bound_radius(100, 0.5, 4.0, lambda e: 0.0, upper=2.0)
    assert flat.epsilon == 0.0


# ============================================================================
# GLOBAL / LOCAL GAP
# ============================================================================


@pytest.mark.parametrize("epsilon", [0.05, 0.1, 0.3])
def test_gap_check_holds_with_exact_counts(bv_spec, epsilon):
    pool = CandidatePool.from_spec(bv_spec, size=20, seed=3, m=32)
    report = global_local_gap_check(bv_spec, epsilon, 4.0, pool)
    assert report.exact
    assert report.log_global_fine == pytest.approx(
        math.log(exact_packing_number(pool, epsilon / 4.0))
    )
    assert report.holds


def test_mixture_gap_holds_without_slack(mix_spec):
    pool = CandidatePool.from_spec(mix_spec, size=20, seed=6)
    report = global_local_gap_check(mix_spec, 0.2, 4.0, pool)
    assert report.slack == 0.0
    assert report.holds


def test_greedy_gap_reports_the_raw_fine_count(bv_spec, bv_pool):
    """Above the exact limit the fine term is the greedy count, never inflated."""
    for eps in (0.05, 0.1, 0.3):
        report = global_local_gap_check(bv_spec, eps, 4.0, bv_pool)
        assert not report.exact
        assert report.log_global_fine == greedy_maximal_packing(bv_pool, eps / 4.0).log_count
        assert report.lower_holds


def test_gap_report_flags_a_local_term_above_the_fine_count():
    report = GapReport(
        epsilon=0.1, c=4.0, log_global_fine=math.log(3), log_global_coarse=0.0, log_local=math.log(5)
    )
    assert report.lower_holds
    assert not report.upper_holds
    assert not report.holds

if __name__ == "__main__":
    pytest.main([__file__, "-v"])
