"""
Full-size runs of the bundled presets.

These take minutes and are deselected by default; run them with
``pytest -m slow``.
"""

import pytest

from sievelab.core.builder import SieveBuilder
from sievelab.core.config import RunConfig
from sievelab.harness.concentration import run_scenarios
from sievelab.harness.risk import draw_truth, rate_sweep
from sievelab.harness.verify import run_verification

pytestmark = pytest.mark.slow


def _sweep(config: RunConfig, threads: int = 8):
    config = config.merged({"threads": threads}).validate()
    estimator = SieveBuilder.from_config(config).build()
    pool = estimator.pool
    return rate_sweep(
        estimator.spec,
        config.n_list,
        config.replicates,
        estimator,
        draw_truth(estimator.spec, pool, config.seed),
        config.seed,
        pool,
        threads=config.threads,
    )


def test_ambient_verify_passes():
    report = run_verification(RunConfig.from_preset("ambient-verify").validate())
    failed = [r.name for r in report.results if not r.passed]
    assert report.passed, failed


def test_bernstein_ladder_passes():
    config = RunConfig.from_preset("bernstein-ladder").validate()
    results = run_scenarios(
        config.scenarios, config.bounds, config.c, config.m, config.bernstein_replicates, config.seed
    )
    assert all(r.report.passed for r in results)


def test_mixture_rate_is_parametric():
    report = _sweep(RunConfig.from_preset("convmix-default"))
    assert report.slope == pytest.approx(-1.0, abs=0.25)


def test_default_config_sweep_is_parametric():
    report = _sweep(RunConfig())
    assert -1.3 <= report.slope <= -0.7
    assert report.rows[-1].mean_depth > 1.0


@pytest.mark.parametrize("preset, target", [("bv-desk", -2.0 / 3.0), ("quad-desk", -0.8)])
def test_nonparametric_trend(preset, target):
    """Risk falls with n at a near-class slope, or the sweep says why it cannot."""
    report = _sweep(RunConfig.from_preset(preset))
    assert report.theoretical_exponent == pytest.approx(target)
    if report.pool_limited:
        assert report.limited_by
        assert report.pool_size == RunConfig.from_preset(preset).pool_size
        assert report.pool_resolution > 0.0
    else:
        means = [row.mean for row in report.rows]
        assert all(later < earlier for earlier, later in zip(means, means[1:]))
        assert report.slope < -0.45


if __name__ == "__main__":
    pytest.main([__file__, "-v", "-m", "slow"])
