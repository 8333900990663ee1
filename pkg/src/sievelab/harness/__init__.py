"""
Monte Carlo harness: seeded sampling, risk sweeps, concentration
experiments and the property suites behind ``sievelab verify``.
"""

from sievelab.harness.concentration import (
    ScenarioResult,
    bernstein_experiment,
    packing_mle_experiment,
    run_scenarios,
)
from sievelab.harness.risk import fit_rate, rate_sweep, risk_estimate
from sievelab.harness.sampling import read_samples, replicate_rng, sample_iid
from sievelab.harness.verify import run_verification

__all__ = [
    "replicate_rng",
    "sample_iid",
    "read_samples",
    "risk_estimate",
    "rate_sweep",
    "fit_rate",
    "bernstein_experiment",
    "packing_mle_experiment",
    "run_scenarios",
    "ScenarioResult",
    "run_verification",
]
