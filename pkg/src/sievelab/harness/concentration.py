"""
Empirical concentration of log-likelihood comparisons.

Cell counts of an n-sample are multinomial(n, cell masses), so each
replicate is one multinomial draw and the log-likelihood of a density is
``counts @ log(values)``.
"""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np

from sievelab.core.errors import ConfigurationError, InputError
from sievelab.core.models import (
    INEQUALITY_SLACK,
    MEMBERSHIP_TOL,
    BoundsSpec,
    ConcentrationReport,
    GridDensity,
)
from sievelab.engines.classes import sin_family, uniform_density
from sievelab.engines.divergences import l2_distance, l2_matrix
from sievelab.engines.sieve import compute_constants
from sievelab.harness.sampling import replicate_rng

logger = logging.getLogger(__name__)


def _require_bounded(bounds: BoundsSpec, named: dict[str, GridDensity]) -> None:
    sizes = {f.m for f in named.values()}
    if len(sizes) != 1:
        raise InputError(f"Densities use different grids: {sorted(sizes)}")
    for name, f in named.items():
        lo, hi = float(f.values.min()), float(f.values.max())
        if lo < bounds.alpha - MEMBERSHIP_TOL or hi > bounds.beta + MEMBERSHIP_TOL:
            raise InputError(
                f"{name} leaves [{bounds.alpha}, {bounds.beta}]: range [{lo:.4g}, {hi:.4g}]"
            )


def _multinomial_counts(
    f: GridDensity, n: int, replicates: int, rng: np.random.Generator
) -> np.ndarray:
    masses = f.masses / f.masses.sum()
    return rng.multinomial(n, masses, size=replicates)


def bernstein_experiment(
    f: GridDensity,
    g: GridDensity,
    g_prime: GridDensity,
    bounds: BoundsSpec,
    c: float,
    n: int,
    replicates: int,
    rng: np.random.Generator,
    delta: float | None = None,
) -> ConcentrationReport:
    """
    Frequency of psi(g, g', X) > 0 against exp(-n L delta^2).

    psi is the log-likelihood difference of g over g' on an n-sample from f.
    ``delta`` defaults to ||g - g'|| / C, the largest value the separation
    condition allows.

    Raises:
        InputError: If ||g - g'|| >= C delta or ||g' - f|| <= delta fails,
            or a density leaves the bounds
    """
    if n < 0 or replicates < 1:
        raise InputError(f"need n >= 0 and replicates >= 1, got n={n}, replicates={replicates}")
    _require_bounded(bounds, {"f": f, "g": g, "g_prime": g_prime})
    constants = compute_constants(bounds, c)
    separation = l2_distance(g, g_prime)
    delta = separation / constants.C if delta is None else delta
    if delta <= 0.0:
        raise InputError(f"delta must be positive, got {delta}")
    if separation < constants.C * delta - INEQUALITY_SLACK:
        raise InputError(
            f"||g - g'|| >= C delta fails: {separation:.6g} < {constants.C * delta:.6g}"
        )
    proximity = l2_distance(g_prime, f)
    if proximity > delta + INEQUALITY_SLACK:
        raise InputError(f"||g' - f|| <= delta fails: {proximity:.6g} > {delta:.6g}")

    bound = math.exp(-n * constants.L * delta * delta)
    if n == 0:
        frequency = 0.0
    else:
        counts = _multinomial_counts(f, n, replicates, rng)
        psi = counts @ (np.log(g.values) - np.log(g_prime.values))
        frequency = float(np.mean(psi > 0.0))
    logger.info("bernstein n=%d delta=%.4g: frequency=%.4g bound=%.4g", n, delta, frequency, bound)
    return ConcentrationReport(
        kind="bernstein",
        n=n,
        delta=delta,
        C=constants.C,
        L=constants.L,
        frequency=frequency,
        bound=bound,
        replicates=replicates,
    )


def packing_mle_experiment(
    f: GridDensity,
    packing: Sequence[GridDensity],
    bounds: BoundsSpec,
    c: float,
    n: int,
    replicates: int,
    rng: np.random.Generator,
    delta: float | None = None,
) -> ConcentrationReport:
    """
    Frequency of ||g_j* - f|| > (C + 1) delta against M exp(-n L delta^2).

    g_j* maximises the likelihood over the packing (ties to the smallest
    index) and M is the packing size. ``delta`` defaults to the distance
    from f to its nearest packing member.

    Raises:
        InputError: If the packing is not delta-separated, no member lies
            within delta of f, or a density leaves the bounds
    """
    if not packing:
        raise InputError("packing must hold at least one density")
    if n < 0 or replicates < 1:
        raise InputError(f"need n >= 0 and replicates >= 1, got n={n}, replicates={replicates}")
    named = {"f": f} | {f"g_{j}": g for j, g in enumerate(packing)}
    _require_bounded(bounds, named)
    constants = compute_constants(bounds, c)
    values = np.vstack([g.values for g in packing])
    to_f = l2_matrix(values, f.values)[:, 0]
    delta = float(to_f.min()) if delta is None else delta
    if delta < 0.0:
        raise InputError(f"delta must be nonnegative, got {delta}")
    if to_f.min() > delta + INEQUALITY_SLACK:
        raise InputError(f"min_j ||g_j - f|| <= delta fails: {to_f.min():.6g} > {delta:.6g}")
    if len(packing) > 1:
        pairwise = l2_matrix(values)
        np.fill_diagonal(pairwise, np.inf)
        if pairwise.min() <= delta:
            raise InputError(
                f"||g_j - g_k|| > delta fails: closest pair at {pairwise.min():.6g} <= {delta:.6g}"
            )

    M = len(packing)
    bound = M * math.exp(-n * constants.L * delta * delta)
    radius = (constants.C + 1.0) * delta
    if n == 0:
        # every likelihood ties at 0, so g_0 is selected
        frequency = float(to_f[0] > radius + INEQUALITY_SLACK)
    else:
        counts = _multinomial_counts(f, n, replicates, rng)
        with np.errstate(divide="ignore"):
            loglik = counts @ np.log(values).T
        winners = np.argmax(loglik, axis=1)
        frequency = float(np.mean(to_f[winners] > radius + INEQUALITY_SLACK))
    logger.info(
        "packing-mle n=%d M=%d delta=%.4g: frequency=%.4g bound=%.4g", n, M, delta, frequency, bound
    )
    return ConcentrationReport(
        kind="packing-mle",
        n=n,
        delta=delta,
        C=constants.C,
        L=constants.L,
        frequency=frequency,
        bound=bound,
        replicates=replicates,
    )


# ---------------------------------------------------------------------------
# Configured scenarios
# ---------------------------------------------------------------------------


def density_from_ref(ref: Any, m: int) -> GridDensity:
    """
    Resolve a scenario density reference.

    Accepted forms: ``"uniform"``, ``{"sine": j, "alpha": a}``,
    ``{"values": [...]}`` or a bare list of values (normalised on load).

    Raises:
        ConfigurationError: If the reference has none of these forms
    """
    if ref == "uniform":
        return uniform_density(m)
    if isinstance(ref, dict) and "sine" in ref:
        return sin_family(int(ref["sine"]), float(ref.get("alpha", 0.5)), m)
    if isinstance(ref, dict) and "values" in ref:
        ref = ref["values"]
    if isinstance(ref, list):
        return GridDensity.from_values(ref, normalize=True)
    raise ConfigurationError(f"Unrecognised density reference: {ref!r}")


@dataclass(frozen=True)
class ScenarioResult:
    """One configured scenario at one sample size."""

    name: str
    report: ConcentrationReport


def run_scenarios(
    scenarios: Sequence[dict[str, Any]],
    bounds: BoundsSpec,
    c: float,
    m: int,
    replicates: int,
    seed: int,
) -> list[ScenarioResult]:
    """
    Run every scenario at each of its sample sizes.

    Scenario i at its k-th sample size draws from ``replicate_rng(seed, i, k)``.
    A scenario may set its own grid ``m`` and ``delta``; ``n`` is an integer
    or a list of integers.

    Raises:
        ConfigurationError: Unknown kind or malformed scenario
    """
    results: list[ScenarioResult] = []
    for i, scenario in enumerate(scenarios):
        try:
            name = str(scenario.get("name", f"scenario-{i}"))
            kind = scenario.get("kind", "bernstein")
            grid = int(scenario.get("m", m))
            delta = scenario.get("delta")
            n_values = scenario["n"] if isinstance(scenario["n"], list) else [scenario["n"]]
            f = density_from_ref(scenario["f"], grid)
            if kind == "bernstein":
                g = density_from_ref(scenario["g"], grid)
                g_prime = density_from_ref(scenario["g_prime"], grid)
            elif kind == "packing-mle":
                packing = [density_from_ref(ref, grid) for ref in scenario["packing"]]
            else:
                raise ConfigurationError(f"Scenario {name!r} has unknown kind {kind!r}")
        except KeyError as e:
            raise ConfigurationError(f"Scenario {i} is missing {e}") from e
        for k, n in enumerate(n_values):
            rng = replicate_rng(seed, i, k)
            if kind == "bernstein":
                report = bernstein_experiment(
                    f, g, g_prime, bounds, c, int(n), replicates, rng, delta=delta
                )
            else:
                report = packing_mle_experiment(
                    f, packing, bounds, c, int(n), replicates, rng, delta=delta
                )
            results.append(ScenarioResult(name=name, report=report))
    return results
