"""
Protocol definitions for sievelab components.

Protocols define INTERFACES - what a component must provide.
They don't provide implementation - that's in the engine modules.

Think of these as contracts: "If you want to be an EntropyFunction,
you must be callable on a radius and return a log-count."
"""

from typing import Any, Protocol

import numpy as np
from numpy.typing import ArrayLike, NDArray

from sievelab.core.models import BoundsSpec, GridDensity, SieveTrace


class DensityClass(Protocol):
    """
    Protocol for declarative convex density classes.

    Implementations in ``sievelab.engines.classes``:
    - AmbientSpec (all densities within the bounds)
    - LipschitzSpec
    - BVSpec
    - QuadSpec
    - ConvMixSpec (convex hull of fixed components)
    """

    @property
    def variant(self) -> str:
        """Discriminator used in JSON ("ambient", "lipschitz", ...)."""
        ...

    @property
    def bounds(self) -> BoundsSpec:
        """Ambient bounds [alpha, beta] of the class."""
        ...

    @property
    def grid_size(self) -> int | None:
        """Grid size the class is tied to, or None if any grid works."""
        ...

    @property
    def rate_exponent(self) -> float:
        """Exponent r of the squared-L2 minimax rate n^r."""
        ...

    def functional_slacks(self, values: NDArray[np.float64]) -> dict[str, float]:
        """
        Class-specific constraint slacks (allowed minus observed).

        Args:
            values: Grid density values

        Returns:
            Mapping of constraint name to slack
        """
        ...

    def to_dict(self) -> dict[str, Any]:
        """JSON form with a "variant" discriminator."""
        ...


class EntropyFunction(Protocol):
    """
    Protocol for epsilon -> log packing count maps.

    Implementations:
    - EntropyCurve (monotone step function fitted to estimates)
    - plain callables in tests (constant, power laws)
    """

    def __call__(self, epsilon: float) -> float:
        """
        Log packing count at radius epsilon.

        Args:
            epsilon: Radius (> 0)

        Returns:
            Natural log of a packing count (>= 0)
        """
        ...


class DensityEstimator(Protocol):
    """
    Protocol for anything that maps samples to a density estimate.

    Used by the mixture lift, which only needs an estimate on
    randomised samples and does not care how it is produced.
    """

    def __call__(self, samples: ArrayLike) -> GridDensity:
        """
        Estimate a density from samples.

        Args:
            samples: Points in [0, 1]

        Returns:
            The estimated density
        """
        ...


class TracedEstimator(Protocol):
    """Estimator that also reports its sieve trajectory."""

    def estimate(self, samples: ArrayLike) -> tuple[GridDensity, SieveTrace]:
        """Run on samples, returning the estimate and its trace."""
        ...


class ReportSection(Protocol):
    """
    Protocol for report sections.

    A section holds one result (constants, a trace, a sweep...) and turns
    it into the standard structure renderers consume.
    """

    @property
    def section_name(self) -> str:
        """Header shown above the section."""
        ...

    def generate_data(self) -> dict[str, Any]:
        """
        Structure the section's result.

        Returns one of:
        {"type": "table", "headers": [...], "rows": [[...], ...]}
        {"type": "key_value", "data": {label: value}}
        {"type": "text", "text": "..."}
        """
        ...


class ReportRenderer(Protocol):
    """
    Protocol for output renderers.

    Renderers format structured section data for one medium (terminal,
    plain text).
    """

    def render_section(self, section_name: str, section_data: dict[str, Any]) -> str:
        """
        Render a single section.

        Args:
            section_name: Header for the section
            section_data: Structured data from section.generate_data()

        Returns:
            Formatted string for this section
        """
        ...

    def render_report(self, sections: list[tuple[str, dict[str, Any]]]) -> str:
        """
        Render a complete report.

        Args:
            sections: (section_name, section_data) pairs in display order

        Returns:
            The whole report as text
        """
        ...
