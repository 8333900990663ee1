"""
Density Class Registry

A catalog of the density classes the lab knows how to build, sample and
estimate over. This centralizes metadata like display names, entropy orders
and minimax rates so reports and the CLI describe classes consistently.
"""

from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class ClassInfo:
    """
    Complete metadata for a density class.

    The numeric rate exponent of a concrete spec comes from the spec itself
    (it may depend on parameters); this entry carries the descriptive side.
    """

    # Core Identity
    name: str  # Variant discriminator (e.g., "bv")
    display_name: str  # What users see (e.g., "Bounded Variation")

    # Theory
    entropy_order: str  # Order of the global metric entropy as eps -> 0
    rate: str  # Squared-L2 minimax rate
    parameters: tuple[str, ...] = ()

    # Classification & Organization
    category: str = "nonparametric"
    aliases: list[str] = field(default_factory=list)

    # Documentation
    description: str = ""

    metadata: dict[str, Any] = field(default_factory=dict)

    def __str__(self) -> str:
        return f"{self.display_name} ({self.name})"


# ============================================================================
# DENSITY CLASS REGISTRY
# ============================================================================

CLASS_REGISTRY: dict[str, ClassInfo] = {
    "ambient": ClassInfo(
        name="ambient",
        display_name="Bounded Densities",
        entropy_order="infinite (not totally bounded)",
        rate="none uniform",
        parameters=("alpha", "beta"),
        category="ambient",
        aliases=["F", "bounded"],
        description="All densities on [0, 1] with values in [alpha, beta].",
    ),
    "lipschitz": ClassInfo(
        name="lipschitz",
        display_name="Lipschitz (gamma, q, psi)",
        entropy_order="eps^(-1/gamma)",
        rate="n^(-2 gamma / (2 gamma + 1))",
        parameters=("gamma", "q", "psi"),
        aliases=["lip", "holder"],
        description="Densities whose L_q shift modulus is at most psi h^gamma.",
    ),
    "bv": ClassInfo(
        name="bv",
        display_name="Bounded Variation",
        entropy_order="eps^(-1)",
        rate="n^(-2/3)",
        parameters=("zeta",),
        aliases=["total-variation", "tv"],
        description="Densities with total variation and sup-norm at most zeta.",
    ),
    "quad": ClassInfo(
        name="quad",
        display_name="Bounded Second Derivative",
        entropy_order="eps^(-1/2)",
        rate="n^(-4/5)",
        parameters=("gamma",),
        aliases=["quadratic", "smooth"],
        description="Densities with |f''| at most gamma.",
    ),
    "convmix": ClassInfo(
        name="convmix",
        display_name="Convex Mixture",
        entropy_order="k log(1/eps)",
        rate="n^(-1)",
        parameters=("k", "components"),
        category="parametric",
        aliases=["mixture", "conv"],
        description="Convex combinations of k fixed component densities.",
    ),
}


def get_class_info(name: str) -> ClassInfo | None:
    """
    Get class info by variant name.

    Args:
        name: The variant discriminator (e.g., "bv", "convmix")

    Returns:
        ClassInfo if found, None otherwise
    """
    return CLASS_REGISTRY.get(name)


def get_class_by_alias(alias: str) -> ClassInfo | None:
    """Get class info by any alias or display name (case-insensitive)."""
    alias_lower = alias.lower()

    for info in CLASS_REGISTRY.values():
        if any(a.lower() == alias_lower for a in info.aliases):
            return info
        if info.display_name.lower() == alias_lower:
            return info

    return None


def get_classes_by_category(category: str) -> list[ClassInfo]:
    """All classes in a category ("ambient", "parametric", "nonparametric")."""
    return [info for info in CLASS_REGISTRY.values() if info.category == category]
