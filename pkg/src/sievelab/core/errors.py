"""
Exception hierarchy for sievelab.

Every error is a ValueError so callers that only care about "bad input"
can keep catching ValueError.
"""


class SievelabError(ValueError):
    """Base class for all sievelab errors."""


class DimensionError(SievelabError):
    """Two grid densities (or a density and a spec) use different grid sizes."""


class DomainError(SievelabError):
    """A quantity is undefined for the given inputs (log of zero, h(γ ≤ 0), ...)."""


class NormalizationError(SievelabError):
    """Grid values do not integrate to one."""


class ResolutionError(SievelabError):
    """The grid is too coarse for the requested construction."""


class GenerationError(SievelabError):
    """A sampler ran out of attempts before producing a class member."""


class ContractError(SievelabError):
    """Preconditions of a packing contraction are not met."""


class ConfigurationError(SievelabError):
    """A run configuration is invalid."""


class InputError(SievelabError):
    """Experiment inputs violate a membership or geometry requirement."""


class SampleParseError(SievelabError):
    """A sample file line could not be parsed."""

    def __init__(self, line_number: int, line: str, reason: str) -> None:
        self.line_number = line_number
        self.line = line
        super().__init__(f"line {line_number}: {reason} ({line!r})")
