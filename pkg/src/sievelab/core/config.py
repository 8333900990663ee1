"""Configuration models for experiment runs."""

import hashlib
import json
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any

from sievelab.core.errors import ConfigurationError, SievelabError
from sievelab.core.models import BoundsSpec

# Fields that change where or how fast results are produced, not what they are
_UNHASHED = frozenset({"out_dir", "threads"})


def default_scenarios() -> list[dict[str, Any]]:
    """Concentration scenarios run by the ``bernstein`` command."""
    return [
        {
            "name": "far-alternative",
            "kind": "bernstein",
            "f": {"sine": 1, "alpha": 0.5},
            "g": {"sine": 2, "alpha": 0.5},
            "g_prime": {"sine": 1, "alpha": 0.5},
            "n": 200,
        },
        {
            "name": "perturbed-truth",
            "kind": "bernstein",
            "f": {"sine": 1, "alpha": 0.5},
            "g": {"sine": 2, "alpha": 0.5},
            "g_prime": {"sine": 1, "alpha": 0.6},
            "n": 400,
        },
        {
            "name": "sine-packing",
            "kind": "packing-mle",
            "f": {"sine": 1, "alpha": 0.5},
            "packing": [{"sine": j, "alpha": 0.5} for j in range(1, 9)],
            "n": 400,
            "delta": 0.2,
            "m": 128,
        },
    ]


@dataclass
class RunConfig:
    """Complete configuration of an experiment.

    Loaded from a flat JSON document, a bundled preset, or both; command-line
    flags are merged last.
    """

    # Class and bounds
    class_spec: dict[str, Any] = field(
        default_factory=lambda: {
            "variant": "convmix",
            "k": 3,
            "components": "sine",
            "sine_alpha": 0.5,
        }
    )
    alpha: float = 0.5
    beta: float = 2.0

    # Sieve
    c: float = 14.0
    m: int = 64
    pool_size: int = 2000
    centers: int = 32
    J_cap: int = 10
    radius_multiplier: float = 1.0
    likelihood_constant: float | None = 25.0  # None = derived Bernstein constant L
    adaptive: bool = False
    adaptive_budget: int | None = None

    # Monte Carlo
    n_list: list[int] = field(default_factory=lambda: [250, 1000, 4000, 16000])
    replicates: int = 50
    seed: int = 20240601
    threads: int = 1
    max_attempts: int = 100
    epsilon_list: list[float] = field(
        default_factory=lambda: [0.05, 0.1, 0.2, 0.4, 0.8, 1.6]
    )

    # Property suites
    verify_pairs: int = 10_000
    verify_grid: int = 100_000
    verify_closure: int = 1_000
    verify_contractions: int = 100
    verify_runs: int = 500
    bernstein_replicates: int = 2_000
    scenarios: list[dict[str, Any]] = field(default_factory=default_scenarios)

    # Output
    out_dir: str = "results"

    @classmethod
    def field_names(cls) -> set[str]:
        return {f.name for f in fields(cls)}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "RunConfig":
        """Build from a flat mapping; unknown keys are rejected."""
        unknown = set(data) - cls.field_names()
        if unknown:
            raise ConfigurationError(f"Unknown configuration keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_json(cls, path: str | Path) -> "RunConfig":
        """Load a flat JSON configuration file."""
        return cls().merged(load_config_file(path))

    @classmethod
    def from_preset(cls, name: str) -> "RunConfig":
        """Start from a bundled preset (see ``sievelab presets``)."""
        from sievelab.data import get_preset_registry

        preset = get_preset_registry().get(name)
        if preset is None:
            available = ", ".join(get_preset_registry().names())
            raise ConfigurationError(f"No preset named {name!r}. Available: {available}")
        return cls().merged(preset.settings)

    @classmethod
    def quick(cls) -> "RunConfig":
        """Small, fast configuration for smoke runs (the ``smoke`` preset)."""
        return cls.from_preset("smoke")

    def merged(self, overrides: dict[str, Any]) -> "RunConfig":
        """Copy with the non-None overrides applied."""
        unknown = set(overrides) - self.field_names()
        if unknown:
            raise ConfigurationError(f"Unknown configuration keys: {sorted(unknown)}")
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})

    @property
    def bounds(self) -> BoundsSpec:
        return BoundsSpec(self.alpha, self.beta)

    def class_spec_object(self) -> Any:
        """The ClassSpec described by ``class_spec`` (bounds taken from the config)."""
        from sievelab.engines.classes import spec_from_dict

        data = dict(self.class_spec)
        data.setdefault("bounds", [self.alpha, self.beta])
        return spec_from_dict(data, m=self.m)

    def validate(self) -> "RunConfig":
        """
        Check every field; returns self so calls can be chained.

        Raises:
            ConfigurationError: On the first invalid field
        """
        counts = {
            "m": self.m,
            "pool_size": self.pool_size,
            "centers": self.centers,
            "replicates": self.replicates,
            "J_cap": self.J_cap,
            "threads": self.threads,
            "max_attempts": self.max_attempts,
            "verify_pairs": self.verify_pairs,
            "verify_grid": self.verify_grid,
            "verify_closure": self.verify_closure,
            "verify_contractions": self.verify_contractions,
            "verify_runs": self.verify_runs,
            "bernstein_replicates": self.bernstein_replicates,
        }
        for name, value in counts.items():
            if not isinstance(value, int) or value < 1:
                raise ConfigurationError(f"{name} must be a positive integer, got {value!r}")
        if not self.n_list or any(int(n) < 1 for n in self.n_list):
            raise ConfigurationError(f"n_list must hold positive sizes, got {self.n_list}")
        if any(e <= 0 for e in self.epsilon_list):
            raise ConfigurationError("epsilon_list must hold positive radii")
        if self.seed < 0:
            raise ConfigurationError(f"seed must be nonnegative, got {self.seed}")
        if self.radius_multiplier <= 0:
            raise ConfigurationError("radius_multiplier must be positive")
        if self.adaptive_budget is not None and self.adaptive_budget < 1:
            raise ConfigurationError("adaptive_budget must be a positive integer")

        from sievelab.engines.sieve import compute_constants

        try:
            bounds = self.bounds
            compute_constants(bounds, self.c, likelihood_constant=self.likelihood_constant)
            self.class_spec_object()
        except ConfigurationError:
            raise
        except SievelabError as e:
            raise ConfigurationError(str(e)) from e
        return self

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    def config_hash(self) -> str:
        """First 16 hex digits of the SHA-256 of the result-relevant fields."""
        data = {k: v for k, v in self.to_dict().items() if k not in _UNHASHED}
        canonical = json.dumps(data, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode()).hexdigest()[:16]


def load_config_file(path: str | Path) -> dict[str, Any]:
    """Read a flat JSON config document."""
    try:
        with open(path) as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigurationError(f"Cannot read config {path}: {e}") from e
    if not isinstance(data, dict):
        raise ConfigurationError(f"Config {path} must hold a JSON object")
    return data
