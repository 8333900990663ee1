"""
Registry for bundled run presets.

Presets are partial RunConfig documents stored as YAML next to this module.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import yaml

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Preset:
    """A named set of RunConfig overrides."""

    name: str
    category: str
    description: str = ""
    settings: dict[str, Any] = field(default_factory=dict)


class PresetRegistry:
    """
    Registry of bundled presets.

    Example:
        >>> from sievelab.data import get_preset_registry
        >>> preset = get_preset_registry().get("bv-desk")
        >>> preset.settings["class_spec"]["variant"]
        'bv'
    """

    def __init__(self, data_dir: Path | None = None) -> None:
        self._presets: dict[str, Preset] = {}
        self._load_all(data_dir or Path(__file__).parent / "presets")

    def _load_all(self, data_dir: Path) -> None:
        """Load every YAML file under data_dir."""
        if not data_dir.exists():
            return

        for yaml_file in sorted(data_dir.rglob("*.yaml")):
            try:
                with open(yaml_file) as f:
                    entries = yaml.safe_load(f) or []
            except (OSError, yaml.YAMLError) as e:
                logger.warning("Failed to load %s: %s", yaml_file, e)
                continue

            for entry in entries:
                if "name" not in entry:
                    logger.warning("Preset without a name in %s", yaml_file)
                    continue
                preset = Preset(
                    name=entry["name"],
                    category=entry.get("category", yaml_file.stem),
                    description=entry.get("description", ""),
                    settings=dict(entry.get("settings", {})),
                )
                if preset.name.lower() in self._presets:
                    logger.warning("Duplicate preset %r in %s", preset.name, yaml_file)
                self._presets[preset.name.lower()] = preset

    def get(self, name: str) -> Preset | None:
        """
        Get a preset by name (case-insensitive).

        Returns:
            Preset or None if not found
        """
        return self._presets.get(name.lower())

    def get_by_category(self, category: str) -> list[Preset]:
        return [p for p in self._presets.values() if p.category == category]

    def names(self) -> list[str]:
        return sorted(self._presets)

    def get_all(self) -> list[Preset]:
        """All presets, sorted by name."""
        return [self._presets[name] for name in self.names()]

    def __len__(self) -> int:
        return len(self._presets)

    def __repr__(self) -> str:
        return f"<PresetRegistry: {len(self)} presets>"


# Singleton instance
_registry: PresetRegistry | None = None


def get_preset_registry() -> PresetRegistry:
    """
    Get the global preset registry instance.

    Returns:
        The singleton PresetRegistry instance
    """
    global _registry
    if _registry is None:
        _registry = PresetRegistry()
    return _registry
