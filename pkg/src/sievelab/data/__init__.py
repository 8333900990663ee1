"""
Bundled run presets.

Provides named RunConfig overrides for the standard experiments.
"""

from sievelab.data.registry import Preset, PresetRegistry, get_preset_registry

__all__ = [
    "Preset",
    "PresetRegistry",
    "get_preset_registry",
]
