"""
Sampling from grid densities and reproducible random streams.

Seed splitting: the stream for replicate r of sample size n under master
seed s is ``default_rng(SeedSequence(s, spawn_key=(n, r)))``. Streams depend
only on (s, n, r), never on scheduling order.
"""

from pathlib import Path

import numpy as np
from numpy.typing import ArrayLike, NDArray

from sievelab.core.errors import DomainError, SampleParseError
from sievelab.core.models import GridDensity


def replicate_rng(seed: int, *keys: int) -> np.random.Generator:
    """Independent generator for the stream identified by (seed, *keys)."""
    if seed < 0 or any(k < 0 for k in keys):
        raise DomainError("seeds and stream keys must be nonnegative")
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=tuple(keys)))


def sample_iid(f: GridDensity, n: int, rng: np.random.Generator) -> NDArray[np.float64]:
    """Draw n points from f by inverse-CDF sampling (see ``GridDensity.sample``)."""
    return f.sample(n, rng)


def parse_samples(text: str) -> NDArray[np.float64]:
    """
    Parse a sample file: one decimal in [0, 1] per line.

    Raises:
        SampleParseError: On an empty file, a blank or non-numeric line, or
            a value outside [0, 1] (1-based line numbers)
    """
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()  # LF-terminated final line
    if not lines:
        raise SampleParseError(0, "", "sample file is empty")
    values = np.empty(len(lines))
    for i, line in enumerate(lines):
        token = line.strip()
        if not token:
            raise SampleParseError(i + 1, line, "blank line")
        try:
            x = float(token)
        except ValueError:
            raise SampleParseError(i + 1, line, "not a decimal number") from None
        if not 0.0 <= x <= 1.0:
            raise SampleParseError(i + 1, line, "sample outside [0, 1]")
        values[i] = x
    return values


def read_samples(path: str | Path) -> NDArray[np.float64]:
    """Read and parse a sample file (see ``parse_samples``)."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise SampleParseError(0, str(path), f"cannot read file: {e}") from e
    return parse_samples(text)


def write_samples(path: str | Path, samples: ArrayLike) -> Path:
    """Write samples one per line (repr of each float), LF-terminated."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text("".join(f"{float(x)!r}\n" for x in np.asarray(samples)), encoding="utf-8")
    return target
