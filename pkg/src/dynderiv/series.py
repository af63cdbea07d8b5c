"""Coefficient time histories: the interchange unit of the package.

A CoefficientSeries is what a surrogate plant produces, what a monitor
file parses into, and what the identifier consumes.  Channels that a
source did not record (common in external solver exports) are simply
absent (None).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .kinematics import FlightCondition, OscillationSpec

# Channel labels used across derivative sets, reports, and fits.
CHANNELS = ("CL", "CD", "Cm")


@dataclass(frozen=True)
class SeriesMeta:
    """Provenance of a coefficient series."""

    source: str                              # plant name or file path
    spec: OscillationSpec | None = None
    condition: FlightCondition | None = None
    uniform_grid: bool = True
    notes: tuple[str, ...] = ()


@dataclass(frozen=True, eq=False)
class CoefficientSeries:
    """Time-stamped lift/drag/moment coefficient histories."""

    times: np.ndarray
    CL: np.ndarray | None = None
    CD: np.ndarray | None = None
    Cm: np.ndarray | None = None
    meta: SeriesMeta = field(default_factory=lambda: SeriesMeta(source="unknown"))

    def __post_init__(self) -> None:
        t = np.asarray(self.times, dtype=float)
        object.__setattr__(self, "times", t)
        if t.ndim != 1 or len(t) < 1:
            raise ValueError("times must be a non-empty 1-D array")
        if not np.all(np.isfinite(t)):
            raise ValueError("times contain non-finite values")
        if len(t) > 1 and not np.all(np.diff(t) > 0.0):
            raise ValueError("times must be strictly increasing")
        present = 0
        for name in CHANNELS:
            arr = getattr(self, name)
            if arr is None:
                continue
            arr = np.asarray(arr, dtype=float)
            object.__setattr__(self, name, arr)
            if arr.shape != t.shape:
                raise ValueError(f"channel {name} length {arr.shape} != times {t.shape}")
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"channel {name} contains non-finite values")
            present += 1
        if present == 0:
            raise ValueError("series must carry at least one coefficient channel")

    def __len__(self) -> int:
        return len(self.times)

    def channels(self) -> dict[str, np.ndarray]:
        """Mapping of the channels actually present, in canonical order."""
        return {name: getattr(self, name) for name in CHANNELS if getattr(self, name) is not None}
