"""Path containers and exact per-path statistics."""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np


class Censored(enum.Enum):
    """Marker for a first-return time that was not observed within the horizon."""

    CENSORED = "censored"

    def __repr__(self) -> str:
        return "CENSORED"


CENSORED = Censored.CENSORED


@dataclass(frozen=True)
class PathSample:
    """A realized trajectory Z_0, ..., Z_n with Z_0 = 0."""

    values: np.ndarray
    integer_valued: bool = False

    def __post_init__(self):
        values = np.asarray(self.values)
        if values.ndim != 1 or values.size == 0:
            raise ValueError("path values must be a non-empty 1-d sequence")
        if values[0] != 0:
            raise ValueError(f"path must start at 0, got Z_0 = {values[0]}")
        if self.integer_valued:
            if not np.issubdtype(values.dtype, np.integer):
                if not np.all(values == np.round(values)):
                    raise ValueError("integer_valued path has non-integer entries")
                values = values.astype(np.int64)
        values = values.copy()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def length(self) -> int:
        return self.values.size - 1

    @classmethod
    def from_increments(cls, increments, integer_valued: bool = False) -> PathSample:
        increments = np.asarray(increments)
        values = np.concatenate([np.zeros(1, dtype=increments.dtype), np.cumsum(increments)])
        return cls(values, integer_valued=integer_valued)


@dataclass(frozen=True)
class PathStats:
    max_1n: float
    min_1n: float
    # None for real-valued paths, where the return time is not defined
    first_return: int | Censored | None
    range_count: int | None
    floor_range: int

    @property
    def survived(self) -> bool:
        """True when the path did not return to 0 within the horizon."""
        return self.first_return is CENSORED


def _first_zero(tail: np.ndarray) -> int | Censored:
    hits = np.flatnonzero(tail == 0)
    return int(hits[0]) + 1 if hits.size else CENSORED


def first_return(path: PathSample) -> int | Censored:
    """Smallest k >= 1 with Z_k = 0, or CENSORED."""
    if not path.integer_valued:
        raise ValueError("first return time is only defined for integer-valued paths")
    if path.length == 0:
        raise ValueError("degenerate path")
    return _first_zero(path.values[1:])


def path_stats(path: PathSample) -> PathStats:
    if path.length == 0:
        raise ValueError("degenerate path")
    z = path.values
    tail = z[1:]
    if path.integer_valued:
        ret = _first_zero(tail)
        range_count = int(np.unique(z).size)
    else:
        ret = None
        range_count = None
    return PathStats(
        max_1n=tail.max().item(),
        min_1n=tail.min().item(),
        first_return=ret,
        range_count=range_count,
        floor_range=int(np.unique(np.floor(z)).size),
    )


def persistence_event(stats: PathStats, level: float) -> bool:
    return stats.max_1n <= level


def has_unit_increments(path: PathSample) -> bool:
    """Whether every increment lies in {-1, 0, 1}."""
    return path.integer_valued and bool(np.all(np.abs(np.diff(path.values)) <= 1))
