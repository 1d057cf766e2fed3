"""Normalized misfit between a candidate's phase shifts and target shifts.

The figure of merit is the relative l2 distance over an index window:

    phi = sqrt( sum_{l=l_start}^{l_end} |delta(k,l) - target[l]|^2
              / sum_{l=l_start}^{l_end} |target[l]|^2 )

l_start defaults to 1; 0 is also supported because published reference values
exist under both conventions. Shifts of any magnitude are included as-is.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .solver import Potential, phase_shift_table


@dataclass(frozen=True)
class ShiftTarget:
    """Target shifts indexed by l, with the summation window [l_start, l_end]."""

    k: float
    delta: np.ndarray
    l_start: int = 1
    l_end: int = 20
    _den: float = field(init=False, repr=False, compare=False, default=0.0)

    def __post_init__(self):
        if not (self.k > 0.0) or not math.isfinite(self.k):
            raise DomainError(f"target wavenumber must be positive, got {self.k!r}")
        if self.l_start not in (0, 1):
            raise DomainError(f"l_start must be 0 or 1, got {self.l_start}")
        if self.l_end < self.l_start:
            raise DomainError(f"l_end {self.l_end} below l_start {self.l_start}")
        delta = np.asarray(self.delta, dtype=float)
        if delta.ndim != 1 or len(delta) < self.l_end + 1:
            raise DomainError(
                f"target needs shifts for l = 0..{self.l_end}, got {len(np.atleast_1d(delta))}"
            )
        if not np.all(np.isfinite(delta)):
            raise DomainError("target shifts must be finite")
        object.__setattr__(self, "delta", delta)
        den = float(np.sum(delta[self.l_start : self.l_end + 1] ** 2))
        if den <= 0.0:
            raise DomainError("degenerate target: summed |target shifts|^2 is zero")
        object.__setattr__(self, "_den", den)


def target_from_potential(p: Potential, k: float, l_start: int = 1, l_end: int = 20) -> ShiftTarget:
    """Build a target from a reference potential's own shifts."""
    table = phase_shift_table(p, k, l_end)
    return ShiftTarget(k=float(k), delta=table.delta, l_start=l_start, l_end=l_end)


def phi_of_shifts(delta: np.ndarray, target: ShiftTarget) -> float:
    """Misfit of an already-computed shift vector (index = l)."""
    delta = np.asarray(delta, dtype=float)
    if len(delta) < target.l_end + 1:
        raise DomainError(f"candidate needs shifts for l = 0..{target.l_end}")
    sl = slice(target.l_start, target.l_end + 1)
    num = float(np.sum((delta[sl] - target.delta[sl]) ** 2))
    return math.sqrt(num / target._den)


def phi(p: Potential, target: ShiftTarget) -> float:
    """Misfit of a candidate potential against the target shifts."""
    table = phase_shift_table(p, target.k, target.l_end)
    return phi_of_shifts(table.delta, target)
