"""Exception hierarchy shared across the package.

Two broad families matter to callers (and map onto the CLI exit codes and
service HTTP statuses): ``DomainError`` for invalid inputs, ``SolverError``
for computations that cannot proceed on otherwise valid inputs.
"""

from __future__ import annotations


class PhasefitError(Exception):
    """Base class for all package-specific errors."""


class DomainError(PhasefitError):
    """Invalid input: bad argument ranges, malformed potentials, degenerate targets."""


class ConfigError(DomainError):
    """Configuration file or flag validation failure.

    Carries optional source location so the CLI can point at the offending line.
    """

    def __init__(self, message: str, *, path: str | None = None, line: int | None = None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}:{line}: " if line is not None else f"{path}: "
        super().__init__(where + message)


class SolverError(PhasefitError):
    """Forward computation failed (not an input-validation problem)."""


class EvanescentLayerError(SolverError):
    """A layer's local wavenumber is at or below the evanescence guard.

    The transfer-matrix path only supports oscillatory layers; use the ODE
    path for stronger couplings.
    """

    def __init__(self, layer_index: int, kappa_sq: float):
        self.layer_index = layer_index
        self.kappa_sq = kappa_sq
        super().__init__(
            f"layer {layer_index} is evanescent (local wavenumber squared {kappa_sq:.6g} <= guard)"
        )


class EmptySampleError(SolverError):
    """Every candidate in a search batch failed objective evaluation."""


class BesselOverflowError(SolverError):
    """The irregular solution n_l(x) would overflow for the requested order."""

    def __init__(self, l: int, x: float):
        self.l = l
        self.x = x
        super().__init__(f"n_l overflow at l={l}, x={x:.6g}: |n_l(x)| exceeds 1e290")
