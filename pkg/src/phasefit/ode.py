"""Reference phase shifts by direct radial integration.

Slow cross-check for the transfer-matrix solver: integrate

    u'' + (k^2 - v(r)/k^2 - l(l+1)/r^2) u = 0

outward with a classical fixed-step RK4 scheme whose step boundaries are
aligned to the layer interfaces (the interaction is discontinuous there), then
match u, u' at the support radius to the free Riccati-Bessel pair. Unlike the
matrix path this handles layers beyond the oscillatory regime, so it is the
more general method.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import bessel
from .errors import DomainError
from .solver import PhaseShiftTable, Potential, coupling

_RESCALE_AT = 1e250


@dataclass(frozen=True)
class OdeSettings:
    """Integration controls.

    The start radius is r_start_factor * support_radius, capped below half the
    first interface so the series initial condition always applies on the
    first layer; step_count fixed steps are distributed over the layers
    proportionally to their width.
    """

    r_start_factor: float = 1e-4
    step_count: int = 20000

    def __post_init__(self):
        if not (0.0 < self.r_start_factor < 1.0):
            raise DomainError(f"r_start_factor must be in (0, 1), got {self.r_start_factor}")
        if self.step_count < 100:
            raise DomainError(f"step_count must be at least 100, got {self.step_count}")


def _integrate(p: Potential, k: float, ls: np.ndarray, s: OdeSettings):
    """RK4 for all requested l at once; returns (u, u') at the support radius."""
    if not (k > 0.0) or not math.isfinite(k):
        raise DomainError(f"wavenumber k must be positive and finite, got {k!r}")
    R = p.support_radius
    r0 = min(s.r_start_factor * R, 0.5 * p.radii[0])
    dfac = np.array([bessel.double_factorial(2 * l + 1) for l in ls])
    w1 = coupling(p.values[0], k)
    kap1_sq = k * k - w1
    # two-term small-r series of the regular solution
    u = (r0 ** (ls + 1) - kap1_sq * r0 ** (ls + 3) / (2.0 * (2 * ls + 3))) / dfac
    du = ((ls + 1) * r0**ls - kap1_sq * (ls + 3) * r0 ** (ls + 2) / (2.0 * (2 * ls + 3))) / dfac

    cent = ls * (ls + 1.0)
    bounds = [r0, *p.radii]
    total = R - r0
    r = r0
    for seg_end, v in zip(bounds[1:], p.values):
        w = coupling(v, k)
        seg = seg_end - r
        m = max(4, int(round(s.step_count * seg / total)))
        h = seg / m

        def rhs(r, u, du):
            return du, (cent / (r * r) + w - k * k) * u

        for _ in range(m):
            k1u, k1d = rhs(r, u, du)
            k2u, k2d = rhs(r + 0.5 * h, u + 0.5 * h * k1u, du + 0.5 * h * k1d)
            k3u, k3d = rhs(r + 0.5 * h, u + 0.5 * h * k2u, du + 0.5 * h * k2d)
            k4u, k4d = rhs(r + h, u + h * k3u, du + h * k3d)
            u = u + (h / 6.0) * (k1u + 2 * k2u + 2 * k3u + k4u)
            du = du + (h / 6.0) * (k1d + 2 * k2d + 2 * k3d + k4d)
            r += h
        r = seg_end
        big = np.maximum(np.abs(u), np.abs(du)) > _RESCALE_AT
        if np.any(big):
            scale = np.where(big, np.maximum(np.abs(u), np.abs(du)), 1.0)
            u = u / scale
            du = du / scale
    return u, du


def _match(u, du, k: float, R: float, ls: np.ndarray):
    idx = ls.astype(int)
    ev = bessel.evaluate(int(idx.max()), k * R)
    j, n, jp, np_ = ev.j[idx], ev.n[idx], ev.jp[idx], ev.np[idx]
    # solve u = A j + B n, u' = k (A j' + B n') using the unit Wronskian
    A = np_ * u - n * du / k
    B = -jp * u + j * du / k
    with np.errstate(divide="ignore", invalid="ignore"):
        delta = -np.arctan(B / A)
    return np.where(A == 0.0, -np.sign(B) * (np.pi / 2), delta)


def phase_shift_ode(p: Potential, k: float, l: int, s: OdeSettings | None = None) -> float:
    """delta(k, l) from direct integration."""
    s = s or OdeSettings()
    ls = np.array([int(l)], dtype=float)
    u, du = _integrate(p, k, ls, s)
    return float(_match(u, du, k, p.support_radius, ls)[0])


def phase_shift_table_ode(p: Potential, k: float, l_max: int, s: OdeSettings | None = None) -> PhaseShiftTable:
    """delta(k, l) for l = 0..l_max from direct integration (one shared sweep)."""
    s = s or OdeSettings()
    ls = np.arange(l_max + 1, dtype=float)
    u, du = _integrate(p, k, ls, s)
    delta = _match(u, du, k, p.support_radius, ls)
    return PhaseShiftTable(k=float(k), l_max=int(l_max), delta=delta)
