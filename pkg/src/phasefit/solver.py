"""Phase shifts of piecewise-constant radial potentials by interface matching.

A potential is a finite stack of spherical layers: value ``values[i]`` on
[radii[i-1], radii[i]) and zero beyond the outermost radius. Layer values are
energy-relative couplings: at wavenumber k a layer value v enters the radial
equation as the interaction term v / k**2, so the local wavenumber on that
layer is

    kappa_i = sqrt(k**2 - values[i] / k**2)

and kappa = k outside the support. The regular solution on each layer is
A*j_l(kappa*r) + B*n_l(kappa*r); continuity of the solution and its
derivative at every interface gives a 2x2 transfer matrix per interface, and
the exterior ratio B/A yields the phase shift delta(k,l) = -arctan(B/A).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import bessel
from .errors import DomainError, EvanescentLayerError

_TIE_TOL = 1e-12
_RESCALE_AT = 1e100
KAPPA_MIN_FACTOR = 1e-6


@dataclass(frozen=True)
class Potential:
    """Layered radial potential: ``values[i]`` on [radii[i-1], radii[i]), r_{-1}=0.

    radii are strictly increasing and positive; the last one is the support
    radius. Construct through :meth:`from_layers`, which validates and merges
    sub-1e-12 radius ties.
    """

    radii: tuple[float, ...]
    values: tuple[float, ...]

    @classmethod
    def from_layers(cls, radii, values) -> "Potential":
        radii = [float(r) for r in radii]
        values = [float(v) for v in values]
        if len(radii) != len(values):
            raise DomainError(
                f"layer count mismatch: {len(radii)} radii vs {len(values)} values"
            )
        if not radii:
            raise DomainError("a potential needs at least one layer")
        for r in radii:
            if not math.isfinite(r):
                raise DomainError("layer radii must be finite")
        for v in values:
            if not math.isfinite(v):
                raise DomainError("layer values must be finite")
        kept_r: list[float] = []
        kept_v: list[float] = []
        prev = 0.0
        for r, v in zip(radii, values):
            width = r - prev
            if width > _TIE_TOL:
                kept_r.append(r)
                kept_v.append(v)
                prev = r
            elif width >= -_TIE_TOL:
                continue  # zero-width sliver: merged into the next layer
            else:
                raise DomainError(f"layer radii must be strictly increasing, got {r} after {prev}")
        if not kept_r:
            raise DomainError("potential support must be positive")
        return cls(radii=tuple(kept_r), values=tuple(kept_v))

    @classmethod
    def zero(cls, support_radius: float = 1.0) -> "Potential":
        return cls(radii=(float(support_radius),), values=(0.0,))

    @property
    def support_radius(self) -> float:
        return self.radii[-1]

    @property
    def n_layers(self) -> int:
        return len(self.radii)

    def profile(self, r):
        """Potential value at radius r (scalar or array); 0 beyond the support."""
        r = np.asarray(r, dtype=float)
        idx = np.searchsorted(np.asarray(self.radii), r, side="right")
        vals = np.append(np.asarray(self.values), 0.0)
        return vals[np.minimum(idx, len(self.radii))]


@dataclass(frozen=True)
class LayerWavenumbers:
    """kappa[i] per layer plus the exterior wavenumber (= k)."""

    kappa: np.ndarray
    exterior: float


@dataclass(frozen=True)
class PhaseShiftTable:
    """delta[l] for l = 0..l_max at a single wavenumber."""

    k: float
    l_max: int
    delta: np.ndarray


@dataclass(frozen=True)
class InteriorState:
    """Solution coefficients (A, B) after the last interface.

    The pair is defined up to a positive rescaling; ``scale_exponent`` counts
    the power-of-two rescalings applied while propagating, so the true pair is
    (A, B) * 2**scale_exponent.
    """

    A: float
    B: float
    scale_exponent: int


def coupling(value: float, k: float) -> float:
    """Interaction strength a layer value contributes at wavenumber k."""
    return value / (k * k)


def compute_wavenumbers(p: Potential, k: float) -> LayerWavenumbers:
    """Local wavenumbers kappa_i = sqrt(k^2 - v_i/k^2) for each layer.

    Raises EvanescentLayerError (1-based layer index) when kappa_i^2 would
    fall at or below (KAPPA_MIN_FACTOR * k)^2.
    """
    if not (k > 0.0) or not math.isfinite(k):
        raise DomainError(f"wavenumber k must be positive and finite, got {k!r}")
    guard = (KAPPA_MIN_FACTOR * k) ** 2
    kap = np.empty(p.n_layers)
    for i, v in enumerate(p.values):
        kap_sq = k * k - coupling(v, k)
        if kap_sq <= guard:
            raise EvanescentLayerError(i + 1, kap_sq)
        kap[i] = math.sqrt(kap_sq)
    return LayerWavenumbers(kappa=kap, exterior=k)


def interface_matrix(l: int, kappa_i: float, kappa_next: float, r_i: float) -> np.ndarray:
    """2x2 transfer matrix across the interface at r_i.

    Maps (A, B) on the inner layer (wavenumber kappa_i) to kappa_next*(A, B)
    on the outer layer; its determinant is kappa_i * kappa_next.
    """
    if min(l, kappa_i, kappa_next, r_i) < 0 or kappa_i == 0 or kappa_next == 0 or r_i == 0:
        raise DomainError("interface_matrix arguments must be positive (l nonnegative)")
    ev_in = bessel.evaluate(l, kappa_i * r_i)
    ev_out = bessel.evaluate(l, kappa_next * r_i)
    a11, a12, a21, a22 = _alpha_entries(ev_in, ev_out, kappa_i, kappa_next, l)
    return np.array([[a11, a12], [a21, a22]])


def _alpha_entries(ev_in, ev_out, ki: float, kn: float, l):
    j1, n1, jp1, np1 = ev_in.j[l], ev_in.n[l], ev_in.jp[l], ev_in.np[l]
    j2, n2, jp2, np2 = ev_out.j[l], ev_out.n[l], ev_out.jp[l], ev_out.np[l]
    a11 = kn * j1 * np2 - ki * jp1 * n2
    a12 = kn * n1 * np2 - ki * np1 * n2
    a21 = ki * jp1 * j2 - kn * j1 * jp2
    a22 = ki * np1 * j2 - kn * n1 * jp2
    return a11, a12, a21, a22


def _propagate_all(p: Potential, k: float, l_max: int):
    """Coefficient pairs for every l at once: returns (A, B, scale_exponent) arrays.

    The 1/kappa_{i+1} prefactor of the exact transfer relation is dropped:
    only the ratio B/A matters and rescaling absorbs it.
    """
    wn = compute_wavenumbers(p, k)
    kap = np.append(wn.kappa, wn.exterior)
    ls = np.arange(l_max + 1)
    A = np.ones(l_max + 1)
    B = np.zeros(l_max + 1)
    exp = np.zeros(l_max + 1, dtype=np.int64)
    for i, r in enumerate(p.radii):
        ki, kn = kap[i], kap[i + 1]
        if ki == kn:
            continue  # transfer matrix is kappa * identity
        ev_in = bessel.evaluate(l_max, ki * r)
        ev_out = bessel.evaluate(l_max, kn * r)
        a11, a12, a21, a22 = _alpha_entries(ev_in, ev_out, ki, kn, ls)
        A, B = a11 * A + a12 * B, a21 * A + a22 * B
        m = np.maximum(np.abs(A), np.abs(B))
        big = m > _RESCALE_AT
        if np.any(big):
            _, e = np.frexp(m)
            e = np.where(big, e, 0)
            A = np.ldexp(A, -e)
            B = np.ldexp(B, -e)
            exp += e
    return A, B, exp


def propagate(p: Potential, k: float, l: int) -> InteriorState:
    """Propagate (A, B) = (1, 0) through every interface at angular momentum l."""
    A, B, exp = _propagate_all(p, k, int(l))
    return InteriorState(A=float(A[l]), B=float(B[l]), scale_exponent=int(exp[l]))


def _delta_from(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        out = -np.arctan(B / A)
    # the pair never vanishes jointly; A == 0 alone is the resonant half-pi
    # case with sign -sign(B)
    a_zero = A == 0.0
    if np.any(a_zero):
        out = np.where(a_zero, -np.sign(B) * (np.pi / 2), out)
    return out


def phase_shift(p: Potential, k: float, l: int) -> float:
    """delta(k, l) = -arctan(B/A) on the principal branch.

    Values land in (-pi/2, pi/2]: the shift is defined only modulo pi by the
    exterior ratio, and the principal branch is reported.
    """
    state = propagate(p, k, l)
    return float(_delta_from(np.array([state.A]), np.array([state.B]))[0])


def phase_shift_table(p: Potential, k: float, l_max: int) -> PhaseShiftTable:
    """delta(k, l) for l = 0..l_max."""
    if l_max < 0:
        raise DomainError(f"l_max must be nonnegative, got {l_max}")
    A, B, _ = _propagate_all(p, k, int(l_max))
    return PhaseShiftTable(k=float(k), l_max=int(l_max), delta=_delta_from(A, B))
