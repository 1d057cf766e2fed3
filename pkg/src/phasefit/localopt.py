"""Derivative-free local minimization over layered configurations.

A configuration is a point (r_1..r_M, v_1..v_M) in 2M dimensions subject to
box bounds and the ordering constraint r_1 <= ... <= r_M <= R. Three stages:

* ``line_minimize`` — golden-section search along one direction, confined to
  the exactly-computed feasible segment (all constraints are linear in the
  step, so the segment is closed-form);
* ``basic_powell`` — a direction-set sweep method: each cycle probes all
  directions from the anchor, re-orders them by how much they helped,
  sequentially minimizes along them, then minimizes along the net
  displacement, which replaces the anchor;
* ``reduction_procedure`` — greedily merges adjacent layers (including a
  virtual zero layer outside the support) whenever equalizing their values
  changes the objective by less than epsilon_r relative, shrinking the
  dimension;
* ``lmm`` — reduce, run the sweep method in the reduced subspace, reduce again.

The objective is any callable on Configuration; admissibility is preserved
throughout. Everything here is deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .solver import Potential

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
_WIDTH_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Configuration:
    """Ordered layer radii and their values; the 2M optimization coordinates."""

    radii: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        radii = np.array(self.radii, dtype=float)
        values = np.array(self.values, dtype=float)
        if radii.ndim != 1 or radii.shape != values.shape or len(radii) == 0:
            raise DomainError("configuration needs matching, nonempty radii and values")
        radii.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "radii", radii)
        object.__setattr__(self, "values", values)

    @property
    def m(self) -> int:
        return len(self.radii)

    def vector(self) -> np.ndarray:
        return np.concatenate([self.radii, self.values])

    @classmethod
    def from_vector(cls, x: np.ndarray) -> "Configuration":
        m = len(x) // 2
        return cls(radii=x[:m], values=x[m:])


@dataclass(frozen=True)
class AdmissibleSet:
    """Box bounds and layer-count cap for the search space."""

    M_max: int = 6
    R: float = 3.0
    q_low: float = 0.0
    q_high: float = 9.0

    def __post_init__(self):
        if self.M_max < 1:
            raise DomainError(f"M_max must be positive, got {self.M_max}")
        if not (self.R > 0.0):
            raise DomainError(f"R must be positive, got {self.R}")
        if not (self.q_low < self.q_high):
            raise DomainError(f"need q_low < q_high, got {self.q_low} >= {self.q_high}")

    def contains(self, cfg: Configuration, tol: float = 1e-9) -> bool:
        r, v = cfg.radii, cfg.values
        if cfg.m > self.M_max:
            return False
        if np.any(np.diff(r) < -tol) or r[0] < -tol or r[-1] > self.R + tol:
            return False
        return bool(np.all(v >= self.q_low - tol) and np.all(v <= self.q_high + tol))


@dataclass(frozen=True)
class LocalOptParams:
    """Tolerances for the local phase."""

    epsilon_r: float = 0.1
    line_tol: float = 1e-5
    f_tol: float = 1e-8
    max_sweeps: int = 50
    reset_directions: bool = False

    def __post_init__(self):
        for name in ("epsilon_r", "line_tol", "f_tol"):
            if not (getattr(self, name) > 0.0):
                raise DomainError(f"{name} must be positive")
        if self.max_sweeps < 1:
            raise DomainError("max_sweeps must be positive")


def configuration_potential(cfg: Configuration, fallback_radius: float = 1.0) -> Potential:
    """Potential described by a configuration.

    Zero-width layers vanish; trailing exactly-zero values are trimmed (they
    are indistinguishable from the exterior). A configuration describing the
    zero potential maps to a single zero layer.
    """
    kept = [(r, v) for r, v in zip(cfg.radii, cfg.values)]
    prev = 0.0
    radii: list[float] = []
    values: list[float] = []
    for r, v in kept:
        if r - prev > _WIDTH_TOL:
            radii.append(float(r))
            values.append(float(v))
            prev = r
    while values and values[-1] == 0.0:
        radii.pop()
        values.pop()
    if not radii:
        support = float(cfg.radii[-1]) if cfg.radii[-1] > _WIDTH_TOL else fallback_radius
        return Potential.zero(support)
    return Potential.from_layers(radii, values)


def _feasible_interval(x: np.ndarray, u: np.ndarray, adm: AdmissibleSet) -> tuple[float, float]:
    """Largest [t_lo, t_hi] with x + t*u admissible; t = 0 always inside."""
    m = len(x) // 2
    cons: list[tuple[float, float]] = []  # (slack, rate): slack + t*rate >= 0
    for i in range(m):
        prev_x = x[i - 1] if i > 0 else 0.0
        prev_u = u[i - 1] if i > 0 else 0.0
        cons.append((x[i] - prev_x, u[i] - prev_u))
    cons.append((adm.R - x[m - 1], -u[m - 1]))
    for i in range(m, 2 * m):
        cons.append((x[i] - adm.q_low, u[i]))
        cons.append((adm.q_high - x[i], -u[i]))
    t_lo, t_hi = -math.inf, math.inf
    for slack, rate in cons:
        slack = max(slack, 0.0)  # float dust must not exclude t = 0
        if rate > 0.0:
            t_lo = max(t_lo, -slack / rate)
        elif rate < 0.0:
            t_hi = min(t_hi, slack / -rate)
    return t_lo, t_hi


def _snap(x: np.ndarray, adm: AdmissibleSet) -> Configuration:
    m = len(x) // 2
    radii = np.minimum(np.maximum.accumulate(np.maximum(x[:m], 0.0)), adm.R)
    values = np.clip(x[m:], adm.q_low, adm.q_high)
    return Configuration(radii=radii, values=values)


def _line_minimize(f, q: Configuration, u: np.ndarray, adm: AdmissibleSet, tol: float,
                   f0: float | None = None) -> tuple[Configuration, float]:
    x0 = q.vector()
    u = np.asarray(u, dtype=float)
    if f0 is None:
        f0 = f(q)
    if not np.any(u != 0.0):
        return q, f0
    t_lo, t_hi = _feasible_interval(x0, u, adm)
    if not (t_hi - t_lo > 0.0) or not math.isfinite(t_hi - t_lo):
        return q, f0

    def candidate(t: float) -> Configuration:
        return _snap(x0 + t * u, adm)

    best_t, best_f = 0.0, f0
    a, b = t_lo, t_hi

    def probe(t: float) -> float:
        nonlocal best_t, best_f
        val = f(candidate(t))
        if val < best_f:
            best_t, best_f = t, val
        return val

    width = b - a
    n_iter = 0
    if width > tol:
        n_iter = min(200, int(math.ceil(math.log(tol / width) / math.log(_GOLDEN))))
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = probe(c), probe(d)
    for _ in range(n_iter):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = probe(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = probe(d)
    if best_t == 0.0:
        return q, f0
    return candidate(best_t), best_f


def line_minimize(f, q: Configuration, u: np.ndarray, adm: AdmissibleSet, tol: float = 1e-5) -> Configuration:
    """Minimize f from q along u within the admissible segment.

    Golden-section narrowing to interval width <= tol; the returned point
    never has larger objective than q (the start point wins ties).
    """
    cfg, _ = _line_minimize(f, q, u, adm, tol)
    return cfg


def basic_powell(f, q0: Configuration, adm: AdmissibleSet, params: LocalOptParams) -> Configuration:
    """Direction-set minimization from q0; returns a point with f no larger.

    Per cycle: probe each direction from the anchor, re-order directions by
    the probed objective (stable sort), sequentially minimize along them,
    then minimize the anchor along the net displacement; that point becomes
    the next anchor. Stops when a full cycle improves f by less than
    f_tol * (|f| + 1e-30) or after max_sweeps cycles. With
    ``params.reset_directions`` the direction set is re-initialized to the
    coordinate basis each cycle instead of keeping the re-indexed order.
    """
    dim = 2 * q0.m
    dirs = np.eye(dim)
    anchor, f_anchor = q0, f(q0)
    for _ in range(params.max_sweeps):
        if params.reset_directions:
            dirs = np.eye(dim)
        probes = np.empty(dim)
        for i in range(dim):
            _, probes[i] = _line_minimize(f, anchor, dirs[i], adm, params.line_tol, f_anchor)
        dirs = dirs[np.argsort(probes, kind="stable")]
        point, f_point = anchor, f_anchor
        for i in range(dim):
            point, f_point = _line_minimize(f, point, dirs[i], adm, params.line_tol, f_point)
        v = point.vector() - anchor.vector()
        if np.any(v != 0.0):
            cand, f_cand = _line_minimize(f, anchor, v, adm, params.line_tol, f_anchor)
            if f_point < f_cand:
                cand, f_cand = point, f_point
        else:
            cand, f_cand = point, f_point
        decrease = f_anchor - f_cand
        anchor, f_anchor = cand, f_cand
        if decrease < params.f_tol * (abs(f_anchor) + 1e-30):
            break
    return anchor


def _merge_pair(cfg: Configuration, j: int, adm: AdmissibleSet, into_exterior: bool,
                downward: bool) -> Configuration | None:
    """Configuration after merging layers j and j+1 (0-based; j+1 may be the
    virtual zero exterior). Returns None when the merge would change nothing."""
    r = list(cfg.radii)
    v = list(cfg.values)
    m = cfg.m
    if into_exterior:
        if downward:
            # outermost layer takes the exterior value 0: it disappears
            if m == 1:
                merged = Configuration(radii=np.array([r[0]]), values=np.array([0.0]))
            else:
                merged = Configuration(radii=np.array(r[:-1]), values=np.array(v[:-1]))
        else:
            # exterior takes the outermost value: support extends to R
            if r[-1] == adm.R:
                return None
            merged = Configuration(radii=np.array(r[:-1] + [adm.R]), values=np.array(v))
    else:
        keep_value = v[j + 1] if downward else v[j]
        radii = r[:j] + r[j + 1 :]
        values = v[:j] + [keep_value] + v[j + 2 :]
        merged = Configuration(radii=np.array(radii), values=np.array(values))
    if merged.m == cfg.m and np.array_equal(merged.radii, cfg.radii) and np.array_equal(
        merged.values, cfg.values
    ):
        return None
    return merged


def reduction_procedure(q: Configuration, f, eps_r: float, adm: AdmissibleSet) -> Configuration:
    """Greedy adjacent-layer merging while the objective barely notices.

    Candidate merges cover every adjacent pair including (outermost layer,
    zero exterior), in two flavors per pair: the pair takes the outer value
    ("down", value moves toward the origin) or the inner value ("up"). The
    candidate with the smallest objective change wins (ties: smaller pair
    index, down before up) and is applied only if that change is below
    eps_r * f(current). Repeats until nothing merges. May or may not reduce
    the layer count; the objective may drift by up to eps_r relative per
    merge, by construction.
    """
    cfg = q
    f_cur = f(cfg)
    for _ in range(2 * q.m + 2):
        if f_cur <= 0.0:
            break
        m = cfg.m
        best = None  # (c, paper_index, rank, merged, f_merged)
        for j in range(m):  # pairs (j, j+1), j+1 == m is the exterior
            into_ext = j + 1 == m
            for rank, downward in ((0, True), (1, False)):
                merged = _merge_pair(cfg, j, adm, into_ext, downward)
                if merged is None:
                    continue
                f_merged = f(merged)
                c = abs(f_cur - f_merged)
                paper_index = j + 2 if downward else j + 1
                key = (c, paper_index, rank)
                if best is None or key < best[0]:
                    best = (key, merged, f_merged)
        if best is None or best[0][0] >= eps_r * f_cur:
            break
        cfg, f_cur = best[1], best[2]
    return cfg


def lmm(q0: Configuration, f, adm: AdmissibleSet, params: LocalOptParams) -> Configuration:
    """Local minimization: reduce, sweep-minimize in the reduced subspace, reduce."""
    reduced = reduction_procedure(q0, f, params.epsilon_r, adm)
    minimized = basic_powell(f, reduced, adm, params)
    return reduction_procedure(minimized, f, params.epsilon_r, adm)
