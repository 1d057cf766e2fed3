"""Riccati-Bessel functions j_l, n_l and derivatives.

Normalization: j_l(x) = x * (spherical Bessel of the first kind),
n_l(x) = x * (spherical Bessel of the second kind), so that

    j_0(x) = sin x,   n_0(x) = -cos x,
    j_l(x) ~ sin(x - l*pi/2),   n_l(x) ~ -cos(x - l*pi/2)  as x -> inf,

and the Wronskian j_l n_l' - j_l' n_l = 1 for every l. Both families obey

    f_{l+1}(x) = ((2l+1)/x) f_l(x) - f_{l-1}(x)
    f_l'(x)    = f_{l-1}(x) - (l/x) f_l(x)

with the l = -1 members  j_{-1} = cos x,  n_{-1} = sin x.

Stability dictates the evaluation direction: n_l is the dominant solution
upward and is computed by upward recurrence; j_l is dominant downward, so for
l_max > x it is computed by a downward (Miller) recurrence normalized against
the closed-form l=0/1 values, and for x < 0.1*(l+1) by the ascending series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BesselOverflowError, DomainError

_N_OVERFLOW = 1e290
_RESCALE_LIMIT = 1e250
_SERIES_TERMS = 20


@dataclass(frozen=True)
class BesselEval:
    """All four Riccati-Bessel sequences at a single argument.

    Arrays are indexed by l = 0..l_max: ``j[l]``, ``n[l]`` are the regular and
    irregular functions, ``jp[l]``, ``np[l]`` their derivatives.
    """

    l_max: int
    x: float
    j: np.ndarray
    n: np.ndarray
    jp: np.ndarray
    np: np.ndarray


_DFACT: list[float] = [1.0]  # _DFACT[m] = (2m+1)!!


def double_factorial(m: int) -> float:
    """(m)!! as a float; m = -1 and 0 give 1."""
    m = int(m)
    if m < 2:
        return 1.0
    if m % 2:
        idx = (m - 1) // 2
        while len(_DFACT) <= idx:
            _DFACT.append(_DFACT[-1] * (2 * len(_DFACT) + 1))
        return _DFACT[idx]
    out = 1.0
    while m > 1:
        out *= m
        m -= 2
    return out


def j_series(l: int, x: float, terms: int = _SERIES_TERMS) -> float:
    """Ascending power series of j_l, leading term x^(l+1)/(2l+1)!!."""
    lead = x ** (l + 1) / double_factorial(2 * l + 1)
    term = 1.0
    total = 1.0
    half_sq = -0.5 * x * x
    for m in range(1, terms):
        term *= half_sq / (m * (2 * l + 2 * m + 1))
        total += term
    return lead * total


def _j_upward(l_max: int, x: float) -> list[float]:
    # stable for l <= x
    j = [0.0] * (l_max + 1)
    prev = math.cos(x)
    j[0] = math.sin(x)
    for l in range(1, l_max + 1):
        j[l] = (2 * l - 1) / x * j[l - 1] - prev
        prev = j[l - 1]
    return j


def _j_downward(l_max: int, x: float) -> list[float]:
    # Miller recurrence: start well above l_max, recurse down, normalize at the
    # l=0/1 closed forms (their zeros interlace, so one anchor is always usable).
    start = l_max + 34 + int(math.sqrt(l_max))
    vals = [0.0] * (l_max + 1)
    f_up = 0.0
    f = 1e-30
    inv_x = 1.0 / x
    for l in range(start, -1, -1):
        f_down = (2 * l + 3) * inv_x * f - f_up
        f_up = f
        f = f_down
        if l <= l_max:
            vals[l] = f_down
        if f > _RESCALE_LIMIT or f < -_RESCALE_LIMIT:
            f *= 1e-250
            f_up *= 1e-250
            for m in range(l, l_max + 1):
                vals[m] *= 1e-250
    j0 = math.sin(x)
    j1 = math.sin(x) / x - math.cos(x)
    if abs(j0) >= abs(j1):
        scale = j0 / vals[0]
    else:
        scale = j1 / vals[1]
    return [v * scale for v in vals]


def evaluate(l_max: int, x: float) -> BesselEval:
    """Evaluate j_l, n_l, j_l', n_l' for l = 0..l_max at x > 0.

    Raises DomainError for x <= 0 and BesselOverflowError (naming the
    offending l) if n_l would exceed 1e290 before l_max is reached.
    """
    if not (x > 0.0) or not math.isfinite(x):
        raise DomainError(f"Riccati-Bessel argument must be positive and finite, got {x!r}")
    if l_max < 0:
        raise DomainError(f"l_max must be nonnegative, got {l_max}")
    l_max = int(l_max)

    sin_x = math.sin(x)
    cos_x = math.cos(x)

    # n_l: upward, overflow-guarded
    n = [0.0] * (l_max + 1)
    n[0] = -cos_x
    prev = sin_x  # n_{-1}
    for l in range(1, l_max + 1):
        n[l] = (2 * l - 1) / x * n[l - 1] - prev
        prev = n[l - 1]
        if abs(n[l]) > _N_OVERFLOW:
            raise BesselOverflowError(l, x)

    # j_l: regime choice per stability
    if x < 0.1:
        j = [j_series(l, x) for l in range(l_max + 1)]
    elif l_max <= x:
        j = _j_upward(l_max, x)
    else:
        j = _j_downward(l_max, x)
        for l in range(l_max + 1):
            if x < 0.1 * (l + 1):
                j[l] = j_series(l, x)

    # derivatives from f_l' = f_{l-1} - (l/x) f_l
    jp = [0.0] * (l_max + 1)
    np_ = [0.0] * (l_max + 1)
    jp[0] = cos_x
    np_[0] = sin_x
    for l in range(1, l_max + 1):
        jp[l] = j[l - 1] - l / x * j[l]
        np_[l] = n[l - 1] - l / x * n[l]

    return BesselEval(
        l_max=l_max,
        x=x,
        j=np.asarray(j),
        n=np.asarray(n),
        jp=np.asarray(jp),
        np=np.asarray(np_),
    )
