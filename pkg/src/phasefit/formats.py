"""Text formats: pinned numeric notation, config files, results files, CSV.

Numbers print in normalized scientific notation with a 0.x mantissa and an
upper-case two-digit exponent (``-0.220024E+00``), 6 significant digits by
default, so golden-file comparisons are byte-stable. Config files are flat
``key = value`` text with ``#`` comments and repeated ``layer = r,v`` keys;
results files are one minimum per line: ``phi=<val> layers=r1:v1,r2:v2,...``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError, DomainError


def sci(x: float, digits: int = 6) -> str:
    """Fixed-point-mantissa scientific notation: -0.220024E+00."""
    if digits < 1:
        raise DomainError(f"digits must be positive, got {digits}")
    if not math.isfinite(x):
        raise DomainError(f"cannot format non-finite value {x!r}")
    if x == 0.0:
        return "0." + "0" * digits + "E+00"
    body = f"{abs(x):.{digits - 1}E}"  # d.dddddE+xx
    mantissa, exponent = body.split("E")
    sign = "-" if x < 0.0 else ""
    return f"{sign}0.{mantissa.replace('.', '')}E{int(exponent) + 1:+03d}"


def format_layers(radii, values) -> str:
    return ",".join(f"{r:.17g}:{v:.17g}" for r, v in zip(radii, values))


def parse_layers(text: str) -> tuple[list[float], list[float]]:
    """Parse the r1:v1,r2:v2,... layer list used in flags and results files."""
    radii: list[float] = []
    values: list[float] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            r_str, v_str = part.split(":")
            radii.append(float(r_str))
            values.append(float(v_str))
        except ValueError:
            raise DomainError(f"bad layer entry {part!r}, expected r:v") from None
    if not radii:
        raise DomainError("empty layer list")
    return radii, values


def format_result_line(phi: float, radii, values) -> str:
    return f"phi={phi:.17g} layers={format_layers(radii, values)}"


def parse_result_line(line: str) -> tuple[float, list[float], list[float]]:
    try:
        phi_part, layers_part = line.strip().split(" ", 1)
        phi = float(phi_part.removeprefix("phi="))
        radii, values = parse_layers(layers_part.removeprefix("layers="))
    except (ValueError, DomainError):
        raise DomainError(f"bad results line {line!r}") from None
    return phi, radii, values


_SCALAR_KEYS = {
    "k": float,
    "lmax": int,
    "l_start": int,
    "l_end": int,
    "L": int,
    "gamma": float,
    "seed": int,
    "M_max": int,
    "R": float,
    "q_low": float,
    "q_high": float,
    "eps_r": float,
    "dedup_tol": float,
    "line_tol": float,
    "f_tol": float,
    "max_sweeps": int,
    "grid_points": int,
    "jobs": int,
}
_PATH_KEYS = {"csv_out", "results_out", "target_shifts_csv"}


@dataclass
class RunConfig:
    """Everything a command run may need, merged from file and flags."""

    layers: list[tuple[float, float]] = field(default_factory=list)
    target_layers: list[tuple[float, float]] = field(default_factory=list)
    scalars: dict = field(default_factory=dict)
    paths: dict = field(default_factory=dict)

    def get(self, key, default=None):
        if key in _PATH_KEYS:
            return self.paths.get(key, default)
        return self.scalars.get(key, default)

    def set(self, key, value):
        if key in _PATH_KEYS:
            self.paths[key] = value
        elif key in _SCALAR_KEYS:
            self.scalars[key] = _SCALAR_KEYS[key](value)
        else:
            raise ConfigError(f"unknown key {key!r}")


def parse_config_file(path: str | Path) -> RunConfig:
    """Parse a key=value config file; errors carry file and line."""
    path = Path(path)
    cfg = RunConfig()
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}", path=str(path)) from None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("expected key = value", path=str(path), line=lineno)
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key in ("layer", "target_layer"):
            parts = [p.strip() for p in value.split(",")]
            if len(parts) != 2:
                raise ConfigError(f"{key} needs 'radius, value'", path=str(path), line=lineno)
            try:
                pair = (float(parts[0]), float(parts[1]))
            except ValueError:
                raise ConfigError(f"bad {key} numbers {value!r}", path=str(path), line=lineno) from None
            (cfg.layers if key == "layer" else cfg.target_layers).append(pair)
        elif key in _SCALAR_KEYS:
            try:
                cfg.scalars[key] = _SCALAR_KEYS[key](value)
            except ValueError:
                raise ConfigError(f"bad value for {key}: {value!r}", path=str(path), line=lineno) from None
        elif key in _PATH_KEYS:
            cfg.paths[key] = value
        else:
            raise ConfigError(f"unknown key {key!r}", path=str(path), line=lineno)
    return cfg


def parse_shifts_csv(path: str | Path) -> list[float]:
    """Read an l,delta CSV (as written by the shifts command) into a dense list."""
    path = Path(path)
    try:
        lines = path.read_text().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read shifts CSV: {exc}", path=str(path)) from None
    rows: dict[int, float] = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#") or line.lower().startswith("l,"):
            continue
        try:
            l_str, d_str = line.split(",")
            rows[int(l_str)] = float(d_str)
        except ValueError:
            raise ConfigError(f"bad shifts row {line!r}", path=str(path), line=lineno) from None
    if not rows:
        raise ConfigError("shifts CSV has no data rows", path=str(path))
    l_max = max(rows)
    missing = [l for l in range(l_max + 1) if l not in rows]
    if missing:
        raise ConfigError(f"shifts CSV is missing l = {missing[:5]}", path=str(path))
    return [rows[l] for l in range(l_max + 1)]
