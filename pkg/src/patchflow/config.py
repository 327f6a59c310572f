"""Flat ``section.key = value`` run configuration.

Blank lines and ``#`` comments are ignored.  Every key maps onto one field of
:class:`~patchflow.experiments.PatchRunConfig`; unknown keys, duplicates and
unparsable values raise :class:`ConfigError` naming the key.
"""

from __future__ import annotations

from dataclasses import fields, replace
from pathlib import Path

from .experiments import PatchRunConfig

__all__ = ["ConfigError", "KEYS", "parse_config", "load_config", "dump_config"]


class ConfigError(ValueError):
    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


KEYS = {
    "grid.n": "n",
    "grid.L": "L",
    "solver.dt": "dt",
    "solver.t_end": "t_end",
    "solver.interp_order": "interp_order",
    "patch.shape": "shape",
    "patch.eta": "eta",
    "patch.radius": "radius",
    "patch.semi_axes": "semi_axes",
    "patch.eps": "eps",
    "patch.amplitude": "amplitude",
    "patch.modes": "modes",
    "vorticity.amplitude": "vorticity_amplitude",
    "vorticity.profile": "vorticity_profile",
    "diagnostics.every": "every",
    "diagnostics.p": "p",
    "seed": "seed",
}

_TYPES = {f.name: f.type for f in fields(PatchRunConfig)}


def _convert(key: str, attr: str, text: str):
    kind = _TYPES[attr]
    try:
        if kind == "int":
            return int(text)
        if kind == "float":
            return float(text)
        if kind == "str":
            return text
        parts = tuple(p.strip() for p in text.split(",") if p.strip())
        if attr == "modes":
            if len(parts) != 2:
                raise ValueError("expected two integers")
            return tuple(int(p) for p in parts)
        if attr == "semi_axes":
            if len(parts) != 2:
                raise ValueError("expected two numbers")
            return tuple(float(p) for p in parts)
    except ValueError as exc:
        raise ConfigError(key, f"cannot parse {text!r} ({exc})") from None
    raise ConfigError(key, "unsupported value type")


def parse_config(text: str) -> PatchRunConfig:
    values = {}
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(line, f"line {lineno} is not of the form key = value")
        key, val = (s.strip() for s in line.split("=", 1))
        if key not in KEYS:
            raise ConfigError(key, "unknown key")
        if key in seen:
            raise ConfigError(key, "given twice")
        if not val:
            raise ConfigError(key, "missing value")
        seen.add(key)
        attr = KEYS[key]
        values[attr] = _convert(key, attr, val)
    cfg = replace(PatchRunConfig(), **values)
    _validate(cfg)
    return cfg


def _validate(cfg: PatchRunConfig) -> None:
    n = cfg.n
    if n < 32 or n & (n - 1):
        raise ConfigError("grid.n", f"must be a power of two >= 32, got {n}")
    checks = [
        ("grid.L", cfg.L > 0, "must be positive"),
        ("solver.dt", cfg.dt > 0, "must be positive"),
        ("solver.t_end", cfg.t_end >= 0, "must be non-negative"),
        ("solver.interp_order", cfg.interp_order in (1, 3), "must be 1 or 3"),
        ("patch.shape", cfg.shape in ("disc", "ellipse", "perturbed_disc"),
         "must be disc, ellipse or perturbed_disc"),
        ("patch.eta", abs(cfg.eta) < 1, "must satisfy |eta| < 1"),
        ("patch.radius", cfg.radius > 0, "must be positive"),
        ("patch.eps", 0 < cfg.eps < 1, "must lie in ]0, 1["),
        ("patch.semi_axes", cfg.shape != "ellipse" or cfg.semi_axes is not None, "required for an ellipse"),
        ("vorticity.profile", cfg.vorticity_profile in ("constant", "linear", "gaussian"),
         "must be constant, linear or gaussian"),
        ("diagnostics.every", cfg.every > 0, "must be positive"),
        ("diagnostics.p", cfg.p >= 1, "must be >= 1"),
    ]
    for key, ok, msg in checks:
        if not ok:
            raise ConfigError(key, msg)


def load_config(path) -> PatchRunConfig:
    return parse_config(Path(path).read_text())


def dump_config(cfg: PatchRunConfig) -> str:
    """Inverse of :func:`parse_config` (one line per key)."""
    lines = []
    for key, attr in KEYS.items():
        val = getattr(cfg, attr)
        if val is None:
            continue
        if isinstance(val, tuple):
            val = ", ".join(str(v) for v in val)
        lines.append(f"{key} = {val}")
    return "\n".join(lines) + "\n"
