"""Pipeline hyperparameters, flat key=value config files and range validation."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, fields
from pathlib import Path

from .errors import ConfigError


@dataclass(frozen=True)
class PipelineConfig:
    l_scene: float = 15.0
    l_max: float = 11.0
    top_n: int = 15
    phi_overlap: float = 0.5
    lam: float = 0.9
    tau_highlight: float | None = None
    tau_summary: float | None = None
    b_emotion: float = 0.3
    gamma_overlap: float = 0.05
    sim_min: float = 0.6
    top_n_exp: int = 15
    rounds: int = 1
    eps: float = 5.0
    candidate_len_s: float = 15.0
    delta_ent: float = 0.01
    eq5_strict: bool = False
    calibrate: bool = True
    baseline: str | None = None
    seed: int = 0
    video_length_s: float | None = None
    default_count: int = 3

    def validate(self) -> "PipelineConfig":
        def need(cond, msg):
            if not cond:
                raise ConfigError(msg)

        need(self.l_scene > 0, "l_scene must be positive")
        need(self.l_max > 0, "l_max must be positive")
        need(self.top_n >= 1, "top_n must be >= 1")
        need(0 < self.phi_overlap <= 1, "phi_overlap must lie in (0, 1]")
        need(0 <= self.lam <= 1, "lambda must lie in [0, 1]")
        need(self.tau_highlight is None or 0 < self.tau_highlight <= 1, "tau_highlight must lie in (0, 1]")
        need(self.tau_summary is None or 0 < self.tau_summary <= 1, "tau_summary must lie in (0, 1]")
        need(self.b_emotion >= 0, "b_emotion must be non-negative")
        need(0 < self.gamma_overlap <= 1, "gamma_overlap must lie in (0, 1]")
        need(-1 <= self.sim_min <= 1, "sim_min must lie in [-1, 1]")
        need(self.top_n_exp >= 1 and self.rounds >= 1, "top_n_exp and rounds must be >= 1")
        need(self.eps >= 0, "eps must be non-negative")
        need(self.candidate_len_s > 0, "candidate_len_s must be positive")
        need(self.delta_ent > 0, "delta_ent must be positive")
        need(self.baseline in (None, "random", "uniform", "spike"), f"unknown baseline {self.baseline!r}")
        need(self.video_length_s is None or self.video_length_s > 0, "video_length_s must be positive")
        need(self.default_count >= 2, "default_count must be >= 2")
        return self

    def require(self, *names: str) -> None:
        missing = [n for n in names if getattr(self, n) is None]
        if missing:
            raise ConfigError("missing required setting(s): " + ", ".join(missing))

    def replace(self, **changes) -> "PipelineConfig":
        return dataclasses.replace(self, **changes).validate()

    def header(self) -> str:
        """One comment line listing every setting, for output provenance."""
        return "# config: " + " ".join(f"{f.name}={_fmt(getattr(self, f.name))}" for f in fields(self)) + "\n"


KEY_ALIASES = {"lambda": "lam"}


def _fmt(v) -> str:
    if v is None:
        return "none"
    if isinstance(v, bool):
        return "true" if v else "false"
    return repr(v) if isinstance(v, float) else str(v)


def _field_types() -> dict[str, str]:
    return {f.name: str(f.type) for f in fields(PipelineConfig)}


def coerce(name: str, raw: str):
    """Convert a textual value to the type of config field ``name``."""
    name = KEY_ALIASES.get(name, name)
    types = _field_types()
    if name not in types:
        raise ConfigError(f"unknown setting {name!r}")
    t = types[name]
    text = raw.strip()
    if text.lower() == "none" and "None" in t:
        return None
    try:
        if t.startswith("bool"):
            if text.lower() in ("1", "true", "yes", "on"):
                return True
            if text.lower() in ("0", "false", "no", "off"):
                return False
            raise ValueError(text)
        if t.startswith("int"):
            return int(text)
        if t.startswith("float"):
            return float(text)
        return text
    except ValueError:
        raise ConfigError(f"bad value for {name}: {raw!r}") from None


def read_config_file(path: str | Path) -> dict:
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key=value")
            key, val = line.split("=", 1)
            key = KEY_ALIASES.get(key.strip(), key.strip())
            values[key] = coerce(key, val)
    return values


def build_config(file_values: dict | None = None, overrides: dict | None = None) -> PipelineConfig:
    """Defaults, then config-file values, then explicit overrides (None means unset)."""
    merged = dict(file_values or {})
    merged.update({k: v for k, v in (overrides or {}).items() if v is not None})
    return PipelineConfig(**merged).validate()
