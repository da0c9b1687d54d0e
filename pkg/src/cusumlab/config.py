"""Experiment configuration and its flat ``key = value`` file format.

Example file::

    # lines starting with '#' are ignored
    sigma = 2
    mu = 1
    tau_star = 0.5
    gamma_list = 0, 0.5
    theta_map = 0: -0.29, 0, 0.1; 0.5: 0
    n_grid = 50, 100, 500
    reps = 200
    base_seed = 12345
    epsilon_list = 0.01, 0.05, 0.1
    r_diag = 2
    enforce_rates = true

Lists are comma separated. ``theta_map`` holds ``gamma: theta, theta, ...``
groups separated by semicolons; every entry of ``gamma_list`` needs a group.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError
from .rates import admissible_shift

PAPER_GAMMAS = (0.0, 0.1, 0.5, 0.7, 0.9)
PAPER_THETAS = {
    0.0: (-0.29, -0.2, -0.09, 0.0, 0.1),
    0.1: (-0.29, -0.2, -0.09, 0.0, 0.1),
    0.5: (-0.29, -0.2, -0.09, 0.0, 0.1),
    0.7: (-0.19, -0.1, -0.01, 0.0, 0.1),
    0.9: (-0.01, 0.0, 0.1),
}
PAPER_N_GRID = (50, 100, 500, 1000, 1500, 2000, 3000, 4000)
DESK_N_GRID = (50, 100, 500, 1000, 1500, 2000)


@dataclass(frozen=True)
class ExperimentConfig:
    sigma: float = 2.0
    mu: float = 1.0
    tau_star: float = 0.5
    gamma_list: tuple[float, ...] = PAPER_GAMMAS
    theta_map: dict[float, tuple[float, ...]] = field(default_factory=lambda: dict(PAPER_THETAS))
    n_grid: tuple[int, ...] = PAPER_N_GRID
    reps: int = 1000
    base_seed: int = 20200301
    epsilon_list: tuple[float, ...] = (0.01, 0.05, 0.1)
    r_diag: float = 2.0
    enforce_rates: bool = True

    def __post_init__(self):
        if not (math.isfinite(self.sigma) and self.sigma > 1.0):
            raise ConfigError(f"sigma must exceed 1, got {self.sigma}")
        if not 0.0 < self.tau_star < 1.0:
            raise ConfigError(f"tau_star must lie in (0, 1), got {self.tau_star}")
        if self.reps < 1:
            raise ConfigError("reps must be at least 1")
        if not self.n_grid or any(b <= a for a, b in zip(self.n_grid, self.n_grid[1:])):
            raise ConfigError("n_grid must be non-empty and strictly increasing")
        if self.n_grid[0] < 2:
            raise ConfigError("every n must be at least 2")
        if not self.gamma_list:
            raise ConfigError("gamma_list is empty")
        if not 0 <= self.base_seed < 2**64:
            raise ConfigError("base_seed must be an unsigned 64-bit integer")
        if any(not e > 0 for e in self.epsilon_list):
            raise ConfigError("epsilon values must be positive")
        if not self.r_diag > 0:
            raise ConfigError("r_diag must be positive")
        for g in self.gamma_list:
            if not 0.0 <= g < 1.0:
                raise ConfigError(f"gamma {g} outside [0, 1)")
            if g not in self.theta_map or not self.theta_map[g]:
                raise ConfigError(f"theta_map has no thetas for gamma {g}")
            if self.enforce_rates:
                for th in self.theta_map[g]:
                    if not admissible_shift(g, th):
                        raise ConfigError(f"(gamma={g}, theta={th}) violates the rate condition")

    def cells(self):
        """``(gamma, theta, gamma_index, theta_index)`` in grid order.

        Indices are first-occurrence positions, so a repeated value reuses
        the streams of its first appearance.
        """
        for g in self.gamma_list:
            gi = self.gamma_list.index(g)
            thetas = tuple(self.theta_map[g])
            for th in thetas:
                yield g, th, gi, thetas.index(th)

    def stream_indices(self, gamma: float, theta: float) -> tuple[int, int]:
        try:
            gi = self.gamma_list.index(gamma)
            ti = tuple(self.theta_map[gamma]).index(theta)
        except (ValueError, KeyError):
            raise ConfigError(f"cell (gamma={gamma}, theta={theta}) is not in the grid") from None
        return gi, ti


def profile_defaults(profile: str) -> dict:
    if profile == "paper":
        return {}
    if profile == "desk":
        return {"reps": 200, "n_grid": DESK_N_GRID}
    raise ConfigError(f"unknown profile {profile!r}")


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(t) for t in text.split(",") if t.strip())


def _parse_theta_map(text: str) -> dict[float, tuple[float, ...]]:
    out = {}
    for group in text.split(";"):
        if not group.strip():
            continue
        key, sep, values = group.partition(":")
        if not sep:
            raise ConfigError(f"theta_map group {group.strip()!r} lacks 'gamma:'")
        out[float(key)] = _floats(values)
    return out


def _parse_bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


_PARSERS = {
    "sigma": float,
    "mu": float,
    "tau_star": float,
    "gamma_list": _floats,
    "theta_map": _parse_theta_map,
    "n_grid": lambda s: tuple(int(t) for t in s.split(",") if t.strip()),
    "reps": int,
    "base_seed": int,
    "epsilon_list": _floats,
    "r_diag": float,
    "enforce_rates": _parse_bool,
}


def parse_config_text(text: str) -> dict:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        if key not in _PARSERS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        try:
            values[key] = _PARSERS[key](value)
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key}: {exc}") from None
    return values


def load_config(path: str | Path | None = None, profile: str = "paper", **overrides) -> ExperimentConfig:
    """Profile defaults, then the file, then explicit overrides."""
    values = profile_defaults(profile)
    if path is not None:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        values.update(parse_config_text(text))
    values.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentConfig(**values)


def format_config(cfg: ExperimentConfig) -> str:
    def join(xs):
        return ", ".join(repr(x) for x in xs)

    lines = []
    for f in dataclasses.fields(cfg):
        v = getattr(cfg, f.name)
        if f.name == "theta_map":
            v = "; ".join(f"{g!r}: {join(v[g])}" for g in cfg.gamma_list)
        elif isinstance(v, tuple):
            v = join(v)
        elif isinstance(v, bool):
            v = str(v).lower()
        lines.append(f"{f.name} = {v}")
    return "\n".join(lines) + "\n"
