"""Experiment configuration files (INI-style ``key = value`` sections).

Example::

    [run]
    engine = freefermion
    n_dis = 500
    master_seed = 20240101
    output = fig1a.csv

    [model]
    L = 64
    delta = 0.0
    sigma_h = 0.05

    [disorder]
    filter_order = 1

    [time]
    t_max = 150
    dt = 0.05
    k_max = 5

A ``schedule = 50, 50, 50, 50`` entry under ``[time]`` selects the
multi-quench protocol; the time grid then spans the whole schedule.
"""
from __future__ import annotations

import configparser
import math
from dataclasses import asdict, dataclass, fields
from importlib import resources
from pathlib import Path

import numpy as np

from .disorder import BOUNDARY_MODES
from .errors import ConfigError
from .manybody import MAX_L

ENGINES = ("analytic", "freefermion", "manybody")

_SECTIONS = {
    "run": ("engine", "n_dis", "master_seed", "output", "workers"),
    "model": ("L", "delta", "J", "sigma_h", "beta", "alpha"),
    "disorder": ("filter_order", "boundary"),
    "time": ("t_max", "dt", "k_max", "schedule"),
}


@dataclass(frozen=True)
class ExperimentConfig:
    engine: str
    L: int
    delta: float = 0.0
    J: float = 1.0
    sigma_h: float = 0.0
    filter_order: int = 1
    boundary: str = "symmetric"
    beta: float = math.inf
    alpha: float | None = None
    k_max: int = 5
    t_max: float | None = None
    dt: float = 0.05
    schedule: tuple = ()
    n_dis: int = 0
    master_seed: int = 0
    output: str = ""
    workers: int = 1

    def __post_init__(self):
        self.validate()

    def validate(self):
        e = self.engine
        if e not in ENGINES:
            raise ConfigError(f"engine must be one of {ENGINES}, got {e!r}")
        if self.L < 1:
            raise ConfigError("L must be >= 1")
        if not -1 < self.delta < 1:
            raise ConfigError("delta must satisfy |delta| < 1")
        if self.J <= 0 or self.sigma_h < 0 or not self.beta > 0:
            raise ConfigError("need J > 0, sigma_h >= 0, beta > 0")
        if self.filter_order < 0:
            raise ConfigError("filter_order must be >= 0")
        if self.boundary not in BOUNDARY_MODES:
            raise ConfigError(f"boundary must be one of {BOUNDARY_MODES}")
        if self.k_max < 1:
            raise ConfigError("k_max must be >= 1")
        if self.dt <= 0:
            raise ConfigError("dt must be positive")
        if any(t < 0 for t in self.schedule):
            raise ConfigError("schedule durations must be non-negative")
        if self.schedule:
            if self.t_max is not None and not math.isclose(self.t_max, sum(self.schedule)):
                raise ConfigError("t_max must equal the total schedule duration")
        elif self.t_max is None or self.t_max < 0:
            raise ConfigError("t_max is required (or give a schedule)")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if e == "analytic":
            if self.n_dis:
                raise ConfigError("the analytic engine takes no n_dis")
            if self.alpha is None or self.alpha < 0:
                raise ConfigError("the analytic engine needs alpha >= 0")
        else:
            if self.n_dis < 2:
                raise ConfigError("n_dis must be >= 2")
            if not math.isinf(self.beta):
                raise ConfigError(f"the {e} engine only supports beta = inf")
            if self.L % 2:
                raise ConfigError("L must be even (zero-magnetization ground state)")
        if e == "freefermion" and self.delta != 0:
            raise ConfigError("the freefermion engine requires delta = 0")
        if e == "manybody" and self.L > MAX_L:
            raise ConfigError(f"the manybody engine requires L <= {MAX_L}")

    @property
    def total_time(self):
        return float(sum(self.schedule)) if self.schedule else float(self.t_max)

    def time_grid(self):
        n = int(round(self.total_time / self.dt))
        if not math.isclose(n * self.dt, self.total_time, rel_tol=1e-9, abs_tol=1e-12):
            raise ConfigError("total time must be a multiple of dt")
        return self.dt * np.arange(n + 1)

    def to_dict(self):
        d = asdict(self)
        d["schedule"] = list(self.schedule)
        d["beta"] = "inf" if math.isinf(self.beta) else self.beta
        return d

    def to_text(self):
        values = {f.name: getattr(self, f.name) for f in fields(self)}
        lines = []
        for section, keys in _SECTIONS.items():
            lines.append(f"[{section}]")
            for key in keys:
                v = values[key]
                if v is None or (key in ("schedule", "output") and not v):
                    continue
                lines.append(f"{key} = {_format(v)}")
            lines.append("")
        return "\n".join(lines)


def _format(v):
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return "inf" if math.isinf(v) else repr(v)
    if isinstance(v, tuple):
        return ", ".join(_format(x) for x in v)
    return str(v)


_TYPES = {
    "engine": str, "output": str, "boundary": str,
    "L": int, "n_dis": int, "master_seed": int, "workers": int, "filter_order": int, "k_max": int,
    "delta": float, "J": float, "sigma_h": float, "beta": float, "alpha": float, "t_max": float, "dt": float,
}


def parse_config(text):
    cp = configparser.ConfigParser()
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse config: {exc}") from exc
    kwargs = {}
    for section in cp.sections():
        if section not in _SECTIONS:
            raise ConfigError(f"unknown section [{section}]")
        for key, raw in cp[section].items():
            if key not in _SECTIONS[section]:
                raise ConfigError(f"unknown key {key!r} in [{section}]")
            try:
                if key == "schedule":
                    kwargs[key] = tuple(float(x) for x in raw.replace(",", " ").split())
                else:
                    kwargs[key] = _TYPES[key](raw.strip())
            except ValueError as exc:
                raise ConfigError(f"bad value for {key}: {raw!r}") from exc
    if "engine" not in kwargs or "L" not in kwargs:
        raise ConfigError("config needs at least [run] engine and [model] L")
    try:
        return ExperimentConfig(**kwargs)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


RECIPES = ("fig1a", "fig1b", "fig2a", "fig2b", "fig2c", "fig2d", "fig3", "fig4")


def recipe_text(name):
    if name not in RECIPES:
        raise ConfigError(f"unknown recipe {name!r}; choose from {RECIPES}")
    return resources.files("tllfp.recipes").joinpath(f"{name}.ini").read_text()


def load_config(path_or_recipe):
    """Read a config file, or a shipped figure recipe by name."""
    p = Path(path_or_recipe)
    if p.exists():
        try:
            return parse_config(p.read_text())
        except OSError as exc:
            raise ConfigError(f"cannot read {p}: {exc}") from exc
    if str(path_or_recipe) in RECIPES:
        return parse_config(recipe_text(str(path_or_recipe)))
    raise ConfigError(f"no config file or recipe named {path_or_recipe!r}")
