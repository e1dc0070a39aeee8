"""
Model parameters, named data profiles and scenario configuration.

Profiles are functions of ``(x, y, t)``.  The named forms accepted in
configuration files are

``zero``                    0
``constant:c``              c
``sine-mode:m,n[,amp]``     amp sin(m pi x / lx) sin(n pi y / ly)
``ramp:t0,t1,c``            c * clip((t - t0) / (t1 - t0), 0, 1)

Velocity initial data accept ``zero`` or ``vortex:amp`` (streamfunction
``amp sin^2(pi x / lx) sin^2(pi y / ly)``).

Equilibrium functions: ``linear:c0,c1``, ``tanh:s``, ``quadratic:c0,c1,c2``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Callable

import numpy as np

from .domain import BoundaryTrace, Grid2D, ScalarField, VectorField2D
from .errors import ConfigError

__all__ = [
    "Profile",
    "parse_profile",
    "EquilibriumFunction",
    "parse_equilibrium",
    "ModelParams",
    "Scenario",
    "scenario_from_dict",
    "load_scenario",
    "load_json",
]


@dataclass(frozen=True, eq=False)
class Profile:
    """Space-time data function with a descriptive name."""

    func: Callable[[np.ndarray, np.ndarray, float], np.ndarray]
    name: str = "custom"
    time_dependent: bool = True

    def __call__(self, x, y, t=0.0):
        return np.broadcast_to(np.asarray(self.func(x, y, t), dtype=float), np.shape(x))

    def field(self, grid: Grid2D, t: float = 0.0) -> ScalarField:
        X, Y = grid.meshgrid()
        return ScalarField(grid, self(X, Y, t))

    def trace(self, grid: Grid2D, t: float = 0.0) -> BoundaryTrace:
        x, y = grid.boundary_xy
        return BoundaryTrace(grid, self(x, y, t))

    @classmethod
    def constant(cls, c: float) -> "Profile":
        c = float(c)
        return cls(lambda x, y, t: c, f"constant:{c!r}", time_dependent=False)


def _numbers(text: str, where: str, count: tuple[int, ...]) -> list[float]:
    try:
        vals = [float(p) for p in text.split(",")] if text else []
    except ValueError:
        raise ConfigError(f"could not parse numbers in {text!r}", where) from None
    if len(vals) not in count:
        raise ConfigError(f"expected {' or '.join(map(str, count))} numbers, got {len(vals)}", where)
    return vals


def parse_profile(spec: str, grid: Grid2D, where: str = "profile") -> Profile:
    if not isinstance(spec, str):
        raise ConfigError(f"profile must be a string, got {type(spec).__name__}", where)
    kind, _, args = spec.partition(":")
    kind = kind.strip()
    if kind == "zero":
        return Profile(lambda x, y, t: 0.0, "zero", time_dependent=False)
    if kind == "constant":
        (c,) = _numbers(args, where, (1,))
        return Profile(lambda x, y, t: c, spec, time_dependent=False)
    if kind == "sine-mode":
        vals = _numbers(args, where, (2, 3))
        m, n = vals[0], vals[1]
        amp = vals[2] if len(vals) == 3 else 1.0
        lx, ly = grid.lx, grid.ly
        return Profile(lambda x, y, t: amp * np.sin(m * np.pi * x / lx) * np.sin(n * np.pi * y / ly),
                       spec, time_dependent=False)
    if kind == "ramp":
        t0, t1, c = _numbers(args, where, (3,))
        if not t1 > t0:
            raise ConfigError("ramp needs t1 > t0", where)
        return Profile(lambda x, y, t: c * np.clip((t - t0) / (t1 - t0), 0.0, 1.0), spec)
    raise ConfigError(f"unknown profile {kind!r}", where)


def parse_velocity(spec: str, grid: Grid2D, where: str = "initial.v0") -> VectorField2D:
    if not isinstance(spec, str):
        raise ConfigError("velocity profile must be a string", where)
    kind, _, args = spec.partition(":")
    if kind == "zero":
        return VectorField2D.zeros(grid)
    if kind == "vortex":
        (amp,) = _numbers(args, where, (1,))
        lx, ly = grid.lx, grid.ly
        return VectorField2D.from_streamfunction(
            grid, lambda X, Y: amp * np.sin(np.pi * X / lx) ** 2 * np.sin(np.pi * Y / ly) ** 2)
    raise ConfigError(f"unknown velocity profile {kind!r}", where)


@dataclass(frozen=True, eq=False)
class EquilibriumFunction:
    """Temperature-dependent equilibrium ``f`` together with ``f'``."""

    eval: Callable[[np.ndarray], np.ndarray]
    deriv: Callable[[np.ndarray], np.ndarray]
    description: str = "custom"

    def __call__(self, T):
        return self.eval(T)

    def check_derivative(self, T_m: float, n: int = 1000, tol: float = 1e-6) -> float:
        """Largest gap between ``deriv`` and a central difference of ``eval``."""
        T_m = max(float(T_m), 1e-3)
        T = np.linspace(-T_m, T_m, n)
        h = 1e-5 * max(1.0, T_m)
        fd = (self.eval(T + h) - self.eval(T - h)) / (2 * h)
        return float(np.max(np.abs(fd - self.deriv(T))))

    @classmethod
    def linear(cls, c0: float, c1: float) -> "EquilibriumFunction":
        return cls(lambda T: c0 + c1 * np.asarray(T, float),
                   lambda T: np.full(np.shape(T), float(c1)),
                   f"linear:{c0!r},{c1!r}")

    @classmethod
    def tanh(cls, s: float) -> "EquilibriumFunction":
        return cls(lambda T: np.tanh(s * np.asarray(T, float)),
                   lambda T: s / np.cosh(s * np.asarray(T, float)) ** 2,
                   f"tanh:{s!r}")

    @classmethod
    def quadratic(cls, c0: float, c1: float, c2: float) -> "EquilibriumFunction":
        return cls(lambda T: c0 + c1 * np.asarray(T, float) + c2 * np.asarray(T, float) ** 2,
                   lambda T: c1 + 2 * c2 * np.asarray(T, float),
                   f"quadratic:{c0!r},{c1!r},{c2!r}")


def parse_equilibrium(spec: str, where: str = "params.f") -> EquilibriumFunction:
    if not isinstance(spec, str):
        raise ConfigError("f must be a string such as 'linear:0,1'", where)
    kind, _, args = spec.partition(":")
    if kind == "linear":
        return EquilibriumFunction.linear(*_numbers(args, where, (2,)))
    if kind == "tanh":
        return EquilibriumFunction.tanh(*_numbers(args, where, (1,)))
    if kind == "quadratic":
        return EquilibriumFunction.quadratic(*_numbers(args, where, (3,)))
    raise ConfigError(f"unknown equilibrium function {kind!r}", where)


@dataclass(frozen=True, eq=False)
class ModelParams:
    a: float
    b: float
    L: float
    K: float
    grav_T: tuple[float, float]
    grav_C: tuple[float, float]
    f: EquilibriumFunction

    def __post_init__(self):
        for name in ("a", "b", "L", "K"):
            val = getattr(self, name)
            if not (np.isfinite(val) and val > 0):
                raise ValueError(f"{name} must be positive, got {val}")
        for name in ("grav_T", "grav_C"):
            g = tuple(float(c) for c in getattr(self, name))
            if len(g) != 2:
                raise ValueError(f"{name} must have two components")
            if np.hypot(*g) > 1.0 + 1e-12:
                raise ValueError(f"|{name}| must not exceed 1")
            object.__setattr__(self, name, g)

    def with_coefficients(self, L: float, K: float) -> "ModelParams":
        return replace(self, L=float(L), K=float(K))


@dataclass(frozen=True, eq=False)
class Scenario:
    """Initial and boundary data, parameters and final time."""

    grid: Grid2D
    params: ModelParams
    v0: VectorField2D
    T0: Profile
    C0: Profile
    g: Profile
    h: Profile
    t_final: float
    name: str = "scenario"
    source: dict | None = field(default=None, repr=False)

    def __post_init__(self):
        if not (np.isfinite(self.t_final) and self.t_final > 0):
            raise ValueError("t_final must be positive and finite")
        if self.v0.grid != self.grid:
            raise ValueError("v0 lives on a different grid")
        if np.max(np.abs(self.v0.divergence())) > 1e-10:
            raise ValueError("v0 is not discretely divergence-free")
        if self.v0.wall_flux() > 0:
            raise ValueError("v0 must vanish on the walls")
        for init, bc, label in ((self.T0, self.g, "T0/g"), (self.C0, self.h, "C0/h")):
            gap = np.max(np.abs(init.trace(self.grid, 0.0).values - bc.trace(self.grid, 0.0).values))
            if gap > 1e-10:
                raise ValueError(f"{label}: initial data incompatible with boundary data (gap {gap:.3e})")

    def T0_field(self) -> ScalarField:
        return self.T0.field(self.grid, 0.0)

    def C0_field(self) -> ScalarField:
        return self.C0.field(self.grid, 0.0)

    def g_trace(self, t: float) -> BoundaryTrace:
        return self.g.trace(self.grid, t)

    def h_trace(self, t: float) -> BoundaryTrace:
        return self.h.trace(self.grid, t)

    def with_coefficients(self, L: float, K: float, name: str | None = None) -> "Scenario":
        return replace(self, params=self.params.with_coefficients(L, K), name=name or self.name)

    def with_grid(self, n: int) -> "Scenario":
        """Same scenario on an ``n x n`` grid (requires a config source)."""
        if self.source is None:
            raise ValueError("scenario was not built from a configuration")
        cfg = json.loads(json.dumps(self.source))
        cfg.setdefault("grid", {})
        cfg["grid"]["nx"] = n
        cfg["grid"]["ny"] = n
        return scenario_from_dict(cfg, name=self.name)

    def with_t_final(self, t_final: float) -> "Scenario":
        src = None
        if self.source is not None:
            src = json.loads(json.dumps(self.source))
            src["t_final"] = t_final
        return replace(self, t_final=float(t_final), source=src)


def _get(cfg: dict, key: str, where: str, default: Any = ...):
    if not isinstance(cfg, dict):
        raise ConfigError("expected an object", where)
    if key in cfg:
        return cfg[key]
    if default is ...:
        raise ConfigError("missing required field", f"{where}.{key}" if where else key)
    return default


def _number(val, where: str, positive: bool = False) -> float:
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ConfigError(f"expected a number, got {val!r}", where)
    val = float(val)
    if not np.isfinite(val) or (positive and val <= 0):
        raise ConfigError(f"expected a {'positive ' if positive else ''}finite number, got {val!r}", where)
    return val


def _vector(val, where: str) -> tuple[float, float]:
    if not isinstance(val, (list, tuple)) or len(val) != 2:
        raise ConfigError("expected a 2-vector", where)
    vec = (_number(val[0], f"{where}[0]"), _number(val[1], f"{where}[1]"))
    if np.hypot(*vec) > 1.0 + 1e-12:
        raise ConfigError("gravity vectors must satisfy |g| <= 1", where)
    return vec


def scenario_from_dict(cfg: dict, name: str | None = None) -> Scenario:
    """Build a :class:`Scenario` from its JSON form.

    Raises :class:`ConfigError` naming the offending field.
    """
    if not isinstance(cfg, dict):
        raise ConfigError("scenario must be a JSON object")
    g_cfg = _get(cfg, "grid", "", {})
    nx = _get(g_cfg, "nx", "grid", 64)
    ny = _get(g_cfg, "ny", "grid", nx)
    for key, val in (("nx", nx), ("ny", ny)):
        if isinstance(val, bool) or not isinstance(val, int) or val < 4:
            raise ConfigError("expected an integer >= 4", f"grid.{key}")
    grid = Grid2D(nx, ny, _number(_get(g_cfg, "lx", "grid", 1.0), "grid.lx", True),
                  _number(_get(g_cfg, "ly", "grid", 1.0), "grid.ly", True))

    p_cfg = _get(cfg, "params", "")
    params = ModelParams(
        a=_number(_get(p_cfg, "a", "params", 1.0), "params.a", True),
        b=_number(_get(p_cfg, "b", "params", 1.0), "params.b", True),
        L=_number(_get(p_cfg, "L", "params"), "params.L", True),
        K=_number(_get(p_cfg, "K", "params"), "params.K", True),
        grav_T=_vector(_get(p_cfg, "grav_T", "params", [0.0, 1.0]), "params.grav_T"),
        grav_C=_vector(_get(p_cfg, "grav_C", "params", [0.0, 1.0]), "params.grav_C"),
        f=parse_equilibrium(_get(p_cfg, "f", "params", "linear:0,1")),
    )
    i_cfg = _get(cfg, "initial", "", {})
    b_cfg = _get(cfg, "boundary", "", {})
    try:
        return Scenario(
            grid=grid,
            params=params,
            v0=parse_velocity(_get(i_cfg, "v0", "initial", "zero"), grid),
            T0=parse_profile(_get(i_cfg, "T0", "initial", "zero"), grid, "initial.T0"),
            C0=parse_profile(_get(i_cfg, "C0", "initial", "zero"), grid, "initial.C0"),
            g=parse_profile(_get(b_cfg, "g", "boundary", "zero"), grid, "boundary.g"),
            h=parse_profile(_get(b_cfg, "h", "boundary", "zero"), grid, "boundary.h"),
            t_final=_number(_get(cfg, "t_final", "", 1.0), "t_final", True),
            name=name or str(cfg.get("name", "scenario")),
            source=json.loads(json.dumps(cfg)),
        )
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc), "scenario") from None


def load_json(path: str | Path) -> dict:
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(exc.msg, f"{path}: line {exc.lineno} column {exc.colno}") from None


def load_scenario(path: str | Path) -> Scenario:
    cfg = load_json(path)
    return scenario_from_dict(cfg, name=cfg.get("name", Path(path).stem) if isinstance(cfg, dict) else None)
