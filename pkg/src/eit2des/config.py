"""Flat ``key = value`` run configuration.

One assignment per line, ``#`` starts a comment, blank lines are ignored.
Unknown keys are rejected. Anything left out falls back to the defaults
below, which reproduce the reference parameter set.
"""
from __future__ import annotations

from dataclasses import dataclass, fields

from .errors import ConfigError
from .model import SystemParams
from .response import SpectralGrid, normalize_kind

PARAM_KEYS = tuple(f.name for f in fields(SystemParams))
GRID_KEYS = ("omega1_min", "omega1_max", "omega1_step", "omega3_min", "omega3_max", "omega3_step")
DEFAULT_HALF_WIDTH = 150.0
DEFAULT_STEP = 0.5

DEFAULTS = {
    "t2": "0, 2, 4, 300",
    "output": "out",
    "control": "on",
    "kind": "rp",
    "dt": "0.001",
    "pop_t_max": "10",
    "pop_step": "0.01",
}
KNOWN_KEYS = PARAM_KEYS + GRID_KEYS + tuple(DEFAULTS)


@dataclass(frozen=True)
class RunConfig:
    params: SystemParams
    grid: SpectralGrid
    t2_list: tuple
    output_path: str
    control_on: bool
    signal_kind: str  # rp | nr | abs
    dt: float = 0.001
    pop_t_max: float = 10.0
    pop_step: float = 0.01

    def echo(self):
        """Every effective setting as ``key = value`` lines."""
        lines = [f"{k} = {getattr(self.params, k):.12g}" for k in PARAM_KEYS]
        lines += [f"{k} = {getattr(self.grid, k):.12g}" for k in GRID_KEYS]
        lines += [
            "t2 = " + ", ".join(f"{t:.12g}" for t in self.t2_list),
            f"output = {self.output_path}",
            f"control = {'on' if self.control_on else 'off'}",
            f"kind = {self.signal_kind}",
            f"dt = {self.dt:.12g}",
            f"pop_t_max = {self.pop_t_max:.12g}",
            f"pop_step = {self.pop_step:.12g}",
        ]
        return "\n".join(lines)


def _number(key, text):
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"{key}: expected a number, got {text!r}", key=key) from None


def _parse_control(value):
    v = value.strip().lower()
    if v in ("on", "true", "yes", "1"):
        return True
    if v in ("off", "false", "no", "0"):
        return False
    raise ConfigError(f"control: expected on/off, got {value!r}", key="control")


def _parse_t2(value):
    try:
        ts = tuple(float(x) for x in value.replace(",", " ").split())
    except ValueError:
        raise ConfigError(f"t2: expected numbers, got {value!r}", key="t2") from None
    if not ts:
        raise ConfigError("t2: list must not be empty", key="t2")
    if any(t < 0 for t in ts):
        raise ConfigError("t2: values must be >= 0", key="t2")
    if list(ts) != sorted(ts):
        raise ConfigError("t2: values must be sorted", key="t2")
    return ts


def read_assignments(text):
    """Map key -> raw string value, rejecting malformed lines and unknown keys."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}", line=lineno)
        key, value = (s.strip() for s in line.split("=", 1))
        if not key or not value:
            raise ConfigError(f"line {lineno}: empty key or value", line=lineno)
        if key not in KNOWN_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}", key=key, line=lineno)
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}", key=key, line=lineno)
        values[key] = value
    return values


def build_config(values):
    """Assemble a :class:`RunConfig` from raw string values plus defaults."""
    param_kwargs = {k: _number(k, values[k]) for k in PARAM_KEYS if k in values}
    params = SystemParams(**param_kwargs)
    if params.Gamma1 + params.Gamma2 <= 0:
        raise ConfigError("Gamma1 + Gamma2 must be > 0", key="Gamma1")

    grid_defaults = {
        "omega1_min": params.omega_ab - DEFAULT_HALF_WIDTH,
        "omega1_max": params.omega_ab + DEFAULT_HALF_WIDTH,
        "omega1_step": DEFAULT_STEP,
        "omega3_min": params.omega_ab - DEFAULT_HALF_WIDTH,
        "omega3_max": params.omega_ab + DEFAULT_HALF_WIDTH,
        "omega3_step": DEFAULT_STEP,
    }
    grid_kwargs = {k: _number(k, values[k]) if k in values else grid_defaults[k] for k in GRID_KEYS}
    grid = SpectralGrid(**grid_kwargs)

    merged = {**DEFAULTS, **{k: v for k, v in values.items() if k in DEFAULTS}}
    kind = merged["kind"].strip()
    if kind not in ("rp", "nr", "abs"):
        normalize_kind(kind)  # raises with the key name for anything unknown
        kind = {"rephasing": "rp", "nonrephasing": "nr", "absorptive": "abs"}[kind]
    dt = _number("dt", merged["dt"])
    pop_t_max = _number("pop_t_max", merged["pop_t_max"])
    pop_step = _number("pop_step", merged["pop_step"])
    if dt <= 0:
        raise ConfigError("dt must be > 0", key="dt")
    if pop_t_max < 0:
        raise ConfigError("pop_t_max must be >= 0", key="pop_t_max")
    ratio = pop_step / dt
    if pop_step <= 0 or abs(ratio - round(ratio)) > 1e-6:
        raise ConfigError("pop_step must be a positive multiple of dt", key="pop_step")
    return RunConfig(
        params=params,
        grid=grid,
        t2_list=_parse_t2(merged["t2"]),
        output_path=merged["output"],
        control_on=_parse_control(merged["control"]),
        signal_kind=kind,
        dt=dt,
        pop_t_max=pop_t_max,
        pop_step=pop_step,
    )


def parse_config(text, overrides=None):
    """Parse configuration text; ``overrides`` (raw strings) win over the file."""
    values = read_assignments(text)
    for key, value in (overrides or {}).items():
        if key not in KNOWN_KEYS:
            raise ConfigError(f"unknown key {key!r}", key=key)
        values[key] = value
    return build_config(values)
