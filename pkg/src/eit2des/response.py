"""Third-order 2D signals assembled from the Green's functions.

Every signal has the form ``Re{ g_ab_ab(w3) * K(t2) * g_X(w1) }`` where
``K`` is the sum of the four population kernels and the w1 propagator is
``g_ba_ba`` (rephasing) or ``g_ab_ab`` (non-rephasing). The absorptive
signal is their sum.

Pathway bookkeeping (double-sided Feynman diagrams, two per R_i):

====  ============  ===========  =========================
R     direction     t2 start     w1 propagator
====  ============  ===========  =========================
R1    +k1-k2+k3     a            ab,ab  (non-rephasing)
R2    -k1+k2+k3     a            ba,ba  (rephasing)
R3    -k1+k2+k3     b            ba,ba  (rephasing)
R4    +k1-k2+k3     b            ab,ab  (non-rephasing)
====  ============  ===========  =========================

Each signal nevertheless sums all four kernels, i.e. both end levels of
both start levels; the split of kernels between R2 and R3 (or R1 and R4)
is descriptive only.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigError
from .greens import g_ab_ab, g_ba_ba, g_pop, kernel_sum
from .model import SystemParams

KINDS = ("rephasing", "nonrephasing", "absorptive")
KIND_ALIASES = {"rp": "rephasing", "nr": "nonrephasing", "abs": "absorptive"}
MAX_NODES = 10**8

# (kernel label, start level, end level)
T2_KERNELS = (
    ("aa,aa", "a", "a"),
    ("bb,aa", "a", "b"),
    ("aa,bb", "b", "a"),
    ("bb,bb", "b", "b"),
)


def normalize_kind(kind):
    kind = KIND_ALIASES.get(kind, kind)
    if kind not in KINDS:
        raise ConfigError(f"unknown signal kind {kind!r}", key="kind")
    return kind


@dataclass(frozen=True)
class SpectralGrid:
    omega1_min: float
    omega1_max: float
    omega1_step: float
    omega3_min: float
    omega3_max: float
    omega3_step: float
    t2: float = 0.0

    def __post_init__(self):
        for axis in ("omega1", "omega3"):
            lo = getattr(self, f"{axis}_min")
            hi = getattr(self, f"{axis}_max")
            step = getattr(self, f"{axis}_step")
            if not lo < hi:
                raise ConfigError(f"{axis}_min must be < {axis}_max", key=f"{axis}_min")
            if not step > 0:
                raise ConfigError(f"{axis}_step must be > 0", key=f"{axis}_step")
            n = (hi - lo) / step
            if abs(n - round(n)) > 1e-6:
                raise ConfigError(f"{axis}_step must divide {axis}_max - {axis}_min", key=f"{axis}_step")
        if self.t2 < 0:
            raise ConfigError("t2 must be >= 0", key="t2")

    @classmethod
    def centered(cls, omega_ab, half_width=150.0, step=0.5, t2=0.0):
        return cls(omega_ab - half_width, omega_ab + half_width, step,
                   omega_ab - half_width, omega_ab + half_width, step, t2)

    def _axis(self, lo, hi, step):
        return np.linspace(lo, hi, int(round((hi - lo) / step)) + 1)

    @property
    def omega1(self):
        return self._axis(self.omega1_min, self.omega1_max, self.omega1_step)

    @property
    def omega3(self):
        return self._axis(self.omega3_min, self.omega3_max, self.omega3_step)

    @property
    def shape(self):
        return len(self.omega3), len(self.omega1)

    def with_t2(self, t2):
        return replace(self, t2=t2)


@dataclass(frozen=True)
class Spectrum2D:
    """Real signal on a grid; rows follow omega3, columns follow omega1."""

    grid: SpectralGrid
    values: np.ndarray
    kind: str
    control_on: bool

    def __post_init__(self):
        if self.values.shape != self.grid.shape:
            raise ValueError(f"values shape {self.values.shape} != grid shape {self.grid.shape}")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("spectrum contains non-finite values")


@dataclass(frozen=True)
class PathwayTerm:
    t2_kernel: str
    omega1_propagator: str
    value: complex


def _omega1_propagator(kind):
    return {"rephasing": ("ba,ba", g_ba_ba), "nonrephasing": ("ab,ab", g_ab_ab)}[kind]


def pathway_terms(omega3, t2, omega1, params: SystemParams, kind="rephasing"):
    """The four complex kernel x propagator products summed by one signal."""
    kind = normalize_kind(kind)
    if kind == "absorptive":
        return (pathway_terms(omega3, t2, omega1, params, "rephasing")
                + pathway_terms(omega3, t2, omega1, params, "nonrephasing"))
    label, prop = _omega1_propagator(kind)
    outer = g_ab_ab(omega3, params) * prop(omega1, params)
    return [PathwayTerm(name, label, complex(outer * g_pop(s, e, t2, params)))
            for name, s, e in T2_KERNELS]


def _signal(omega3, t2, omega1, params, kind):
    K = kernel_sum(t2, params)
    g3 = g_ab_ab(omega3, params)
    if kind == "rephasing":
        return np.real(g3 * K * g_ba_ba(omega1, params))
    if kind == "nonrephasing":
        return np.real(g3 * K * g_ab_ab(omega1, params))
    return _signal(omega3, t2, omega1, params, "rephasing") + _signal(omega3, t2, omega1, params, "nonrephasing")


def rephasing_point(omega3, t2, omega1, params: SystemParams):
    return _signal(omega3, t2, omega1, params, "rephasing")


def nonrephasing_point(omega3, t2, omega1, params: SystemParams):
    return _signal(omega3, t2, omega1, params, "nonrephasing")


def absorptive_point(omega3, t2, omega1, params: SystemParams):
    return rephasing_point(omega3, t2, omega1, params) + nonrephasing_point(omega3, t2, omega1, params)


def compute_spectrum(grid: SpectralGrid, kind, params: SystemParams, control_on=True) -> Spectrum2D:
    """Evaluate a signal at every node of ``grid``.

    ``control_on=False`` sets Omega to zero regardless of ``params``.
    """
    kind = normalize_kind(kind)
    rows, cols = grid.shape
    if rows * cols > MAX_NODES:
        raise ConfigError(f"grid has {rows * cols} nodes (limit {MAX_NODES})", key="grid")
    if not control_on:
        params = params.without_control()
    w3 = grid.omega3[:, None]
    w1 = grid.omega1[None, :]
    values = _signal(w3, grid.t2, w1, params, kind)
    return Spectrum2D(grid, np.ascontiguousarray(values, dtype=float), kind, bool(control_on))
