"""Closed-form vs direct-propagation checks run by ``eit2des validate``."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import argrelextrema

from . import greens
from .analysis import find_extrema, fit_damped_oscillation, steady_state_populations
from .lindblad import (
    PropagationSettings,
    coherence_spectrum,
    oracle_green_coherence,
    oracle_green_population,
    propagate,
    pure_state,
    sample_spectrum,
)
from .model import SystemParams, derive_rates
from .response import SpectralGrid, compute_spectrum, nonrephasing_point


@dataclass(frozen=True)
class Check:
    name: str
    residual: float
    tolerance: float
    passed: bool
    detail: str = ""

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        text = f"{status}  {self.name:<34s} residual={self.residual:.3e}  tol={self.tolerance:.1e}"
        return text + (f"  ({self.detail})" if self.detail else "")


def _check(name, residual, tol, detail=""):
    residual = float(residual)
    return Check(name, residual, tol, bool(residual <= tol), detail)


def check_eit_dip(params):
    r = derive_rates(params)
    on = greens.g_ab_ab(params.omega_ab, params).imag
    off = greens.g_ab_ab(params.omega_ab, params.without_control()).imag
    expect_on = -4 * r.gamma2 / (4 * r.gamma1 * r.gamma2 + params.Omega**2)
    expect_off = -1.0 / r.gamma1
    ratio = off / on
    return [
        _check("eit_dip.control_on", abs(on - expect_on), 1e-6),
        _check("eit_dip.control_off", abs(off - expect_off), 1e-6),
        _check("eit_dip.suppression>=16", max(0.0, 16 - ratio), 0.0, f"ratio={ratio:.2f}"),
    ]


def check_troughs(params):
    analytic = np.array(greens.trough_positions(params))
    grid = np.array(greens.grid_trough_positions(params))
    return [_check("troughs.grid_vs_analytic", np.max(np.abs(analytic - grid)), 0.02,
                   f"analytic={analytic[0]:.3f}/{analytic[1]:.3f}")]


def coherence_check_points(params, step=0.01):
    """Troughs and central maximum of Im g_ab_ab plus the extrema of Re g_ab_ab."""
    half = 3 * max(params.Omega, derive_rates(params).gamma1)
    w = params.omega_ab + np.arange(-half, half + step / 2, step)
    g = greens.g_ab_ab(w, params)
    idx = np.concatenate([
        argrelextrema(g.imag, np.less)[0],
        argrelextrema(g.imag, np.greater)[0],
        argrelextrema(g.real, np.less)[0],
        argrelextrema(g.real, np.greater)[0],
    ])
    return np.sort(w[idx])


def check_coherence_oracle(params):
    settings = PropagationSettings(dt=0.001, t_max=20.0)
    points = coherence_check_points(params)
    out = []
    for pair, closed in ((("a", "b"), greens.g_ab_ab), (("b", "a"), greens.g_ba_ba)):
        t, rho = oracle_green_coherence(pair, params, settings)
        w, g = coherence_spectrum(t, rho, pair, params.omega_ab)
        rel = np.abs(sample_spectrum(w, g, points) / closed(points, params) - 1)
        out.append(_check(f"coherence_oracle.{pair[0]}{pair[1]}", rel.max(), 0.02,
                          f"{len(points)} points"))
    return out


def check_population_oracle(params, t_max=10.0, step=0.01):
    t2 = np.arange(0.0, t_max + step / 2, step)
    out = []
    for start, end in (("a", "a"), ("a", "b"), ("b", "a"), ("b", "b")):
        dev = np.abs(greens.g_pop(start, end, t2, params)
                     - oracle_green_population(start, end, params, t2))
        out.append(_check(f"population_oracle.G_{end}{end},{start}{start}", dev.max(), 0.02,
                          f"worst at t2={t2[np.argmax(dev)]:.2f} ps"))
    return out


def check_conservation(params):
    _, states = propagate(pure_state("a"), params, PropagationSettings(dt=0.001, t_max=300.0))
    trace = np.abs(np.trace(states, axis1=1, axis2=2) - 1).max()
    herm = np.abs(states - states.conj().transpose(0, 2, 1)).max()
    t2 = np.linspace(0, 300, 3001)
    off = params.without_control()
    closed_off = np.abs(greens.g_aa_aa(t2, off) + greens.g_bb_aa(t2, off) - 1).max()
    ts = np.arange(0.0, 10.0 + 1e-9, 0.05)
    numeric_off = np.abs(oracle_green_population("a", "a", off, ts)
                         + oracle_green_population("a", "b", off, ts) - 1).max()
    closed_b = np.abs(greens.g_aa_bb(t2, params) + greens.g_bb_bb(t2, params) - 1).max()
    return [
        _check("conservation.trace", trace, 1e-9),
        _check("conservation.hermiticity", herm, 1e-9),
        _check("conservation.no_control_sum_closed", closed_off, 1e-15),
        _check("conservation.no_control_sum_numeric", numeric_off, 1e-9),
        _check("conservation.start_b_sum_closed", closed_b, 1e-15),
    ]


def check_steady_states(params):
    expected = steady_state_populations(params)
    _, states = propagate(pure_state("a"), params, PropagationSettings(dt=0.001, t_max=300.0), stride=300000)
    _, states_b = propagate(pure_state("b"), params, PropagationSettings(dt=0.001, t_max=300.0), stride=300000)
    got = (states[-1, 0, 0].real, states[-1, 1, 1].real, states_b[-1, 0, 0].real, states_b[-1, 1, 1].real)
    names = ("p_a|a", "p_b|a", "p_a|b", "p_b|b")
    return [_check(f"steady_state.{n}", abs(g - e), 1e-4, f"closed={e:.6g} propagated={g:.6g}")
            for n, g, e in zip(names, got, expected)]


def _positions(extrema, kind):
    return [e.position for e in extrema if e.kind == kind]


def check_peak_counts(params):
    grid = SpectralGrid.centered(params.omega_ab)
    step = grid.omega1_step
    lo, hi = greens.trough_positions(params)
    targets = [(x, y) for x in (lo, hi) for y in (lo, hi)]

    def located(found):
        if len(found) != len(targets):
            return np.inf
        return max(min(max(abs(p[0] - x), abs(p[1] - y)) for p in found) for x, y in targets)

    out = []
    rp_off = _positions(find_extrema(compute_spectrum(grid, "rp", params, False)), "maximum")
    err = (np.inf if len(rp_off) != 1 else
           max(abs(rp_off[0][0] - params.omega_ab), abs(rp_off[0][1] - params.omega_ab)))
    out.append(_check("peaks.rephasing_off_single", err, step, f"{len(rp_off)} maxima"))
    rp_on = _positions(find_extrema(compute_spectrum(grid, "rp", params, True)), "maximum")
    out.append(_check("peaks.rephasing_on_four", located(rp_on), step, f"{len(rp_on)} maxima"))
    nr_off = _positions(find_extrema(compute_spectrum(grid, "nr", params, False)), "minimum")
    err = (np.inf if len(nr_off) != 1 else
           max(abs(nr_off[0][0] - params.omega_ab), abs(nr_off[0][1] - params.omega_ab)))
    out.append(_check("peaks.nonrephasing_off_single", err, step, f"{len(nr_off)} minima"))
    nr_on = _positions(find_extrema(compute_spectrum(grid, "nr", params, True)), "minimum")
    out.append(_check("peaks.nonrephasing_on_four", located(nr_on), step, f"{len(nr_on)} minima"))
    return out


def check_t2_behaviour(params):
    grid = SpectralGrid.centered(params.omega_ab)
    out = []
    for kind in ("rp", "nr"):
        ref = compute_spectrum(grid, kind, params, False).values
        dev = max(np.abs(compute_spectrum(grid.with_t2(t), kind, params, False).values - ref).max()
                  for t in (1.0, 10.0, 300.0))
        out.append(_check(f"t2.invariant_off.{kind}", dev, 1e-12))
    r = derive_rates(params)
    t2 = np.arange(0.0, 3.0 + 1e-9, 0.01)
    fit = fit_damped_oscillation(t2, nonrephasing_point(params.omega_ab, t2, params.omega_ab, params))
    out.append(_check("t2.fit_frequency", abs(fit.frequency / r.omega_tilde - 1), 0.05,
                      f"fit={fit.frequency:.3f} cm^-1"))
    out.append(_check("t2.fit_decay", abs(fit.decay_rate / (0.5 * r.gamma3) - 1), 0.05,
                      f"fit={fit.decay_rate:.3f} cm^-1"))
    return out


def check_absorptive(params):
    grid = SpectralGrid.centered(params.omega_ab)
    off = compute_spectrum(grid, "abs", params, False)
    i, j = np.argmin(np.abs(grid.omega3 - params.omega_ab)), np.argmin(np.abs(grid.omega1 - params.omega_ab))
    ext_off = find_extrema(off, 0.05)
    maxima = _positions(ext_off, "maximum")
    minima = _positions(ext_off, "minimum")
    on_diag = len(maxima) == 2 and all(
        np.sign(p[0] - params.omega_ab) == np.sign(p[1] - params.omega_ab) for p in maxima)
    off_diag = len(minima) == 2 and all(
        np.sign(p[0] - params.omega_ab) == -np.sign(p[1] - params.omega_ab) for p in minima)
    ext_on = find_extrema(compute_spectrum(grid, "abs", params, True), 0.05)
    extra = len(ext_on) - len(ext_off)
    return [
        _check("absorptive.center_zero", abs(off.values[i, j]), 1e-12),
        _check("absorptive.off_structure", 0.0 if (on_diag and off_diag) else 1.0, 0.0,
               f"{len(maxima)} diagonal maxima, {len(minima)} anti-diagonal minima"),
        _check("absorptive.on_extra>=8", max(0, 8 - extra), 0.0, f"{extra} additional extrema"),
    ]


SUITE = (
    check_eit_dip,
    check_troughs,
    check_coherence_oracle,
    check_population_oracle,
    check_conservation,
    check_steady_states,
    check_peak_counts,
    check_t2_behaviour,
    check_absorptive,
)


def run_validation(params: SystemParams):
    results = []
    for check in SUITE:
        results.extend(check(params))
    return results
