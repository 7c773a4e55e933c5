"""Feature extraction: extrema of 2D spectra, steady states, oscillation fits."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage, optimize, signal

from .errors import FitError
from .greens import check_relaxation
from .model import CM_TO_RAD_PER_PS, SystemParams
from .response import Spectrum2D


@dataclass(frozen=True)
class ExtremumReport:
    position: tuple  # (omega1, omega3), cm^-1
    value: float
    kind: str  # "maximum" or "minimum"
    refined: bool
    prominence: float


@dataclass(frozen=True)
class OscillationFit:
    frequency: float  # cm^-1
    decay_rate: float  # cm^-1
    offset: float
    amplitude: float
    phase: float
    residual: float  # RMS
    oscillatory: bool = True


def _quadratic_vertex(patch):
    """Vertex of a least-squares quadratic through a 3x3 patch.

    Returns ``(dx, dy, value)`` in grid units relative to the centre, where x
    runs along columns and y along rows, or ``None`` for a degenerate fit.
    """
    y, x = np.mgrid[-1:2, -1:2]
    x, y = x.ravel(), y.ravel()
    design = np.column_stack([np.ones(9), x, y, x * x, x * y, y * y])
    c = np.linalg.lstsq(design, patch.ravel(), rcond=None)[0]
    hess = np.array([[2 * c[3], c[4]], [c[4], 2 * c[5]]])
    if abs(np.linalg.det(hess)) < 1e-300:
        return None
    dx, dy = np.linalg.solve(hess, -c[1:3])
    value = c[0] + c[1] * dx + c[2] * dy + c[3] * dx * dx + c[4] * dx * dy + c[5] * dy * dy
    return dx, dy, value


def _maxima(values, min_prominence, w1, w3):
    span = values.max() - values.min()
    if span <= 0:
        return []
    candidate = values == ndimage.maximum_filter(values, size=3, mode="nearest")
    candidate[0, :] = candidate[-1, :] = candidate[:, 0] = candidate[:, -1] = False
    # plateaus and tied neighbours count once
    labels, n = ndimage.label(candidate, structure=np.ones((3, 3)))
    found = []
    for k in range(1, n + 1):
        members = np.argwhere(labels == k)
        i, j = members[np.argmax(values[labels == k])]
        prom = min(signal.peak_prominences(values[i, :], [j])[0][0],
                   signal.peak_prominences(values[:, j], [i])[0][0])
        if prom < min_prominence * span:
            continue
        vertex = _quadratic_vertex(values[i - 1:i + 2, j - 1:j + 2])
        if vertex is not None and abs(vertex[0]) <= 1 and abs(vertex[1]) <= 1:
            dx, dy, v = vertex
            pos = (float(np.interp(j + dx, np.arange(len(w1)), w1)),
                   float(np.interp(i + dy, np.arange(len(w3)), w3)))
            refined = True
        else:
            pos, v, refined = (float(w1[j]), float(w3[i])), values[i, j], False
        found.append((pos, float(v), refined, float(prom / span)))
    return found


def find_extrema(spectrum: Spectrum2D, min_prominence=0.05, kinds=("maximum", "minimum")):
    """Interior local extrema of a 2D spectrum.

    A grid node is a candidate when it is not exceeded by any of its eight
    neighbours. Its prominence is the smaller of the 1D prominences along
    its row and its column; candidates below ``min_prominence`` times the
    global value range are dropped. Survivors are refined by a quadratic fit
    to the surrounding 3x3 patch.
    """
    if not 0 < min_prominence < 1:
        raise ValueError("min_prominence must lie in (0, 1)")
    w1, w3 = spectrum.grid.omega1, spectrum.grid.omega3
    reports = []
    for kind, sign in (("maximum", 1.0), ("minimum", -1.0)):
        if kind not in kinds:
            continue
        for pos, v, refined, prom in _maxima(sign * spectrum.values, min_prominence, w1, w3):
            reports.append(ExtremumReport(pos, sign * v, kind, refined, prom))
    return reports


def steady_state_populations(params: SystemParams):
    """Long-time limits ``(p_a|a, p_b|a, p_a|b, p_b|b)`` of the population kernels.

    With the control field on, only half of the population started in a
    stays in the a/b manifold. Start-in-b limits do not depend on the field.
    """
    check_relaxation(params)
    G1, G2 = params.Gamma1, params.Gamma2
    S = G1 + G2
    share = 0.5 if params.Omega > 0 else 1.0
    return (share * G2 / S, share * G1 / S, G2 / S, G1 / S)


def _damped_cosine(tau, offset, amp, decay, freq, phase):
    return offset + amp * np.exp(-decay * tau) * np.cos(freq * tau + phase)


def fit_damped_oscillation(t2, values) -> OscillationFit:
    """Fit ``offset + A exp(-k t) cos(w t + phi)`` to a trace sampled in ps.

    The frequency is seeded from the Lomb-Scargle periodogram peak, then a
    small deterministic multi-start over decay rate and phase feeds
    ``curve_fit``. ``frequency`` and ``decay_rate`` come back in cm^-1.
    """
    t2 = np.asarray(t2, dtype=float)
    y = np.asarray(values, dtype=float)
    if t2.shape != y.shape or t2.ndim != 1:
        raise ValueError("t2 and values must be 1D arrays of equal length")
    if len(t2) < 20:
        raise ValueError("need at least 20 samples")
    order = np.argsort(t2)
    tau, y = CM_TO_RAD_PER_PS * (t2[order] - t2[order][0]), y[order]
    span = tau[-1]
    scale = max(np.max(np.abs(y)), 1e-300)
    if np.ptp(y) <= 1e-10 * scale:
        raise FitError("trace is flat, no oscillation to fit", oscillatory=False)

    nyquist = np.pi / np.median(np.diff(tau))
    freqs = np.linspace(np.pi / span, nyquist, 4000)
    power = signal.lombscargle(tau, y - y.mean(), freqs)
    w0 = freqs[np.argmax(power)]

    history = []
    best = None
    half_range = 0.5 * np.ptp(y)
    tail = y[len(y) * 3 // 4:].mean()
    for k0 in (1.0 / span, 4.0 / span, 16.0 / span):
        for phi0 in (0.0, 0.5 * np.pi, np.pi, 1.5 * np.pi):
            p0 = (tail, half_range, k0, w0, phi0)
            try:
                popt, _ = optimize.curve_fit(_damped_cosine, tau, y, p0=p0, maxfev=20000)
            except (RuntimeError, optimize.OptimizeWarning):
                history.append(float("nan"))
                continue
            rms = float(np.sqrt(np.mean((_damped_cosine(tau, *popt) - y) ** 2)))
            history.append(rms)
            if best is None or rms < best[1]:
                best = (popt, rms)
    if best is None:
        raise FitError("least squares did not converge", history)

    offset, amp, decay, freq, phase = best[0]
    if amp < 0:
        amp, phase = -amp, phase + np.pi
    if freq < 0:
        freq, phase = -freq, -phase
    phase = float(np.mod(phase, 2 * np.pi))
    if decay < 0:
        raise FitError(f"fitted decay rate is negative ({decay:.3g})", history)
    oscillatory = abs(amp) > 1e-6 * scale and freq * span >= 4 * np.pi
    if not oscillatory:
        raise FitError("fit is not oscillatory over the sampled span", history, oscillatory=False)
    return OscillationFit(float(freq), float(decay), float(offset), float(amp), phase, best[1], True)
