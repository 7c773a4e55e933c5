"""Closed-form Green's functions of the driven Lambda atom.

Frequency-domain propagators of the probe coherence (``g_ab_ab``,
``g_ba_ba``) are exact solutions of the two-coherence subsystem. The
population kernels ``g_pop`` are the approximate closed forms for the
waiting-time evolution; their residual against direct propagation is
reported by the validation suite rather than hidden.
"""
from __future__ import annotations

import numpy as np

from .errors import NoSplittingError, NumericalError
from .model import CM_TO_RAD_PER_PS, SystemParams, derive_rates


def g_ab_ab(omega3, params: SystemParams):
    """Detection-window coherence propagator; ``Im <= 0`` on the real axis."""
    r = derive_rates(params)
    d = np.asarray(omega3, dtype=float) - params.omega_ab
    num = 4.0 * (d + 1j * r.gamma2)
    den = 4.0 * (d + 1j * r.gamma1) * (d + 1j * r.gamma2) - params.Omega**2
    return num / den


def g_ba_ba(omega1, params: SystemParams):
    """Rephasing-slot coherence propagator, the complex conjugate of :func:`g_ab_ab`."""
    r = derive_rates(params)
    d = np.asarray(omega1, dtype=float) - params.omega_ab
    num = 4.0 * (d - 1j * r.gamma2)
    den = 4.0 * (d - 1j * r.gamma1) * (d - 1j * r.gamma2) - params.Omega**2
    return num / den


def _oscillation(tau, params):
    """``(cos-like, sin-like / omega_tilde)`` at reduced time ``tau`` (cm).

    Below critical damping the trigonometric pair continues analytically to
    cosh/sinh; exactly at critical damping sin(x tau)/x -> tau.
    """
    r = derive_rates(params)
    w = r.omega_tilde
    if w == 0.0:
        return np.ones_like(tau), tau
    if r.oscillatory:
        return np.cos(w * tau), np.sin(w * tau) / w
    return np.cosh(w * tau), np.sinh(w * tau) / w


def check_relaxation(params):
    if params.relaxation_sum <= 0:
        raise NumericalError("Gamma1 + Gamma2 must be > 0 for population kernels")


def _start_in_a(t2, params):
    """(aa,aa) and (bb,aa) kernels with the control field on.

    Both sin terms use a real coefficient over omega_tilde so the kernels
    stay real. In the (bb,aa) sin term the Omega^2 piece is scaled by
    Gamma1, which fixes its dimensions and the initial slope Gamma1.
    """
    G1, G2, Om = params.Gamma1, params.Gamma2, params.Omega
    S = G1 + G2
    g3 = derive_rates(params).gamma3
    A2 = S - g3
    A1 = S * A2 + Om**2
    if A1 == 0:
        raise NumericalError("closed form undefined: A1 = 0")
    tau = CM_TO_RAD_PER_PS * t2
    cos_t, sin_t = _oscillation(tau, params)
    env = np.exp(-0.5 * g3 * tau)
    relax = np.exp(-S * tau)

    aa = env * (
        0.5 * cos_t * (A2 * G2 + Om**2) / A1
        + 0.25 * sin_t * (A2 * G2 * g3 + (g3 - 2 * G1) * Om**2) / A1
    ) + G2 / (2 * S) + G1 * (2 * A1 - Om**2) * relax / (2 * S * A1)
    ba = env * (
        0.5 * cos_t * A2 * G1 / A1
        + 0.25 * sin_t * (A2 * G1 * g3 + 2 * G1 * Om**2) / A1
    ) + G1 / (2 * S) + G1 * (Om**2 - 2 * A1) * relax / (2 * S * A1)
    return aa, ba


def g_pop(start, end, t2, params: SystemParams):
    """Probability of finding the atom in ``end`` a time ``t2`` (ps) after it was put in ``start``.

    ``start`` and ``end`` are each ``'a'`` or ``'b'``; ``g_pop('a', 'b', t)``
    is the kernel usually written G_{bb,aa}(t).
    """
    if start not in ("a", "b") or end not in ("a", "b"):
        raise ValueError("start and end must be 'a' or 'b'")
    check_relaxation(params)
    t2 = np.asarray(t2, dtype=float)
    if np.any(t2 < 0):
        raise ValueError("t2 must be >= 0")
    G1, G2 = params.Gamma1, params.Gamma2
    S = G1 + G2
    relax = np.exp(-S * CM_TO_RAD_PER_PS * t2)

    if start == "b":
        if end == "a":
            return (G2 - relax * G2) / S
        return (G1 + relax * G2) / S

    if params.Omega == 0:
        if end == "a":
            return G2 / S + G1 / S * relax
        return G1 / S * (1.0 - relax)

    aa, ba = _start_in_a(t2, params)
    return aa if end == "a" else ba


def g_aa_aa(t2, params):
    return g_pop("a", "a", t2, params)


def g_bb_aa(t2, params):
    return g_pop("a", "b", t2, params)


def g_aa_bb(t2, params):
    return g_pop("b", "a", t2, params)


def g_bb_bb(t2, params):
    return g_pop("b", "b", t2, params)


def kernel_sum(t2, params: SystemParams):
    """Sum of the four population kernels entering both third-order signals."""
    return g_aa_aa(t2, params) + g_bb_aa(t2, params) + g_aa_bb(t2, params) + g_bb_bb(t2, params)


def trough_positions(params: SystemParams):
    """Frequencies (cm^-1) of the two absorption troughs of ``Im g_ab_ab``.

    Raises
    ------
    NoSplittingError
        If the control field is off or too weak to resolve two troughs.
    """
    if params.Omega <= 0:
        raise NoSplittingError("no control field, single trough at omega_ab")
    r = derive_rates(params)
    g1, g2, Om = r.gamma1, r.gamma2, params.Omega
    if g1 == 0:
        raise NoSplittingError("gamma1 = 0, trough formula undefined")
    q = 4 * g1 * g2 + Om**2
    radicand = (Om * (g1 + g2) * np.sqrt(q) - g2 * q) / g1
    if radicand <= 0:
        raise NoSplittingError(f"troughs unresolved (radicand {radicand:.4g} <= 0)")
    half = 0.5 * np.sqrt(radicand)
    return params.omega_ab - half, params.omega_ab + half


def grid_trough_positions(params: SystemParams, step=0.01):
    """Trough positions by dense-grid minimisation of ``Im g_ab_ab``.

    The grid spans ``omega_ab +- 3 Omega`` at ``step``; each of the two deepest
    interior minima is refined with a three-point parabola.
    """
    if params.Omega <= 0:
        raise NoSplittingError("no control field, single trough at omega_ab")
    n = int(round(3 * params.Omega / step))
    w = params.omega_ab + step * np.arange(-n, n + 1)
    im = g_ab_ab(w, params).imag
    interior = np.flatnonzero((im[1:-1] < im[:-2]) & (im[1:-1] <= im[2:])) + 1
    if len(interior) < 2:
        raise NoSplittingError("fewer than two interior minima on the grid")
    deepest = interior[np.argsort(im[interior])[:2]]
    out = []
    for i in sorted(deepest):
        y0, y1, y2 = im[i - 1], im[i], im[i + 1]
        denom = y0 - 2 * y1 + y2
        shift = 0.5 * (y0 - y2) / denom if denom != 0 else 0.0
        out.append(w[i] + shift * step)
    return out[0], out[1]
