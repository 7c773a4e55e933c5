"""Direct propagation of the density-matrix equations of motion.

This is the numerical reference against which every closed-form Green's
function is checked. The equations are written in the interaction picture
(carrier at omega_ab removed), with rates in cm^-1; time stepping converts
to rad/ps once.

Level ordering in every 3x3 array is (a, b, c).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, NumericalError
from .model import CM_TO_RAD_PER_PS, LEVELS, SystemParams, derive_rates

A, B, C = 0, 1, 2

HERMITIAN_TOL = 1e-9
TRACE_TOL = 1e-9


def level_index(level):
    if isinstance(level, str):
        try:
            return LEVELS.index(level)
        except ValueError:
            raise ValueError(f"unknown level {level!r}") from None
    if level not in (A, B, C):
        raise ValueError(f"unknown level {level!r}")
    return level


def pure_state(level):
    rho = np.zeros((3, 3), dtype=complex)
    i = level_index(level)
    rho[i, i] = 1.0
    return rho


def as_density_matrix(rho, atol=TRACE_TOL):
    """Validate and return ``rho`` as a complex 3x3 Hermitian unit-trace array."""
    rho = np.array(rho, dtype=complex)
    if rho.shape != (3, 3):
        raise ValueError(f"density matrix must be 3x3, got shape {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > atol:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > atol:
        raise ValueError(f"density matrix trace is {np.trace(rho).real:.6g}, expected 1")
    return rho


def rhs(rho, params: SystemParams):
    """Time derivative of ``rho`` in cm^-1 units (multiply by 2*pi*c for rad/ps).

    The nine equations are written out element by element, exactly as the
    model prescribes.
    """
    r = rho
    G1, G2, Om = params.Gamma1, params.Gamma2, params.Omega
    rates = derive_rates(params)
    g1, g2, g3 = rates.gamma1, rates.gamma2, rates.gamma3
    h = 0.5j * Om

    d = np.empty((3, 3), dtype=complex)
    d[B, B] = G1 * r[A, A] - G2 * r[B, B]
    d[B, A] = -h * r[B, C] - g1 * r[B, A]
    d[B, C] = -h * r[B, A] - g2 * r[B, C]
    d[A, B] = h * r[C, B] - g1 * r[A, B]
    d[A, A] = h * (r[C, A] - r[A, C]) - G1 * r[A, A] + G2 * r[B, B]
    d[A, C] = h * (r[C, C] - r[A, A]) - g3 * r[A, C]
    d[C, B] = h * r[A, B] - g2 * r[C, B]
    d[C, A] = h * (r[A, A] - r[C, C]) - g3 * r[C, A]
    d[C, C] = h * (r[A, C] - r[C, A])
    return d


def liouvillian(params: SystemParams):
    """9x9 matrix form of :func:`rhs` acting on ``rho.ravel()`` (cm^-1)."""
    L = np.empty((9, 9), dtype=complex)
    for k in range(9):
        basis = np.zeros(9, dtype=complex)
        basis[k] = 1.0
        L[:, k] = rhs(basis.reshape(3, 3), params).ravel()
    return L


def rk4_step(y, fun, dt):
    """One classical fourth-order Runge-Kutta step for an autonomous ODE."""
    k1 = fun(y)
    k2 = fun(y + 0.5 * dt * k1)
    k3 = fun(y + 0.5 * dt * k2)
    k4 = fun(y + dt * k3)
    return y + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)


def rk4_step_matrix(M, dt):
    """The linear map applied by :func:`rk4_step` for ``dy/dt = M @ y``.

    For a linear autonomous system an RK4 step is the fixed matrix
    ``I + hM + (hM)^2/2 + (hM)^3/6 + (hM)^4/24``. Building it with
    :func:`rk4_step` on the identity keeps the two in lockstep.
    """
    eye = np.eye(M.shape[0], dtype=complex)
    return rk4_step(eye, lambda Y: M @ Y, dt)


@dataclass(frozen=True)
class PropagationSettings:
    dt: float = 0.001
    t_max: float = 10.0
    method: str = "rk4"

    def __post_init__(self):
        if not self.dt > 0:
            raise ConfigError(f"dt must be > 0, got {self.dt}", key="dt")
        if not self.t_max >= 0:
            raise ConfigError(f"t_max must be >= 0, got {self.t_max}", key="t_max")
        if self.method != "rk4":
            raise ConfigError(f"unsupported method {self.method!r}", key="method")

    @property
    def n_steps(self):
        n = int(round(self.t_max / self.dt))
        if abs(n * self.dt - self.t_max) > 1e-9 * max(self.t_max, 1.0):
            raise ConfigError("t_max must be an integer multiple of dt", key="t_max")
        return n


def max_rate(params: SystemParams):
    """Fastest rate in the equations of motion, rad/ps."""
    r = derive_rates(params)
    fastest = max(params.Gamma1, params.Gamma2, params.Omega, r.gamma1, r.gamma2, r.gamma3)
    return CM_TO_RAD_PER_PS * fastest


def check_step(params: SystemParams, settings: PropagationSettings):
    if settings.dt * max_rate(params) >= 0.1:
        raise ConfigError(
            f"dt={settings.dt} ps too large: dt * max rate = "
            f"{settings.dt * max_rate(params):.3g} (must be < 0.1)",
            key="dt",
        )


def _run_linear(M, y0, settings, stride):
    n = settings.n_steps
    P = rk4_step_matrix(CM_TO_RAD_PER_PS * M, settings.dt)
    idx = np.arange(0, n + 1, stride)
    if idx[-1] != n:
        idx = np.append(idx, n)
    out = np.empty((len(idx), len(y0)), dtype=complex)
    y = np.array(y0, dtype=complex)
    j = 0
    for step in range(n + 1):
        if step == idx[j]:
            out[j] = y
            j += 1
            if j == len(idx):
                break
        y = P @ y
    if not np.all(np.isfinite(out)):
        raise NumericalError("propagation produced non-finite values")
    return idx * settings.dt, out


def propagate(rho0, params: SystemParams, settings: PropagationSettings, stride=1):
    """Integrate the equations of motion from ``rho0`` with fixed-step RK4.

    Parameters
    ----------
    rho0 : array_like, shape (3, 3)
        Initial Hermitian, unit-trace density matrix.
    params : SystemParams
    settings : PropagationSettings
    stride : int
        Keep every ``stride``-th step (the final step is always kept).

    Returns
    -------
    times : ndarray, ps
    states : ndarray, shape (len(times), 3, 3)
    """
    rho0 = as_density_matrix(rho0)
    check_step(params, settings)
    if stride < 1:
        raise ConfigError("stride must be >= 1", key="stride")
    times, ys = _run_linear(liouvillian(params), rho0.ravel(), settings, stride)
    return times, ys.reshape(-1, 3, 3)


def oracle_green_population(start, end, params: SystemParams, t2_list, dt=0.001):
    """Population of ``end`` after ``t2`` when the atom starts in ``start``.

    Numerical counterpart of the closed-form population kernels. ``t2_list``
    values are snapped to the nearest multiple of ``dt``.
    """
    s, e = level_index(start), level_index(end)
    if s not in (A, B) or e not in (A, B):
        raise ValueError("start and end must be 'a' or 'b'")
    t2 = np.atleast_1d(np.asarray(t2_list, dtype=float))
    if np.any(t2 < 0):
        raise ConfigError("t2 must be >= 0", key="t2")
    steps = np.rint(t2 / dt).astype(int)
    settings = PropagationSettings(dt=dt, t_max=float(steps.max()) * dt)
    check_step(params, settings)
    n = settings.n_steps
    P = rk4_step_matrix(CM_TO_RAD_PER_PS * liouvillian(params), dt)
    y = pure_state(s).ravel()
    wanted = {}
    order = np.unique(steps)
    k = 0
    for step in range(n + 1):
        if step == order[k]:
            wanted[step] = y[4 * e].real
            k += 1
            if k == len(order):
                break
        y = P @ y
    if not np.all(np.isfinite(y)):
        raise NumericalError("propagation produced non-finite values")
    return np.array([wanted[s_] for s_ in steps])


def coherence_matrix(pair, params: SystemParams):
    """Closed 2x2 subsystem containing the optical coherence ``pair`` (cm^-1).

    (a, b) couples to rho_cb; (b, a) couples to rho_bc.
    """
    r = derive_rates(params)
    h = 0.5j * params.Omega
    if tuple(pair) == ("a", "b"):
        return np.array([[-r.gamma1, h], [h, -r.gamma2]])
    if tuple(pair) == ("b", "a"):
        return np.array([[-r.gamma1, -h], [-h, -r.gamma2]])
    raise ValueError(f"pair must be ('a', 'b') or ('b', 'a'), got {pair!r}")


def oracle_green_coherence(pair, params: SystemParams, settings: PropagationSettings):
    """Propagate a unit optical coherence and return ``(times, rho_jk(t))``."""
    check_step(params, settings)
    M = coherence_matrix(pair, params)
    times, ys = _run_linear(M, np.array([1.0, 0.0], dtype=complex), settings, 1)
    return times, ys[:, 0]


def coherence_spectrum(times, values, pair, omega_ab, pad=8):
    """Fourier transform of a coherence trace into a frequency-domain Green's function.

    Uses a rectangular window, zero padding by ``pad`` and trapezoidal weight
    on the first sample. The (a, b) trace maps onto ``-i * int rho e^{+i d t}``
    and the (b, a) trace onto ``+i * int rho e^{-i d t}``, with
    ``d = omega - omega_ab``.

    Returns
    -------
    omega : ndarray, cm^-1, ascending
    g : ndarray, complex, in cm (same units as the closed forms)
    """
    times = np.asarray(times, dtype=float)
    dt = times[1] - times[0]
    y = np.array(values, dtype=complex)
    y[0] *= 0.5
    n = len(y) * pad
    if tuple(pair) == ("a", "b"):
        # sum y e^{+i w t} = n * ifft(y)
        spec = -1j * np.fft.ifft(y, n) * n * dt
    elif tuple(pair) == ("b", "a"):
        spec = 1j * np.fft.fft(y, n) * dt
    else:
        raise ValueError(f"unknown pair {pair!r}")
    w = 2 * np.pi * np.fft.fftfreq(n, dt)
    order = np.argsort(w)
    # dt in ps -> multiply by 2*pi*c to express the transform in cm
    return omega_ab + w[order] / CM_TO_RAD_PER_PS, spec[order] * CM_TO_RAD_PER_PS


def sample_spectrum(omega, g, targets):
    """Linear interpolation of a complex spectrum at ``targets``."""
    return np.interp(targets, omega, g.real) + 1j * np.interp(targets, omega, g.imag)
