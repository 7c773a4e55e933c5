import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.signal import argrelmax

from eit2des.errors import NoSplittingError
from eit2des.greens import (
    g_aa_aa,
    g_aa_bb,
    g_ab_ab,
    g_ba_ba,
    g_bb_aa,
    g_bb_bb,
    g_pop,
    grid_trough_positions,
    trough_positions,
)
from eit2des.lindblad import PropagationSettings, oracle_green_population, propagate, pure_state
from eit2des.model import CM_TO_RAD_PER_PS, SystemParams, derive_rates

KERNELS = (g_aa_aa, g_bb_aa, g_aa_bb, g_bb_bb)


def test_g_ba_ba_no_control(fig3):
    p = fig3.without_control()
    w = np.linspace(p.omega_ab - 500, p.omega_ab + 500, 101)
    g1 = derive_rates(p).gamma1
    np.testing.assert_allclose(g_ba_ba(w, p), 1 / (w - 1j * g1 - p.omega_ab), rtol=1e-13)


def test_line_center_values(fig3):
    # 4 gamma2 / (4 gamma1 gamma2 + Omega^2), mpmath
    dip = 0.00150157184188495212
    assert g_ba_ba(fig3.omega_ab, fig3).imag == pytest.approx(dip, rel=1e-12)
    assert g_ab_ab(fig3.omega_ab, fig3).imag == pytest.approx(-dip, rel=1e-12)
    assert g_ab_ab(fig3.omega_ab, fig3.without_control()).imag == pytest.approx(-0.0243902141582754167, rel=1e-12)


def test_far_detuning(fig3):
    assert abs(g_ab_ab(fig3.omega_ab + 1e6, fig3)) < 2e-6
    assert abs(g_ab_ab(fig3.omega_ab - 1e6, fig3)) < 2e-6


rates = st.floats(min_value=1e-3, max_value=200)


@given(rates, rates, rates, rates, rates, st.floats(min_value=0, max_value=300),
       st.floats(min_value=-1e3, max_value=1e3))
def test_propagator_properties(G1, G2, ga, gb, gc, Om, delta):
    p = SystemParams(Gamma1=G1, Gamma2=G2, gamma0_a=ga, gamma0_b=gb, gamma0_c=gc, Omega=Om)
    w = p.omega_ab + delta
    g = g_ab_ab(w, p)
    assert g.imag <= 0
    assert g_ba_ba(w, p) == pytest.approx(np.conj(g), rel=1e-12)
    mirror = g_ab_ab(p.omega_ab - delta, p)
    assert abs(g.imag - mirror.imag) <= 1e-12 * abs(g.imag) + 1e-300


def test_population_initial_conditions(fig3):
    for p in (fig3, fig3.without_control(), SystemParams(Omega=5.0)):
        assert g_aa_aa(0.0, p) == pytest.approx(1.0, abs=1e-14)
        assert g_bb_aa(0.0, p) == pytest.approx(0.0, abs=1e-14)
        assert g_aa_bb(0.0, p) == 0.0
        assert g_bb_bb(0.0, p) == 1.0


def test_population_steady_states(fig3):
    t = 1e4
    assert g_aa_aa(t, fig3) == pytest.approx(4.9995000499950005e-05, rel=1e-12)
    assert g_bb_aa(t, fig3) == pytest.approx(0.49995000499950005, rel=1e-12)
    assert g_aa_bb(t, fig3) == pytest.approx(9.999000099990001e-05, rel=1e-12)
    assert g_bb_bb(t, fig3) == pytest.approx(0.99990000999900010, rel=1e-12)
    assert g_aa_aa(t, fig3) + g_bb_aa(t, fig3) == pytest.approx(0.5, abs=1e-15)


def test_no_control_at_one_relaxation_time(fig3):
    p = fig3.without_control()
    t = 1 / ((p.Gamma1 + p.Gamma2) * CM_TO_RAD_PER_PS)
    assert t == pytest.approx(5.30830662821332, rel=1e-12)
    assert g_aa_aa(t, p) == pytest.approx(0.367942646906751646, rel=1e-12)


def test_sum_rules(fig3):
    t = np.linspace(0, 300, 3001)
    np.testing.assert_allclose(g_aa_bb(t, fig3) + g_bb_bb(t, fig3), 1.0, atol=1e-15)
    off = fig3.without_control()
    np.testing.assert_allclose(g_aa_aa(t, off) + g_bb_aa(t, off), 1.0, atol=1e-15)


def test_oscillation_period_from_oracle(fig3):
    # rho_aa itself is monotone here (damping + decay); the a-c inversion oscillates
    t, states = propagate(pure_state("a"), fig3, PropagationSettings(dt=0.001, t_max=3.0))
    inversion = states[:, 0, 0].real - states[:, 2, 2].real
    peaks = t[argrelmax(inversion)[0]]
    assert len(peaks) >= 2
    # 2 pi / omega_tilde in ps, mpmath; later maxima sit in the 1e-4 tail
    assert peaks[1] - peaks[0] == pytest.approx(0.731431619164074, rel=0.01)


def _initial_slope(fn, p, h=1e-6):
    # second-order one-sided difference, per cm (reduced time)
    return (-3 * fn(0.0, p) + 4 * fn(h, p) - fn(2 * h, p)) / (2 * h * CM_TO_RAD_PER_PS)


@pytest.mark.parametrize("Om", [5.0, 20.5, 50.0, 120.0])
@pytest.mark.parametrize("G1", [0.5, 1.0, 3.0])
def test_initial_slopes(Om, G1):
    """The kernels leave t2 = 0 with the rates set by the equations of motion."""
    p = SystemParams(Gamma1=G1, Omega=Om)
    assert _initial_slope(g_aa_aa, p) == pytest.approx(-G1, rel=1e-4)
    assert _initial_slope(g_bb_aa, p) == pytest.approx(G1, rel=1e-4)


@pytest.mark.parametrize("Om", [50.0, 10.0, 20.5])
def test_exact_without_relaxation(Om):
    """With negligible a<->b relaxation the start-in-a closed forms become exact.

    Covers the oscillatory (Omega=50), overdamped (Omega=10) and critically
    damped (4 Omega^2 = gamma3^2) regimes.
    """
    p = SystemParams(Gamma1=1e-7, Gamma2=1e-9, gamma0_a=40.0, gamma0_c=1.0, Omega=Om)
    t = np.arange(0, 3.0 + 1e-9, 0.01)
    oracle = oracle_green_population("a", "a", p, t)
    assert np.max(np.abs(g_aa_aa(t, p) - oracle)) < 1e-6


def test_closed_forms_real(fig3):
    t = np.linspace(0, 10, 101)
    for fn in KERNELS:
        assert np.isrealobj(fn(t, fig3))


def test_negative_t2(fig3):
    with pytest.raises(ValueError):
        g_pop("a", "a", -1.0, fig3)


def test_zero_relaxation_rejected():
    from eit2des.errors import NumericalError
    with pytest.raises(NumericalError):
        g_pop("a", "a", 1.0, SystemParams(Gamma1=0.0, Gamma2=0.0))


def test_trough_positions_fig3(fig3):
    lo, hi = trough_positions(fig3)
    half = 25.3903016803907768  # mpmath
    assert lo == pytest.approx(fig3.omega_ab - half, abs=1e-9)
    assert hi == pytest.approx(fig3.omega_ab + half, abs=1e-9)
    glo, ghi = grid_trough_positions(fig3)
    assert abs(glo - lo) < 0.02 and abs(ghi - hi) < 0.02


def test_trough_positions_strong_field(fig3):
    p = SystemParams(Omega=500.0)
    lo, hi = trough_positions(p)
    assert hi - p.omega_ab == pytest.approx(250.039991914838563, abs=1e-8)
    glo, ghi = grid_trough_positions(p)
    assert abs(ghi - hi) < 0.02 and abs(glo - lo) < 0.02
    assert (hi - p.omega_ab) / (p.Omega / 2) == pytest.approx(1.0, abs=1e-3)


def test_no_splitting():
    with pytest.raises(NoSplittingError):
        trough_positions(SystemParams(Omega=0.0))
    with pytest.raises(NoSplittingError):
        trough_positions(SystemParams(Omega=1e-3))
