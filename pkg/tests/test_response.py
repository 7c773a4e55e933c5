import numpy as np
import pytest

from eit2des.errors import ConfigError
from eit2des.greens import kernel_sum
from eit2des.model import derive_rates
from eit2des.response import (
    SpectralGrid,
    Spectrum2D,
    absorptive_point,
    compute_spectrum,
    nonrephasing_point,
    pathway_terms,
    rephasing_point,
)

T2S = (0.0, 1.0, 2.0, 4.0, 10.0, 300.0)


def test_rephasing_center_no_control(fig3):
    p = fig3.without_control()
    for t2 in T2S:
        # 2 / gamma1^2, mpmath
        assert rephasing_point(p.omega_ab, t2, p.omega_ab, p) == pytest.approx(1.18976509337307719e-3, rel=1e-12)


def test_rephasing_lorentzian_tail(fig3):
    p = fig3.without_control()
    g1 = derive_rates(p).gamma1
    center = rephasing_point(p.omega_ab, 0.0, p.omega_ab, p)
    for sign in (1, -1):
        tail = rephasing_point(p.omega_ab + sign * 10 * g1, 0.0, p.omega_ab, p)
        # Re{1/(10 g + i g) * i/g} / Re{1/(i g) * i/g} = 1/101
        assert center / tail == pytest.approx(101.0, rel=1e-10)


def test_rephasing_center_control(fig3):
    value = rephasing_point(fig3.omega_ab, 0.0, fig3.omega_ab, fig3)
    assert value == pytest.approx(2 * 0.00150157184188495212**2, rel=1e-10)
    assert abs(value) <= 9.0e-6
    assert abs(value) * 100 < rephasing_point(fig3.omega_ab, 0.0, fig3.omega_ab, fig3.without_control())


def test_nonrephasing_center_no_control(fig3):
    p = fig3.without_control()
    for t2 in T2S:
        nr = nonrephasing_point(p.omega_ab, t2, p.omega_ab, p)
        assert nr == pytest.approx(-1.18976509337307719e-3, rel=1e-12)
        assert nr == pytest.approx(-rephasing_point(p.omega_ab, t2, p.omega_ab, p), rel=1e-14)


def test_nonrephasing_long_time_kernel(fig3):
    assert kernel_sum(1e4, fig3) == pytest.approx(1.5, abs=1e-12)
    a = nonrephasing_point(fig3.omega_ab + 20, 1e4, fig3.omega_ab - 5, fig3)
    b = nonrephasing_point(fig3.omega_ab + 20, 2e4, fig3.omega_ab - 5, fig3)
    assert a == b


def test_absorptive_center_no_control(fig3):
    p = fig3.without_control()
    assert abs(absorptive_point(p.omega_ab, 0.0, p.omega_ab, p)) <= 1e-12


def test_absorptive_is_sum(fig3):
    rng = np.random.default_rng(3)
    w1 = fig3.omega_ab + rng.uniform(-150, 150, 50)
    w3 = fig3.omega_ab + rng.uniform(-150, 150, 50)
    t2 = rng.uniform(0, 20, 50)
    np.testing.assert_array_equal(
        absorptive_point(w3, t2, w1, fig3),
        rephasing_point(w3, t2, w1, fig3) + nonrephasing_point(w3, t2, w1, fig3),
    )


def test_absorptive_stationary_at_long_times(fig3):
    grid = SpectralGrid.centered(fig3.omega_ab, step=1.0)
    a = compute_spectrum(grid.with_t2(300.0), "abs", fig3).values
    b = compute_spectrum(grid.with_t2(310.0), "abs", fig3).values
    assert np.max(np.abs(a - b)) <= 1e-6 * np.max(np.abs(a))


def test_small_grid_center_maximum(fig3):
    w = fig3.omega_ab
    grid = SpectralGrid(w - 1, w + 1, 1, w - 1, w + 1, 1)
    spec = compute_spectrum(grid, "rp", fig3, control_on=False)
    assert spec.values.shape == (3, 3)
    assert np.unravel_index(np.argmax(spec.values), (3, 3)) == (1, 1)


def test_control_off_forces_zero_omega(fig3):
    grid = SpectralGrid.centered(fig3.omega_ab, half_width=50, step=1.0)
    a = compute_spectrum(grid, "nr", fig3, control_on=False).values
    b = compute_spectrum(grid, "nr", fig3.without_control(), control_on=True).values
    np.testing.assert_array_equal(a, b)


@pytest.mark.parametrize("kind", ["rp", "nr", "abs"])
def test_t2_invariance_without_control(fig3, kind):
    grid = SpectralGrid.centered(fig3.omega_ab, step=1.0)
    ref = compute_spectrum(grid, kind, fig3, False).values
    for t2 in (1.0, 10.0, 300.0):
        assert np.max(np.abs(compute_spectrum(grid.with_t2(t2), kind, fig3, False).values - ref)) <= 1e-12


@pytest.mark.parametrize("kind", ["rp", "nr", "abs"])
def test_factorized_t2_dependence(fig3, kind):
    grid = SpectralGrid.centered(fig3.omega_ab, step=1.0)
    ref = compute_spectrum(grid, kind, fig3).values
    for t2 in (0.3, 2.0, 4.0, 300.0):
        s = compute_spectrum(grid.with_t2(t2), kind, fig3).values
        scale = kernel_sum(t2, fig3) / kernel_sum(0.0, fig3)
        np.testing.assert_allclose(s, scale * ref, rtol=1e-10, atol=1e-10 * np.abs(ref).max())


def test_pathway_terms_sum_to_signal(fig3):
    w3, w1, t2 = fig3.omega_ab + 12.0, fig3.omega_ab - 30.0, 1.7
    rp = pathway_terms(w3, t2, w1, fig3, "rp")
    assert [t.t2_kernel for t in rp] == ["aa,aa", "bb,aa", "aa,bb", "bb,bb"]
    assert {t.omega1_propagator for t in rp} == {"ba,ba"}
    assert sum(t.value for t in rp).real == pytest.approx(rephasing_point(w3, t2, w1, fig3), rel=1e-12)
    nr = pathway_terms(w3, t2, w1, fig3, "nonrephasing")
    assert {t.omega1_propagator for t in nr} == {"ab,ab"}
    assert sum(t.value for t in nr).real == pytest.approx(nonrephasing_point(w3, t2, w1, fig3), rel=1e-12)
    ab = pathway_terms(w3, t2, w1, fig3, "abs")
    assert len(ab) == 8


def test_grid_validation():
    with pytest.raises(ConfigError):
        SpectralGrid(1, 0, 0.5, 0, 1, 0.5)
    with pytest.raises(ConfigError):
        SpectralGrid(0, 1, 0.0, 0, 1, 0.5)
    with pytest.raises(ConfigError):
        SpectralGrid(0, 1, 0.3, 0, 1, 0.5)
    with pytest.raises(ConfigError):
        SpectralGrid(0, 1, 0.5, 0, 1, 0.5, t2=-1)


def test_grid_axes(fig3):
    grid = SpectralGrid.centered(fig3.omega_ab)
    assert grid.shape == (601, 601)
    assert grid.omega1[300] == fig3.omega_ab


def test_node_limit(fig3):
    grid = SpectralGrid(0, 1e5, 0.001, 0, 1, 0.5)
    with pytest.raises(ConfigError):
        compute_spectrum(grid, "rp", fig3)


def test_unknown_kind(fig3):
    with pytest.raises(ConfigError):
        compute_spectrum(SpectralGrid.centered(fig3.omega_ab), "2q", fig3)


def test_spectrum_shape_check(fig3):
    grid = SpectralGrid.centered(fig3.omega_ab)
    with pytest.raises(ValueError):
        Spectrum2D(grid, np.zeros((3, 3)), "rephasing", True)
