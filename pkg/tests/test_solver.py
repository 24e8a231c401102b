import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import solve_ivp

from henon_lane_emden.errors import NonPositiveCentral, NotInScope
from henon_lane_emden.power import power_exponents
from henon_lane_emden.regions import ExponentPair, WeightPair
from henon_lane_emden.solver import RadialProfile, integrate_radial_ivp
from henon_lane_emden.solver.ivp import BACKENDS, series_start, solve_ivp_raw
from henon_lane_emden.solver.mesh import graded_mesh, uniform_mesh
from henon_lane_emden.solver.rayleigh import minimize_rayleigh, rayleigh_quotient
from henon_lane_emden.solver.shooting import shoot_radial

LE3 = (ExponentPair(3, 3, 3), WeightPair(0, 0))


def lane_emden_first_zero():
    """First zero of theta'' + 2 theta'/xi + theta^2 = 0, theta(0) = 1."""

    def rhs(x, y):
        return [y[1], -y[0] ** 2 - 2.0 * y[1] / x]

    x0 = 1e-6
    y0 = [1.0 - x0**2 / 6.0, -x0 / 3.0]
    event = lambda x, y: y[0]  # noqa: E731
    event.terminal = True
    sol = solve_ivp(rhs, (x0, 10.0), y0, method="DOP853", rtol=1e-13, atol=1e-15, events=event)
    return sol.t_events[0][0]


XI1 = lane_emden_first_zero()


def test_constants_without_coupling():
    e, w = ExponentPair(4, 2.5, 3), WeightPair(0.5, -1)
    prof = integrate_radial_ivp(e, w, 0.0, 0.0, 1.7, 0.4, stop_at_zero=False)
    assert np.allclose(prof.u_values, 1.7, rtol=0, atol=1e-15)
    assert np.allclose(prof.v_values, 0.4, rtol=0, atol=1e-15)


def test_symmetric_first_zero_matches_oracle():
    prof = integrate_radial_ivp(*LE3, 1.0, 1.0, 1.0, 1.0, r_max=10.0)
    assert prof.radii[-1] == pytest.approx(XI1, rel=1e-9)
    assert np.allclose(prof.u_values, prof.v_values, rtol=1e-12)


@pytest.mark.parametrize("a, b", [(0.0, 0.0), (-1.0, 0.5), (1.5, -1.5)])
def test_series_matches_integration(a, b):
    e, w = ExponentPair(3, 3, 3.5), WeightPair(a, b)
    res = solve_ivp_raw(e, w, 1.0, 1.0, 1.0, 1.0, r_end=1e-3, rtol=1e-13, stop_at_zero=False)
    series = series_start(e, w, 1.0, 1.0, 1.0, 1.0, 1e-3)
    # the dropped term is of order r^(a+b+4)
    assert res.y_stop[0] == pytest.approx(series[0], rel=max(1e-8, 10 * 1e-3 ** (a + b + 4)))
    assert res.y_stop[2] == pytest.approx(series[2], rel=max(1e-8, 10 * 1e-3 ** (a + b + 4)))


def test_output_radii_inside_series_zone():
    r = np.array([1e-9, 1e-7, 0.5])
    prof = integrate_radial_ivp(*LE3, 1.0, 1.0, 1.0, 1.0, radii=r, stop_at_zero=False)
    assert prof.radii.tolist() == [0.0, 1e-9, 1e-7, 0.5]
    assert prof.u_values[1] == pytest.approx(1.0 - 1e-18 / 6.0, abs=1e-15)


def test_ivp_preconditions():
    with pytest.raises(NotInScope):
        solve_ivp_raw(ExponentPair(3, 3, 3), WeightPair(-2.5, 0), 1, 1, 1, 1)
    with pytest.raises(NonPositiveCentral):
        solve_ivp_raw(*LE3, 1, 1, 0.0, 1)


@pytest.mark.skipif("cython" not in BACKENDS, reason="compiled kernel not built")
@pytest.mark.parametrize("a, b", [(0.0, 0.0), (-0.5, 0.5), (1.0, -1.2)])
def test_backends_agree(a, b):
    e, w = ExponentPair(3, 3, 4), WeightPair(a, b)
    radii = np.linspace(0, 1, 65)[1:]
    out = [solve_ivp_raw(e, w, 1, 1, 5.0, 6.0, radii=radii, rtol=1e-11, backend=k) for k in ("python", "cython")]
    assert out[0].status == out[1].status
    assert out[0].nsteps == out[1].nsteps
    np.testing.assert_allclose(out[0].states, out[1].states, rtol=1e-14, atol=0)
    assert out[0].r_stop == pytest.approx(out[1].r_stop, rel=1e-14)


@given(st.floats(-1.5, 2.0), st.floats(-1.5, 2.0), st.floats(0.3, 3.0))
@settings(max_examples=25, deadline=None)
def test_scaling_invariance(a, b, s):
    e, w = ExponentPair(3, 3, 4), WeightPair(a, b)
    alpha, beta = power_exponents(e, w)
    g1, g2 = 2.0, 3.0
    r = np.array([0.05, 0.1, 0.2])
    base = integrate_radial_ivp(e, w, 1, 1, g1, g2, radii=s * r, r_max=float(s * r[-1]),
                                rtol=1e-12, stop_at_zero=False)
    scaled = integrate_radial_ivp(e, w, 1, 1, s ** (-alpha) * g1, s ** (-beta) * g2, radii=r,
                                  r_max=float(r[-1]), rtol=1e-12, stop_at_zero=False)
    np.testing.assert_allclose(scaled.u_values[1:], s ** (-alpha) * base.u_values[1:], rtol=1e-8)
    np.testing.assert_allclose(scaled.v_values[1:], s ** (-beta) * base.v_values[1:], rtol=1e-8)


@given(st.floats(-1.5, 2.0), st.floats(-1.5, 2.0), st.floats(0.5, 20.0), st.floats(0.5, 20.0))
@settings(max_examples=25, deadline=None)
def test_flux_is_monotone(a, b, g1, g2):
    # (r^(n-1) u')' = -r^(n-1) r^a v^(p-1) < 0 while v > 0
    e, w = ExponentPair(3, 3, 4), WeightPair(a, b)
    prof = integrate_radial_ivp(e, w, 1, 1, g1, g2, r_max=50.0, radii=np.geomspace(1e-4, 50, 200))
    r = prof.radii[1:]
    flux_u = r ** (e.n - 1) * prof.du_values[1:]
    flux_v = r ** (e.n - 1) * prof.dv_values[1:]
    assert np.all(np.diff(flux_u) <= 1e-12 * np.abs(flux_u[1:]).max())
    assert np.all(np.diff(flux_v) <= 1e-12 * np.abs(flux_v[1:]).max())


# ---------------------------------------------------------------------------
# shooting


def test_shooting_symmetric_anchor():
    prof = shoot_radial(*LE3)
    g1, g2 = prof.info["gamma"]
    assert g1 == pytest.approx(XI1**2, rel=1e-8)
    assert g2 == pytest.approx(g1, rel=1e-9)
    assert prof.boundary_defect < 1e-8
    assert prof.residual_sup < 1e-6
    assert prof.is_positive() and prof.is_decreasing()


@pytest.mark.parametrize(
    "n, p, q, a, b",
    [(3, 3, 4, -0.5, 0.5), (4, 1.5, 1.8, 0.3, -1.0), (5, 2.5, 2.2, 1.0, 0.0)],
)
def test_shooting_converges(n, p, q, a, b):
    prof = shoot_radial(ExponentPair(n, p, q), WeightPair(a, b))
    assert prof.boundary_defect < 1e-8
    assert prof.is_positive()


def test_shooting_scope():
    with pytest.raises(NotInScope):
        shoot_radial(ExponentPair(3, 2, 2), WeightPair(0, 0))
    with pytest.raises(NotInScope):
        shoot_radial(ExponentPair(5, 3, 3), WeightPair(-2, -2))


# ---------------------------------------------------------------------------
# meshes and Rayleigh


def test_meshes():
    u = uniform_mesh(8)
    assert u[0] == 0 and u[-1] == 1 and u.size == 9
    g = graded_mesh(256)
    assert g[0] == 0 and g[-1] == 1
    assert np.all(np.diff(g) > 0)
    assert np.diff(g)[0] < (1 / 256) ** 2 * 2
    assert np.diff(g).max() <= 1 / 256 * (1 + 1e-12)


def test_rayleigh_eigenvalue_anchor():
    m, state, prof = minimize_rayleigh(ExponentPair(3, 2, 2), WeightPair(0, 0), grid_size=1024)
    assert m == pytest.approx(np.pi**4, rel=1e-2)
    assert np.all(prof.v_values[:-1] > 0)
    assert state.multipliers[1] == pytest.approx(m, rel=1e-6)


def test_rayleigh_initial_scale_does_not_matter():
    e, w = ExponentPair(3, 2, 2), WeightPair(0, 0)
    m1, _, _ = minimize_rayleigh(e, w, grid_size=512, u0=lambda r: 1 - r**2, check_refinement=False)
    m7, _, _ = minimize_rayleigh(e, w, grid_size=512, u0=lambda r: 7 * (1 - r**2), check_refinement=False)
    assert m7 == pytest.approx(m1, rel=1e-8)


@given(st.floats(1e-3, 1e3))
@settings(max_examples=30, deadline=None)
def test_quotient_homogeneity(c):
    e, w = ExponentPair(3, 3, 4), WeightPair(-0.5, 0.5)
    r = uniform_mesh(128)
    u = (1 - r**2) * (1 + 0.3 * r)
    assert rayleigh_quotient(e, w, r, c * u) == pytest.approx(rayleigh_quotient(e, w, r, u), rel=1e-10)


def test_rayleigh_scope():
    with pytest.raises(NotInScope):
        minimize_rayleigh(ExponentPair(5, 3, 3), WeightPair(-2, -2))


def test_profile_csv_roundtrip(tmp_path):
    prof = RadialProfile(radii=np.array([0.0, 0.5, 1.0]), u_values=np.array([1.0, 0.1, 0.0]),
                         v_values=np.array([2.0, 1 / 3, 0.0]))
    path = tmp_path / "p.csv"
    prof.to_csv(path)
    text = path.read_text()
    assert text.splitlines()[0] == "r,u,v"
    back = RadialProfile.from_csv(path)
    assert back.v_values[1] == 1 / 3
    prof.to_csv(path)
    assert path.read_text() == text
