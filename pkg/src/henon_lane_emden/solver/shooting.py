"""Two-parameter shooting for the Dirichlet problem on the unit ball.

With ``lambda1 = lambda2 = 1`` we look for central values ``(g1, g2)`` such that
``u(1) = v(1) = 0``.  The system is invariant under

    u(r) -> s^(-alpha) u(s r),   v(r) -> s^(-beta) v(s r)

where ``(alpha, beta)`` are the power-solution exponents, so the problem
reduces to one parameter: find the ratio ``t = g2/g1`` for which ``u`` and
``v`` vanish at the same radius ``R*`` (bisection on which one vanishes
first), then rescale by ``s = R*``.  A damped Newton iteration on
``(g1, g2) -> (u(1), v(1))`` polishes the result; a logarithmic grid scan is
the fallback initial guess.
"""
from __future__ import annotations

import math

import numpy as np

from ..errors import NoConvergence, NotInScope
from ..power import power_exponents
from ..regions import ExponentPair, Membership, Regime, WeightPair, classify_regime, membership_Eplus
from ..verify import radial_residuals
from . import _kernel_py as codes
from .ivp import integrate_radial_ivp, solve_ivp_raw
from .profile import RadialProfile

R_SEARCH = 1e6


def _first_zero(e, w, t, rtol, backend):
    res = solve_ivp_raw(e, w, 1.0, 1.0, 1.0, t, r_end=R_SEARCH, rtol=rtol, backend=backend)
    if res.status not in (codes.U_ZERO, codes.V_ZERO):
        raise NotInScope(f"no zero of u or v before r = {R_SEARCH:g} (ratio {t:g})")
    return res.status, res.r_stop


def _ratio_guess(e, w, rtol, backend, iters=60):
    """Central values from the one-parameter reduction plus rescaling."""
    lo, hi = None, None  # lo: v vanishes first, hi: u vanishes first
    t = 1.0
    for _ in range(40):
        status, _ = _first_zero(e, w, t, rtol, backend)
        if status == codes.V_ZERO:
            lo = t
            if hi is not None:
                break
            t *= 10.0
        else:
            hi = t
            if lo is not None:
                break
            t /= 10.0
    if lo is None or hi is None:
        return None
    for _ in range(iters):
        mid = math.sqrt(lo * hi)
        if hi / lo - 1.0 < 1e-12:
            break
        status, _ = _first_zero(e, w, mid, rtol, backend)
        if status == codes.V_ZERO:
            lo = mid
        else:
            hi = mid
    t = math.sqrt(lo * hi)
    _, rstar = _first_zero(e, w, t, rtol, backend)
    alpha, beta = power_exponents(e, w)
    return np.array([rstar ** (-alpha), t * rstar ** (-beta)])


def _boundary_map(e, w, g, rtol, backend):
    res = solve_ivp_raw(e, w, 1.0, 1.0, g[0], g[1], r_end=1.0, rtol=rtol,
                        stop_at_zero=False, backend=backend)
    if res.status != codes.REACHED_END:
        return np.array([np.inf, np.inf])
    return np.array([res.y_stop[0], res.y_stop[2]])


def _grid_scan(e, w, rtol, backend, points=9):
    best, best_val = None, math.inf
    for g1 in np.geomspace(0.1, 100.0, points):
        for g2 in np.geomspace(0.1, 100.0, points):
            val = np.max(np.abs(_boundary_map(e, w, (g1, g2), rtol, backend)))
            # strict comparison keeps the lexicographically smallest minimiser
            if val < best_val:
                best, best_val = np.array([g1, g2]), val
    return best


def newton_polish(e, w, g, tol, rtol, backend, max_iter=50):
    """Damped Newton on ``(g1, g2) -> (u(1), v(1))`` with finite-difference Jacobian."""
    g = np.asarray(g, dtype=float)
    F = _boundary_map(e, w, g, rtol, backend)
    norm = np.max(np.abs(F))
    for it in range(max_iter):
        if norm <= tol:
            return g, norm, it
        J = np.empty((2, 2))
        for j in range(2):
            dg = g.copy()
            dg[j] += 1e-6 * g[j]
            J[:, j] = (_boundary_map(e, w, dg, rtol, backend) - F) / (dg[j] - g[j])
        try:
            d = -np.linalg.solve(J, F)
        except np.linalg.LinAlgError:
            break
        tau = 1.0
        for _ in range(30):
            trial = g + tau * d
            if np.all(trial > 0):
                Ft = _boundary_map(e, w, trial, rtol, backend)
                nt = np.max(np.abs(Ft))
                if nt < norm:
                    break
            tau *= 0.5
        else:
            break
        g, F, norm = trial, Ft, nt
    if norm <= tol:
        return g, norm, max_iter
    raise NoConvergence(
        f"shooting did not reach boundary defect {tol:g} (best {norm:.3g})",
        diagnostics={"gamma": g.tolist(), "boundary_defect": float(norm)},
    )


def shoot_radial(
    e: ExponentPair,
    w: WeightPair,
    tol: float = 1e-8,
    radii=None,
    grid_size: int = 4096,
    rtol: float = 1e-12,
    backend: str | None = None,
) -> RadialProfile:
    """Positive radial solution of the Dirichlet system with unit coefficients.

    Requires a non-homogeneous regime, ``(a, b)`` inside E+ and ``a, b > -2``.
    The profile is sampled at ``radii`` (default: ``grid_size`` uniform cells).
    """
    if classify_regime(e) is Regime.HOMOGENEOUS:
        raise NotInScope("coefficients are eigenvalues in the homogeneous regime; use minimize_rayleigh")
    if membership_Eplus(e, w) is not Membership.INSIDE:
        raise NotInScope("(a, b) must lie strictly inside E+")
    if not (w.a > -2 and w.b > -2):
        raise NotInScope("shooting needs a > -2 and b > -2")

    g0 = _ratio_guess(e, w, min(rtol * 100, 1e-9), backend)
    if g0 is None:
        g0 = _grid_scan(e, w, rtol, backend)
    gamma, defect, iters = newton_polish(e, w, g0, tol, rtol, backend)

    if radii is None:
        radii = np.linspace(0.0, 1.0, grid_size + 1)
    prof = integrate_radial_ivp(e, w, 1.0, 1.0, gamma[0], gamma[1], r_max=1.0, radii=radii,
                                rtol=rtol, stop_at_zero=False, backend=backend)
    if not prof.is_positive():
        raise NoConvergence("converged shooting profile is not positive",
                            diagnostics={"gamma": gamma.tolist()})
    res_u, res_v, rhs_u, rhs_v = radial_residuals(e, w, prof.radii, prof.u_values, prof.v_values, 1.0, 1.0)
    prof.residual_sup = float(max(np.max(np.abs(res_u)) / np.max(np.abs(rhs_u)),
                                  np.max(np.abs(res_v)) / np.max(np.abs(rhs_v))))
    prof.boundary_defect = float(max(abs(prof.u_values[-1]), abs(prof.v_values[-1])))
    prof.stop_reason = "converged"
    prof.info.update({"gamma": gamma.tolist(), "newton_iterations": iters, "initial_guess": g0.tolist()})
    return prof
