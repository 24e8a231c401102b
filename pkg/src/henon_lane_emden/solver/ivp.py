"""Radial initial-value problem with a series start at the singular origin.

The compiled kernel is used when it imports; set ``HLE_PURE_PYTHON=1`` to
force the pure-Python fallback.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from ..errors import NonPositiveCentral, NotInScope, StepSizeUnderflow
from ..regions import ExponentPair, WeightPair
from . import _kernel_py
from .profile import RadialProfile

try:
    from . import _kernel as _compiled
except ImportError:  # extension not built
    _compiled = None

BACKENDS = {"python": _kernel_py}
if _compiled is not None:
    BACKENDS["cython"] = _compiled

if os.environ.get("HLE_PURE_PYTHON") or _compiled is None:
    BACKEND = "python"
else:
    BACKEND = "cython"

STOP_REASONS = {
    _kernel_py.REACHED_END: "reached_end",
    _kernel_py.U_ZERO: "u_zero",
    _kernel_py.V_ZERO: "v_zero",
    _kernel_py.STEP_UNDERFLOW: "step_underflow",
    _kernel_py.MAX_STEPS: "max_steps",
    _kernel_py.NON_FINITE: "non_finite",
}

R0_DEFAULT = 1e-6


def get_backend(name: str | None = None):
    name = name or BACKEND
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"backend {name!r} unavailable; have {sorted(BACKENDS)}") from None


@dataclass
class IVPResult:
    radii: np.ndarray
    states: np.ndarray  # columns u, u', v, v'
    status: int
    r_stop: float
    y_stop: np.ndarray
    nsteps: int

    @property
    def stop_reason(self) -> str:
        return STOP_REASONS[self.status]


def series_start(e: ExponentPair, w: WeightPair, lambda1, lambda2, gamma1, gamma2, r0):
    """Two-term expansion ``u = g1 - c r^(a+2)`` (and likewise ``v``) at ``r0``."""
    n, a, b = e.n, w.a, w.b
    cu = lambda1 * gamma2 ** (e.p - 1.0) / ((a + 2.0) * (a + n))
    cv = lambda2 * gamma1 ** (e.q - 1.0) / ((b + 2.0) * (b + n))
    return np.array(
        [
            gamma1 - cu * r0 ** (a + 2.0),
            -cu * (a + 2.0) * r0 ** (a + 1.0),
            gamma2 - cv * r0 ** (b + 2.0),
            -cv * (b + 2.0) * r0 ** (b + 1.0),
        ]
    )


def auto_r0(e, w, lambda1, lambda2, gamma1, gamma2, rtol) -> float:
    """Largest ``r0 <= 1e-6`` at which the dropped series term is below ``rtol/10``.

    The first neglected term of ``u`` is of order ``r^(a+b+4)``, which is not
    small at ``r = 1e-6`` when ``a, b`` approach ``-2``.
    """
    n, a, b = e.n, w.a, w.b
    cu = lambda1 * gamma2 ** (e.p - 1.0) / ((a + 2.0) * (a + n))
    cv = lambda2 * gamma1 ** (e.q - 1.0) / ((b + 2.0) * (b + n))
    s = a + b + 4.0
    t_u = abs(lambda1 * (e.p - 1.0) * gamma2 ** (e.p - 2.0) * cv) / (s * (s + n - 2.0)) / gamma1
    t_v = abs(lambda2 * (e.q - 1.0) * gamma1 ** (e.q - 2.0) * cu) / (s * (s + n - 2.0)) / gamma2
    t = max(t_u, t_v)
    if t == 0.0:
        return R0_DEFAULT
    r0 = (0.1 * rtol / t) ** (1.0 / s)
    return float(min(R0_DEFAULT, max(r0, 1e-280)))


def solve_ivp_raw(
    e: ExponentPair,
    w: WeightPair,
    lambda1: float,
    lambda2: float,
    gamma1: float,
    gamma2: float,
    r_end: float = 1.0,
    radii=(),
    rtol: float = 1e-10,
    atol: float | None = None,
    stop_at_zero: bool = True,
    r0: float | None = None,
    backend: str | None = None,
) -> IVPResult:
    if not (w.a > -2 and w.b > -2):
        raise NotInScope("radial shooting needs a > -2 and b > -2")
    if not (gamma1 > 0 and gamma2 > 0):
        raise NonPositiveCentral(f"central values must be positive, got ({gamma1}, {gamma2})")
    if r0 is None:
        r0 = auto_r0(e, w, lambda1, lambda2, gamma1, gamma2, rtol)
    if atol is None:
        atol = rtol * 1e-2 * min(gamma1, gamma2)
    y0 = series_start(e, w, lambda1, lambda2, gamma1, gamma2, r0)
    radii = np.asarray(radii, dtype=float)
    # output radii inside the series zone are filled from the expansion
    k = int(np.searchsorted(radii, r0, side="right"))
    inner = [series_start(e, w, lambda1, lambda2, gamma1, gamma2, x) for x in radii[:k]]
    kernel = get_backend(backend)
    states, status, r_stop, y_stop, nsteps = kernel.integrate(
        float(e.n), e.p, e.q, float(w.a), float(w.b), float(lambda1), float(lambda2),
        float(r0), y0, radii[k:], float(r_end), float(rtol), float(atol), bool(stop_at_zero),
        1e-2 * r0,
    )
    if inner:
        states = np.vstack((np.array(inner), states))
    res = IVPResult(radii[: states.shape[0]], states, status, r_stop, y_stop, nsteps)
    if status == _kernel_py.STEP_UNDERFLOW:
        raise StepSizeUnderflow(f"step size underflow at r = {r_stop:.6g}")
    return res


def integrate_radial_ivp(
    e: ExponentPair,
    w: WeightPair,
    lambda1: float,
    lambda2: float,
    gamma1: float,
    gamma2: float,
    r_max: float = 1.0,
    radii=None,
    rtol: float = 1e-10,
    stop_at_zero: bool = True,
    r0: float | None = None,
    backend: str | None = None,
) -> RadialProfile:
    """Integrate the radial system from the centre with ``u(0), v(0) = gamma1, gamma2``.

    Stops at ``r_max`` or, when ``stop_at_zero``, at the first zero of ``u`` or
    ``v``; the zero itself is appended to the returned profile.
    """
    if radii is None:
        radii = np.linspace(0.0, r_max, 1001)[1:]
    radii = np.asarray(radii, dtype=float)
    radii = radii[(radii > 0) & (radii <= r_max)]
    res = solve_ivp_raw(
        e, w, lambda1, lambda2, gamma1, gamma2, r_max, radii, rtol,
        stop_at_zero=stop_at_zero, r0=r0, backend=backend,
    )
    rs = [0.0, *res.radii]
    states = [np.array([gamma1, 0.0, gamma2, 0.0]), *res.states]
    if res.status in (_kernel_py.U_ZERO, _kernel_py.V_ZERO) and (not len(res.radii) or res.r_stop > res.radii[-1]):
        rs.append(res.r_stop)
        states.append(res.y_stop)
    states = np.array(states)
    return RadialProfile(
        radii=np.array(rs),
        u_values=states[:, 0],
        v_values=states[:, 2],
        du_values=states[:, 1],
        dv_values=states[:, 3],
        central=(gamma1, gamma2),
        lambdas=(lambda1, lambda2),
        method="Shooting",
        stop_reason=res.stop_reason,
        boundary_defect=float(max(abs(states[-1, 0]), abs(states[-1, 2]))) if math.isclose(rs[-1], 1.0) else float("nan"),
        info={"r_stop": float(res.r_stop), "nsteps": int(res.nsteps)},
    )
