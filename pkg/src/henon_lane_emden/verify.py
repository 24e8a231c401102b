"""Verification primitives: ball Green function, local masses, PDE residuals."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy import integrate, special

from .errors import CoincidentPoints, Divergent
from .power import PowerSolution
from .regions import ExponentPair, WeightPair


def sphere_area(n: int) -> float:
    """Surface measure of the unit sphere in R^n."""
    return 2.0 * math.pi ** (n / 2.0) / special.gamma(n / 2.0)


def green_constant(n: int) -> float:
    """``c_n = 1/((n-2) |S^(n-1)|)``, so that ``-Delta_y G^x = delta_x``."""
    return 1.0 / ((n - 2) * sphere_area(n))


@dataclass(frozen=True)
class GreenEval:
    x: tuple
    y: tuple
    value: float
    regular_part: float


def _regular_part(n, x, y):
    # |x|^(n-2) / |y|x|^2 - x|^(n-2), written through the symmetric quantity
    # |y|x|^2 - x|^2 / |x|^2 = |x|^2|y|^2 - 2 x.y + 1, which also covers x = 0
    s = np.dot(x, x) * np.dot(y, y) - 2.0 * np.dot(x, y) + 1.0
    return s ** ((2.0 - n) / 2.0)


def green_ball(n: int, x, y) -> GreenEval:
    """Dirichlet Green function of the unit ball in R^n with pole at ``x``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != (n,) or y.shape != (n,):
        raise ValueError(f"points must have {n} coordinates")
    d = np.linalg.norm(y - x)
    if d == 0.0:
        raise CoincidentPoints("x and y coincide")
    h = float(_regular_part(n, x, y))
    value = green_constant(n) * (d ** (2.0 - n) - h)
    return GreenEval(tuple(x), tuple(y), float(value), h)


def green_ball_array(n: int, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Row-wise Green function values for arrays of shape ``(m, n)``."""
    d = np.linalg.norm(y - x, axis=-1)
    s = (
        np.einsum("ij,ij->i", x, x) * np.einsum("ij,ij->i", y, y)
        - 2.0 * np.einsum("ij,ij->i", x, y)
        + 1.0
    )
    return green_constant(n) * (d ** (2.0 - n) - s ** ((2.0 - n) / 2.0))


def sample_ball(rng, n: int, m: int, radius: float = 1.0) -> np.ndarray:
    """``m`` points uniformly distributed in the ball of given radius."""
    g = rng.standard_normal((m, n))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    return g * radius * rng.random((m, 1)) ** (1.0 / n)


def green_lower_bound_check(n: int, R: float, samples: int = 1000, seed: int = 0):
    """Empirical constant ``min G^x(y) R^(n-2)`` over random ``x, y`` in ``B_R``.

    Returns ``(c_est, passed)`` with ``passed = c_est > 0``.  Coincident
    samples are redrawn.
    """
    if not 0 < R <= 0.25:
        raise ValueError("R must lie in (0, 1/4]")
    rng = np.random.default_rng(seed)
    x = sample_ball(rng, n, samples, R)
    y = sample_ball(rng, n, samples, R)
    same = np.all(x == y, axis=1)
    while same.any():
        y[same] = sample_ball(rng, n, int(same.sum()), R)
        same = np.all(x == y, axis=1)
    c_est = float(np.min(green_ball_array(n, x, y)) * R ** (n - 2))
    return c_est, c_est > 0


# ---------------------------------------------------------------------------
# local masses


@dataclass
class MassReport:
    R: float
    U_R: float
    V_R: float
    exponent_U: float
    exponent_V: float
    exact_exponent_U: float | None = None
    exact_exponent_V: float | None = None

    def to_dict(self) -> dict:
        return asdict(self)


def _power_mass(n, k, R):
    """``|S^(n-1)| * int_0^R r^(k+n-1) dr`` by adaptive quadrature in ``log r``."""
    e = k + n
    if e <= 0:
        raise Divergent(f"integrand r^{k} is not integrable at the origin in dimension {n}")
    val, _ = integrate.quad(
        lambda s: math.exp(e * s), -math.inf, math.log(R), epsabs=0.0, epsrel=1e-13, limit=200
    )
    return sphere_area(n) * val


def _profile_mass(n, r, g, k, R):
    """Product integration of ``r^k g(r)`` with ``g`` piecewise linear on the grid."""
    if k + n <= 0:
        raise Divergent(f"weight r^{k} is not integrable at the origin in dimension {n}")
    sel = r <= R
    rr, gg = r[sel], g[sel]
    if rr[-1] < R:
        gR = np.interp(R, r, g)
        rr = np.append(rr, R)
        gg = np.append(gg, gR)
    e = k + n
    lo, hi = rr[:-1], rr[1:]
    # exact moments of r^(e-1) and r^e on each cell
    m0 = (hi**e - lo**e) / e
    m1 = (hi ** (e + 1) - lo ** (e + 1)) / (e + 1)
    slope = np.diff(gg) / np.diff(rr)
    total = np.sum(gg[:-1] * m0 + slope * (m1 - lo * m0))
    return sphere_area(n) * float(total)


def _fit_exponent(Rs, vals):
    return float(np.polyfit(np.log(Rs), np.log(vals), 1)[0])


def local_mass(e: ExponentPair, w: WeightPair, solution, R: float, R0: float | None = None,
               points: int = 11) -> MassReport:
    """``U_R = int_{B_R} |x|^b u^(q-1)`` and ``V_R = int_{B_R} |x|^a v^(p-1)``.

    ``solution`` is a :class:`PowerSolution` (``u = r^alpha, v = r^beta``) or a
    :class:`~henon_lane_emden.solver.RadialProfile`.  Growth exponents are
    least-squares slopes of ``log U_R`` against ``log R`` over one decade
    ``[R0, 10 R0]`` (``R0 = R/10`` by default).
    """
    if not 0 < R <= 1:
        raise ValueError("R must lie in (0, 1]")
    if R0 is None:
        R0 = R / 10.0
    Rs = np.geomspace(R0, 10.0 * R0, points)
    n = e.n
    if isinstance(solution, PowerSolution):
        ku = w.b + solution.alpha * (e.q - 1.0)
        kv = w.a + solution.beta * (e.p - 1.0)

        def U(rad):
            return _power_mass(n, ku, rad)

        def V(rad):
            return _power_mass(n, kv, rad)

        exact_u, exact_v = n + ku, n + kv
    else:
        r = solution.radii
        gu = np.abs(solution.u_values) ** (e.q - 1.0)
        gv = np.abs(solution.v_values) ** (e.p - 1.0)

        def U(rad):
            return _profile_mass(n, r, gu, w.b, rad)

        def V(rad):
            return _profile_mass(n, r, gv, w.a, rad)

        exact_u = exact_v = None
    us = np.array([U(x) for x in Rs])
    vs = np.array([V(x) for x in Rs])
    return MassReport(
        R=R,
        U_R=U(R),
        V_R=V(R),
        exponent_U=_fit_exponent(Rs, us),
        exponent_V=_fit_exponent(Rs, vs),
        exact_exponent_U=exact_u,
        exact_exponent_V=exact_v,
    )


# ---------------------------------------------------------------------------
# residuals


def fd_derivatives(r, f):
    """Three-point first and second derivatives at interior nodes of a
    (possibly non-uniform) grid."""
    hm = r[1:-1] - r[:-2]
    hp = r[2:] - r[1:-1]
    fm, f0, fp = f[:-2], f[1:-1], f[2:]
    den = hp * hm * (hp + hm)
    d1 = (hm * hm * fp - hp * hp * fm + (hp * hp - hm * hm) * f0) / den
    d2 = 2.0 * (hm * fp - (hp + hm) * f0 + hp * fm) / den
    return d1, d2


def radial_residuals(e: ExponentPair, w: WeightPair, r, u, v, lambda1, lambda2):
    """Pointwise residuals of both equations at interior nodes.

    Returns ``(res_u, res_v, rhs_u, rhs_v)`` where ``res_u = -Delta u - rhs_u``.
    """
    r = np.asarray(r, dtype=float)
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    ri = r[1:-1]
    du, d2u = fd_derivatives(r, u)
    dv, d2v = fd_derivatives(r, v)
    k = e.n - 1.0
    rhs_u = lambda1 * ri**w.a * np.sign(v[1:-1]) * np.abs(v[1:-1]) ** (e.p - 1.0)
    rhs_v = lambda2 * ri**w.b * np.sign(u[1:-1]) * np.abs(u[1:-1]) ** (e.q - 1.0)
    res_u = -(d2u + k * du / ri) - rhs_u
    res_v = -(d2v + k * dv / ri) - rhs_v
    return res_u, res_v, rhs_u, rhs_v


def _local_derivative(r, f, k):
    """Local estimate of ``|f^(k)|`` at interior nodes.

    ``k! f[r_j..r_(j+k)]`` (divided difference) over every window of ``k+1``
    nodes; each interior node takes the largest value among the windows
    containing it, so non-smooth behaviour next to the origin is seen.
    """
    r = np.asarray(r, dtype=float)
    f = np.asarray(f, dtype=float)
    if r.size < k + 1:
        return np.zeros(max(r.size - 2, 0))
    dd = f.copy()
    for j in range(1, k + 1):
        dd = (dd[1:] - dd[:-1]) / (r[j:] - r[:-j])
    dk = math.factorial(k) * np.abs(dd)
    out = np.zeros(r.size)
    for s in range(k + 1):
        out[s : s + dk.size] = np.maximum(out[s : s + dk.size], dk)
    return out[1:-1]


def residual_check(e: ExponentPair, w: WeightPair, profile, lambda1: float, lambda2: float,
                   tol: float = 1e-6, safety: float = 4.0) -> dict:
    """Discrete residual statistics of ``-Delta u = lambda1 r^a v^(p-1)`` and its twin.

    The verdict ``passed`` requires every interior residual to be within
    ``tol * scale + safety * h^2 (|f''''|/12 + (n-1)|f'''|/(6r))``, where
    ``scale`` is the sup of the corresponding right-hand side and the
    derivatives are estimated locally from the data by divided differences.
    ``relative_sup`` is the sup residual divided by that scale.
    """
    r = np.asarray(profile.radii, dtype=float)
    u = np.asarray(profile.u_values, dtype=float)
    v = np.asarray(profile.v_values, dtype=float)
    if r.size < 3:
        raise ValueError("profile needs at least 3 nodes")
    res_u, res_v, rhs_u, rhs_v = radial_residuals(e, w, r, u, v, lambda1, lambda2)
    h = np.maximum(r[2:] - r[1:-1], r[1:-1] - r[:-2])
    ri = r[1:-1]
    weights = np.gradient(r)[1:-1] * ri ** (e.n - 1)
    out = {}
    passed = True
    for name, res, rhs, f in (("u", res_u, rhs_u, u), ("v", res_v, rhs_v, v)):
        scale = float(np.max(np.abs(rhs))) if rhs.size else 0.0
        # Taylor error of the stencil: h^2/12 |f''''| + (n-1) h^2/(6r) |f'''|
        trunc = h * h * (_local_derivative(r, f, 4) / 12.0 + (e.n - 1) / (6.0 * ri) * _local_derivative(r, f, 3))
        bound = tol * max(scale, 1e-300) + safety * trunc
        ok = bool(np.all(np.abs(res) <= bound))
        passed &= ok
        out[name] = {
            "sup": float(np.max(np.abs(res))),
            "l1_weighted": float(np.sum(np.abs(res) * weights)),
            "relative_sup": float(np.max(np.abs(res)) / scale) if scale > 0 else math.inf,
            "rhs_sup": scale,
            "passed": ok,
        }
    out["passed"] = passed
    out["relative_sup"] = max(out["u"]["relative_sup"], out["v"]["relative_sup"])
    out["nodes"] = int(r.size)
    return out
