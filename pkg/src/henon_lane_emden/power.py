"""Power-type solutions ``u = |x|^alpha, v = |x|^beta`` and the Kelvin action.

For ``u = r^alpha`` one has ``-Delta u = -alpha (alpha + n - 2) r^(alpha-2)``, so a
power pair solves

    -Delta u = lambda1 |x|^a v^(p-1),   -Delta v = lambda2 |x|^b u^(q-1)

exactly when ``alpha - 2 = a + beta (p-1)`` and ``beta - 2 = b + alpha (q-1)``,
with ``lambda1 = -alpha(alpha+n-2)`` and ``lambda2 = -beta(beta+n-2)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import HomogeneousRegime
from .regions import (
    ANTICOERCIVE,
    COERCIVE,
    DEFAULT_EPS,
    OUTSIDE,
    REGIME_EPS,
    ExponentPair,
    Membership,
    Regime,
    WeightPair,
    classify_regime,
    margins_array,
    regime_array,
    tristate,
)


@dataclass(frozen=True)
class PowerSolution:
    alpha: float
    beta: float
    lambda1: float
    lambda2: float

    @property
    def positive(self) -> bool:
        return self.lambda1 > 0 and self.lambda2 > 0

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "beta": self.beta,
            "lambda1": self.lambda1,
            "lambda2": self.lambda2,
            "positive": self.positive,
        }


@dataclass(frozen=True)
class PowerFamilyH:
    """One-parameter family of power solutions in the homogeneous regime.

    Along the family ``beta = alpha/(p-1) + b + 2``.  ``alpha_range`` is the open
    interval on which both coefficients are positive, or ``None`` when empty
    (always ``None`` off the line ``a/p + b/p' + 2 = 0``).
    """

    n: int
    p: float
    b: float
    on_line: bool
    alpha_range: tuple | None

    def beta(self, alpha: float) -> float:
        return alpha / (self.p - 1.0) + self.b + 2.0

    def solution(self, alpha: float) -> PowerSolution:
        if not self.on_line:
            raise ValueError("weights are off the homogeneous critical line")
        beta = self.beta(alpha)
        lam1, lam2 = power_lambdas(self.n, alpha, beta)
        return PowerSolution(alpha, beta, lam1, lam2)

    def to_dict(self) -> dict:
        return {
            "on_line": self.on_line,
            "alpha_range": list(self.alpha_range) if self.alpha_range else None,
            "beta_slope": 1.0 / (self.p - 1.0),
            "beta_intercept": self.b + 2.0,
        }


@dataclass(frozen=True)
class KelvinMap:
    image: WeightPair
    fixed_point: WeightPair

    def to_dict(self) -> dict:
        return {
            "image": {"a": self.image.a, "b": self.image.b},
            "fixed_point": {"a": self.fixed_point.a, "b": self.fixed_point.b},
        }


def power_exponents(e: ExponentPair, w: WeightPair) -> tuple[float, float]:
    if classify_regime(e) is Regime.HOMOGENEOUS:
        raise HomogeneousRegime("exponent system is singular for q = p'; use power_family_h")
    p, q = e.p, e.q
    det = (p - 1.0) * (q - 1.0) - 1.0
    line_p = w.a / p + w.b / e.p_conj + 2.0
    line_q = w.a / e.q_conj + w.b / q + 2.0
    return -p * line_p / det, -q * line_q / det


def power_lambdas(n, alpha: float, beta: float) -> tuple[float, float]:
    """Exact coefficients of ``-Delta r^alpha`` and ``-Delta r^beta``.

    ``n`` may be an :class:`ExponentPair` or the bare dimension.
    """
    n = getattr(n, "n", n)
    return -alpha * (alpha + n - 2.0), -beta * (beta + n - 2.0)


def power_solution(e: ExponentPair, w: WeightPair) -> PowerSolution:
    alpha, beta = power_exponents(e, w)
    return PowerSolution(alpha, beta, *power_lambdas(e.n, alpha, beta))


def power_family_h(e: ExponentPair, w: WeightPair, eps: float = DEFAULT_EPS) -> PowerFamilyH:
    if classify_regime(e) is not Regime.HOMOGENEOUS:
        raise ValueError("power_family_h requires the homogeneous regime")
    n, p = e.n, e.p
    compat = w.a / p + w.b / e.p_conj + 2.0
    if abs(compat) > eps:
        return PowerFamilyH(n, p, w.b, False, None)
    # lambda1 > 0 <=> alpha in (2-n, 0); lambda2 > 0 <=> beta(alpha) in (2-n, 0)
    lo = max(2.0 - n, -(w.b + n) * (p - 1.0))
    hi = min(0.0, -(w.b + 2.0) * (p - 1.0))
    return PowerFamilyH(n, p, w.b, True, (lo, hi) if lo < hi else None)


def membership_Q_array(n, p, q, a, b, eps=DEFAULT_EPS, regime_eps=REGIME_EPS):
    m = margins_array(n, p, q, a, b)
    reg = regime_array(p, q, regime_eps)
    lp, lq, gu, gv = m["line_p"], m["line_q"], m["growth_u"], m["growth_v"]
    ac = tristate((lp, lq, -gu, -gv), eps=eps)
    c = tristate((-lp, -lq, gu, gv), eps=eps)
    seg = tristate((m["a_integrability"], m["b_integrability"]), eps=eps)
    h = np.where(np.abs(lp) <= eps, seg, OUTSIDE)
    return np.select([reg == ANTICOERCIVE, reg == COERCIVE], [ac, c], h)


def membership_Q(e: ExponentPair, w: WeightPair, eps: float = DEFAULT_EPS) -> Membership:
    """Tri-state membership in the open parallelogram of power solutions.

    In the homogeneous regime the parallelogram collapses to the open segment
    ``a/p + b/p' + 2 = 0, a, b > -n`` and ``eps`` is the width of that segment.
    """
    return Membership.from_code(membership_Q_array(e.n, e.p, e.q, w.a, w.b, eps))


def kelvin_kappa(e: ExponentPair, w: WeightPair) -> WeightPair:
    ca = e.p * (e.n - 2) - 2.0 * e.n
    cb = e.q * (e.n - 2) - 2.0 * e.n
    return WeightPair(ca - w.a, cb - w.b)


def kelvin_fixed_point(e: ExponentPair) -> WeightPair:
    return WeightPair(e.p * (e.n - 2) / 2.0 - e.n, e.q * (e.n - 2) / 2.0 - e.n)


def kelvin_map(e: ExponentPair, w: WeightPair) -> KelvinMap:
    return KelvinMap(kelvin_kappa(e, w), kelvin_fixed_point(e))


def kelvin_power(e: ExponentPair, sol: PowerSolution) -> PowerSolution:
    """Image of ``(r^alpha, r^beta)`` under ``w -> |x|^(2-n) w(x/|x|^2)``."""
    if not (math.isfinite(sol.alpha) and math.isfinite(sol.beta)):
        raise ValueError("exponents must be finite")
    alpha = 2.0 - e.n - sol.alpha
    beta = 2.0 - e.n - sol.beta
    return PowerSolution(alpha, beta, *power_lambdas(e.n, alpha, beta))


def q_vertices(e: ExponentPair):
    """Vertices ``X, X', V, V'`` of the parallelogram of power solutions."""
    n = e.n
    X = WeightPair(-float(n), e.q * (n - 2) - n)
    Xp = kelvin_kappa(e, X)
    if classify_regime(e) is Regime.HOMOGENEOUS:
        raise HomogeneousRegime("parallelogram collapses to the segment X X'", endpoints=(X, Xp))
    V = WeightPair(-2.0, -2.0)
    return X, Xp, V, kelvin_kappa(e, V)


def unit_lambda_scaling(e: ExponentPair, lambda1: float, lambda2: float) -> tuple[float, float]:
    """Constants ``c1, c2`` turning a solution with coefficients ``lambda1, lambda2``
    into one with unit coefficients.

    If ``-Delta U = lambda1 r^a V^(p-1)`` and ``-Delta V = lambda2 r^b U^(q-1)``,
    then ``u = c1 U, v = c2 V`` solve the system with ``lambda1 = lambda2 = 1``.
    Only possible off the homogeneous regime.
    """
    if classify_regime(e) is Regime.HOMOGENEOUS:
        raise HomogeneousRegime("coefficients are eigenvalues in the homogeneous regime")
    if not (lambda1 > 0 and lambda2 > 0):
        raise ValueError("coefficients must be positive")
    l1, l2 = math.log(lambda1), math.log(lambda2)
    theta = e.theta
    log_c1 = (-l1 - (e.p - 1.0) * l2) / theta
    log_c2 = (-l2 - (e.q - 1.0) * l1) / theta
    return math.exp(log_c1), math.exp(log_c2)
