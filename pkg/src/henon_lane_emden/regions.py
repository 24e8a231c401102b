"""Regime classification and membership in the existence regions E and E+.

All inequality tests go through named *margins*: signed residuals that are
positive when the corresponding strict inequality holds.  Membership is
tri-state, with a declared absolute band ``eps`` around zero reported as
``Boundary``.

Every function accepts scalars; the ``*_array`` variants broadcast over numpy
arrays and are what region grids and large random sweeps use.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

DEFAULT_EPS = 1e-12
REGIME_EPS = 1e-12

# integer codes used by the vectorised routines
OUTSIDE, BOUNDARY, INSIDE = 0, 1, 2
ANTICOERCIVE, HOMOGENEOUS, COERCIVE = 0, 1, 2

MARGIN_NAMES = (
    "a_integrability",
    "b_integrability",
    "line_p",
    "line_q",
    "growth_u",
    "growth_v",
    "critical_line",
)


class Regime(str, enum.Enum):
    ANTICOERCIVE = "Anticoercive"
    HOMOGENEOUS = "Homogeneous"
    COERCIVE = "Coercive"


class Membership(str, enum.Enum):
    INSIDE = "Inside"
    BOUNDARY = "Boundary"
    OUTSIDE = "Outside"

    @classmethod
    def from_code(cls, code) -> "Membership":
        return _CODE_TO_MEMBERSHIP[int(code)]


_CODE_TO_MEMBERSHIP = {
    OUTSIDE: Membership.OUTSIDE,
    BOUNDARY: Membership.BOUNDARY,
    INSIDE: Membership.INSIDE,
}
_CODE_TO_REGIME = {
    ANTICOERCIVE: Regime.ANTICOERCIVE,
    HOMOGENEOUS: Regime.HOMOGENEOUS,
    COERCIVE: Regime.COERCIVE,
}


@dataclass(frozen=True)
class ExponentPair:
    """Nonlinearity exponents ``p, q`` and the space dimension ``n``."""

    n: int
    p: float
    q: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 3:
            raise ValueError(f"n must be an integer >= 3, got {self.n!r}")
        if not self.p > 1:
            raise ValueError(f"p must be > 1, got {self.p!r}")
        if not self.q > 1:
            raise ValueError(f"q must be > 1, got {self.q!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "p", float(self.p))
        object.__setattr__(self, "q", float(self.q))

    @property
    def p_conj(self) -> float:
        return self.p / (self.p - 1.0)

    @property
    def q_conj(self) -> float:
        return self.q / (self.q - 1.0)

    @property
    def gap(self) -> float:
        """Coercivity gap ``1/p + 1/q - 1``."""
        return 1.0 / self.p + 1.0 / self.q - 1.0

    @property
    def theta(self) -> float:
        """``1 - (p-1)(q-1)``; has the same sign as :attr:`gap`."""
        return 1.0 - (self.p - 1.0) * (self.q - 1.0)


@dataclass(frozen=True)
class WeightPair:
    """Exponents of the weights ``|x|^a`` and ``|x|^b``."""

    a: float
    b: float

    def __iter__(self):
        return iter((self.a, self.b))


@dataclass(frozen=True)
class RegionVerdict:
    regime: Regime
    in_E: Membership
    in_Eplus: Membership
    in_Q: Membership
    margins: dict = field(default_factory=dict)
    boundary_tolerance: float = DEFAULT_EPS

    def to_dict(self) -> dict:
        return {
            "regime": self.regime.value,
            "in_E": self.in_E.value,
            "in_Eplus": self.in_Eplus.value,
            "in_Q": self.in_Q.value,
            "margins": dict(self.margins),
            "boundary_tolerance": self.boundary_tolerance,
        }


# ---------------------------------------------------------------------------
# vectorised core


def regime_array(p, q, eps=REGIME_EPS):
    gap = 1.0 / np.asarray(p, dtype=float) + 1.0 / np.asarray(q, dtype=float) - 1.0
    return np.where(gap < -eps, ANTICOERCIVE, np.where(gap > eps, COERCIVE, HOMOGENEOUS))


def margins_array(n, p, q, a, b) -> dict:
    """All signed residuals used by the E, E+ and Q definitions.

    ``line_p``/``line_q`` are ``a/p + b/p' + 2`` and ``a/q' + b/q + 2``;
    ``growth_u``/``growth_v`` are the brackets governing the local masses of
    ``|x|^b u^(q-1)`` and ``|x|^a v^(p-1)``; ``critical_line`` is
    ``(a+n)/p + (b+n)/q - (n-2)``.
    """
    n, p, q, a, b = (np.asarray(x, dtype=float) for x in (n, p, q, a, b))
    an, bn = a + n, b + n
    return {
        "a_integrability": an,
        "b_integrability": bn,
        "line_p": a / p + b * (p - 1.0) / p + 2.0,
        "line_q": a * (q - 1.0) / q + b / q + 2.0,
        "growth_u": an / p + bn / (p * (q - 1.0)) - (n - 2.0),
        "growth_v": an / (q * (p - 1.0)) + bn / q - (n - 2.0),
        "critical_line": an / p + bn / q - (n - 2.0),
    }


def tristate(strict, nonstrict=(), eps=DEFAULT_EPS):
    """Combine margins into OUTSIDE/BOUNDARY/INSIDE codes.

    Strict margins must exceed ``eps``; non-strict ones only need to be
    ``>= -eps`` and never produce BOUNDARY.
    """
    violated = np.zeros(np.broadcast(*strict, *nonstrict).shape, dtype=bool)
    on_edge = np.zeros_like(violated)
    for m in strict:
        violated |= m < -eps
        on_edge |= np.abs(m) <= eps
    for m in nonstrict:
        violated |= m < -eps
    return np.where(violated, OUTSIDE, np.where(on_edge, BOUNDARY, INSIDE))


def membership_E_array(n, p, q, a, b, eps=DEFAULT_EPS, regime_eps=REGIME_EPS):
    m = margins_array(n, p, q, a, b)
    reg = regime_array(p, q, regime_eps)
    ints = (m["a_integrability"], m["b_integrability"])
    ac = tristate((*ints, m["line_p"], m["line_q"]), eps=eps)
    h = tristate(ints, (m["line_p"],), eps=eps)
    c = tristate((*ints, m["growth_u"], m["growth_v"]), eps=eps)
    return np.select([reg == ANTICOERCIVE, reg == HOMOGENEOUS], [ac, h], c)


def membership_Eplus_array(n, p, q, a, b, eps=DEFAULT_EPS):
    m = margins_array(n, p, q, a, b)
    return tristate((m["a_integrability"], m["b_integrability"], m["critical_line"]), eps=eps)


# ---------------------------------------------------------------------------
# scalar API


def classify_regime(e: ExponentPair, eps: float = REGIME_EPS) -> Regime:
    return _CODE_TO_REGIME[int(regime_array(e.p, e.q, eps))]


def margins(e: ExponentPair, w: WeightPair) -> dict:
    return {k: float(v) for k, v in margins_array(e.n, e.p, e.q, w.a, w.b).items()}


def membership_E(e: ExponentPair, w: WeightPair, eps: float = DEFAULT_EPS) -> RegionVerdict:
    """Full verdict for ``(a, b)``: regime, E, E+ and Q membership, margins.

    In the homogeneous regime the line ``a/p + b/p' + 2 = 0`` belongs to E
    (non-strict); only ``a = -n`` or ``b = -n`` yield ``Boundary`` there.
    """
    from .power import membership_Q

    return RegionVerdict(
        regime=classify_regime(e),
        in_E=Membership.from_code(membership_E_array(e.n, e.p, e.q, w.a, w.b, eps)),
        in_Eplus=membership_Eplus(e, w, eps),
        in_Q=membership_Q(e, w, eps),
        margins=margins(e, w),
        boundary_tolerance=eps,
    )


def membership_Eplus(e: ExponentPair, w: WeightPair, eps: float = DEFAULT_EPS) -> Membership:
    return Membership.from_code(membership_Eplus_array(e.n, e.p, e.q, w.a, w.b, eps))


def serrin_exponent(n: int, a: float) -> float:
    """Threshold ``(2(n-1) + a)/(n-2)``; Serrin's exponent when ``a = 0``."""
    if n < 3:
        raise ValueError("n must be >= 3")
    return (2.0 * (n - 1) + a) / (n - 2)


def corollary_oracle(n: int, p: float, a: float) -> bool:
    """Closed-form existence answer for the symmetric system ``p = q, b = a``.

    Written independently of the margin machinery so it can cross-check
    :func:`membership_E`.
    """
    if p > 2:
        return a > -2
    if p == 2:
        return a >= -2
    return a > -n and p < serrin_exponent(n, a)
