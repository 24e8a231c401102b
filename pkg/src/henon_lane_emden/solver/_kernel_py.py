"""Pure-Python radial integrator (fallback for the compiled ``_kernel``).

Integrates the first-order form of

    u'' + (n-1)/r u' = -lam1 r^a |v|^(p-2) v
    v'' + (n-1)/r v' = -lam2 r^b |u|^(q-2) u

with the Dormand-Prince 5(4) pair.  The odd extension of the nonlinearity
keeps the right-hand side defined past a zero of ``u`` or ``v``.

Both backends expose the same ``integrate`` signature and status codes and
must stay step-for-step identical.
"""
import math

import numpy as np

REACHED_END = 0
U_ZERO = 1
V_ZERO = 2
STEP_UNDERFLOW = 3
MAX_STEPS = 4
NON_FINITE = 5

C2, C3, C4, C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9
A21 = 1 / 5
A31, A32 = 3 / 40, 9 / 40
A41, A42, A43 = 44 / 45, -56 / 15, 32 / 9
A51, A52, A53, A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
A61, A62, A63, A64, A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
B1, B3, B4, B5, B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
E1, E3, E4, E5, E6, E7 = (
    71 / 57600,
    -71 / 16695,
    71 / 1920,
    -17253 / 339200,
    22 / 525,
    -1 / 40,
)


class _System:
    __slots__ = ("k", "p1", "q1", "a", "b", "lam1", "lam2")

    def __init__(self, n, p, q, a, b, lam1, lam2):
        self.k = n - 1.0
        self.p1 = p - 1.0
        self.q1 = q - 1.0
        self.a = a
        self.b = b
        self.lam1 = lam1
        self.lam2 = lam2

    def rhs(self, r, y):
        u, du, v, dv = y
        fv = self.lam1 * r ** self.a * math.copysign(abs(v) ** self.p1, v)
        gu = self.lam2 * r ** self.b * math.copysign(abs(u) ** self.q1, u)
        s = self.k / r
        return (du, -s * du - fv, dv, -s * dv - gu)


def _comb(y, h, coefs, ks):
    out = list(y)
    for c, k in zip(coefs, ks):
        if c != 0.0:
            for i in range(4):
                out[i] += h * c * k[i]
    return tuple(out)


def _step(sys, r, y, k1, h):
    f = sys.rhs
    k2 = f(r + C2 * h, _comb(y, h, (A21,), (k1,)))
    k3 = f(r + C3 * h, _comb(y, h, (A31, A32), (k1, k2)))
    k4 = f(r + C4 * h, _comb(y, h, (A41, A42, A43), (k1, k2, k3)))
    k5 = f(r + C5 * h, _comb(y, h, (A51, A52, A53, A54), (k1, k2, k3, k4)))
    k6 = f(r + h, _comb(y, h, (A61, A62, A63, A64, A65), (k1, k2, k3, k4, k5)))
    ynew = _comb(y, h, (B1, B3, B4, B5, B6), (k1, k3, k4, k5, k6))
    k7 = f(r + h, ynew)
    err = tuple(
        h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i])
        for i in range(4)
    )
    return ynew, k7, err


def _error_norm(y, ynew, err, rtol, atol):
    acc = 0.0
    for i in range(4):
        sc = atol + rtol * max(abs(y[i]), abs(ynew[i]))
        t = err[i] / sc
        acc += t * t
    return math.sqrt(acc / 4.0)


def _locate_zero(sys, r, y, k1, h, comp):
    """Step length in (0, h] at which component ``comp`` of the RK step vanishes."""
    lo, flo = 0.0, y[comp]
    hi, fhi = h, _step(sys, r, y, k1, h)[0][comp]
    side = 0
    for _ in range(100):
        if fhi == 0.0 or hi - lo <= 4e-16 * (r + hi):
            break
        mid = (lo * fhi - hi * flo) / (fhi - flo)
        if not lo < mid < hi:
            mid = 0.5 * (lo + hi)
        fm = _step(sys, r, y, k1, mid)[0][comp]
        if fm > 0.0:
            lo, flo = mid, fm
            if side == 1:
                fhi *= 0.5
            side = 1
        else:
            hi, fhi = mid, fm
            if side == -1:
                flo *= 0.5
            side = -1
    return hi


def integrate(
    n, p, q, a, b, lam1, lam2, r0, y0, r_out, r_end, rtol, atol,
    stop_at_zero, h0, h_min_rel=1e-14, max_steps=1_000_000,
):
    """Integrate from ``r0`` to ``r_end``, sampling the state at ``r_out``.

    Returns ``(y_out, status, r_stop, y_stop, nsteps)``; ``y_out`` has one row
    per output radius reached before stopping.
    """
    sys = _System(n, p, q, a, b, lam1, lam2)
    r_out = [float(x) for x in r_out]
    n_out = len(r_out)
    y_out = []
    r = float(r0)
    y = tuple(float(x) for x in y0)
    k1 = sys.rhs(r, y)
    h = min(float(h0), r_end - r)
    j = 0
    while j < n_out and r_out[j] <= r:
        j += 1
    nsteps = 0
    status = REACHED_END

    while r < r_end:
        if nsteps >= max_steps:
            status = MAX_STEPS
            break
        if h < h_min_rel * r:
            status = STEP_UNDERFLOW
            break
        target = r_out[j] if j < n_out else r_end
        target = min(target, r_end)
        landing = r + h >= target
        hs = target - r if landing else h
        ynew, k7, err = _step(sys, r, y, k1, hs)
        nsteps += 1
        en = _error_norm(y, ynew, err, rtol, atol)
        if not math.isfinite(en):
            h *= 0.2
            continue
        if en > 1.0:
            h = hs * max(0.2, 0.9 * en ** -0.2)
            continue

        if stop_at_zero and (ynew[0] <= 0.0 or ynew[2] <= 0.0):
            best_h, comp = None, -1
            for c, idx in ((U_ZERO, 0), (V_ZERO, 2)):
                if ynew[idx] <= 0.0:
                    hz = _locate_zero(sys, r, y, k1, hs, idx)
                    if best_h is None or hz < best_h:
                        best_h, comp = hz, c
            ystop = _step(sys, r, y, k1, best_h)[0]
            return _finish(y_out, comp, r + best_h, ystop, nsteps)

        fac = 5.0 if en == 0.0 else min(5.0, max(0.2, 0.9 * en ** -0.2))
        if landing:
            r = target
        else:
            r += hs
        y, k1 = ynew, k7
        if not all(math.isfinite(x) for x in y):
            status = NON_FINITE
            break
        while j < n_out and r_out[j] <= r:
            y_out.append(y)
            j += 1
        # a step shortened to hit an output radius says nothing against h
        h = max(hs * fac, h) if landing and hs < h else hs * fac
        if r >= r_end:
            break

    return _finish(y_out, status, r, y, nsteps)


def _finish(y_out, status, r, y, nsteps):
    arr = np.array(y_out, dtype=float).reshape(-1, 4)
    return arr, status, r, np.array(y, dtype=float), nsteps
