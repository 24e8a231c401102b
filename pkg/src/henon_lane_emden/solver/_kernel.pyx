# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled radial integrator; mirrors ``_kernel_py`` step for step."""
import numpy as np

from libc.math cimport copysign, fabs, isfinite, pow, sqrt

DEF REACHED_END = 0
DEF U_ZERO = 1
DEF V_ZERO = 2
DEF STEP_UNDERFLOW = 3
DEF MAX_STEPS = 4
DEF NON_FINITE = 5

cdef double C2 = 1.0 / 5, C3 = 3.0 / 10, C4 = 4.0 / 5, C5 = 8.0 / 9
cdef double A21 = 1.0 / 5
cdef double A31 = 3.0 / 40, A32 = 9.0 / 40
cdef double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9
cdef double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561, A54 = -212.0 / 729
cdef double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247, A64 = 49.0 / 176, A65 = -5103.0 / 18656
cdef double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784, B6 = 11.0 / 84
cdef double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920, E5 = -17253.0 / 339200
cdef double E6 = 22.0 / 525, E7 = -1.0 / 40


cdef struct System:
    double k, p1, q1, a, b, lam1, lam2


cdef inline void rhs(System* s, double r, double* y, double* out) noexcept nogil:
    cdef double fv = s.lam1 * pow(r, s.a) * copysign(pow(fabs(y[2]), s.p1), y[2])
    cdef double gu = s.lam2 * pow(r, s.b) * copysign(pow(fabs(y[0]), s.q1), y[0])
    cdef double sr = s.k / r
    out[0] = y[1]
    out[1] = -sr * y[1] - fv
    out[2] = y[3]
    out[3] = -sr * y[3] - gu


cdef void step(System* s, double r, double* y, double* k1, double h,
               double* ynew, double* k7, double* err) noexcept nogil:
    cdef double k2[4]
    cdef double k3[4]
    cdef double k4[4]
    cdef double k5[4]
    cdef double k6[4]
    cdef double t[4]
    cdef int i
    for i in range(4):
        t[i] = y[i] + h * A21 * k1[i]
    rhs(s, r + C2 * h, t, k2)
    for i in range(4):
        t[i] = y[i] + h * A31 * k1[i] + h * A32 * k2[i]
    rhs(s, r + C3 * h, t, k3)
    for i in range(4):
        t[i] = y[i] + h * A41 * k1[i] + h * A42 * k2[i] + h * A43 * k3[i]
    rhs(s, r + C4 * h, t, k4)
    for i in range(4):
        t[i] = y[i] + h * A51 * k1[i] + h * A52 * k2[i] + h * A53 * k3[i] + h * A54 * k4[i]
    rhs(s, r + C5 * h, t, k5)
    for i in range(4):
        t[i] = (y[i] + h * A61 * k1[i] + h * A62 * k2[i] + h * A63 * k3[i]
                + h * A64 * k4[i] + h * A65 * k5[i])
    rhs(s, r + h, t, k6)
    for i in range(4):
        ynew[i] = (y[i] + h * B1 * k1[i] + h * B3 * k3[i] + h * B4 * k4[i]
                   + h * B5 * k5[i] + h * B6 * k6[i])
    rhs(s, r + h, ynew, k7)
    for i in range(4):
        err[i] = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i]
                      + E6 * k6[i] + E7 * k7[i])


cdef double error_norm(double* y, double* ynew, double* err, double rtol, double atol) noexcept nogil:
    cdef double acc = 0.0, sc, t
    cdef int i
    for i in range(4):
        sc = atol + rtol * (fabs(y[i]) if fabs(y[i]) >= fabs(ynew[i]) else fabs(ynew[i]))
        t = err[i] / sc
        acc += t * t
    return sqrt(acc / 4.0)


cdef double step_component(System* s, double r, double* y, double* k1, double h, int comp) noexcept nogil:
    cdef double ynew[4]
    cdef double k7[4]
    cdef double err[4]
    step(s, r, y, k1, h, ynew, k7, err)
    return ynew[comp]


cdef double locate_zero(System* s, double r, double* y, double* k1, double h, int comp) noexcept nogil:
    cdef double lo = 0.0, flo = y[comp]
    cdef double hi = h, fhi = step_component(s, r, y, k1, h, comp)
    cdef double mid, fm
    cdef int side = 0, it
    for it in range(100):
        if fhi == 0.0 or hi - lo <= 4e-16 * (r + hi):
            break
        mid = (lo * fhi - hi * flo) / (fhi - flo)
        if not (lo < mid < hi):
            mid = 0.5 * (lo + hi)
        fm = step_component(s, r, y, k1, mid, comp)
        if fm > 0.0:
            lo = mid
            flo = fm
            if side == 1:
                fhi *= 0.5
            side = 1
        else:
            hi = mid
            fhi = fm
            if side == -1:
                flo *= 0.5
            side = -1
    return hi


def integrate(double n, double p, double q, double a, double b, double lam1, double lam2,
              double r0, y0, r_out_in, double r_end, double rtol, double atol,
              bint stop_at_zero, double h0, double h_min_rel=1e-14, long max_steps=1000000):
    cdef System s
    s.k = n - 1.0
    s.p1 = p - 1.0
    s.q1 = q - 1.0
    s.a = a
    s.b = b
    s.lam1 = lam1
    s.lam2 = lam2

    cdef double[::1] r_out = np.ascontiguousarray(r_out_in, dtype=np.float64)
    cdef Py_ssize_t n_out = r_out.shape[0]
    out_arr = np.empty((n_out, 4), dtype=np.float64)
    cdef double[:, ::1] y_out = out_arr
    cdef Py_ssize_t n_rec = 0, j = 0
    cdef double y[4]
    cdef double k1[4]
    cdef double ynew[4]
    cdef double k7[4]
    cdef double err[4]
    cdef double r = r0, h, hs, target, en, fac, hz, best_h
    cdef bint landing
    cdef long nsteps = 0
    cdef int status = REACHED_END, comp, i, idx, c

    for i in range(4):
        y[i] = float(y0[i])
    rhs(&s, r, y, k1)
    h = h0 if h0 < r_end - r else r_end - r
    while j < n_out and r_out[j] <= r:
        j += 1

    with nogil:
        while r < r_end:
            if nsteps >= max_steps:
                status = MAX_STEPS
                break
            if h < h_min_rel * r:
                status = STEP_UNDERFLOW
                break
            target = r_out[j] if j < n_out else r_end
            if target > r_end:
                target = r_end
            landing = r + h >= target
            hs = target - r if landing else h
            step(&s, r, y, k1, hs, ynew, k7, err)
            nsteps += 1
            en = error_norm(y, ynew, err, rtol, atol)
            if not isfinite(en):
                h *= 0.2
                continue
            if en > 1.0:
                fac = 0.9 * pow(en, -0.2)
                h = hs * (fac if fac > 0.2 else 0.2)
                continue

            if stop_at_zero and (ynew[0] <= 0.0 or ynew[2] <= 0.0):
                best_h = -1.0
                comp = -1
                for c in range(2):
                    idx = 2 * c
                    if ynew[idx] <= 0.0:
                        hz = locate_zero(&s, r, y, k1, hs, idx)
                        if best_h < 0.0 or hz < best_h:
                            best_h = hz
                            comp = U_ZERO if c == 0 else V_ZERO
                step(&s, r, y, k1, best_h, ynew, k7, err)
                r = r + best_h
                for i in range(4):
                    y[i] = ynew[i]
                status = comp
                break

            if en == 0.0:
                fac = 5.0
            else:
                fac = 0.9 * pow(en, -0.2)
                if fac < 0.2:
                    fac = 0.2
                if fac > 5.0:
                    fac = 5.0
            if landing:
                r = target
            else:
                r += hs
            for i in range(4):
                y[i] = ynew[i]
                k1[i] = k7[i]
            if not (isfinite(y[0]) and isfinite(y[1]) and isfinite(y[2]) and isfinite(y[3])):
                status = NON_FINITE
                break
            while j < n_out and r_out[j] <= r:
                for i in range(4):
                    y_out[n_rec, i] = y[i]
                n_rec += 1
                j += 1
            if landing and hs < h:
                h = hs * fac if hs * fac > h else h
            else:
                h = hs * fac
            if r >= r_end:
                break

    return (out_arr[:n_rec].copy(), status, r,
            np.array([y[0], y[1], y[2], y[3]], dtype=np.float64), nsteps)
