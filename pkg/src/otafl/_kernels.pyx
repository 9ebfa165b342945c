# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot solver kernels.

Reference semantics live in ``otafl._kernels_py``; this module is a typed port
with the inner clip/accumulate loops in C. The innermost fixed point of the
QCQP kernel uses scalar bisection (the fallback uses an exact piecewise-linear
root); both land on the same point to bisection precision.
"""

from libc.math cimport INFINITY, fabs, sqrt

import numpy as np

OPTIMAL = 0
INFEASIBLE = 1
MAX_ITER = 2

cdef double WIDTH_EPS = 1e-15


cdef inline double _clip(double v, double lo, double up) noexcept:
    if v < lo:
        return lo
    if v > up:
        return up
    return v


cdef inline double _fmax2(double a, double b) noexcept:
    return a if a > b else b


cdef double _g_of_nu(double nu, double[::1] c, double[::1] lo, double[::1] up) noexcept:
    cdef Py_ssize_t i, n = c.shape[0]
    cdef double acc = 0.0
    for i in range(n):
        acc += c[i] * _clip(nu * c[i] / 2.0, lo[i], up[i])
    return acc


def boxlin_bisect(c_in, double rhs, lo_in, up_in, double tol, int max_iter):
    cdef double[::1] c = np.ascontiguousarray(c_in, dtype=np.float64)
    cdef double[::1] lo = np.ascontiguousarray(lo_in, dtype=np.float64)
    cdef double[::1] up = np.ascontiguousarray(up_in, dtype=np.float64)
    cdef Py_ssize_t i, n = c.shape[0]
    cdef double scale = _fmax2(1.0, fabs(rhs))
    cdef double tol_abs = tol * scale

    x_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] x = x_arr

    cdef double g0 = 0.0
    for i in range(n):
        x[i] = _clip(0.0, lo[i], up[i])
        g0 += c[i] * x[i]
    if g0 >= rhs - tol_abs:
        return x_arr, OPTIMAL, 0.0, 0

    cdef double g_sat = 0.0
    for i in range(n):
        if c[i] > 0.0:
            x[i] = up[i]
        g_sat += c[i] * x[i]
    if g_sat < rhs - tol_abs:
        return x_arr, INFEASIBLE, INFINITY, 0

    cdef double nu_lo = 0.0, nu_hi = 1.0, mid, resid, xx
    cdef int iters = 0
    while _g_of_nu(nu_hi, c, lo, up) < rhs and iters < max_iter:
        nu_lo = nu_hi
        nu_hi *= 2.0
        iters += 1
    while iters < max_iter:
        resid = _g_of_nu(nu_hi, c, lo, up) - rhs
        xx = 0.0
        for i in range(n):
            x[i] = _clip(nu_hi * c[i] / 2.0, lo[i], up[i])
            xx += x[i] * x[i]
        if resid <= tol_abs and nu_hi * resid <= tol * _fmax2(1.0, xx):
            break
        if nu_hi - nu_lo <= WIDTH_EPS * _fmax2(1.0, nu_hi):
            break
        mid = 0.5 * (nu_lo + nu_hi)
        if _g_of_nu(mid, c, lo, up) >= rhs:
            nu_hi = mid
        else:
            nu_lo = mid
        iters += 1

    cdef double g_fin = 0.0
    for i in range(n):
        x[i] = _clip(nu_hi * c[i] / 2.0, lo[i], up[i])
        g_fin += c[i] * x[i]
    cdef int status = OPTIMAL if g_fin >= rhs - tol_abs else MAX_ITER
    return x_arr, status, nu_hi, iters


cdef double _inner_b(
    double[::1] h, double[::1] lo, double[::1] up, double mu, double nu,
    double rho, double lam, double[::1] w, double[::1] b,
) noexcept:
    """Fill b with the clipped two-multiplier stationary point; return s = h.b."""
    cdef Py_ssize_t i, n = h.shape[0]
    cdef double denom, s_lo = 0.0, s_hi = 0.0, s_mid = 0.0, t_mid, coef
    cdef double two_mr = 2.0 * mu * rho
    cdef int k
    if two_mr == 0.0:
        for i in range(n):
            denom = 2.0 * (1.0 + mu * w[i])
            b[i] = _clip(h[i] * nu / denom, lo[i], up[i])
            s_mid += h[i] * b[i]
        return s_mid
    for i in range(n):
        s_lo += h[i] * lo[i]
        s_hi += h[i] * up[i]
    # phi(s) = sum_i h_i clip(.) - s has slope <= -1: bisect to its root.
    for k in range(110):
        if s_hi - s_lo <= 1e-16 * _fmax2(1.0, fabs(s_hi)):
            break
        s_mid = 0.5 * (s_lo + s_hi)
        t_mid = 0.0
        for i in range(n):
            denom = 2.0 * (1.0 + mu * w[i])
            coef = h[i] * (nu + two_mr * (lam - s_mid)) / denom
            t_mid += h[i] * _clip(coef, lo[i], up[i])
        if t_mid - s_mid >= 0.0:
            s_lo = s_mid
        else:
            s_hi = s_mid
    s_mid = 0.5 * (s_lo + s_hi)
    t_mid = 0.0
    for i in range(n):
        denom = 2.0 * (1.0 + mu * w[i])
        b[i] = _clip(h[i] * (nu + two_mr * (lam - s_mid)) / denom, lo[i], up[i])
        t_mid += h[i] * b[i]
    return t_mid


cdef double _quad_of(double[::1] h, double[::1] w, double rho, double lam,
                     double[::1] b) noexcept:
    cdef Py_ssize_t i, n = h.shape[0]
    cdef double s = 0.0, q = 0.0
    for i in range(n):
        s += h[i] * b[i]
        q += w[i] * b[i] * b[i]
    return rho * (lam - s) * (lam - s) + q


cdef double _dot(double[::1] a, double[::1] b) noexcept:
    cdef Py_ssize_t i, n = a.shape[0]
    cdef double acc = 0.0
    for i in range(n):
        acc += a[i] * b[i]
    return acc


cdef double _solve_nu(
    double mu, double[::1] h, double[::1] lo, double[::1] up, double rho,
    double lam, double[::1] w, double r_lin, double tol, double tol_l,
    int max_iter, double[::1] b, double[::1] b_tmp, int* iters,
) noexcept:
    """Smallest nu >= 0 putting h.b on the feasible side of r_lin; fills b."""
    cdef Py_ssize_t j, n = h.shape[0]
    cdef double s0 = _inner_b(h, lo, up, mu, 0.0, rho, lam, w, b)
    if s0 >= r_lin - tol_l:
        return 0.0
    cdef double nu_lo = 0.0, nu_hi = 1.0
    cdef double s_hi = _inner_b(h, lo, up, mu, nu_hi, rho, lam, w, b)
    cdef int k = 0
    cdef double mid, s_mid, resid, bb
    while s_hi < r_lin and k < max_iter:
        nu_lo = nu_hi
        nu_hi *= 2.0
        s_hi = _inner_b(h, lo, up, mu, nu_hi, rho, lam, w, b)
        k += 1
    while k < max_iter:
        resid = s_hi - r_lin
        bb = 0.0
        for j in range(n):
            bb += b[j] * b[j]
        if (resid <= tol_l and nu_hi * resid <= tol * _fmax2(1.0, bb)) or \
                nu_hi - nu_lo <= WIDTH_EPS * _fmax2(1.0, nu_hi):
            break
        mid = 0.5 * (nu_lo + nu_hi)
        s_mid = _inner_b(h, lo, up, mu, mid, rho, lam, w, b_tmp)
        if s_mid >= r_lin:
            nu_hi = mid
            s_hi = s_mid
            for j in range(n):
                b[j] = b_tmp[j]
        else:
            nu_lo = mid
        k += 1
    iters[0] += k
    return nu_hi


def qcqp_bisect(h_in, double r_lin, double rho, double lam, w_in, double cq,
                lo_in, up_in, double tol, int max_iter):
    cdef double[::1] h = np.ascontiguousarray(h_in, dtype=np.float64)
    cdef double[::1] w = np.ascontiguousarray(w_in, dtype=np.float64)
    cdef double[::1] lo = np.ascontiguousarray(lo_in, dtype=np.float64)
    cdef double[::1] up = np.ascontiguousarray(up_in, dtype=np.float64)
    cdef Py_ssize_t i, n = h.shape[0]

    cdef double box_mag = 0.0
    for i in range(n):
        box_mag += h[i] * _fmax2(fabs(lo[i]), fabs(up[i]))
    cdef double scale_l = _fmax2(1.0, _fmax2(fabs(r_lin), box_mag))
    cdef double scale_q = _fmax2(1.0, _fmax2(fabs(cq), rho * lam * lam))
    cdef double tol_l = tol * scale_l
    cdef double tol_q = tol * scale_q

    b_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] b = b_arr
    tmp_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] b_tmp = tmp_arr

    cdef double sat = 0.0
    for i in range(n):
        b[i] = up[i] if h[i] > 0.0 else _clip(0.0, lo[i], up[i])
        sat += h[i] * b[i]
    if sat < r_lin - tol_l:
        return b_arr, INFEASIBLE, 0.0, INFINITY, 0

    cdef bint any_w = False
    for i in range(n):
        if w[i] > 0.0:
            any_w = True
            break

    cdef double root, r_comb
    cdef double[::1] xv
    if not any_w:
        # Quadratic constraint depends on b only through u = lam - h.b: fold
        # it into the linear rhs exactly.
        if cq < -tol_q:
            for i in range(n):
                b[i] = _clip(0.0, lo[i], up[i])
            return b_arr, INFEASIBLE, INFINITY, 0.0, 0
        if rho <= 0.0:
            x, st, nu, it = boxlin_bisect(h_in, r_lin, lo_in, up_in, tol, max_iter)
            return x, st, 0.0, nu, it
        root = sqrt(cq / rho) if cq > 0.0 else 0.0
        r_comb = _fmax2(r_lin, lam - root)
        x, st, nu, it = boxlin_bisect(h_in, r_comb, lo_in, up_in, tol, max_iter)
        xv = x
        if st != INFEASIBLE and _dot(h, xv) > lam + root + tol_l:
            return x, INFEASIBLE, INFINITY, nu, it
        return x, st, 0.0, nu, it

    cdef int iters = 0
    cdef double nu0 = _solve_nu(0.0, h, lo, up, rho, lam, w, r_lin, tol, tol_l,
                                max_iter, b, b_tmp, &iters)
    if _quad_of(h, w, rho, lam, b) <= cq + tol_q:
        return b_arr, OPTIMAL, 0.0, nu0, iters

    cdef double mu_lo = 0.0, mu_hi = 1.0
    cdef double nu_at_hi = _solve_nu(mu_hi, h, lo, up, rho, lam, w, r_lin, tol,
                                     tol_l, max_iter, b, b_tmp, &iters)
    cdef int kk = 0
    while _quad_of(h, w, rho, lam, b) > cq and kk < max_iter:
        if mu_hi > 1e18:
            return b_arr, INFEASIBLE, mu_hi, nu_at_hi, iters
        mu_lo = mu_hi
        mu_hi *= 2.0
        nu_at_hi = _solve_nu(mu_hi, h, lo, up, rho, lam, w, r_lin, tol, tol_l,
                             max_iter, b, b_tmp, &iters)
        kk += 1

    best_arr = b_arr.copy()
    cdef double[::1] b_best = best_arr
    cdef double nu_best = nu_at_hi
    cdef double q_hi, gap, bb2, mmid, nu_mid
    while kk < max_iter:
        q_hi = _quad_of(h, w, rho, lam, b_best)
        bb2 = 0.0
        for i in range(n):
            bb2 += b_best[i] * b_best[i]
        gap = mu_hi * (cq - q_hi) + nu_best * _fmax2(_dot(h, b_best) - r_lin, 0.0)
        if cq - q_hi <= tol_q and gap <= tol * _fmax2(1.0, bb2):
            break
        if mu_hi - mu_lo <= WIDTH_EPS * _fmax2(1.0, mu_hi):
            break
        mmid = 0.5 * (mu_lo + mu_hi)
        nu_mid = _solve_nu(mmid, h, lo, up, rho, lam, w, r_lin, tol, tol_l,
                           max_iter, b, b_tmp, &iters)
        if _quad_of(h, w, rho, lam, b) <= cq:
            mu_hi = mmid
            nu_best = nu_mid
            for i in range(n):
                b_best[i] = b[i]
        else:
            mu_lo = mmid
        kk += 1
    iters += kk

    cdef int status = OPTIMAL if _quad_of(h, w, rho, lam, b_best) <= cq + tol_q else MAX_ITER
    return best_arr, status, mu_hi, nu_best, iters
