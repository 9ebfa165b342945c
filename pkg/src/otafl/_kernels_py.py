"""Pure-NumPy implementations of the hot solver kernels.

Same call signatures and status codes as the compiled module ``otafl._kernels``;
``otafl.kernels`` picks whichever is importable.
"""

import numpy as np

OPTIMAL = 0
INFEASIBLE = 1
MAX_ITER = 2

_WIDTH_EPS = 1e-15


def boxlin_bisect(c, rhs, lo, up, tol, max_iter):
    """Minimize sum(x_i^2) subject to c.x >= rhs and lo <= x <= up, c >= 0.

    KKT water-filling: x_i(nu) = clip(nu*c_i/2, lo_i, up_i) with the single
    multiplier nu found by monotone bisection on the constraint residual.
    Returns (x, status, nu, iters).
    """
    c = np.asarray(c, dtype=float)
    lo = np.asarray(lo, dtype=float)
    up = np.asarray(up, dtype=float)
    scale = max(1.0, abs(rhs))
    tol_abs = tol * scale

    x0 = np.clip(0.0, lo, up)
    if float(c @ x0) >= rhs - tol_abs:
        return x0, OPTIMAL, 0.0, 0

    # As nu -> inf every coordinate with c_i > 0 saturates at its upper bound.
    x_sat = np.where(c > 0.0, up, x0)
    if float(c @ x_sat) < rhs - tol_abs:
        return x_sat, INFEASIBLE, np.inf, 0

    def g(nu):
        return float(c @ np.clip(nu * c / 2.0, lo, up))

    nu_lo, nu_hi = 0.0, 1.0
    iters = 0
    while g(nu_hi) < rhs and iters < max_iter:
        nu_lo = nu_hi
        nu_hi *= 2.0
        iters += 1
    # Invariant from here on: g(nu_lo) < rhs <= g(nu_hi).
    while iters < max_iter:
        resid = g(nu_hi) - rhs
        x = np.clip(nu_hi * c / 2.0, lo, up)
        # nu*resid bounds the duality gap, hence the objective suboptimality.
        if resid <= tol_abs and nu_hi * resid <= tol * max(1.0, float(x @ x)):
            break
        if nu_hi - nu_lo <= _WIDTH_EPS * max(1.0, nu_hi):
            break
        mid = 0.5 * (nu_lo + nu_hi)
        if g(mid) >= rhs:
            nu_hi = mid
        else:
            nu_lo = mid
        iters += 1

    x = np.clip(nu_hi * c / 2.0, lo, up)
    status = OPTIMAL if float(c @ x) >= rhs - tol_abs else MAX_ITER
    return x, status, nu_hi, iters


def _qcqp_inner_b(h, lo, up, mu, nu, rho, lam, w):
    """Box-clipped stationary point of the two-multiplier Lagrangian.

    b_i = clip(h_i*(nu + 2*mu*rho*(lam - s)) / (2*(1 + mu*w_i)), lo_i, up_i)
    with s = h.b resolved through its fixed point. The map s -> h.b(s) is
    piecewise linear with slope <= 0, so phi(s) = h.b(s) - s has slope <= -1
    and a unique root, located exactly by breakpoint search.
    """
    denom = 2.0 * (1.0 + mu * w)
    a = h * (nu + 2.0 * mu * rho * lam) / denom
    d = h * (2.0 * mu * rho) / denom  # >= 0

    mask = d > 0.0
    if not np.any(mask):
        b = np.clip(a, lo, up)
        return b, float(h @ b)

    def t_of_s(s):
        return float(h @ np.clip(a - d * s, lo, up))

    pts = np.unique(
        np.concatenate([(a[mask] - up[mask]) / d[mask], (a[mask] - lo[mask]) / d[mask]])
    )
    phis = np.array([t_of_s(s) - s for s in pts])

    if phis[0] <= 0.0:
        s_ref = pts[0] - 1.0
        seg = (-np.inf, pts[0])
    elif phis[-1] > 0.0:
        s_ref = pts[-1] + 1.0
        seg = (pts[-1], np.inf)
    else:
        k = int(np.searchsorted(phis <= 0.0, True))  # phis is non-increasing
        s_ref = 0.5 * (pts[k - 1] + pts[k])
        seg = (pts[k - 1], pts[k])
    # T is affine on the segment holding the root: T(s) = t0 - t1*s.
    inner = a - d * s_ref
    active = (inner > lo) & (inner < up) & mask
    t1 = float(h[active] @ d[active]) if np.any(active) else 0.0
    t0 = t_of_s(s_ref) + t1 * s_ref
    s_star = min(max(t0 / (1.0 + t1), seg[0]), seg[1])
    b = np.clip(a - d * s_star, lo, up)
    return b, float(h @ b)


def qcqp_bisect(h, r_lin, rho, lam, w, cq, lo, up, tol, max_iter):
    """Minimize sum(b_i^2) subject to
         h.b >= r_lin,
         rho*(lam - h.b)^2 + sum(w_i*b_i^2) <= cq,
         lo <= b <= up,   with h >= 0, w >= 0, rho >= 0.

    Two-multiplier KKT: outer bisection on the quadratic-constraint multiplier
    mu, inner bisection on the linear one nu. Returns (b, status, mu, nu, iters).
    """
    h = np.asarray(h, dtype=float)
    w = np.asarray(w, dtype=float)
    lo = np.asarray(lo, dtype=float)
    up = np.asarray(up, dtype=float)

    scale_l = max(1.0, abs(r_lin), float(h @ np.maximum(np.abs(lo), np.abs(up))))
    scale_q = max(1.0, abs(cq), rho * lam * lam)
    tol_l = tol * scale_l
    tol_q = tol * scale_q

    x_sat = np.where(h > 0.0, up, np.clip(0.0, lo, up))
    if float(h @ x_sat) < r_lin - tol_l:
        return x_sat, INFEASIBLE, 0.0, np.inf, 0

    def quad(b):
        u = lam - float(h @ b)
        return rho * u * u + float(w @ (b * b))

    if not np.any(w > 0.0):
        # Quadratic constraint depends on b only through u = lam - h.b, so it
        # folds into the linear rhs exactly.
        if cq < -tol_q:
            b0 = np.clip(0.0, lo, up)
            return b0, INFEASIBLE, np.inf, 0.0, 0
        if rho <= 0.0:
            x, st, nu, it = boxlin_bisect(h, r_lin, lo, up, tol, max_iter)
            return x, st, 0.0, nu, it
        root = np.sqrt(max(cq, 0.0) / rho)
        x, st, nu, it = boxlin_bisect(h, max(r_lin, lam - root), lo, up, tol, max_iter)
        if st != INFEASIBLE and float(h @ x) > lam + root + tol_l:
            return x, INFEASIBLE, np.inf, nu, it
        return x, st, 0.0, nu, it

    iters = 0

    def solve_nu(mu):
        """Smallest nu >= 0 putting h.b on the feasible side of r_lin."""
        nonlocal iters
        b, s = _qcqp_inner_b(h, lo, up, mu, 0.0, rho, lam, w)
        if s >= r_lin - tol_l:
            return b, 0.0
        nu_lo, nu_hi = 0.0, 1.0
        b_hi, s_hi = _qcqp_inner_b(h, lo, up, mu, nu_hi, rho, lam, w)
        k = 0
        while s_hi < r_lin and k < max_iter:
            nu_lo = nu_hi
            nu_hi *= 2.0
            b_hi, s_hi = _qcqp_inner_b(h, lo, up, mu, nu_hi, rho, lam, w)
            k += 1
        while k < max_iter:
            resid = s_hi - r_lin
            if (
                resid <= tol_l
                and nu_hi * resid <= tol * max(1.0, float(b_hi @ b_hi))
            ) or nu_hi - nu_lo <= _WIDTH_EPS * max(1.0, nu_hi):
                break
            mid = 0.5 * (nu_lo + nu_hi)
            b_mid, s_mid = _qcqp_inner_b(h, lo, up, mu, mid, rho, lam, w)
            if s_mid >= r_lin:
                nu_hi, b_hi, s_hi = mid, b_mid, s_mid
            else:
                nu_lo = mid
            k += 1
        iters += k
        return b_hi, nu_hi

    b0, nu0 = solve_nu(0.0)
    if quad(b0) <= cq + tol_q:
        return b0, OPTIMAL, 0.0, nu0, iters

    mu_lo, mu_hi = 0.0, 1.0
    b_hi, nu_at_hi = solve_nu(mu_hi)
    k = 0
    while quad(b_hi) > cq and k < max_iter:
        if mu_hi > 1e18:
            # mu -> inf minimizes the quadratic constraint function subject to
            # the linear constraint and box; still above the bound means the
            # feasible set is empty.
            return b_hi, INFEASIBLE, mu_hi, nu_at_hi, iters
        mu_lo = mu_hi
        mu_hi *= 2.0
        b_hi, nu_at_hi = solve_nu(mu_hi)
        k += 1
    while k < max_iter:
        q_hi = quad(b_hi)
        # Duality gap of the feasible-side iterate bounds its suboptimality.
        gap = mu_hi * (cq - q_hi) + nu_at_hi * max(float(h @ b_hi) - r_lin, 0.0)
        if cq - q_hi <= tol_q and gap <= tol * max(1.0, float(b_hi @ b_hi)):
            break
        if mu_hi - mu_lo <= _WIDTH_EPS * max(1.0, mu_hi):
            break
        mid = 0.5 * (mu_lo + mu_hi)
        b_mid, nu_mid = solve_nu(mid)
        if quad(b_mid) <= cq:
            mu_hi, b_hi, nu_at_hi = mid, b_mid, nu_mid
        else:
            mu_lo = mid
        k += 1
    iters += k

    status = OPTIMAL if quad(b_hi) <= cq + tol_q else MAX_ITER
    return b_hi, status, mu_hi, nu_at_hi, iters
