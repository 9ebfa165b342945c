"""Dense primal-dual interior-point solver for small inequality-constrained QPs."""

import numpy as np

from otafl.solvers.types import DenseQP, SolveReport, SolveStatus


def _solve_kkt(m_mat, rhs):
    try:
        return np.linalg.solve(m_mat, rhs)
    except np.linalg.LinAlgError:
        ridge = 1e-12 * max(1.0, float(np.max(np.abs(m_mat))))
        return np.linalg.solve(m_mat + ridge * np.eye(m_mat.shape[0]), rhs)


def _max_step(v, dv):
    """Largest alpha in (0, 1] keeping v + alpha*dv > 0."""
    neg = dv < 0.0
    if not np.any(neg):
        return 1.0
    return min(1.0, float(np.min(-v[neg] / dv[neg])))


def _interior_point(q_mat, c, a_mat, b, tol, max_iter):
    """Mehrotra predictor-corrector on: min x'Qx + c'x s.t. Ax <= b.

    Returns (x, lam, converged, kkt_residual, iters).
    """
    n = q_mat.shape[0]
    m = a_mat.shape[0]
    x = np.zeros(n)
    s = np.maximum(b - a_mat @ x, 1.0)
    lam = np.ones(m)

    def residuals(x, s, lam):
        r_d = 2.0 * q_mat @ x + c + a_mat.T @ lam
        r_p = a_mat @ x + s - b
        return r_d, r_p

    best = (x.copy(), np.inf)
    # Divergence on infeasible problems is expected; the finite guards below
    # turn it into a clean bail-out, so silence the intermediate overflows.
    np_err = np.errstate(over="ignore", invalid="ignore", divide="ignore")
    with np_err:
        return _ip_iterations(
            q_mat, c, a_mat, b, tol, max_iter, x, s, lam, residuals, best
        )


def _ip_iterations(q_mat, c, a_mat, b, tol, max_iter, x, s, lam, residuals, best):
    m = a_mat.shape[0]
    for it in range(max_iter):
        r_d, r_p = residuals(x, s, lam)
        mu = float(s @ lam) / m
        sc_d = 1.0 + float(np.max(np.abs(c))) + float(np.max(np.abs(2.0 * q_mat @ x)))
        sc_p = 1.0 + float(np.max(np.abs(b)))
        kkt = max(
            float(np.max(np.abs(r_d))) / sc_d,
            float(np.max(np.abs(r_p))) / sc_p,
            mu / (1.0 + abs(float(x @ (q_mat @ x) + c @ x))),
        )
        if kkt < best[1]:
            best = (x.copy(), kkt)
        if kkt <= tol:
            return x, lam, True, kkt, it

        s_safe = np.maximum(s, 1e-250)
        d = np.minimum(lam / s_safe, 1e250)
        m_mat = 2.0 * q_mat + (a_mat.T * d) @ a_mat

        # Affine (predictor) direction.
        r_c = lam * s
        rhs = -r_d - a_mat.T @ ((-r_c + lam * r_p) / s_safe)
        dx_aff = _solve_kkt(m_mat, rhs)
        ds_aff = -r_p - a_mat @ dx_aff
        dlam_aff = (-r_c - lam * ds_aff) / s_safe
        if not (np.all(np.isfinite(dx_aff)) and np.all(np.isfinite(dlam_aff))):
            break
        alpha_p = _max_step(s, ds_aff)
        alpha_d = _max_step(lam, dlam_aff)
        mu_aff = float((s + alpha_p * ds_aff) @ (lam + alpha_d * dlam_aff)) / m
        sigma = min(1.0, max(0.0, (mu_aff / mu) ** 3)) if mu > 0 else 0.0

        # Corrector.
        r_c = lam * s - sigma * mu + ds_aff * dlam_aff
        rhs = -r_d - a_mat.T @ ((-r_c + lam * r_p) / s_safe)
        dx = _solve_kkt(m_mat, rhs)
        ds = -r_p - a_mat @ dx
        dlam = (-r_c - lam * ds) / s_safe
        if not (np.all(np.isfinite(dx)) and np.all(np.isfinite(dlam))):
            break
        alpha_p = 0.99 * _max_step(s, ds)
        alpha_d = 0.99 * _max_step(lam, dlam)
        x = x + alpha_p * dx
        s = s + alpha_p * ds
        lam = lam + alpha_d * dlam

    return best[0], lam, False, best[1], max_iter


def _phase1(a_mat, b, tol):
    """Feasibility LP: min t s.t. Ax - t <= b, t >= -1. Returns (t*, x)."""
    m, n = a_mat.shape
    q1 = np.zeros((n + 1, n + 1))
    c1 = np.zeros(n + 1)
    c1[n] = 1.0
    a1 = np.zeros((m + 1, n + 1))
    a1[:m, :n] = a_mat
    a1[:m, n] = -1.0
    a1[m, n] = -1.0
    b1 = np.concatenate([b, [1.0]])
    y, _, converged, _, _ = _interior_point(q1, c1, a1, b1, tol, 100)
    return float(y[n]), y[:n]


def solve_dense_qp(p: DenseQP, tol: float = 1e-10, max_iter: int = 60) -> SolveReport:
    """Interior-point solve of ``p``; certifies infeasibility via a phase-1 LP."""
    q_mat, c = p.quad, p.lin
    if p.ineq_A.shape[0] == 0:
        # Unconstrained quadratic: 2Qx = -c (least-squares for singular Q).
        x, *_ = np.linalg.lstsq(2.0 * q_mat, -c, rcond=None)
        resid = float(np.max(np.abs(2.0 * q_mat @ x + c), initial=0.0))
        sc = 1.0 + float(np.max(np.abs(c), initial=0.0))
        status = SolveStatus.OPTIMAL if resid / sc <= max(tol, 1e-9) else SolveStatus.MAX_ITER
        return SolveReport(status, float(x @ q_mat @ x + c @ x), x, resid / sc, 0)

    # Row-normalize constraints; rescale the objective. Neither moves the optimum.
    row = np.maximum(np.max(np.abs(p.ineq_A), axis=1), 1e-300)
    a_mat = p.ineq_A / row[:, None]
    b = p.ineq_b / row
    s_obj = max(1.0, float(np.max(np.abs(q_mat))), float(np.max(np.abs(c), initial=0.0)))
    x, lam, converged, kkt, iters = _interior_point(q_mat / s_obj, c / s_obj, a_mat, b, tol, max_iter)

    if not converged:
        t_star, _ = _phase1(a_mat, b, tol)
        sc = 1.0 + float(np.max(np.abs(b)))
        if t_star > 1e-7 * sc:
            return SolveReport(SolveStatus.INFEASIBLE, np.inf, x, kkt, iters)
        return SolveReport(
            SolveStatus.MAX_ITER, float(x @ q_mat @ x + c @ x), x, kkt, iters
        )
    return SolveReport(
        SolveStatus.OPTIMAL, float(x @ q_mat @ x + c @ x), x, kkt, iters
    )
