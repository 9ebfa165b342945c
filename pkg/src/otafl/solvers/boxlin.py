"""Box-constrained least-power QP with one linear covering constraint."""

import numpy as np

from otafl import kernels
from otafl.solvers.types import BoxLinQP, SolveReport, SolveStatus

_STATUS = {
    kernels.OPTIMAL: SolveStatus.OPTIMAL,
    kernels.INFEASIBLE: SolveStatus.INFEASIBLE,
    kernels.MAX_ITER: SolveStatus.MAX_ITER,
}


def solve_box_lin_qp(p: BoxLinQP, tol: float = 1e-12, max_iter: int = 300) -> SolveReport:
    """Water-filling KKT solve of ``p`` (see BoxLinQP for the problem form)."""
    x, code, nu, iters = kernels.boxlin_bisect(
        p.linear_coeffs, p.rhs, p.lower, p.upper, tol, max_iter
    )
    x = np.asarray(x, dtype=float)
    scale = max(1.0, abs(p.rhs))
    shortfall = max(p.rhs - float(p.linear_coeffs @ x), 0.0) / scale
    activity = abs(float(p.linear_coeffs @ x) - p.rhs) / scale if nu > 0.0 else 0.0
    kkt = shortfall if code != kernels.OPTIMAL else max(shortfall, activity)
    return SolveReport(
        status=_STATUS[code],
        objective=float(x @ x),
        x=x,
        kkt_residual=kkt,
        iterations=int(iters),
    )
