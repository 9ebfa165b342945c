"""Box/linear/quadratic-constrained least-power solver.

The fast path is a two-multiplier KKT scheme (outer bisection on the quadratic
multiplier, inner on the linear one) that applies when the quadratic constraint
has the bias-plus-diagonal structure produced by the transmit subproblem. When
the structure is absent or bracketing fails, an outer-linearization loop with
interior-point master problems takes over.
"""

import numpy as np

from otafl import kernels
from otafl.solvers.denseqp import solve_dense_qp
from otafl.solvers.types import (
    BoxLinQuadQCQP,
    DenseQP,
    QcqpBiasStructure,
    SolveReport,
    SolveStatus,
)

_STATUS = {
    kernels.OPTIMAL: SolveStatus.OPTIMAL,
    kernels.INFEASIBLE: SolveStatus.INFEASIBLE,
    kernels.MAX_ITER: SolveStatus.MAX_ITER,
}


def _detect_structure(p: BoxLinQuadQCQP) -> QcqpBiasStructure | None:
    """Recover (rho, offset, diag_weights, budget) when quad_mat equals
    rho * c c^T + diag(w) with c = lin_coeffs and quad_vec = -2 rho offset c."""
    c = p.lin_coeffs
    q_mat = p.quad_mat
    n = p.dim
    scale = max(1.0, float(np.max(np.abs(q_mat))))
    off = q_mat - np.diag(np.diag(q_mat))
    if float(np.max(np.abs(off), initial=0.0)) <= 1e-12 * scale:
        if float(np.max(np.abs(p.quad_vec), initial=0.0)) > 1e-12 * scale:
            return None  # diagonal quadratic with a linear term: not our form
        return QcqpBiasStructure(0.0, 0.0, np.maximum(np.diag(q_mat), 0.0), p.quad_bound)
    i, j = np.unravel_index(np.argmax(np.abs(off)), off.shape)
    if c[i] * c[j] == 0.0:
        return None
    rho = off[i, j] / (c[i] * c[j])
    if rho < 0.0:
        return None
    expect = rho * (np.outer(c, c) - np.diag(c * c))
    if float(np.max(np.abs(off - expect))) > 1e-9 * scale:
        return None
    w = np.diag(q_mat) - rho * c * c
    if float(np.min(w)) < -1e-9 * scale:
        return None
    w = np.maximum(w, 0.0)
    k = int(np.argmax(np.abs(c)))
    offset = -p.quad_vec[k] / (2.0 * rho * c[k]) if rho > 0.0 else 0.0
    if float(np.max(np.abs(p.quad_vec + 2.0 * rho * offset * c))) > 1e-9 * scale * max(
        1.0, abs(offset)
    ):
        return None
    return QcqpBiasStructure(float(rho), float(offset), w, p.quad_bound + rho * offset**2)


def _quad_value(p: BoxLinQuadQCQP, x: np.ndarray) -> float:
    return float(x @ p.quad_mat @ x + p.quad_vec @ x)


def _report(p: BoxLinQuadQCQP, x: np.ndarray, status: SolveStatus, iters: int) -> SolveReport:
    x = np.asarray(x, dtype=float)
    sc_l = max(1.0, abs(p.lin_rhs))
    sc_q = max(1.0, abs(p.quad_bound))
    kkt = max(
        max(p.lin_rhs - float(p.lin_coeffs @ x), 0.0) / sc_l,
        max(_quad_value(p, x) - p.quad_bound, 0.0) / sc_q,
        float(np.max(np.maximum(p.lower - x, 0.0), initial=0.0)),
        float(np.max(np.maximum(x - p.upper, 0.0), initial=0.0)),
    )
    return SolveReport(status, float(x @ x), x, kkt, iters)


def _solve_cutting_planes(p: BoxLinQuadQCQP, tol: float, max_cuts: int = 200) -> SolveReport:
    n = p.dim
    eye = np.eye(n)
    a_rows = [-p.lin_coeffs[None, :], eye, -eye]
    b_vals = [np.array([-p.lin_rhs]), p.upper, -p.lower]
    sc_q = max(1.0, abs(p.quad_bound))
    x = None
    for it in range(max_cuts):
        master = DenseQP(
            dim=n,
            quad=eye,
            lin=np.zeros(n),
            ineq_A=np.vstack(a_rows),
            ineq_b=np.concatenate(b_vals),
        )
        rep = solve_dense_qp(master, tol=min(tol, 1e-10))
        if rep.status == SolveStatus.INFEASIBLE:
            return _report(p, np.clip(np.zeros(n), p.lower, p.upper), SolveStatus.INFEASIBLE, it)
        x = rep.x
        viol = _quad_value(p, x) - p.quad_bound
        if viol <= 1e-9 * sc_q:
            return _report(p, x, SolveStatus.OPTIMAL, it + 1)
        grad = 2.0 * p.quad_mat @ x + p.quad_vec
        a_rows.append(grad[None, :])
        b_vals.append(np.array([p.quad_bound + float(x @ p.quad_mat @ x)]))
    return _report(p, x, SolveStatus.MAX_ITER, max_cuts)


def solve_qcqp(p: BoxLinQuadQCQP, tol: float = 1e-12, max_iter: int = 200) -> SolveReport:
    structure = p.structure if p.structure is not None else _detect_structure(p)
    if structure is not None and np.all(p.lin_coeffs >= 0.0):
        b, code, _, _, iters = kernels.qcqp_bisect(
            p.lin_coeffs,
            p.lin_rhs,
            structure.rho,
            structure.offset,
            structure.diag_weights,
            structure.budget,
            p.lower,
            p.upper,
            tol,
            max_iter,
        )
        if code != kernels.MAX_ITER:
            return _report(p, b, _STATUS[code], iters)
        # Bisection failed to bracket/converge: fall through to the master loop.
    return _solve_cutting_planes(p, tol)
