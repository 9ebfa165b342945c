"""Successive convex approximation for the single-group multicast QoS problem:

    minimize ||f||^2  subject to  |f^H h_m|^2 >= target_m,  m = 1..M.

Each iteration replaces |f^H h_m|^2 by its linearization at the current point
(2 Re{f^H h_m h_m^H z} - |z^H h_m|^2, a lower bound by convexity) and solves the
resulting linearly-constrained QP over (Re f, Im f). Every post-init iterate is
feasible for the original constraints, so the objective trace is non-increasing.
"""

from dataclasses import dataclass

import numpy as np

from otafl.solvers.denseqp import solve_dense_qp
from otafl.solvers.types import DenseQP, SolveStatus


@dataclass
class ScaResult:
    f: np.ndarray
    objective: float
    converged: bool
    status: SolveStatus
    objectives: list
    iterations: int


def default_multicast_init(channels, targets, seed, n_candidates=8):
    """Best of ``n_candidates`` seeded complex-Gaussian starts, each scaled up
    to satisfy the QoS constraints with equality at the worst device."""
    channels = np.asarray(channels)
    targets = np.asarray(targets, dtype=float)
    n = channels.shape[0]
    rng = np.random.default_rng(np.random.SeedSequence(entropy=int(seed), spawn_key=(9,)))
    pos = targets > 0.0
    best = None
    for _ in range(n_candidates):
        z = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2.0)
        if not np.any(pos):
            return z
        gains = np.abs(z.conj() @ channels[:, pos])
        if np.any(gains == 0.0):
            continue
        tau = float(np.max(np.sqrt(targets[pos]) / gains))
        cand = tau * z
        norm2 = float(np.real(cand.conj() @ cand))
        if best is None or norm2 < best[1]:
            best = (cand, norm2)
    if best is None:
        # Degenerate draw(s); deterministic fallback along the channel sum.
        z = channels.sum(axis=1)
        gains = np.abs(z.conj() @ channels[:, pos])
        tau = float(np.max(np.sqrt(targets[pos]) / np.maximum(gains, 1e-300)))
        return tau * z
    return best[0]


def sca_multicast_qos(channels, targets, init, max_iter=50, tol=1e-6, qp_tol=1e-11):
    """Run SCA from ``init``. channels is N x M (one column per device)."""
    channels = np.asarray(channels)
    targets = np.asarray(targets, dtype=float)
    n, m = channels.shape
    pos = np.flatnonzero(targets > 0.0)
    if pos.size == 0:
        zero = np.zeros(n, dtype=complex)
        return ScaResult(zero, 0.0, True, SolveStatus.OPTIMAL, [0.0], 0)

    # Conditioning: work with unit-scale channels and targets.
    s_h = float(np.max(np.linalg.norm(channels[:, pos], axis=0)))
    s_t = float(np.sqrt(np.max(targets[pos])))
    h_n = channels[:, pos] / s_h
    t_n = targets[pos] / (s_t * s_t)
    s_f = s_t / s_h  # f = s_f * f_normalized

    z = np.asarray(init, dtype=complex) / s_f
    # Nudge away from any exactly-orthogonal start (measure-zero for random inits).
    gains = np.abs(z.conj() @ h_n)
    for j in np.flatnonzero(gains == 0.0):
        z = z + h_n[:, j] * (1e-6 * (np.linalg.norm(z) + 1.0))

    objectives = []
    f_best = z
    status = SolveStatus.MAX_ITER
    iters = 0
    for k in range(max_iter):
        iters = k + 1
        rows = []
        rhs = []
        for j in range(pos.size):
            hj = h_n[:, j]
            cj = hj * (hj.conj() @ z)  # h (h^H z)
            rows.append(np.concatenate([cj.real, cj.imag]))
            rhs.append(0.5 * (t_n[j] + np.abs(z.conj() @ hj) ** 2))
        a_mat = -np.asarray(rows)
        b_vec = -np.asarray(rhs)
        qp = DenseQP(
            dim=2 * n,
            quad=np.eye(2 * n),
            lin=np.zeros(2 * n),
            ineq_A=a_mat,
            ineq_b=b_vec,
        )
        rep = solve_dense_qp(qp, tol=qp_tol)
        if rep.status == SolveStatus.INFEASIBLE:
            status = SolveStatus.INFEASIBLE
            break
        f_new = rep.x[:n] + 1j * rep.x[n:]
        obj_new = float(np.real(f_new.conj() @ f_new))
        if objectives and obj_new >= objectives[-1]:
            # At the numerical floor; keep the previous (feasible) iterate.
            status = SolveStatus.OPTIMAL
            break
        objectives.append(obj_new)
        f_best = f_new
        z = f_new
        if len(objectives) >= 2 and objectives[-2] - objectives[-1] <= tol * max(
            objectives[-2], 1e-300
        ):
            status = SolveStatus.OPTIMAL
            break

    f = f_best * s_f
    scale2 = s_f * s_f
    objs = [o * scale2 for o in objectives] if objectives else [float(np.real(f.conj() @ f))]
    return ScaResult(
        f=f,
        objective=float(np.real(f.conj() @ f)),
        converged=status == SolveStatus.OPTIMAL,
        status=status,
        objectives=objs,
        iterations=iters,
    )
