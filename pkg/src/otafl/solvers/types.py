"""Problem containers and the common solve report."""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np


class SolveStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    MAX_ITER = "max_iter"


@dataclass
class SolveReport:
    status: SolveStatus
    objective: float
    x: np.ndarray
    kkt_residual: float
    iterations: int


@dataclass
class BoxLinQP:
    """minimize sum(x_i^2) s.t. linear_coeffs.x >= rhs, lower <= x <= upper.

    Coefficients are sign-normalized to be nonnegative (the caller flips signs
    as needed when assembling the constraint).
    """

    dim: int
    linear_coeffs: np.ndarray
    rhs: float
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        self.linear_coeffs = np.asarray(self.linear_coeffs, dtype=float)
        self.lower = np.asarray(self.lower, dtype=float)
        self.upper = np.asarray(self.upper, dtype=float)
        if not (self.linear_coeffs.shape == self.lower.shape == self.upper.shape == (self.dim,)):
            raise ValueError("inconsistent dimensions")
        if np.any(self.linear_coeffs < 0.0):
            raise ValueError("linear_coeffs must be nonnegative")
        if np.any(self.lower > self.upper):
            raise ValueError("lower > upper")


@dataclass
class DenseQP:
    """minimize x^T quad x + lin^T x s.t. ineq_A x <= ineq_b (quad PSD)."""

    dim: int
    quad: np.ndarray
    lin: np.ndarray
    ineq_A: np.ndarray
    ineq_b: np.ndarray

    def __post_init__(self):
        self.quad = np.asarray(self.quad, dtype=float)
        self.lin = np.asarray(self.lin, dtype=float)
        self.ineq_A = np.atleast_2d(np.asarray(self.ineq_A, dtype=float))
        self.ineq_b = np.atleast_1d(np.asarray(self.ineq_b, dtype=float))
        if self.ineq_A.size == 0:
            self.ineq_A = self.ineq_A.reshape(0, self.dim)
        if self.quad.shape != (self.dim, self.dim) or self.lin.shape != (self.dim,):
            raise ValueError("inconsistent dimensions")
        if self.ineq_A.shape[1] != self.dim or self.ineq_A.shape[0] != self.ineq_b.shape[0]:
            raise ValueError("inconsistent constraint dimensions")
        sym_err = float(np.max(np.abs(self.quad - self.quad.T), initial=0.0))
        if sym_err > 1e-12 * max(1.0, float(np.max(np.abs(self.quad)))):
            raise ValueError("quad not symmetric")


@dataclass
class QcqpBiasStructure:
    """Structured form of the quadratic constraint:

        rho * (offset - coeffs.b)^2 + sum(diag_weights_i * b_i^2) <= budget

    where ``coeffs`` is the same vector as the linear constraint's.
    """

    rho: float
    offset: float
    diag_weights: np.ndarray
    budget: float


@dataclass
class BoxLinQuadQCQP:
    """minimize sum(x_i^2) s.t. lin_coeffs.x >= lin_rhs,
    x^T quad_mat x + quad_vec^T x <= quad_bound, lower <= x <= upper."""

    dim: int
    lin_coeffs: np.ndarray
    lin_rhs: float
    quad_mat: np.ndarray
    quad_vec: np.ndarray
    quad_bound: float
    lower: np.ndarray
    upper: np.ndarray
    structure: QcqpBiasStructure | None = field(default=None)

    def __post_init__(self):
        self.lin_coeffs = np.asarray(self.lin_coeffs, dtype=float)
        self.quad_mat = np.asarray(self.quad_mat, dtype=float)
        self.quad_vec = np.asarray(self.quad_vec, dtype=float)
        self.lower = np.asarray(self.lower, dtype=float)
        self.upper = np.asarray(self.upper, dtype=float)
        n = self.dim
        if self.quad_mat.shape != (n, n) or self.quad_vec.shape != (n,):
            raise ValueError("inconsistent quadratic dimensions")
        if not (self.lin_coeffs.shape == self.lower.shape == self.upper.shape == (n,)):
            raise ValueError("inconsistent dimensions")
        if np.any(self.lower > self.upper):
            raise ValueError("lower > upper")
        scale = max(1.0, float(np.max(np.abs(self.quad_mat))))
        if float(np.min(np.linalg.eigvalsh(0.5 * (self.quad_mat + self.quad_mat.T)))) < -1e-8 * scale:
            raise ValueError("quad_mat not positive semidefinite")

    @classmethod
    def from_bias_form(cls, coeffs, lin_rhs, rho, offset, diag_weights, budget, lower, upper):
        """Build the matrix form of
        rho*(offset - coeffs.b)^2 + sum(w_i b_i^2) <= budget, keeping the
        structured parameters attached for the fast KKT path."""
        coeffs = np.asarray(coeffs, dtype=float)
        diag_weights = np.asarray(diag_weights, dtype=float)
        quad_mat = rho * np.outer(coeffs, coeffs) + np.diag(diag_weights)
        quad_vec = -2.0 * rho * offset * coeffs
        quad_bound = budget - rho * offset * offset
        return cls(
            dim=coeffs.shape[0],
            lin_coeffs=coeffs,
            lin_rhs=lin_rhs,
            quad_mat=quad_mat,
            quad_vec=quad_vec,
            quad_bound=quad_bound,
            lower=np.asarray(lower, dtype=float),
            upper=np.asarray(upper, dtype=float),
            structure=QcqpBiasStructure(
                rho=float(rho),
                offset=float(offset),
                diag_weights=diag_weights,
                budget=float(budget),
            ),
        )
