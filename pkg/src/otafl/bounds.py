"""Closed-form bounds on the aggregation error's first and second moments,
the gradient-norm proxy V_t, and the combined constraint right-hand side R_t."""

from dataclasses import dataclass, field

import numpy as np


@dataclass
class ConvergenceBudget:
    """(alpha, delta, beta) caps on the error statistics relative to the
    gradient norm; alpha in [0,1), delta >= 0, beta >= 0."""

    alpha: float
    delta: float
    beta: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.alpha < 1.0:
            raise ValueError("alpha must lie in [0, 1)")
        if self.delta < 0.0 or self.beta < 0.0:
            raise ValueError("delta and beta must be nonnegative")


@dataclass
class RoundContext:
    """Everything the per-round optimizer needs.

    ``channels`` is the CSI the optimizer works with (true channels for the
    perfect-CSI scenario, estimates otherwise); ``eps`` is the normalized
    estimation-error variance it should account for (0 = trust the CSI).
    """

    v: np.ndarray  # per-device gradient scale ||g_m||/sqrt(D)
    k_m: np.ndarray
    dim_d: int
    channels: np.ndarray  # (M, N) complex
    variances: np.ndarray  # per-component channel variance sigma_{h_m}^2
    eps: float
    noise_power: float  # sigma_n^2 [W]
    p0: float  # per-device average power cap [W]
    budget: ConvergenceBudget
    k_total: float = field(init=False)
    v_t: float = field(init=False)

    def __post_init__(self):
        self.v = np.asarray(self.v, dtype=float)
        self.k_m = np.asarray(self.k_m, dtype=float)
        self.channels = np.asarray(self.channels, dtype=complex)
        self.variances = np.asarray(self.variances, dtype=float)
        m = self.v.shape[0]
        if self.k_m.shape[0] != m or self.channels.shape[0] != m or self.variances.shape[0] != m:
            raise ValueError("per-device array length mismatch")
        if not 0.0 <= self.eps < 1.0:
            raise ValueError("eps must lie in [0, 1)")
        self.k_total = float(np.sum(self.k_m))
        self.v_t = float(np.sqrt(self.dim_d) / self.k_total * np.sum(self.k_m * self.v))

    @property
    def num_devices(self) -> int:
        return self.v.shape[0]

    @property
    def num_antennas(self) -> int:
        return self.channels.shape[1]

    def mse_budget(self) -> float:
        return self.budget.delta * self.v_t**2 + self.budget.beta


def _bias_terms(ctx: RoundContext, f, a) -> np.ndarray:
    gains = ctx.channels @ np.conj(f)  # f^H h_m
    return np.abs(ctx.k_m * ctx.v - np.real(gains * a))


def bias_bound(ctx: RoundContext, f, a) -> float:
    """Upper bound on ||E[e_t]||: (sqrt(D)/K) sum_m |K_m v_m - Re[f^H h_m a_m]|."""
    return float(np.sqrt(ctx.dim_d) / ctx.k_total * np.sum(_bias_terms(ctx, f, a)))


def mse_bound(ctx: RoundContext, f, a) -> float:
    """Upper bound on E||e_t||^2: squared bias sum plus the combined-noise term
    plus (for eps > 0) the CSI-error term (eps D ||f||^2 / 2K^2) sum sigma^2 |a|^2."""
    d = ctx.dim_d
    k2 = ctx.k_total**2
    f = np.asarray(f, dtype=complex)
    a = np.asarray(a, dtype=complex)
    f_norm2 = float(np.real(f.conj() @ f))
    total = d / k2 * float(np.sum(_bias_terms(ctx, f, a))) ** 2
    total += d * ctx.noise_power * f_norm2 / (2.0 * k2)
    if ctx.eps > 0.0:
        total += (
            ctx.eps
            * d
            * f_norm2
            / (2.0 * k2)
            * float(np.sum(ctx.variances * np.abs(a) ** 2))
        )
    return total


BRANCH_ALPHA = "alpha"
BRANCH_MSE = "mse"
BRANCH_BOTH = "both"


@dataclass
class EffectiveRhs:
    value: float
    branch: str
    feasible: bool


def effective_rhs(ctx: RoundContext, f) -> EffectiveRhs:
    """R_t = min(alpha V_t, sqrt(delta V_t^2 + beta - D sigma_n^2 ||f||^2 / 2K^2)).

    Reports which branch is active; infeasible when the noise term alone
    exceeds the MSE budget (negative radicand).
    """
    f = np.asarray(f, dtype=complex)
    noise_term = (
        ctx.dim_d * ctx.noise_power * float(np.real(f.conj() @ f)) / (2.0 * ctx.k_total**2)
    )
    radicand = ctx.mse_budget() - noise_term
    alpha_branch = ctx.budget.alpha * ctx.v_t
    if radicand < 0.0:
        return EffectiveRhs(value=-np.inf, branch=BRANCH_MSE, feasible=False)
    mse_branch = float(np.sqrt(radicand))
    if abs(alpha_branch - mse_branch) <= 1e-15 * max(1.0, alpha_branch):
        return EffectiveRhs(alpha_branch, BRANCH_BOTH, True)
    if alpha_branch < mse_branch:
        return EffectiveRhs(alpha_branch, BRANCH_ALPHA, True)
    return EffectiveRhs(mse_branch, BRANCH_MSE, True)
