"""Analog uplink simulation: gradient normalization, simultaneous transmission
with receive combining, and the realized aggregation-error vector."""

from dataclasses import dataclass

import numpy as np

from otafl.channel import ChannelSet


@dataclass
class UplinkFrame:
    """Local gradients for one round plus their normalization scalars.

    v_m = ||g_m|| / sqrt(D) is the per-entry RMS each device announces over the
    error-free digital side channel.
    """

    gradients: np.ndarray  # (M, D)
    k_m: np.ndarray  # samples per device

    def __post_init__(self):
        self.gradients = np.atleast_2d(np.asarray(self.gradients, dtype=float))
        self.k_m = np.asarray(self.k_m, dtype=float)
        if self.k_m.shape[0] != self.gradients.shape[0]:
            raise ValueError("k_m length mismatch")
        d = self.gradients.shape[1]
        self.v = np.linalg.norm(self.gradients, axis=1) / np.sqrt(d)
        self.k_total = float(np.sum(self.k_m))

    @property
    def dim(self) -> int:
        return self.gradients.shape[1]

    def global_gradient(self) -> np.ndarray:
        return (self.k_m @ self.gradients) / self.k_total


@dataclass
class BeamformingSolution:
    f: np.ndarray  # (N,) complex receive combiner
    a: np.ndarray  # (M,) complex transmit weights

    def __post_init__(self):
        self.f = np.asarray(self.f, dtype=complex)
        self.a = np.asarray(self.a, dtype=complex)

    @property
    def sum_power(self) -> float:
        return float(np.sum(np.abs(self.a) ** 2))


def _rng(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(key)))


def _check_silent_devices(frame: UplinkFrame, sol: BeamformingSolution):
    active = np.abs(sol.a) > 0.0
    if np.any(active & (frame.v == 0.0)):
        raise ValueError("device with zero gradient norm must have a_m = 0")
    return active


def transmit_receive(
    frame: UplinkFrame,
    sol: BeamformingSolution,
    ch: ChannelSet,
    noise_seed: int,
    noise_power: float,
) -> np.ndarray:
    """One uplink frame over the TRUE channels; returns s_t = Re(r_hat)/K."""
    active = _check_silent_devices(frame, sol)
    d = frame.dim
    f = sol.f
    coef = np.zeros(frame.v.shape[0])
    if np.any(active):
        gains = ch.true_channels[active] @ f.conj()  # f^H h_m
        coef[active] = np.real(gains * sol.a[active]) / frame.v[active]
    signal = coef @ frame.gradients
    if noise_power > 0.0:
        n_mat = _rng(noise_seed, 3).standard_normal((d, f.shape[0], 2))
        n_cplx = (n_mat[..., 0] + 1j * n_mat[..., 1]) * np.sqrt(noise_power / 2.0)
        combined_noise = np.real(n_cplx @ f.conj())
    else:
        combined_noise = np.zeros(d)
    return (signal + combined_noise) / frame.k_total


def realized_error(
    frame: UplinkFrame,
    sol: BeamformingSolution,
    ch: ChannelSet,
    s_t: np.ndarray,
) -> np.ndarray:
    """e_t = s_t - grad F(w_t) with grad F = sum_m K_m g_m / K."""
    return np.asarray(s_t, dtype=float) - frame.global_gradient()


def error_samples(
    frame: UplinkFrame,
    sol: BeamformingSolution,
    channels_seen: np.ndarray,
    variances: np.ndarray,
    eps: float,
    noise_power: float,
    draws: int,
    seed: int,
) -> np.ndarray:
    """Monte-Carlo error draws e_t, shape (draws, D).

    ``channels_seen`` is what the optimizer used (estimates when eps > 0); each
    draw takes the true channel as channels_seen minus a fresh estimation-error
    vector with per-component variance eps*sigma_{h_m}^2. Both the combined
    noise Re[f^H n_d] and the per-device error projection Re[f^H h~_m a_m] are
    sampled through their exact scalar distributions (zero-mean Gaussians with
    variances sigma_n^2 ||f||^2 / 2 and eps sigma_{h_m}^2 |a_m|^2 ||f||^2 / 2),
    which circular symmetry makes identical in law to drawing the vectors.
    """
    active = _check_silent_devices(frame, sol)
    rng = _rng(seed, 4)
    d = frame.dim
    m = frame.v.shape[0]
    f = sol.f
    f_norm2 = float(np.real(f.conj() @ f))

    coef = np.zeros(m)
    if np.any(active):
        gains = np.asarray(channels_seen)[active] @ f.conj()
        coef[active] = np.real(gains * sol.a[active])
    base = np.where(active, coef, 0.0)

    if eps > 0.0:
        sd = np.zeros(m)
        sd[active] = np.sqrt(
            eps * variances[active] * np.abs(sol.a[active]) ** 2 * f_norm2 / 2.0
        )
        proj = base[None, :] - rng.standard_normal((draws, m)) * sd[None, :]
    else:
        proj = np.broadcast_to(base, (draws, m)).copy()

    dev_coef = np.zeros((draws, m))
    nz = frame.v > 0.0
    dev_coef[:, nz] = proj[:, nz] / frame.v[nz] - frame.k_m[nz]
    # Silent devices with data still shift the mean by -K_m g_m (g_m = 0 there
    # only if the device truly had nothing to send).
    dev_coef[:, ~nz] = -frame.k_m[~nz]

    noise_sd = np.sqrt(noise_power * f_norm2 / 2.0)
    noise = rng.standard_normal((draws, d)) * noise_sd
    return (dev_coef @ frame.gradients + noise) / frame.k_total
