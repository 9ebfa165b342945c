"""Uplink channel generation: COST-Hata path loss, complex-Gaussian fading,
per-round estimation error, and the channel dump file format."""

import math
from dataclasses import dataclass, field

import numpy as np


def path_loss_db(distance_km: float) -> float:
    """COST Hata urban macro path loss, PL[dB] = 139.1 + 35.22*log10(d_km)."""
    if distance_km <= 0.0:
        raise ValueError("distance must be positive")
    return 139.1 + 35.22 * math.log10(distance_km)


def dbm_to_watts(p_dbm: float) -> float:
    return 10.0 ** ((p_dbm - 30.0) / 10.0)


def watts_to_dbm(p_w: float) -> float:
    if p_w <= 0.0:
        return -math.inf
    return 10.0 * math.log10(p_w) + 30.0


@dataclass
class ChannelConfig:
    num_devices: int
    num_antennas: int
    distance_range_m: tuple = (10.0, 100.0)
    noise_power_dbm: float = -74.0
    csi_error: float = 0.0
    seed: int = 0
    time_varying: bool = False

    def __post_init__(self):
        if self.num_devices < 1 or self.num_antennas < 1:
            raise ValueError("need at least one device and one antenna")
        if not 0.0 <= self.csi_error < 1.0:
            raise ValueError("csi_error must lie in [0, 1)")
        lo, hi = self.distance_range_m
        if not 0.0 < lo <= hi:
            raise ValueError("invalid distance range")

    @property
    def noise_power_w(self) -> float:
        return dbm_to_watts(self.noise_power_dbm)


@dataclass
class ChannelSet:
    true_channels: np.ndarray  # (M, N) complex
    estimates: np.ndarray  # (M, N) complex
    variances: np.ndarray  # (M,) per-component channel variance

    def __post_init__(self):
        self.true_channels = np.asarray(self.true_channels, dtype=complex)
        self.estimates = np.asarray(self.estimates, dtype=complex)
        self.variances = np.asarray(self.variances, dtype=float)
        if self.true_channels.shape != self.estimates.shape:
            raise ValueError("true/estimate shape mismatch")
        if self.variances.shape[0] != self.true_channels.shape[0]:
            raise ValueError("variance length mismatch")


def _rng(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(key)))


def _complex_gaussian(rng, shape, per_component_variance):
    sd = np.sqrt(np.asarray(per_component_variance, dtype=float) / 2.0)
    re = rng.standard_normal(shape)
    im = rng.standard_normal(shape)
    return (re + 1j * im) * sd


def device_distances_m(cfg: ChannelConfig) -> np.ndarray:
    """Distances are drawn once per realization seed and held across rounds."""
    lo, hi = cfg.distance_range_m
    return _rng(cfg.seed, 0).uniform(lo, hi, cfg.num_devices)


def channel_variances(cfg: ChannelConfig) -> np.ndarray:
    """Per-component variance sigma_{h_m}^2 = 1/PL in linear power units."""
    d_km = device_distances_m(cfg) / 1000.0
    pl_db = np.array([path_loss_db(d) for d in d_km])
    return 10.0 ** (-pl_db / 10.0)


def generate_round(cfg: ChannelConfig, t: int) -> ChannelSet:
    """True channels, estimates, and variances for round ``t``.

    The fading is held fixed across rounds unless cfg.time_varying; the
    estimation error is redrawn independently every round. Deterministic
    given (cfg.seed, t).
    """
    m, n = cfg.num_devices, cfg.num_antennas
    var = channel_variances(cfg)
    h_rng = _rng(cfg.seed, 1, t) if cfg.time_varying else _rng(cfg.seed, 1)
    h = _complex_gaussian(h_rng, (m, n), var[:, None])
    if cfg.csi_error == 0.0:
        est = h.copy()
    else:
        err = _complex_gaussian(_rng(cfg.seed, 2, t), (m, n), cfg.csi_error * var[:, None])
        est = h + err
    return ChannelSet(true_channels=h, estimates=est, variances=var)


def dump_channels(ch: ChannelSet) -> str:
    """Round-trippable text dump: 'M N' header, M true-channel rows, M
    estimate rows (re/im interleaved), then the variance row."""
    m, n = ch.true_channels.shape
    lines = [f"{m} {n}"]
    for mat in (ch.true_channels, ch.estimates):
        for row in mat:
            parts = []
            for z in row:
                parts.append(repr(float(z.real)))
                parts.append(repr(float(z.imag)))
            lines.append(" ".join(parts))
    lines.append(" ".join(repr(float(v)) for v in ch.variances))
    return "\n".join(lines) + "\n"


def load_channels(text: str) -> ChannelSet:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    m, n = (int(tok) for tok in lines[0].split())
    if len(lines) != 2 * m + 2:
        raise ValueError("channel dump has wrong line count")

    def parse_block(rows):
        out = np.empty((m, n), dtype=complex)
        for i, ln in enumerate(rows):
            vals = [float(tok) for tok in ln.split()]
            if len(vals) != 2 * n:
                raise ValueError("channel dump row has wrong entry count")
            arr = np.asarray(vals).reshape(n, 2)
            out[i] = arr[:, 0] + 1j * arr[:, 1]
        return out

    true_ch = parse_block(lines[1 : 1 + m])
    est = parse_block(lines[1 + m : 1 + 2 * m])
    var = np.asarray([float(tok) for tok in lines[1 + 2 * m].split()])
    if var.shape[0] != m:
        raise ValueError("variance row has wrong entry count")
    return ChannelSet(true_channels=true_ch, estimates=est, variances=var)
