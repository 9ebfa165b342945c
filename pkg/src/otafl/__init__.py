"""Over-the-air federated learning uplink simulator with power-minimizing
joint transmit/receive beamforming, CSI-error-aware variants, baselines, and
Monte-Carlo validation of the aggregation-error bounds."""

__version__ = "0.1.0"
