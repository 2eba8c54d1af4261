"""Closed-form per-mode statistics for the three joint receivers.

Each receiver mixes the channel return with the retained idler and
measures either photon counts (parametric amplifier, on both output
ports) or a balanced photocurrent difference (phase conjugator and the
2x2 hybrid). The symbols are phases theta in {0, pi} on the signal mode.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError, UnsupportedConfigurationError

RETURN_PORT = "return"
IDLER_PORT = "idler"
_PORTS = (RETURN_PORT, IDLER_PORT)

_Z2 = np.array([[1.0, 0.0], [0.0, -1.0]])
_X2 = np.array([[0.0, 1.0], [1.0, 0.0]])
_I2 = np.eye(2)


@dataclass(frozen=True)
class ChannelParams:
    """One operating point of the lossy thermal channel and the source.

    n_s: mean signal photons per mode
    n_b: mean thermal background photons
    eta: channel transmittivity, in (0, 1]
    gain: amplifier gain, >= 1 (counting receivers only)
    modes: number of signal-idler mode pairs
    """

    n_s: float = 0.01
    n_b: float = 1.0
    eta: float = 0.01
    gain: float = 1.1
    modes: int = 1

    def __post_init__(self) -> None:
        if not (self.n_s >= 0.0):
            raise InvalidParameterError(f"n_s must be >= 0, got n_s={self.n_s}")
        if not (self.n_b >= 0.0):
            raise InvalidParameterError(f"n_b must be >= 0, got n_b={self.n_b}")
        if not (0.0 < self.eta <= 1.0):
            raise InvalidParameterError(f"eta must be in (0, 1], got eta={self.eta}")
        if not (self.gain >= 1.0):
            raise InvalidParameterError(f"gain must be >= 1, got gain={self.gain}")
        if not isinstance(self.modes, int) or self.modes < 1:
            raise InvalidParameterError(
                f"modes must be a positive integer, got modes={self.modes}"
            )

    @property
    def n_r(self) -> float:
        """Mean photons in the return mode."""
        return self.eta * self.n_s + self.n_b

    @property
    def n_i(self) -> float:
        """Mean photons in the idler mode (kept lossless)."""
        return self.n_s


DEFAULT_PARAMS = ChannelParams()


@dataclass(frozen=True)
class OhConfig:
    """2x2 hybrid settings: phase shifts and power-splitting ratio."""

    phi1: float = 0.0
    phi2: float = math.pi
    kappa: float = 0.5


BALANCED_BPSK = OhConfig()


@dataclass(frozen=True)
class ModeStats:
    """Per-mode mean and standard deviation for one symbol phase."""

    mean: float
    std: float
    theta: float


def _require_bpsk_theta(theta: float) -> None:
    if theta != 0.0 and theta != math.pi:
        raise InvalidParameterError(
            f"theta must be 0 or pi for BPSK statistics, got theta={theta}"
        )


def _cross_amplitude(p: ChannelParams) -> float:
    # signal-idler phase-sensitive cross correlation seen through the channel
    return math.sqrt(p.eta * p.n_s * (p.n_s + 1.0))


def tmsv_covariance(n_s: float) -> np.ndarray:
    """Quadrature covariance of the two-mode squeezed vacuum source."""
    if not (n_s >= 0.0):
        raise InvalidParameterError(f"n_s must be >= 0, got n_s={n_s}")
    c = 2.0 * math.sqrt(n_s * (n_s + 1.0))
    v = np.zeros((4, 4))
    v[:2, :2] = (2.0 * n_s + 1.0) * _I2
    v[2:, 2:] = (2.0 * n_s + 1.0) * _I2
    v[:2, 2:] = c * _Z2
    v[2:, :2] = c * _Z2
    return v


def return_idler_covariance(p: ChannelParams, theta: float) -> np.ndarray:
    """Joint covariance of the channel return and the retained idler."""
    c_eta = 2.0 * _cross_amplitude(p)
    block = c_eta * (math.cos(theta) * _Z2 + math.sin(theta) * _X2)
    v = np.zeros((4, 4))
    v[:2, :2] = (2.0 * p.n_r + 1.0) * _I2
    v[2:, 2:] = (2.0 * p.n_i + 1.0) * _I2
    v[:2, 2:] = block
    v[2:, :2] = block.T
    return v


def _opa_mean(p: ChannelParams, port: str, theta: float) -> float:
    # diagnostic path, any theta
    g = p.gain
    cross = 2.0 * math.cos(theta) * math.sqrt(g * (g - 1.0)) * _cross_amplitude(p)
    if port == RETURN_PORT:
        return g * p.n_r + (g - 1.0) * (1.0 + p.n_s) + cross
    if port == IDLER_PORT:
        return g * p.n_s + (g - 1.0) * (1.0 + p.n_r) + cross
    raise InvalidParameterError(f"port must be one of {_PORTS}, got port={port!r}")


def opa_mode_stats(p: ChannelParams, port: str, theta: float) -> ModeStats:
    """Per-mode photocount statistics at one amplifier output port.

    The count at either port is thermal, so std**2 = mean * (mean + 1).
    """
    _require_bpsk_theta(theta)
    mean = _opa_mean(p, port, theta)
    return ModeStats(mean=mean, std=math.sqrt(mean * (mean + 1.0)), theta=theta)


def _opc_variance(p: ChannelParams, theta: float) -> float:
    # diagnostic path, any theta; the conjugator runs at fixed internal gain
    s = p.eta * p.n_s + p.n_b + 1.0
    x = p.eta * p.n_s * (p.n_s + 1.0)
    return (
        p.n_s * s + (p.n_s + 1.0) * s
        - 2.0 * x * math.cos(2.0 * theta)
        - 4.0 * x * math.cos(theta) ** 2
    )


def opc_mode_stats(p: ChannelParams, theta: float) -> ModeStats:
    """Balanced photocurrent statistics of the phase-conjugation receiver.

    ChannelParams.gain is ignored here; the conjugator's internal gain is
    already folded into the closed forms.
    """
    _require_bpsk_theta(theta)
    mean = 2.0 * math.cos(theta) * _cross_amplitude(p)
    var = _opc_variance(p, theta)
    if var < 0.0:
        raise InvalidParameterError(
            f"photocurrent variance is negative ({var}) at n_s={p.n_s}, "
            f"n_b={p.n_b}, eta={p.eta}; outside the model's validity region"
        )
    return ModeStats(mean=mean, std=math.sqrt(var), theta=theta)


def oh_mean(p: ChannelParams, cfg: OhConfig, theta: float) -> float:
    """Hybrid photocurrent mean for arbitrary phase settings, kappa = 0.5."""
    if cfg.kappa != 0.5:
        raise UnsupportedConfigurationError(
            f"only kappa = 0.5 is implemented, got kappa={cfg.kappa}"
        )
    rot = cmath.exp(1j * theta) * (cmath.exp(1j * cfg.phi1) - cmath.exp(-1j * cfg.phi2))
    return _cross_amplitude(p) * rot.real


def oh_mode_stats(p: ChannelParams, cfg: OhConfig, theta: float) -> ModeStats:
    """Hybrid photocurrent statistics for the balanced BPSK configuration.

    The variance is implemented only for (phi1, phi2, kappa) = (0, pi, 0.5);
    other settings raise UnsupportedConfigurationError.
    """
    _require_bpsk_theta(theta)
    mean = oh_mean(p, cfg, theta)
    if not (cfg.phi1 == 0.0 and cfg.phi2 == math.pi and cfg.kappa == 0.5):
        raise UnsupportedConfigurationError(
            f"variance implemented only for (phi1, phi2, kappa) = (0, pi, 0.5), "
            f"got ({cfg.phi1}, {cfg.phi2}, {cfg.kappa})"
        )
    x = p.eta * p.n_s * (p.n_s + 1.0)
    var = (
        2.0 * p.n_r * p.n_i + p.n_r + p.n_i
        + 2.0 * x * (1.0 - math.cos(2.0 * theta))
        - 2.0 * x
    )
    if var < 0.0:
        raise InvalidParameterError(
            f"photocurrent variance is negative ({var}) at n_s={p.n_s}, "
            f"n_b={p.n_b}, eta={p.eta}"
        )
    return ModeStats(mean=mean, std=math.sqrt(var), theta=theta)
