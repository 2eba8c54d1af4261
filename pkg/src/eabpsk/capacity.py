"""Information-theoretic quantities for the BPSK receiver designs.

Capacity here is the mutual information of the induced binary channel,
maximized over the prior and the decision threshold, reported per channel
use of the whole M-mode block (not per mode). Reference capacities
(Holevo, homodyne, and the entanglement-assisted ultimate bound) are
closed forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .detection import (
    DetectionModel,
    NEGATIVE_BINOMIAL,
    OPA_IDLER,
    Priors,
    _conditional_errors,
    receiver_mode_stats,
    threshold_balance_root,
)
from .errors import InvalidParameterError
from .receivers import ChannelParams

_LIGHT_SPEED = 3.0e8  # m/s, value used throughout the reproduced results

_P0_MIN = 0.02
_P0_MAX = 0.98
_P0_SEED_POINTS = 33
_P0_TOL = 1e-7
_THRESHOLD_GRID_POINTS = 257
_THRESHOLD_ZOOM_ROUNDS = 2
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _entropy_bits(q: float) -> float:
    # binary entropy with the 0 log 0 = 0 convention
    if q <= 0.0 or q >= 1.0:
        return 0.0
    return -(q * math.log2(q) + (1.0 - q) * math.log2(1.0 - q))


def g_thermal(n: float) -> float:
    """Entropy in bits of a thermal state with mean photon number n."""
    if n < 0.0:
        raise InvalidParameterError(f"g_thermal requires n >= 0, got n={n}")
    if n == 0.0:
        return 0.0
    return (n + 1.0) * math.log2(n + 1.0) - n * math.log2(n)


def holevo_capacity(p: ChannelParams) -> float:
    """Unassisted classical capacity of the lossy thermal channel."""
    return g_thermal(p.n_r) - g_thermal(p.n_b)


def homodyne_capacity(p: ChannelParams) -> float:
    return 0.5 * math.log2(1.0 + 4.0 * p.eta * p.n_s / (2.0 * p.n_b + 1.0))


def ultimate_capacity(p: ChannelParams) -> float:
    """Entanglement-assisted capacity bound from the joint-state spectrum."""
    if p.n_s <= 0.0:
        raise InvalidParameterError(
            f"ultimate_capacity requires n_s > 0, got n_s={p.n_s}"
        )
    a = 2.0 * p.n_s + 1.0
    b = 2.0 * p.n_r + 1.0
    c = 2.0 * math.sqrt(p.eta * p.n_s * (p.n_s + 1.0))
    disc = (a + b) ** 2 - 4.0 * c * c
    if disc < 0.0:
        raise InvalidParameterError(
            f"joint covariance is unphysical: (a+b)^2 < 4C^2 at n_s={p.n_s}, "
            f"n_b={p.n_b}, eta={p.eta}"
        )
    root = math.sqrt(disc)
    nu_plus = 0.5 * (root + (b - a))
    nu_minus = 0.5 * (root - (b - a))
    # cancellation can leave the symplectic terms a few ulp below their limits
    lo = max(0.0, (nu_plus - 1.0) / 2.0)
    hi = max(0.0, (nu_minus - 1.0) / 2.0)
    return max(0.0, g_thermal(p.n_s) + g_thermal(p.n_r) - g_thermal(lo) - g_thermal(hi))


@dataclass(frozen=True)
class BinaryChannel:
    """Prior plus the two conditional error probabilities."""

    p0: float
    e0: float
    e1: float

    def __post_init__(self) -> None:
        for name in ("p0", "e0", "e1"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise InvalidParameterError(f"{name} must lie in [0, 1], got {name}={v}")


def binary_mutual_information(ch: BinaryChannel) -> float:
    """I(X;Y) in bits: output entropy minus the conditional entropies."""
    p1 = 1.0 - ch.p0
    py0 = ch.p0 * (1.0 - ch.e0) + p1 * ch.e1
    mi = _entropy_bits(py0) - ch.p0 * _entropy_bits(ch.e0) - p1 * _entropy_bits(ch.e1)
    return max(0.0, mi)


@dataclass(frozen=True)
class CapacityResult:
    capacity: float
    best_p0: float
    best_threshold: float
    model: DetectionModel


def _mi_at(p0: float, threshold: float, model: DetectionModel, p: ChannelParams,
           stats0, stats_pi) -> float:
    e0, e1 = _conditional_errors(threshold, model, p, stats0, stats_pi)
    return binary_mutual_information(BinaryChannel(p0=p0, e0=e0, e1=e1))


def _best_threshold_mi(p0: float, model: DetectionModel, p: ChannelParams,
                       stats0, stats_pi) -> tuple[float, float]:
    """Maximize MI over the threshold at a fixed prior.

    Seeded at the balance root. Counting model: exhaustive scan of the
    integers in a window of 8 total-count sigmas around the seed (the MI
    optimum need not be the PE optimum, but it stays in the overlap
    region). Gaussian: a 257-point grid over the bracket, refined twice
    around the best point.
    """
    priors = Priors.from_p0(p0)
    seed = threshold_balance_root(priors, model, p).threshold
    rm = math.sqrt(p.modes)

    if model.kind == NEGATIVE_BINOMIAL:
        spread = rm * max(stats0.std, stats_pi.std)
        k = math.ceil(8.0 * spread) + 8
        ilo = max(0, math.floor(seed) - k)
        ihi = math.floor(seed) + k
        best_t, best_mi = float(ilo), -1.0
        for t in range(ilo, ihi + 1):
            mi = _mi_at(p0, float(t), model, p, stats0, stats_pi)
            if mi > best_mi:
                best_t, best_mi = float(t), mi
        return best_mi, best_t

    lo = p.modes * stats_pi.mean - 10.0 * rm * stats_pi.std
    hi = p.modes * stats0.mean + 10.0 * rm * stats0.std
    best_t, best_mi = seed, _mi_at(p0, seed, model, p, stats0, stats_pi)
    for _ in range(_THRESHOLD_ZOOM_ROUNDS + 1):
        step = (hi - lo) / (_THRESHOLD_GRID_POINTS - 1)
        for i in range(_THRESHOLD_GRID_POINTS):
            t = lo + i * step
            mi = _mi_at(p0, t, model, p, stats0, stats_pi)
            if mi > best_mi:
                best_t, best_mi = t, mi
        lo, hi = best_t - step, best_t + step
    return best_mi, best_t


def ea_capacity(model: DetectionModel, p: ChannelParams) -> CapacityResult:
    """Maximum mutual information over prior and threshold.

    Outer search: 33-point seed grid on [0.02, 0.98] followed by a golden
    section refinement; inner search per _best_threshold_mi. Deterministic
    for fixed parameters.
    """
    stats0, stats_pi = receiver_mode_stats(model, p)
    if stats0.mean == stats_pi.mean and stats0.std == stats_pi.std:
        # output independent of input symbol
        return CapacityResult(capacity=0.0, best_p0=0.5, best_threshold=0.0, model=model)

    best = {"mi": -1.0, "p0": 0.5, "t": 0.0}

    def f(p0: float) -> float:
        mi, t = _best_threshold_mi(p0, model, p, stats0, stats_pi)
        if mi > best["mi"]:
            best.update(mi=mi, p0=p0, t=t)
        return mi

    grid = [
        _P0_MIN + i * (_P0_MAX - _P0_MIN) / (_P0_SEED_POINTS - 1)
        for i in range(_P0_SEED_POINTS)
    ]
    values = [f(x) for x in grid]
    i_star = max(range(len(grid)), key=lambda i: values[i])
    a = grid[max(i_star - 1, 0)]
    b = grid[min(i_star + 1, len(grid) - 1)]

    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > _P0_TOL:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)

    return CapacityResult(
        capacity=min(1.0, best["mi"]),
        best_p0=best["p0"],
        best_threshold=best["t"],
        model=model,
    )


def information_rate(pe: float, modes: int) -> float:
    """Per-mode rate of the induced symmetric binary channel."""
    if not (0.0 <= pe <= 1.0):
        raise InvalidParameterError(f"pe must lie in [0, 1], got pe={pe}")
    if not isinstance(modes, int) or modes < 1:
        raise InvalidParameterError(f"modes must be a positive integer, got modes={modes}")
    return (1.0 - _entropy_bits(pe)) / modes


def mode_count(center_wavelength: float, bandwidth_wavelength: float,
               measurement_interval: float) -> tuple[float, float]:
    """Phase-matching bandwidth in Hz and the mode count it supports."""
    if not (center_wavelength > 0.0):
        raise InvalidParameterError(
            f"center_wavelength must be > 0, got center_wavelength={center_wavelength}"
        )
    if not (bandwidth_wavelength > 0.0):
        raise InvalidParameterError(
            f"bandwidth_wavelength must be > 0, got bandwidth_wavelength={bandwidth_wavelength}"
        )
    if not (measurement_interval > 0.0):
        raise InvalidParameterError(
            f"measurement_interval must be > 0, got measurement_interval={measurement_interval}"
        )
    bandwidth_hz = _LIGHT_SPEED * bandwidth_wavelength / center_wavelength**2
    return bandwidth_hz, bandwidth_hz * measurement_interval


def gaussian_vs_nb_capacity_error(p: ChannelParams, ns_grid: list[float]) -> list[dict]:
    """Capacity of the Gaussian model minus the exact counting model,
    on the idler-port counting receiver, per signal mean."""
    if not ns_grid:
        raise InvalidParameterError("ns_grid must be nonempty")
    rows = []
    for ns in ns_grid:
        params = replace(p, n_s=ns)
        c_gauss = ea_capacity(DetectionModel("gaussian_approx", OPA_IDLER), params).capacity
        c_nb = ea_capacity(DetectionModel(NEGATIVE_BINOMIAL, OPA_IDLER), params).capacity
        rows.append({
            "ns": ns,
            "M": p.modes,
            "c_gauss": c_gauss,
            "c_nb": c_nb,
            "delta": c_gauss - c_nb,
        })
    return rows
