"""Starting points for the search: classic Ziegler-Nichols gains from the
proportional stability boundary, and seeded uniform random gains."""

import math
from dataclasses import dataclass

import numpy as np

from .errors import NoUltimateGain
from .lti import PidGains, TransferFunction

K_SEARCH_MAX = 1e6
_K_SEARCH_MIN = 1e-12
_BISECT_RTOL = 1e-9


@dataclass(frozen=True)
class UltimatePoint:
    """Proportional gain and oscillation period at the stability boundary."""

    ku: float
    tu: float

    def __post_init__(self):
        if not (self.ku > 0 and self.tu > 0):
            raise ValueError(f"ku and tu must be positive, got {self.ku}, {self.tu}")


@dataclass(frozen=True)
class RandomStartConfig:
    """Seeded uniform box for random starting gains."""

    seed: int
    low: float = -10.0
    high: float = 10.0

    def __post_init__(self):
        if not self.low < self.high:
            raise ValueError(f"need low < high, got {self.low}, {self.high}")


def _char_poly(plant: TransferFunction, k: float) -> np.ndarray:
    """Characteristic polynomial den + k*num of the proportional loop."""
    den = np.asarray(plant.den, dtype=float)
    num = np.asarray(plant.num, dtype=float)
    width = max(len(den), len(num))
    out = np.zeros(width)
    out[width - len(den) :] += den
    out[width - len(num) :] += k * num
    return out


def _stability_margin(plant: TransferFunction, k: float) -> float:
    """Max real part of the proportional closed-loop roots; negative = stable."""
    roots = np.roots(_char_poly(plant, k))
    if roots.size == 0:
        return -math.inf
    return float(np.max(roots.real))


def ultimate_point(
    plant: TransferFunction, k_search_max: float = K_SEARCH_MAX
) -> UltimatePoint:
    """Locate the proportional-only stability boundary by bisection on the
    max real part of the closed-loop roots (companion-matrix eigenvalues).

    The bracket hunt doubles upward from the largest stable gain (halving
    below 1 first if the loop is already unstable there). Raises
    NoUltimateGain when the stability indicator never changes sign for
    k in (0, k_search_max], or when the boundary crossing is through a real
    root, which has no oscillation period.
    """
    if not plant.is_proper:
        raise ValueError("plant must be proper")
    k_lo = None
    k = 1.0
    while k >= _K_SEARCH_MIN:
        if _stability_margin(plant, k) < 0.0:
            k_lo = k
            break
        k /= 2.0
    if k_lo is None:
        raise NoUltimateGain(
            "proportional loop is unstable for every gain down to "
            f"{_K_SEARCH_MIN}; no stable-to-unstable transition exists"
        )
    k_hi = None
    k = k_lo * 2.0
    while k <= k_search_max:
        if _stability_margin(plant, k) >= 0.0:
            k_hi = k
            break
        k_lo = k
        k *= 2.0
    if k_hi is None:
        raise NoUltimateGain(
            f"stability indicator never changes sign for k in (0, {k_search_max:g}]"
        )
    while (k_hi - k_lo) > _BISECT_RTOL * k_hi:
        mid = 0.5 * (k_lo + k_hi)
        if _stability_margin(plant, mid) < 0.0:
            k_lo = mid
        else:
            k_hi = mid
    ku = k_hi
    roots = np.roots(_char_poly(plant, ku))
    boundary = roots[np.argmax(roots.real)]
    omega = float(abs(boundary.imag))
    if omega <= 1e-9:
        raise NoUltimateGain(
            f"boundary crossing at k={ku:g} is through a real root; "
            "no oscillation period exists"
        )
    return UltimatePoint(ku=ku, tu=2.0 * math.pi / omega)


def zn_pid_gains(up: UltimatePoint) -> PidGains:
    """Classic closed-loop Ziegler-Nichols PID row: kp = 0.6 ku, Ti = tu/2,
    Td = tu/8, i.e. ki = 1.2 ku/tu and kd = 0.075 ku tu."""
    return PidGains(
        kp=0.6 * up.ku,
        ki=1.2 * up.ku / up.tu,
        kd=0.075 * up.ku * up.tu,
    )


def draw_gains(rng: np.random.Generator, low: float, high: float) -> PidGains:
    """One (kp, ki, kd) triple of independent uniforms from an existing stream."""
    kp, ki, kd = rng.uniform(low, high, size=3)
    return PidGains(kp=float(kp), ki=float(ki), kd=float(kd))


def random_gains(cfg: RandomStartConfig) -> PidGains:
    """Three independent uniform draws in [low, high] from numpy's PCG64
    generator seeded with cfg.seed; identical seeds give identical gains on
    every platform."""
    return draw_gains(np.random.default_rng(cfg.seed), cfg.low, cfg.high)
