"""Shared test oracles: slow, direct-scan reimplementations that cross-check
the library's fast paths, plus generators for randomized cases."""

import numpy as np

from pidtune import PidGains, SimConfig, StepResponse, TransferFunction
from pidtune.lti import (
    close_unity_feedback,
    pid_transfer_function,
    simulate_step,
    tf_to_state_space,
)

BENCH3 = TransferFunction((1.0,), (1.0, 3.0, 3.0, 1.0))


def loop_response(gains: PidGains, plant: TransferFunction, cfg: SimConfig) -> StepResponse:
    loop = close_unity_feedback(pid_transfer_function(gains), plant)
    return simulate_step(tf_to_state_space(loop), cfg)


def brute_force_score(values, dt, t_max, band):
    """Objective by direct scan over the samples: first rise-level crossing
    with linear interpolation, max violation above the band for t > 0, max
    violation below the band for t > rise. Returns (total, rise, dev, rose)."""
    rise = None
    for k in range(len(values)):
        if values[k] >= band.rise_level:
            if k == 0:
                rise = 0.0
            else:
                v0 = float(values[k - 1])
                v1 = float(values[k])
                rise = (k - 1 + (band.rise_level - v0) / (v1 - v0)) * dt
            break
    rose = rise is not None
    rt = rise if rose else t_max
    over = 0.0
    for k in range(1, len(values)):
        over = max(over, float(values[k]) - band.upper)
    over = max(over, 0.0)
    under = 0.0
    if rose:
        for k in range(len(values)):
            if k * dt > rt:
                under = max(under, band.lower - float(values[k]))
        under = max(under, 0.0)
    deviation = max(over, under)
    return rt / t_max + deviation, rt, deviation, rose


def random_proper_tf(rng: np.random.Generator, max_degree: int = 5) -> TransferFunction:
    """Random proper transfer function with coefficients in [-10, 10] and a
    leading denominator coefficient bounded away from zero."""
    den_deg = int(rng.integers(1, max_degree + 1))
    num_deg = int(rng.integers(0, den_deg + 1))
    den = rng.uniform(-10.0, 10.0, den_deg + 1)
    lead = rng.uniform(0.1, 10.0) * (1 if rng.random() < 0.5 else -1)
    den[0] = lead
    num = rng.uniform(-10.0, 10.0, num_deg + 1)
    if num[0] == 0.0:
        num[0] = 1.0
    return TransferFunction(tuple(num), tuple(den))


def random_stable_cases(rng: np.random.Generator, count: int):
    """(gains, plant) pairs whose closed-loop step response stays clamped-free
    over the default horizon."""
    cfg = SimConfig()
    cases = []
    while len(cases) < count:
        n_poles = int(rng.integers(2, 5))
        poles = -rng.uniform(0.2, 4.0, n_poles)
        plant = TransferFunction((float(rng.uniform(0.3, 3.0)),), tuple(np.poly(poles)))
        kp, ki, kd = rng.uniform(0.0, 2.0, 3)
        gains = PidGains(float(kp), float(ki), float(kd))
        if not loop_response(gains, plant, cfg).diverged:
            cases.append((gains, plant))
    return cases
