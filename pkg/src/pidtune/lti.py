"""Linear time-invariant plumbing: transfer functions, PID loop closure,
state-space realization and fixed-step unit-step simulation."""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import ImproperLoop, ImproperSystem


def _as_coeffs(seq, name: str) -> tuple[float, ...]:
    coeffs = tuple(float(c) for c in seq)
    if not coeffs:
        raise ValueError(f"{name} must have at least one coefficient")
    if not all(math.isfinite(c) for c in coeffs):
        raise ValueError(f"{name} coefficients must be finite, got {coeffs}")
    return coeffs


def poly_degree(coeffs) -> int:
    """True degree of a highest-first coefficient sequence; -1 for the zero polynomial."""
    for i, c in enumerate(coeffs):
        if c != 0.0:
            return len(coeffs) - 1 - i
    return -1


def _poly_add(a, b) -> tuple[float, ...]:
    n = max(len(a), len(b))
    out = [0.0] * n
    for i, c in enumerate(a):
        out[n - len(a) + i] += c
    for i, c in enumerate(b):
        out[n - len(b) + i] += c
    return tuple(out)


@dataclass(frozen=True)
class TransferFunction:
    """Ratio of real polynomials in the Laplace variable, highest degree first.

    The denominator must be non-empty with a nonzero leading coefficient.
    Improper ratios (numerator degree above denominator degree) are
    representable: the ideal PID controller is one whenever kd != 0.
    Properness is enforced where it matters, at loop closure and at
    state-space realization.
    """

    num: tuple[float, ...]
    den: tuple[float, ...]

    def __init__(self, num, den):
        object.__setattr__(self, "num", _as_coeffs(num, "num"))
        object.__setattr__(self, "den", _as_coeffs(den, "den"))
        if self.den[0] == 0.0:
            raise ValueError("den leading coefficient must be nonzero")

    @property
    def num_degree(self) -> int:
        return poly_degree(self.num)

    @property
    def den_degree(self) -> int:
        return poly_degree(self.den)

    @property
    def relative_degree(self) -> int:
        return self.den_degree - self.num_degree

    @property
    def is_proper(self) -> bool:
        return self.num_degree <= self.den_degree

    def to_text(self) -> str:
        """Serialize as ``num: c_n ... c_0 / den: d_m ... d_0``."""
        num = " ".join(f"{c:.17g}" for c in self.num)
        den = " ".join(f"{c:.17g}" for c in self.den)
        return f"num: {num} / den: {den}"


@dataclass(frozen=True)
class PidGains:
    """The decision vector: proportional, integral and derivative gains."""

    kp: float
    ki: float
    kd: float

    def __post_init__(self):
        for name in ("kp", "ki", "kd"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v}")


@dataclass(frozen=True, eq=False)
class StateSpace:
    """Single-input single-output realization dx/dt = a x + b u, z = c x + d u."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: float

    def __post_init__(self):
        n = self.a.shape[0]
        if self.a.shape != (n, n) or self.b.shape != (n, 1) or self.c.shape != (1, n):
            raise ValueError(
                f"inconsistent dimensions a{self.a.shape} b{self.b.shape} c{self.c.shape}"
            )
        if not (
            np.all(np.isfinite(self.a))
            and np.all(np.isfinite(self.b))
            and np.all(np.isfinite(self.c))
            and math.isfinite(self.d)
        ):
            raise ValueError("state-space entries must be finite")

    @property
    def order(self) -> int:
        return self.a.shape[0]


@dataclass(frozen=True)
class SimConfig:
    """Fixed-grid simulation settings.

    t_max is the evaluation horizon in seconds (default 100), dt the
    integration step, blow_up_limit the magnitude at which a response is
    declared divergent and clamped.
    """

    t_max: float = 100.0
    dt: float = 0.01
    blow_up_limit: float = 1e6

    def __post_init__(self):
        if not (self.t_max > 0 and self.dt > 0 and self.dt <= self.t_max):
            raise ValueError(f"need 0 < dt <= t_max, got dt={self.dt} t_max={self.t_max}")
        if not self.blow_up_limit > 2:
            raise ValueError(f"blow_up_limit must exceed 2, got {self.blow_up_limit}")

    @property
    def n_samples(self) -> int:
        return int(math.floor(self.t_max / self.dt)) + 1


@dataclass(frozen=True, eq=False)
class StepResponse:
    """Uniformly sampled unit-step output z(k*dt), clamped after divergence."""

    dt: float
    values: np.ndarray
    diverged: bool

    @property
    def t_end(self) -> float:
        return (len(self.values) - 1) * self.dt

    def times(self) -> np.ndarray:
        return np.arange(len(self.values)) * self.dt


def pid_transfer_function(gains: PidGains) -> TransferFunction:
    """Ideal parallel PID, C(s) = (kd s^2 + kp s + ki) / s.

    No derivative filter and no pole-zero cancellation: the coefficient
    layout is always [kd, kp, ki] over [1, 0], even for zero gains.
    """
    return TransferFunction((gains.kd, gains.kp, gains.ki), (1.0, 0.0))


def close_unity_feedback(
    controller: TransferFunction, plant: TransferFunction
) -> TransferFunction:
    """Unity-feedback closed loop T = C G / (1 + C G), kept in product form.

    The numerator is num_C*num_G and the denominator den_C*den_G + num_C*num_G;
    common factors are never cancelled. Raises ImproperLoop when the open-loop
    product has numerator degree above denominator degree (a kd-driven
    improperness with a low-relative-degree plant), or when leading-coefficient
    cancellation in the sum leaves an improper ratio.
    """
    num = np.convolve(controller.num, plant.num)
    den_open = np.convolve(controller.den, plant.den)
    if poly_degree(num) > poly_degree(den_open):
        raise ImproperLoop(
            f"open-loop product has relative degree "
            f"{poly_degree(den_open) - poly_degree(num)}; the closed loop is not proper"
        )
    den = _poly_add(den_open, num)
    lead = next((i for i, c in enumerate(den) if c != 0.0), None)
    if lead is None or poly_degree(num) > len(den) - 1 - lead:
        raise ImproperLoop(
            "leading coefficients of 1 + C*G cancelled; the closed loop is not proper"
        )
    return TransferFunction(num, den[lead:])


def tf_to_state_space(tf: TransferFunction) -> StateSpace:
    """Controllable canonical realization with the companion row at the bottom.

    The denominator is normalized to be monic. For den = s^n + a_{n-1} s^{n-1}
    + ... + a_0 the state matrix has ones on the superdiagonal and bottom row
    [-a_0, ..., -a_{n-1}]; b = e_n; c holds the ascending coefficients of
    num - d*den; d is the leading-coefficient quotient when degrees tie, else 0.
    """
    n = tf.den_degree
    if tf.num_degree > n:
        raise ImproperSystem(
            f"numerator degree {tf.num_degree} exceeds denominator degree {n}"
        )
    den = np.asarray(tf.den, dtype=float)
    den = den[len(den) - 1 - n :]  # strip leading zeros (none unless constructed oddly)
    lead = den[0]
    den = den / lead
    num = np.zeros(n + 1)
    src = np.asarray(tf.num, dtype=float)
    deg = tf.num_degree
    if deg >= 0:
        num[n - deg :] = src[len(src) - 1 - deg :] / lead
    d = float(num[0])
    rem = num[1:] - d * den[1:]  # descending, length n
    a = np.zeros((n, n))
    if n > 1:
        a[: n - 1, 1:] = np.eye(n - 1)
    if n > 0:
        a[n - 1, :] = -den[1:][::-1]
    b = np.zeros((n, 1))
    if n > 0:
        b[n - 1, 0] = 1.0
    c = rem[::-1].reshape(1, n)
    return StateSpace(a=a, b=b, c=c, d=d)


def _rk4_step_map(a: np.ndarray, b: np.ndarray, dt: float):
    """Precompute the classical-RK4 one-step affine map for dx = a x + b.

    One RK4 step with constant unit input is exactly
    x+ = (sum_{j<=4} (dt a)^j / j!) x + dt (sum_{j<=3} (dt a)^j / (j+1)!) b,
    so the whole trajectory is an iterated affine update.
    """
    n = a.shape[0]
    ha = dt * a
    m = np.eye(n)
    vc = np.eye(n)
    power = np.eye(n)
    fact = 1.0
    for j in range(1, 5):
        power = power @ ha
        fact *= j
        m = m + power / fact
        if j <= 3:
            vc = vc + power / (fact * (j + 1))
    v = dt * (vc @ b).ravel()
    return m, v


def simulate_step(ss: StateSpace, cfg: SimConfig) -> StepResponse:
    """Unit-step response on the fixed grid t = 0, dt, ..., floor(t_max/dt)*dt.

    Integrates with classical fixed-step RK4 (precomputed one-step map) from
    x(0) = 0 under u(t) = 1. Divergence is never an error: once any state or
    output magnitude exceeds cfg.blow_up_limit the remaining samples are
    clamped to +/-blow_up_limit so downstream scoring stays total.
    """
    n_samples = cfg.n_samples
    limit = cfg.blow_up_limit
    if ss.order == 0:
        z = ss.d
        if abs(z) <= limit:
            values = np.full(n_samples, z)
            diverged = False
        else:
            values = np.full(n_samples, -limit if z < 0 else limit)
            diverged = True
    else:
        m, v = _rk4_step_map(ss.a, ss.b, cfg.dt)
        values, diverged = _kernels.scan(
            np.ascontiguousarray(m),
            np.ascontiguousarray(v),
            np.ascontiguousarray(ss.c.ravel()),
            float(ss.d),
            n_samples,
            limit,
        )
    values.setflags(write=False)
    return StepResponse(dt=cfg.dt, values=values, diverged=bool(diverged))
