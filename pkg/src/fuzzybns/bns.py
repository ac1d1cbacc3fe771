"""BN-S stochastic volatility family: simulation and path analytics.

Three variants share one Euler engine:

* classical  -- log-return and variance load on a single subordinator Z,
  making their jumps totally dependent;
* generalized -- the variance is driven by a correlated combination of Z
  and an independent copy Z*, weighted by ``rho_prime``;
* refined    -- both equations mix Z with a second, more intense
  subordinator Z^(b) through deterministic weights ``theta`` (log-return)
  and ``theta_prime`` (variance).

The subordinators are compound Poisson with exponential jump sizes:
arrival intensity ``a`` per unit time and jump rate ``b``, so the unit-time
law has mean a/b and variance 2a/b^2 in closed form.  Time runs in years;
the driving processes are evaluated on the lam-accelerated clock.

Each path owns three RNG substreams (Brownian noise, Z, and Z^(b) or Z*),
spawned from a counter-based Philox generator, so the refined path with
theta = theta_prime = 0 is bitwise-equal to the classical path under the
same seed.  Ensemble callers should seed path i with ``seed ^ i``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import NumericError

__all__ = [
    "SubordinatorParams",
    "BnsParams",
    "SimPath",
    "simulate_subordinator",
    "simulate_classical",
    "simulate_generalized",
    "simulate_refined",
    "epsilon",
    "integrated_variance",
    "realized_variance",
    "correlation_classical",
    "correlation_refined",
]

_CORR_FUZZ = 1e-12


@dataclass(frozen=True)
class SubordinatorParams:
    """Compound-Poisson-exponential subordinator: intensity ``a``, jump rate ``b``."""

    a: float
    b: float

    def __post_init__(self):
        if self.a < 0.0:
            raise ValueError(f"jump intensity a must be >= 0, got {self.a}")
        if self.b <= 0.0:
            raise ValueError(f"jump-size rate b must be > 0, got {self.b}")

    @property
    def mean_unit(self) -> float:
        """E[Z_1] = a/b."""
        return self.a / self.b

    @property
    def var_unit(self) -> float:
        """Var[Z_1] = 2a/b^2."""
        return 2.0 * self.a / (self.b * self.b)


@dataclass(frozen=True)
class BnsParams:
    mu: float = 0.0
    beta: float = 0.0
    rho: float = -1.0
    lam: float = 1.0
    rho_prime: float = 1.0
    theta: float = 0.0
    theta_prime: float = 0.0
    z: SubordinatorParams = field(default_factory=lambda: SubordinatorParams(1.0, 1.0))
    z_b: SubordinatorParams = field(default_factory=lambda: SubordinatorParams(2.0, 1.0))

    def __post_init__(self):
        if self.lam <= 0.0:
            raise ValueError(f"OU rate lam must be > 0, got {self.lam}")
        if self.rho > 0.0:
            raise ValueError(f"leverage rho must be <= 0, got {self.rho}")
        for name in ("rho_prime", "theta", "theta_prime"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")
        if self.z_b.mean_unit < self.z.mean_unit:
            warnings.warn(
                "z_b is expected to have the greater Levy intensity "
                f"(a_b/b_b = {self.z_b.mean_unit:.6g} < a/b = {self.z.mean_unit:.6g})",
                stacklevel=2,
            )


@dataclass(frozen=True)
class SimPath:
    """Discretized joint path on the grid t_k = k*dt, k = 0..n.

    ``jump_z`` / ``jump_zb`` are the raw (unweighted) cumulative jump
    records of the two driving subordinators; both start at 0 and are
    nondecreasing.  ``s = s[0]*exp(x)`` holds at every grid point.
    """

    params: BnsParams
    dt: float
    times: np.ndarray
    x: np.ndarray
    sigma2: np.ndarray
    s: np.ndarray
    jump_z: np.ndarray
    jump_zb: np.ndarray
    seed: int

    @property
    def horizon(self) -> float:
        return float(self.times[-1])

    def save_csv(self, path) -> None:
        """Columns t, X, sigma2, S, Jz, Jzb; one row per grid point."""
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("t,X,sigma2,S,Jz,Jzb\n")
            for k in range(len(self.times)):
                fh.write(
                    f"{self.times[k]:.12g},{self.x[k]:.17g},{self.sigma2[k]:.17g},"
                    f"{self.s[k]:.17g},{self.jump_z[k]:.17g},{self.jump_zb[k]:.17g}\n"
                )


def _path_rngs(seed: int):
    """Three independent Philox substreams: (W, Z, Z^(b) or Z*)."""
    children = np.random.SeedSequence(seed).spawn(3)
    return tuple(np.random.Generator(np.random.Philox(c)) for c in children)


def _check_grid(horizon: float, dt: float) -> int:
    if dt <= 0.0 or horizon <= 0.0:
        raise ValueError(f"horizon and dt must be > 0, got horizon={horizon}, dt={dt}")
    if dt > horizon:
        raise ValueError(f"dt={dt} exceeds horizon={horizon}")
    return max(1, int(round(horizon / dt)))


def _subordinator_increments(rng, sub: SubordinatorParams, lam: float, n: int, dt: float) -> np.ndarray:
    """Per-step increments of Z_{lam*t}: Poisson(a*lam*dt) arrivals, Exp(b) sizes."""
    counts = rng.poisson(sub.a * lam * dt, size=n)
    return rng.gamma(shape=counts, scale=1.0 / sub.b)


def simulate_subordinator(
    p: SubordinatorParams, lam: float, horizon: float, dt: float, seed: int
) -> np.ndarray:
    """Increment series of the lam-time-changed subordinator, deterministic per seed."""
    if lam <= 0.0:
        raise ValueError(f"lam must be > 0, got {lam}")
    n = _check_grid(horizon, dt)
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    return _subordinator_increments(rng, p, lam, n, dt)


def _euler(p: BnsParams, s0: float, sigma2_0: float, horizon: float, dt: float,
           seed: int, model: str) -> SimPath:
    if s0 <= 0.0 or sigma2_0 <= 0.0:
        raise ValueError(f"s0 and sigma2_0 must be > 0, got {s0}, {sigma2_0}")
    n = _check_grid(horizon, dt)
    if p.lam * dt >= 1.0:
        raise NumericError(
            f"unstable step: lam*dt = {p.lam * dt:.6g} >= 1 drives sigma^2 through zero"
        )

    w_rng, z_rng, second_rng = _path_rngs(seed)
    dz = _subordinator_increments(z_rng, p.z, p.lam, n, dt)
    if model == "classical":
        dz2 = np.zeros(n)
    elif model == "generalized":
        dz2 = _subordinator_increments(second_rng, p.z, p.lam, n, dt)  # Z*, same law
    elif model == "refined":
        dz2 = _subordinator_increments(second_rng, p.z_b, p.lam, n, dt)
    else:  # pragma: no cover
        raise ValueError(model)

    # Per-step jump loads.  The weighted forms reduce bitwise to the
    # classical ones at theta = theta_prime = 0 (resp. rho_prime = 1).
    if model == "classical":
        x_jump = p.rho * dz
        s2_inflow = dz
    elif model == "generalized":
        x_jump = p.rho * dz
        s2_inflow = p.rho_prime * dz + math.sqrt(1.0 - p.rho_prime**2) * dz2
    else:
        x_jump = p.rho * ((1.0 - p.theta) * dz + p.theta * dz2)
        s2_inflow = (1.0 - p.theta_prime) * dz + p.theta_prime * dz2

    noise = w_rng.standard_normal(n)

    sigma2 = np.empty(n + 1)
    sigma2[0] = sigma2_0
    lam_dt = p.lam * dt
    s2 = sigma2_0
    for k, inflow in enumerate(s2_inflow.tolist()):  # sequential recursion
        s2 = s2 - lam_dt * s2 + inflow
        sigma2[k + 1] = s2
    if not np.all(sigma2 > 0.0):
        raise NumericError("sigma^2 left the positive half-line; reduce dt")

    sig_prev = sigma2[:-1]
    dx = (p.mu + p.beta * sig_prev) * dt + np.sqrt(sig_prev * dt) * noise + x_jump
    x = np.concatenate(([0.0], np.cumsum(dx)))

    return SimPath(
        params=p,
        dt=dt,
        times=np.arange(n + 1) * dt,
        x=x,
        sigma2=sigma2,
        s=s0 * np.exp(x),
        jump_z=np.concatenate(([0.0], np.cumsum(dz))),
        jump_zb=np.concatenate(([0.0], np.cumsum(dz2))),
        seed=seed,
    )


def simulate_classical(p: BnsParams, s0: float, sigma2_0: float, horizon: float,
                       dt: float, seed: int) -> SimPath:
    """Single-subordinator model: one Z drives both equations."""
    return _euler(p, s0, sigma2_0, horizon, dt, seed, "classical")


def simulate_generalized(p: BnsParams, s0: float, sigma2_0: float, horizon: float,
                         dt: float, seed: int) -> SimPath:
    """Variance driven by rho_prime*dZ + sqrt(1-rho_prime^2)*dZ*; returns by Z alone."""
    return _euler(p, s0, sigma2_0, horizon, dt, seed, "generalized")


def simulate_refined(p: BnsParams, s0: float, sigma2_0: float, horizon: float,
                     dt: float, seed: int) -> SimPath:
    """Convex combination of Z and the more intense Z^(b) in both equations."""
    return _euler(p, s0, sigma2_0, horizon, dt, seed, "refined")


def epsilon(s: float, t_end: float, lam: float) -> float:
    """Decay kernel (1 - exp(-lam*(T-s)))/lam; lies in [0, T-s]."""
    if lam <= 0.0:
        raise ValueError(f"lam must be > 0, got {lam}")
    if s > t_end:
        raise ValueError(f"require s <= T, got s={s} > T={t_end}")
    return -math.expm1(-lam * (t_end - s)) / lam


def _grid_index(path: SimPath, t: float, name: str) -> int:
    k = int(round(t / path.dt))
    if k < 0 or k > len(path.times) - 1:
        raise ValueError(f"{name}={t} outside the simulated horizon [0, {path.horizon}]")
    return k


def integrated_variance(path: SimPath, t: float, t_end: float, theta_prime: float) -> float:
    """Closed-form integrated variance over [t, T] on a realized path.

    epsilon(t,T)*sigma2_t plus the epsilon-weighted mixed jump inflow over
    (t, T]; ``theta_prime`` may differ from the path's own weight.
    """
    k_t = _grid_index(path, t, "t")
    k_T = _grid_index(path, t_end, "T")
    if k_t > k_T:
        raise ValueError(f"require t <= T, got t={t} > T={t_end}")
    lam = path.params.lam
    t_grid = path.times[k_t]
    T_grid = path.times[k_T]
    total = epsilon(t_grid, T_grid, lam) * path.sigma2[k_t]
    if k_T > k_t:
        dz = np.diff(path.jump_z[k_t:k_T + 1])
        dzb = np.diff(path.jump_zb[k_t:k_T + 1])
        stamp = path.times[k_t + 1:k_T + 1]
        weights = -np.expm1(-lam * (T_grid - stamp)) / lam
        total += float(np.dot(weights, (1.0 - theta_prime) * dz + theta_prime * dzb))
    return float(total)


def realized_variance(path: SimPath, t_end: float, p: BnsParams) -> float:
    """Time-averaged variance plus the two leverage jump-variance terms."""
    k_T = _grid_index(path, t_end, "T")
    if k_T == 0:
        raise ValueError("T must be positive for realized variance")
    T_grid = float(path.times[k_T])
    avg = float(np.trapezoid(path.sigma2[:k_T + 1], dx=path.dt)) / T_grid
    rho2 = p.rho * p.rho
    return (
        avg
        + rho2 * (1.0 - p.theta) ** 2 * p.lam * p.z.var_unit
        + rho2 * p.theta**2 * p.lam * p.z_b.var_unit
    )


def _bounded_corr(value: float) -> float:
    if abs(value) > 1.0 + _CORR_FUZZ:
        raise NumericError(f"correlation {value!r} escaped [-1, 1]")
    return max(-1.0, min(1.0, value))


def _integral_to(path: SimPath, k: int) -> float:
    return float(np.trapezoid(path.sigma2[:k + 1], dx=path.dt))


def correlation_classical(path: SimPath, t: float, s: float, p: BnsParams) -> float:
    """Log-return correlation of the single-subordinator model on a realized path.

    The numerator is frozen at the earlier time s, so for fixed s the value
    decays as t grows: the classical model forgets quickly.
    """
    k_t = _grid_index(path, t, "t")
    k_s = _grid_index(path, s, "s")
    if not k_t > k_s > 0:
        raise ValueError(f"require t > s > 0 on the grid, got t={t}, s={s}")
    int_t = _integral_to(path, k_t)
    int_s = _integral_to(path, k_s)
    rho2 = p.rho * p.rho
    jump_rate = rho2 * p.lam * p.z.var_unit
    t_grid = float(path.times[k_t])
    s_grid = float(path.times[k_s])
    num = int_s + rho2 * float(path.jump_z[k_s])
    den = math.sqrt((int_t + t_grid * jump_rate) * (int_s + s_grid * jump_rate))
    return _bounded_corr(num / den)


def correlation_refined(path: SimPath, t: float, s: float, p: BnsParams) -> float:
    """Log-return correlation of the two-subordinator model on a realized path.

    At theta = 0 this equals the classical value exactly.
    """
    k_t = _grid_index(path, t, "t")
    k_s = _grid_index(path, s, "s")
    if not k_t > k_s > 0:
        raise ValueError(f"require t > s > 0 on the grid, got t={t}, s={s}")
    rho2 = p.rho * p.rho
    w0 = (1.0 - p.theta) ** 2
    w1 = p.theta**2
    jump_rate = rho2 * p.lam * (w0 * p.z.var_unit + w1 * p.z_b.var_unit)

    def alpha(k: int) -> float:
        return _integral_to(path, k) + float(path.times[k]) * jump_rate

    int_s = _integral_to(path, k_s)
    num = int_s + rho2 * (w0 * float(path.jump_z[k_s]) + w1 * float(path.jump_zb[k_s]))
    return _bounded_corr(num / math.sqrt(alpha(k_t) * alpha(k_s)))
