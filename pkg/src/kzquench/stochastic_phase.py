"""Monte Carlo for the fluctuating Berry-phase factor.

Near criticality the phase factor phi(t) is an Ornstein-Uhlenbeck process

    d phi = -omega phi dt + sigma dW,

whose stationary two-point function is (sigma^2 / 2 omega) exp(-omega |t - t'|).
With the default ``calibration="stationary"`` the noise amplitude is
sigma = sqrt(omega), so the stationary correlation is exactly
(1/2) exp(-omega |dt|). ``calibration="unit"`` keeps sigma = 1, whose
stationary variance is 1/(2 omega) instead.

Paths are generated in fixed-size blocks; block ``b`` draws from its own
Philox stream keyed by ``(seed, b)``, so ensembles are bit-identical no matter
how many workers build them.
"""

from __future__ import annotations

import dataclasses
import enum
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .models import SpinModel, dispersion

PATH_BLOCK = 1024
DEFAULT_MAX_ELEMENTS = 60_000_000


class Scheme(str, enum.Enum):
    EULER_MARUYAMA = "euler"
    EXACT = "exact"


@dataclass(frozen=True)
class OUParams:
    omega: float
    dt: float
    t_max: float
    n_paths: int
    seed: int = 0
    scheme: Scheme = Scheme.EXACT
    calibration: str = "stationary"
    initial: str = "stationary"
    initial_value: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "scheme", Scheme(self.scheme))
        if self.omega < 0:
            raise ValueError("omega must be non-negative")
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if self.t_max < 0:
            raise ValueError("t_max must be non-negative")
        if self.n_paths < 1:
            raise ValueError("n_paths must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if self.scheme is Scheme.EULER_MARUYAMA and self.omega > 0 and self.dt > 0.1 / self.omega:
            raise ValueError("Euler-Maruyama needs dt <= 0.1/omega")
        if self.calibration not in ("stationary", "unit"):
            raise ValueError("calibration must be 'stationary' or 'unit'")
        if self.initial not in ("stationary", "fixed"):
            raise ValueError("initial must be 'stationary' or 'fixed'")
        if self.calibration == "unit" and self.initial == "stationary" and self.omega == 0:
            raise ValueError("unit-noise process has no stationary law at omega=0")

    @property
    def n_steps(self) -> int:
        return int(round(self.t_max / self.dt))

    @property
    def noise_amplitude(self) -> float:
        return math.sqrt(self.omega) if self.calibration == "stationary" else 1.0

    @property
    def stationary_variance(self) -> float:
        if self.calibration == "stationary":
            return 0.5
        return 1.0 / (2.0 * self.omega)

    def replace(self, **changes) -> "OUParams":
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class PathEnsemble:
    times: np.ndarray
    values: np.ndarray  # (n_paths, n_times)
    params: OUParams

    @property
    def dt(self) -> float:
        return self.params.dt


@dataclass(frozen=True)
class CorrelationEstimate:
    lag: float
    mean_product: float
    std_error: float
    n_samples: int


@dataclass(frozen=True)
class ExcitationEstimate:
    value: float
    std_error: float
    omega: float
    raw: float
    clamped: bool


def _block_rng(seed: int, block: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(block,))
    return np.random.Generator(np.random.Philox(ss))


def _simulate_block(params: OUParams, block: int, n: int) -> np.ndarray:
    rng = _block_rng(params.seed, block)
    n_steps = params.n_steps
    out = np.empty((n_steps + 1, n))
    if params.initial == "stationary":
        out[0] = math.sqrt(params.stationary_variance) * rng.standard_normal(n)
    else:
        out[0] = params.initial_value
    if n_steps == 0:
        return out.T
    zeta = rng.standard_normal((n_steps, n))
    w, dt, sigma = params.omega, params.dt, params.noise_amplitude
    if params.scheme is Scheme.EXACT:
        decay = math.exp(-w * dt)
        if w > 0:
            step_sd = sigma * math.sqrt(-math.expm1(-2 * w * dt) / (2 * w))
        else:
            step_sd = sigma * math.sqrt(dt)
        for i in range(n_steps):
            out[i + 1] = decay * out[i] + step_sd * zeta[i]
    else:
        drift = 1.0 - w * dt
        step_sd = sigma * math.sqrt(dt)
        for i in range(n_steps):
            out[i + 1] = drift * out[i] + step_sd * zeta[i]
    return out.T


def simulate(params: OUParams, *, workers: int = 1, max_elements: int = DEFAULT_MAX_ELEMENTS) -> PathEnsemble:
    """Sample ``n_paths`` trajectories on the grid 0, dt, ..., t_max."""
    n_times = params.n_steps + 1
    if params.n_paths * n_times > max_elements:
        raise MemoryError(
            f"{params.n_paths} x {n_times} samples exceed the cap of {max_elements}"
        )
    blocks = [
        (b, min(PATH_BLOCK, params.n_paths - b * PATH_BLOCK))
        for b in range(math.ceil(params.n_paths / PATH_BLOCK))
    ]
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda bn: _simulate_block(params, *bn), blocks))
    else:
        parts = [_simulate_block(params, b, n) for b, n in blocks]
    values = np.concatenate(parts, axis=0)
    values.setflags(write=False)
    times = params.dt * np.arange(n_times)
    times.setflags(write=False)
    return PathEnsemble(times, values, params)


def mean_path(ensemble: PathEnsemble) -> np.ndarray:
    return ensemble.values.mean(axis=0)


def _lag_index(ensemble: PathEnsemble, lag: float) -> int:
    if lag < 0:
        raise ValueError("lag must be non-negative")
    if lag > ensemble.times[-1] + 1e-9 * ensemble.dt:
        raise ValueError(f"lag {lag} exceeds the horizon {ensemble.times[-1]}")
    n = int(round(lag / ensemble.dt))
    if abs(n * ensemble.dt - lag) > 1e-9 * max(1.0, lag):
        raise ValueError(f"lag {lag} is not a multiple of dt={ensemble.dt}")
    return n


def stationary_correlation(ensemble: PathEnsemble, lag: float) -> CorrelationEstimate:
    """<phi(t) phi(t+lag)> averaged over paths and every time origin.

    Paths are independent, so the standard error comes from the spread of
    per-path averages, which absorbs the correlation between origins.
    """
    n = _lag_index(ensemble, lag)
    v = ensemble.values
    per_path = np.mean(v[:, : v.shape[1] - n] * v[:, n:], axis=1)
    n_paths = per_path.size
    se = float(np.std(per_path, ddof=1) / math.sqrt(n_paths)) if n_paths > 1 else math.inf
    return CorrelationEstimate(float(lag), float(per_path.mean()), se, n_paths)


def two_time_correlation(ensemble: PathEnsemble, t0: float, t1: float) -> CorrelationEstimate:
    """<phi(t0) phi(t1)> from the ensemble at two fixed times (no origin averaging)."""
    i0, i1 = _lag_index(ensemble, t0), _lag_index(ensemble, t1)
    prod = ensemble.values[:, i0] * ensemble.values[:, i1]
    se = float(np.std(prod, ddof=1) / math.sqrt(prod.size)) if prod.size > 1 else math.inf
    return CorrelationEstimate(float(abs(t1 - t0)), float(prod.mean()), se, prod.size)


def analytic_correlation(omega: float, lag, calibration: str = "stationary"):
    var = 0.5 if calibration == "stationary" else 1.0 / (2.0 * omega)
    return var * np.exp(-omega * np.abs(lag))


def excitation_multiplier(model: SpinModel) -> float:
    """2 for the Ising convention, 1 for the XX/XXX convention."""
    return 2.0 if model.is_ising else 1.0


def excitation_from_omega(
    omega: float, tau_q: float, multiplier: float, params: OUParams, *, workers: int = 1
) -> ExcitationEstimate:
    """multiplier * <phi(tau_q) phi(0)> for a process at frequency ``omega``.

    ``dt`` is shrunk so tau_q falls on the grid, and the horizon is stretched
    to at least tau_q.
    """
    if not tau_q > 0:
        raise ValueError("tau_q must be positive")
    dt = tau_q / max(1, math.ceil(tau_q / params.dt - 1e-12))
    t_max = max(params.t_max, tau_q)
    t_max = dt * math.ceil(t_max / dt - 1e-12)
    p = params.replace(omega=omega, dt=dt, t_max=t_max)
    est = stationary_correlation(simulate(p, workers=workers), tau_q)
    raw = multiplier * est.mean_product
    value = min(max(raw, 0.0), 1.0)
    clamped = value != raw
    if clamped:
        warnings.warn(f"Monte Carlo excitation probability {raw:.4g} clamped to [0, 1]")
    return ExcitationEstimate(value, multiplier * est.std_error, omega, raw, clamped)


def excitation_probability_mc(
    model: SpinModel, k: float, tau_q: float, params: OUParams, *, workers: int = 1
) -> ExcitationEstimate:
    """Excitation probability of mode ``k`` from the simulated phase correlation.

    The process frequency is omega_k = 2 pi eps_k from the model's critical
    dispersion; ``params.omega`` is ignored.
    """
    omega = 2.0 * math.pi * float(dispersion(model)(k))
    return excitation_from_omega(omega, tau_q, excitation_multiplier(model), params, workers=workers)
