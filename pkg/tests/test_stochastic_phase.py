import math

import numpy as np
import pytest

from kzquench import kzm_defects as kd
from kzquench.models import SpinModel, dispersion
from kzquench.stochastic_phase import (
    OUParams,
    Scheme,
    analytic_correlation,
    excitation_from_omega,
    excitation_probability_mc,
    mean_path,
    simulate,
    stationary_correlation,
    two_time_correlation,
)


@pytest.fixture(scope="module")
def big_ensemble():
    return simulate(OUParams(omega=1.0, dt=0.05, t_max=4.0, n_paths=100_000, seed=7))


def test_frozen_paths_at_zero_frequency():
    ens = simulate(OUParams(omega=0.0, dt=0.1, t_max=2.0, n_paths=50, seed=1))
    assert np.all(ens.values == ens.values[:, :1])


def test_seed_determinism():
    p = OUParams(omega=0.7, dt=0.1, t_max=3.0, n_paths=3000, seed=99)
    a, b = simulate(p), simulate(p)
    assert np.array_equal(a.values, b.values)
    assert stationary_correlation(a, 1.0) == stationary_correlation(b, 1.0)


def test_parallel_matches_serial():
    p = OUParams(omega=1.3, dt=0.05, t_max=1.0, n_paths=5000, seed=3)
    assert np.array_equal(simulate(p).values, simulate(p, workers=4).values)


def test_different_seeds_differ():
    p = OUParams(omega=1.0, dt=0.1, t_max=1.0, n_paths=10, seed=1)
    assert not np.array_equal(simulate(p).values, simulate(p.replace(seed=2)).values)


def test_stationary_variance(big_ensemble):
    v = big_ensemble.values[:, -1]
    se = math.sqrt(2 * 0.5**2 / v.size)  # var of a Gaussian sample variance
    assert abs(v.var(ddof=1) - 0.5) <= 3 * se


def test_mean_path_within_clt_bound(big_ensemble):
    bound = 4 * math.sqrt(0.5 / 100_000)
    assert bound == pytest.approx(0.0089, abs=1e-4)
    assert np.all(np.abs(mean_path(big_ensemble)) <= bound)


def test_mean_path_single_path():
    ens = simulate(OUParams(omega=1.0, dt=0.1, t_max=1.0, n_paths=1, seed=5))
    assert np.array_equal(mean_path(ens), ens.values[0])


def test_mean_path_zero_start():
    ens = simulate(OUParams(omega=0.0, dt=0.1, t_max=1.0, n_paths=20, initial="fixed", initial_value=0.0))
    assert np.all(mean_path(ens) == 0.0)


@pytest.mark.parametrize("lag, expected", [(0.0, 0.5), (2.0, 0.06766764161830635)])
def test_stationary_correlation(big_ensemble, lag, expected):
    assert 0.5 * math.exp(-lag) == pytest.approx(expected)
    est = stationary_correlation(big_ensemble, lag)
    assert abs(est.mean_product - expected) <= 3 * est.std_error
    assert est.std_error > 0


def test_correlation_frozen_paths():
    ens = simulate(OUParams(omega=0.0, dt=0.5, t_max=2.0, n_paths=40_000, seed=11))
    est = stationary_correlation(ens, 1.5)
    assert est.mean_product == pytest.approx(0.5, abs=4 * est.std_error)


def test_lag_beyond_horizon(big_ensemble):
    with pytest.raises(ValueError):
        stationary_correlation(big_ensemble, 5.0)
    with pytest.raises(ValueError):
        stationary_correlation(big_ensemble, 0.123)


@pytest.mark.parametrize("dt", [0.02, 0.3, 1.0])
def test_exact_discretization_moments(dt):
    w = 1.5
    ens = simulate(OUParams(omega=w, dt=dt, t_max=30 * dt, n_paths=10_000, seed=21))
    se_mean = math.sqrt(0.5 / 10_000)
    assert np.all(np.abs(mean_path(ens)) <= 4 * se_mean)
    for n in (0, 1, 3, 10):
        est = stationary_correlation(ens, n * dt)
        assert abs(est.mean_product - 0.5 * math.exp(-w * n * dt)) <= 4 * est.std_error


def test_euler_converges_to_exact():
    w, dt = 1.0, 0.01
    common = dict(omega=w, dt=dt, t_max=3.0, n_paths=20_000)
    exact = simulate(OUParams(**common, seed=1, scheme=Scheme.EXACT))
    euler = simulate(OUParams(**common, seed=2, scheme=Scheme.EULER_MARUYAMA))
    for lag in (0.0, 0.5, 1.0):
        a, b = stationary_correlation(exact, lag), stationary_correlation(euler, lag)
        joint = math.hypot(a.std_error, b.std_error)
        assert abs(a.mean_product - b.mean_product) <= 3 * joint + 2 * w * dt


def test_euler_stability_guard():
    with pytest.raises(ValueError):
        OUParams(omega=10.0, dt=0.05, t_max=1.0, n_paths=1, scheme="euler")


def test_unit_noise_variance():
    # literal unit-strength noise has stationary variance 1/(2 omega)
    w = 2.0
    ens = simulate(OUParams(omega=w, dt=0.1, t_max=5.0, n_paths=20_000, seed=8, calibration="unit"))
    est = stationary_correlation(ens, 0.0)
    assert abs(est.mean_product - 1 / (2 * w)) <= 4 * est.std_error
    assert analytic_correlation(w, 0.0, "unit") == 0.25


def test_fixed_start_two_time():
    # from phi(0)=1 the mean relaxes as exp(-omega t)
    ens = simulate(
        OUParams(omega=1.0, dt=0.1, t_max=1.0, n_paths=20_000, seed=4, initial="fixed", initial_value=1.0)
    )
    est = two_time_correlation(ens, 0.0, 1.0)
    assert abs(est.mean_product - math.exp(-1.0)) <= 4 * est.std_error


def test_memory_cap():
    with pytest.raises(MemoryError):
        simulate(OUParams(omega=1.0, dt=0.001, t_max=100.0, n_paths=10_000))


@pytest.mark.parametrize("omega_tau", [0.5, 2.0])
def test_ising_excitation_mc(omega_tau):
    tau = 2.0
    w = omega_tau / tau
    est = excitation_from_omega(w, tau, 2.0, OUParams(omega=0, dt=0.25 / w, t_max=300 / w, n_paths=20_000, seed=5))
    assert est.value == pytest.approx(math.exp(-omega_tau), rel=0.05)


def test_excitation_from_model_dispersion():
    model = SpinModel("ising")
    tau = 1.0
    # pick k with 2 pi eps_k tau = 2
    k = 2 * math.asin(math.sqrt(2 / (2 * math.pi * 2.0 * 2)))
    assert 2 * math.pi * dispersion(model)(k) * tau == pytest.approx(2.0)
    est = excitation_probability_mc(model, k, tau, OUParams(omega=0, dt=0.1, t_max=200, n_paths=20_000, seed=6))
    assert est.value == pytest.approx(math.exp(-2), rel=0.05)


def test_xx_excitation_at_zero_momentum():
    est = excitation_probability_mc(SpinModel("xx"), 0.0, 3.0, OUParams(omega=0, dt=1.0, t_max=3.0, n_paths=40_000, seed=2))
    assert est.value == pytest.approx(0.5, abs=4 * est.std_error)


def test_ising_excitation_at_zero_momentum_is_one():
    est = excitation_probability_mc(
        SpinModel("ising"), 0.0, 3.0, OUParams(omega=0, dt=1.0, t_max=3.0, n_paths=40_000, seed=2)
    )
    assert est.raw == pytest.approx(1.0, abs=4 * est.std_error)
    assert 0.0 <= est.value <= 1.0


@pytest.mark.filterwarnings("ignore:Monte Carlo excitation probability")
def test_monte_carlo_density_matches_quadrature():
    """Brillouin-zone average of MC excitation probabilities vs the kink density."""
    model, tau = SpinModel("xx"), 25.0
    spec = kd.kink_spec(model)
    ks = np.linspace(0.0, 0.4, 17)  # p_k < 1e-10 beyond 0.4
    h = ks[1] - ks[0]
    weights = np.full(ks.size, h)
    weights[[0, -1]] = h / 2
    estimates = []
    for i, k in enumerate(ks):
        w = 2 * math.pi * float(dispersion(model)(k))
        dt = min(1.0, 0.25 / w) if w > 0 else 1.0
        horizon = tau + min(400.0, 60.0 / w) if w > 0 else tau
        params = OUParams(omega=0, dt=dt, t_max=horizon, n_paths=4000, seed=100 + i)
        est = excitation_probability_mc(model, k, tau, params)
        estimates.append(est)
    # (1/2pi) int_{-pi}^{pi} = (1/pi) int_0^pi
    density = sum(wt * e.raw for wt, e in zip(weights, estimates)) / math.pi
    se = math.sqrt(sum((wt * e.std_error) ** 2 for wt, e in zip(weights, estimates))) / math.pi
    assert abs(density - kd.kink_density_quadrature(spec, tau)) <= 3 * se
