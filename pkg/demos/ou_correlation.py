"""The adiabatic phase as an Ornstein-Uhlenbeck process.

We simulate many paths of the stationary process and compare the two-time
correlation with 1/2 exp(-omega |t - t'|). The last block shows how the
excitation probability exp(-omega tau_q) emerges from the same ensemble.
"""

import math

from kzquench.stochastic_phase import (
    OUParams,
    excitation_from_omega,
    simulate,
    stationary_correlation,
)

for omega in (0.5, 1.0, 2.0):
    ens = simulate(OUParams(omega=omega, dt=0.05, t_max=2.0, n_paths=50_000, seed=1))
    print(f"omega = {omega}")
    for lag in (0.0, 0.5, 1.0, 2.0):
        est = stationary_correlation(ens, lag)
        exact = 0.5 * math.exp(-omega * lag)
        print(f"  lag {lag:3.1f}: {est.mean_product:.4f} +- {est.std_error:.4f}  (exact {exact:.4f})")

print("\nexcitation probability, Ising convention")
tau = 2.0
for wt in (0.5, 1.0, 2.0, 3.0):
    w = wt / tau
    est = excitation_from_omega(w, tau, 2.0, OUParams(omega=0, dt=0.25 / w, t_max=300 / w, n_paths=20_000, seed=3))
    print(f"  omega*tau_q = {wt}: {est.value:.4f} +- {est.std_error:.4f}  (exp: {math.exp(-wt):.4f})")
