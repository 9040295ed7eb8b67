"""Block entropy of the XX chain: scaling law versus exact free fermions.

The quench law S = 3.7 ln L / ln tau_q is printed next to the exact
ground-state entropy of the critical XX chain, computed from the block
correlation matrix. The exact curve grows as (1/3) log2 L; the fit below
recovers that slope. We also confirm the finite-ring correlation matrix
against brute-force diagonalization.
"""

from kzquench import entanglement_scaling as es
from kzquench import exact_baselines as eb
from kzquench.models import SpinModel

print(f"{'L':>3} {'S(tau=200)':>11} {'S(tau=800)':>11} {'exact':>8}")
for L in (2, 4, 8, 16, 32, 64):
    print(
        f"{L:>3} {es.quench_entropy(L, 200).value:>11.4f} {es.quench_entropy(L, 800).value:>11.4f}"
        f" {eb.xx_block_entropy(L).value:>8.4f}"
    )

Ls = range(16, 65)
slope, intercept = eb.fit_log2_slope(Ls, [v for _, v in eb.xx_exact_curve(Ls)])
print(f"\nfit S = {slope:.4f} log2 L + {intercept:.4f}")

for model in ("ising", "xx", "lmg"):
    print(f"{model:5}: S_max(400) = {es.max_entropy(model, 400).value:.4f}, L_max(400) = {es.max_block_size(model, 400)}")

n, lam = 10, 0.3
gs = eb.ground_state(eb.ChainSpec(SpinModel("xx", field=lam), n))
for L in range(1, 6):
    ff = eb.entropy_from_correlations(eb.xx_ring_correlation_matrix(n, L, lam)).value
    print(f"ring N={n} L={L}: free fermions {ff:.10f}, diagonalization {eb.block_entropy_ed(gs, range(L)).value:.10f}")
