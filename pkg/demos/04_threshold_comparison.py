"""
State-targeted cutoffs versus the energy argument
==================================================

The classic way to justify a Fock cutoff is through energy conservation:
population above Lambda costs at least omega0 * Lambda, so a state with
bounded energy has a bounded tail.  That reasoning pays a 1/eps^2 price.
The walk bound instead tracks how fast amplitude can climb the ladder,
and its cutoff grows only with log(1/eps).  This script reproduces the
comparison for a 100-mode phonon problem.
"""

import numpy as np

from truncert import compare_thresholds, energy_threshold_single_mode

table = compare_thresholds(
    n_modes=100, epsilon=1e-2, lambda0=4, times=np.linspace(0.5, 10.0, 20)
)

print("100 modes, eps = 1e-2, starting below 4 quanta per mode")
print("\n   t      ours    energy argument")
for row in table.rows:
    print(f"  {row.t:5.2f}  {row.lambda_ours:6d}  {row.lambda_energy:12d}")

ratio = table.rows[-1].lambda_energy / table.rows[-1].lambda_ours
print(f"\nat t = {table.rows[-1].t:.1f} the energy argument needs "
      f"{ratio:.0f}x the cutoff")

# the walk cutoff grows with time, the energy one does not, so for very
# few modes and loose targets the energy argument eventually wins; the
# comparison records where that happens

small = compare_thresholds(n_modes=5, epsilon=0.1, lambda0=4,
                           times=np.linspace(1.0, 50.0, 50))
print(f"\n5 modes, eps = 0.1: energy argument wins past t = {small.crossover_t:.1f}")

# the single-mode energy threshold alone, for reference
print("\nsingle mode, lambda0 = 4, energy-argument cutoffs:")
for eps in [0.1, 0.01]:
    lam = energy_threshold_single_mode(1.0, 4, eps)
    print(f"  eps = {eps}: lambda = {lam}")
