"""
A short Monte Carlo run
=======================

Twenty trials of the four solvers on the default 32 x 64 ensemble,
with all noise sources active. The full experiment is the same call
with trials=200, or `diodeprox experiment` from the shell.
"""

import numpy as np

from diodeprox import EnsembleConfig, run_experiment, standard_solvers
from diodeprox.harness import steady_state

ens = EnsembleConfig(trials=20, base_seed=0)
curves = run_experiment(ens, standard_solvers(max_iterations=2000))

print(f"{'solver':<10} {'MSE@0':>10} {'MSE@100':>10} {'steady':>10} {'dB':>7}")
for c in curves:
    ss = steady_state(c.mse)
    print(f"{c.label:<10} {c.mse[0]:10.3e} {c.mse[100]:10.3e} {ss:10.3e} {10 * np.log10(ss):7.2f}")
