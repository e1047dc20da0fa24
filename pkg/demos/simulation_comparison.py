"""Compare SACR with ridge, lasso and the roughness penalty on simulated curves.

Every estimator is evaluated by nested cross-validation on the same outer
folds. SACR is the slowest by far, so a reduced grid is used here.

Run with ``python3 demos/simulation_comparison.py [seed]``.
"""

import sys
import time

import numpy as np

from sacr import HyperGrid, SimulationConfig, comparison_table, nested_evaluate, simulate

seed = int(sys.argv[1]) if len(sys.argv) > 1 else 0
data = simulate(SimulationConfig(seed=seed))
print(f"{data.n_samples} curves on {data.grid.size} grid points, response sd {np.std(data.response):.2f}")

grid = HyperGrid(lambda_values=tuple(np.logspace(-4, 2, 7)), phi_values=(0.1, 0.5, 1.0))
reports = []
for name in ("null", "ridge", "roughness", "lasso", "sacr"):
    t0 = time.perf_counter()
    rep = nested_evaluate(name, data, grid, k_outer=5, k_inner=3, repeats=1, seed=seed)
    print(f"{name:10s} {rep.summary():>18s}  ({time.perf_counter() - t0:.1f} s)")
    reports.append(rep)

print()
print(comparison_table(reports))
