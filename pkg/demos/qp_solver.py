"""Solve a small bound- and equality-constrained QP and inspect the iterates.

Run with ``python3 demos/qp_solver.py``.
"""

import numpy as np
from scipy.optimize import minimize

from sacr import QpProblem, check_kkt, solve_qp

rng = np.random.default_rng(0)
n = 6
M = rng.normal(size=(n, n))
Q = M @ M.T + 0.1 * np.eye(n)
q = rng.normal(size=n)

# simplex-like constraints on the last three coordinates, first three free
Aeq = np.array([[0, 0, 0, 1.0, 1.0, 1.0]])
beq = np.array([1.0])
lower = np.array([-np.inf, -np.inf, -np.inf, 0.0, 0.0, 0.0])
problem = QpProblem(Q, q, Aeq, beq, lower)

sol = solve_qp(problem, tol=1e-10)
print(f"converged in {sol.iterations} iterations, objective {sol.objective:.10f}")
print("z =", np.round(sol.z, 6))
print("KKT residuals:", check_kkt(problem, sol).as_dict())
print("gap trace:", " ".join(f"{g:.2e}" for g in sol.gap_trace))

# cross-check against a general purpose solver
ref = minimize(
    lambda z: 0.5 * z @ Q @ z + q @ z,
    np.r_[np.zeros(3), np.full(3, 1 / 3)],
    jac=lambda z: Q @ z + q,
    constraints=[{"type": "eq", "fun": lambda z: Aeq @ z - beq}],
    bounds=[(None, None)] * 3 + [(0, None)] * 3,
    method="SLSQP",
    options={"ftol": 1e-14, "maxiter": 500},
)
print(f"SLSQP objective     {ref.fun:.10f}")
print(f"max |z - z_slsqp| = {np.abs(sol.z - ref.x).max():.2e}")
