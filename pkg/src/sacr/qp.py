"""Dense convex QP with equality constraints and lower bounds.

Problems have the form::

    minimize    0.5 z'Qz + q'z
    subject to  Aeq z = beq
                z >= lower        (entries of ``lower`` may be -inf)

and are solved by a Mehrotra predictor-corrector primal-dual interior
point method. The bound slacks are eliminated so every Newton step is a
Cholesky solve with the reduced matrix ``Q + diag(s/x)`` followed by a
Schur complement on the (few) equality rows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import lsq_linear

from .errors import (
    DimensionMismatch,
    Infeasible,
    InvalidProblem,
    MaxIterationsExceeded,
    NotPositiveDefinite,
)
from .linalg import cho_solve_factor, cholesky_factor

STEP_TO_BOUNDARY = 0.995
DEFAULT_TOL = 1e-8
DEFAULT_MAX_ITER = 200


@dataclass(frozen=True)
class KktReport:
    stationarity: float
    primal: float
    complementarity: float

    @property
    def max(self) -> float:
        return max(self.stationarity, self.primal, self.complementarity)

    def as_dict(self) -> dict:
        return {
            "stationarity": self.stationarity,
            "primal": self.primal,
            "complementarity": self.complementarity,
        }


@dataclass(frozen=True, eq=False)
class QpProblem:
    """Validated problem data. Construction rejects malformed input."""

    Q: np.ndarray
    q: np.ndarray
    Aeq: np.ndarray = None
    beq: np.ndarray = None
    lower: np.ndarray = None

    def __post_init__(self):
        Q = np.array(self.Q, dtype=float, ndmin=2)
        n = Q.shape[0]
        q = np.asarray(self.q, dtype=float).reshape(-1)
        Aeq = np.zeros((0, n)) if self.Aeq is None else np.array(self.Aeq, dtype=float, ndmin=2)
        beq = np.zeros(0) if self.beq is None else np.asarray(self.beq, dtype=float).reshape(-1)
        lower = np.full(n, -np.inf) if self.lower is None else np.asarray(self.lower, dtype=float).reshape(-1)
        if Aeq.size == 0:
            Aeq = np.zeros((0, n))

        if Q.shape != (n, n):
            raise DimensionMismatch(f"Q must be square, got {Q.shape}")
        if q.shape != (n,):
            raise DimensionMismatch(f"q has length {q.size}, expected {n}")
        if Aeq.shape[1] != n or beq.shape != (Aeq.shape[0],):
            raise DimensionMismatch(f"Aeq {Aeq.shape} / beq {beq.shape} do not match n={n}")
        if lower.shape != (n,):
            raise DimensionMismatch(f"lower has length {lower.size}, expected {n}")
        for name, arr in (("Q", Q), ("q", q), ("Aeq", Aeq), ("beq", beq)):
            if not np.all(np.isfinite(arr)):
                raise InvalidProblem(f"{name} has non-finite entries")
        if np.any(np.isnan(lower)) or np.any(lower == np.inf):
            raise InvalidProblem("lower bounds must be finite or -inf")

        scale = max(np.max(np.abs(Q)) if n else 0.0, 1.0)
        if n and np.max(np.abs(Q - Q.T)) > 1e-10 * scale:
            raise InvalidProblem("Q is not symmetric")
        Q = 0.5 * (Q + Q.T)
        if n:
            shift = 1e-8 * max(np.max(np.abs(np.diag(Q))), 1.0)
            try:
                np.linalg.cholesky(Q + shift * np.eye(n))
            except np.linalg.LinAlgError:
                raise InvalidProblem("Q is not positive semidefinite") from None
        m = Aeq.shape[0]
        if m and np.linalg.matrix_rank(Aeq) < m:
            raise InvalidProblem("Aeq does not have full row rank")

        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "Aeq", Aeq)
        object.__setattr__(self, "beq", beq)
        object.__setattr__(self, "lower", lower)

    @property
    def n(self) -> int:
        return self.Q.shape[0]

    @property
    def m(self) -> int:
        return self.Aeq.shape[0]

    @property
    def bounded(self) -> np.ndarray:
        return np.flatnonzero(np.isfinite(self.lower))

    def objective(self, z) -> float:
        z = np.asarray(z, dtype=float)
        return float(0.5 * z @ self.Q @ z + self.q @ z)


@dataclass(eq=False)
class QpSolution:
    z: np.ndarray
    y: np.ndarray
    s: np.ndarray
    iterations: int
    kkt: KktReport
    converged: bool = True
    objective: float = math.nan
    # per-iteration complementarity gap x's, recorded before each step
    gap_trace: list = field(default_factory=list)


def check_kkt(problem: QpProblem, solution: QpSolution) -> KktReport:
    """Recompute KKT residuals of ``solution`` from scratch (max norms)."""
    z = np.asarray(solution.z, dtype=float)
    y = np.asarray(solution.y, dtype=float)
    s = np.asarray(solution.s, dtype=float)
    n, m = problem.n, problem.m
    if z.shape != (n,) or y.shape != (m,) or s.shape != (n,):
        raise DimensionMismatch(
            f"solution shapes z{z.shape} y{y.shape} s{s.shape} do not match n={n}, m={m}"
        )
    if np.any(s < 0):
        raise InvalidProblem("bound multipliers must be nonnegative")
    unbounded = ~np.isfinite(problem.lower)
    if np.any(s[unbounded] != 0):
        raise InvalidProblem("unbounded coordinates must have zero multipliers")

    grad = problem.Q @ z + problem.q - problem.Aeq.T @ y - s
    stationarity = float(np.max(np.abs(grad))) if n else 0.0
    primal = float(np.max(np.abs(problem.Aeq @ z - problem.beq))) if m else 0.0
    b = ~unbounded
    if b.any():
        gap = z[b] - problem.lower[b]
        primal = max(primal, float(np.max(np.maximum(-gap, 0.0))))
        complementarity = float(np.max(np.abs(s[b] * gap)))
    else:
        complementarity = 0.0
    return KktReport(stationarity, primal, complementarity)


def _phase0(problem: QpProblem) -> None:
    """Reject problems whose equality system cannot be met inside the bounds."""
    if problem.m == 0:
        return
    ub = np.full(problem.n, np.inf)
    if problem.bounded.size:
        res = lsq_linear(problem.Aeq, problem.beq, bounds=(problem.lower, ub), method="bvls")
        resid = res.fun
    else:
        z = np.linalg.lstsq(problem.Aeq, problem.beq, rcond=None)[0]
        resid = problem.Aeq @ z - problem.beq
    if np.max(np.abs(resid)) > 1e-6:
        raise Infeasible(f"equality constraints unattainable (residual {np.max(np.abs(resid)):.3g})")


def _max_step(v: np.ndarray, dv: np.ndarray) -> float:
    neg = dv < 0
    if not neg.any():
        return 1.0
    return float(min(1.0, np.min(-v[neg] / dv[neg])))


class _NewtonSystem:
    """Factorization of the reduced KKT matrix for one interior point iterate."""

    def __init__(self, problem: QpProblem, bidx: np.ndarray, x: np.ndarray, s: np.ndarray):
        self.problem = problem
        self.bidx = bidx
        self.x = x
        self.s = s
        H = problem.Q.copy()
        H[bidx, bidx] += s / x
        self.L = self._factor(H)
        A = problem.Aeq
        if problem.m:
            self.HinvAt = cho_solve_factor(self.L, A.T)
            S = A @ self.HinvAt
            self.LS = self._factor(0.5 * (S + S.T))

    @staticmethod
    def _factor(M: np.ndarray) -> np.ndarray:
        try:
            return cholesky_factor(M)
        except NotPositiveDefinite:
            pass
        n = M.shape[0]
        base = max(np.max(np.abs(np.diag(M))), 1.0)
        reg = 1e-12
        while reg < 1e-4:
            try:
                return cholesky_factor(M + reg * base * np.eye(n))
            except NotPositiveDefinite:
                reg *= 100.0
        raise NotPositiveDefinite("reduced KKT matrix could not be factorized")

    def solve(self, r_dual: np.ndarray, r_prim: np.ndarray, r_comp: np.ndarray):
        """Newton direction for residual targets.

        Solves  Q dz - A'dy - E ds = -r_dual,  A dz = -r_prim,
                S E'dz + X ds = r_comp.
        """
        g = -r_dual.copy()
        g[self.bidx] += r_comp / self.x
        Hg = cho_solve_factor(self.L, g)
        if self.problem.m:
            rhs = -r_prim - self.problem.Aeq @ Hg
            dy = cho_solve_factor(self.LS, rhs)
            dz = Hg + self.HinvAt @ dy
        else:
            dy = np.zeros(0)
            dz = Hg
        ds = (r_comp - self.s * dz[self.bidx]) / self.x
        return dz, dy, ds


def _assemble(problem, z, y, s_b, bidx, iterations, converged, trace):
    s = np.zeros(problem.n)
    s[bidx] = s_b
    sol = QpSolution(z=z.copy(), y=y.copy(), s=s, iterations=iterations,
                     kkt=KktReport(0.0, 0.0, 0.0), converged=converged,
                     objective=problem.objective(z), gap_trace=list(trace))
    sol.kkt = check_kkt(problem, sol)
    return sol


def _starting_point(problem, bidx: np.ndarray, lb: np.ndarray):
    """Mehrotra-style start computed from the base point z_B = max(lb + 1, 1), s = 1.

    One full affine-scaling Newton step from the base point solves the
    linearized KKT system; the bound slacks and multipliers are then shifted
    to be positive and balanced so the initial complementarity gap is of
    the same order as the residuals it has to absorb.
    Returns ``(z, y, x, s)`` with ``x`` the slacks of the bounded coordinates.
    """
    n, m = problem.n, problem.m
    z = np.zeros(n)
    x = np.maximum(lb + 1.0, 1.0) - lb
    z[bidx] = lb + x
    y = np.zeros(m)
    s = np.ones(bidx.size)
    if bidx.size == 0:
        return z, y, x, s
    r_dual = problem.Q @ z + problem.q
    r_dual[bidx] -= s
    r_prim = problem.Aeq @ z - problem.beq
    dz, dy, ds = _NewtonSystem(problem, bidx, x, s).solve(r_dual, r_prim, -x * s)
    z = z + dz
    y = y + dy
    xh = x + dz[bidx]
    sh = s + ds
    xh = xh + max(-1.5 * xh.min(), 0.0)
    sh = sh + max(-1.5 * sh.min(), 0.0)
    xs = float(xh @ sh)
    xh = xh + 0.5 * xs / max(sh.sum(), 1e-300)
    sh = sh + 0.5 * xs / max(xh.sum(), 1e-300)
    # degenerate case: the linearized solution sits exactly at a vertex
    xh = np.maximum(xh, 1e-8)
    sh = np.maximum(sh, 1e-8)
    z[bidx] = lb + xh
    return z, y, xh, sh


@dataclass(frozen=True, eq=False)
class _Normalized:
    """(Q, q) divided by their largest entry; constraints untouched."""

    Q: np.ndarray
    q: np.ndarray
    Aeq: np.ndarray
    beq: np.ndarray
    scale: float

    @property
    def n(self) -> int:
        return self.Q.shape[0]

    @property
    def m(self) -> int:
        return self.Aeq.shape[0]


def solve_qp(problem: QpProblem, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER) -> QpSolution:
    """Solve a convex QP to KKT residuals below ``tol``.

    The iteration runs on a copy with (Q, q) divided by their largest
    absolute entry, so the argmin does not depend on a positive rescaling of
    the objective. Convergence is declared when the residuals of both the
    normalized and the original problem are below ``tol``.

    Raises
    ------
    Infeasible
        The equality constraints cannot be satisfied together with the bounds.
    MaxIterationsExceeded
        No certified point within ``max_iter`` steps; the exception carries
        the iterate with the smallest residuals as ``.solution``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    _phase0(problem)
    n, m = problem.n, problem.m
    bidx = problem.bounded
    lb = problem.lower[bidx]
    nb = bidx.size

    c = max(float(np.max(np.abs(problem.Q))) if n else 0.0,
            float(np.max(np.abs(problem.q))) if n else 0.0)
    c = c if c > 0 else 1.0
    norm = _Normalized(problem.Q / c, problem.q / c, problem.Aeq, problem.beq, c)
    Q, q, A, b = norm.Q, norm.q, norm.Aeq, norm.beq
    # residuals in objective units are multiplied by c in the original problem
    dual_weight = max(1.0, c)

    z, y, x, s = _starting_point(norm, bidx, lb)
    best = None
    best_res = np.inf
    trace = []

    for it in range(max_iter + 1):
        r_dual = Q @ z + q - A.T @ y
        r_dual[bidx] -= s
        r_prim = A @ z - b
        comp = x * s
        res = max(
            dual_weight * np.max(np.abs(r_dual)) if n else 0.0,
            np.max(np.abs(r_prim)) if m else 0.0,
            dual_weight * np.max(comp) if nb else 0.0,
        )
        if res < best_res:
            best_res = res
            best = (z.copy(), y.copy(), s.copy(), it)
        if res <= tol:
            return _assemble(problem, z, c * y, c * s, bidx, it, True, trace)
        if it == max_iter:
            break

        gap = float(comp.sum())
        trace.append(c * gap)
        mu = gap / nb if nb else 0.0
        system = _NewtonSystem(norm, bidx, x, s)

        # predictor (affine scaling) direction
        dz, dy, ds = system.solve(r_dual, r_prim, -comp)
        if nb:
            dx = dz[bidx]
            a_p = _max_step(x, dx)
            a_d = _max_step(s, ds)
            mu_aff = float((x + a_p * dx) @ (s + a_d * ds)) / nb
            sigma = (mu_aff / mu) ** 3 if mu > 0 else 0.0
            # corrector with centering
            r_comp = sigma * mu - comp - dx * ds
            dz, dy, ds = system.solve(r_dual, r_prim, r_comp)
            dx = dz[bidx]
            if float(s @ dx + x @ ds) >= 0.0:
                # second-order term would raise the gap: fall back to pure centering
                dz, dy, ds = system.solve(r_dual, r_prim, min(sigma, 0.5) * mu - comp)
                dx = dz[bidx]
            alpha = STEP_TO_BOUNDARY * min(_max_step(x, dx), _max_step(s, ds))
            alpha = min(alpha, 1.0)
            # keep the complementarity gap monotone
            while alpha > 1e-12 and float((x + alpha * dx) @ (s + alpha * ds)) >= gap:
                alpha *= 0.5
            # slacks are carried separately so they never round onto the bound
            x = np.maximum(x + alpha * dx, 1e-300)
            s = np.maximum(s + alpha * ds, 1e-300)
        else:
            alpha = 1.0
        z = z + alpha * dz
        y = y + alpha * dy
        if nb:
            z[bidx] = lb + x

    bz, by, bs, bit = best
    sol = _assemble(problem, bz, c * by, c * bs, bidx, bit, False, trace)
    raise MaxIterationsExceeded(
        f"no KKT point within {max_iter} iterations (best residual {best_res:.3g})", sol
    )


def dump_problem(problem: QpProblem, path) -> None:
    """Write a problem as plain text.

    Layout: a header line ``n m``, then n rows of Q, one row q, m rows of
    Aeq, one row beq (empty when m = 0) and one row of lower bounds, with
    ``-inf`` marking unbounded coordinates.
    """

    def row(v):
        return " ".join(repr(float(x)) for x in v)

    lines = [f"{problem.n} {problem.m}"]
    lines += [row(r) for r in problem.Q]
    lines.append(row(problem.q))
    lines += [row(r) for r in problem.Aeq]
    lines.append(row(problem.beq))
    lines.append(row(problem.lower))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def load_problem(path) -> QpProblem:
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().split("\n")
    n, m = (int(t) for t in lines[0].split())

    def vec(line):
        return np.array([float(t) for t in line.split()], dtype=float)

    pos = 1
    Q = np.array([vec(lines[pos + i]) for i in range(n)]).reshape(n, n)
    pos += n
    q = vec(lines[pos])
    pos += 1
    Aeq = np.array([vec(lines[pos + i]) for i in range(m)]).reshape(m, n)
    pos += m
    beq = vec(lines[pos])
    pos += 1
    lower = vec(lines[pos])
    return QpProblem(Q, q, Aeq, beq, lower)
