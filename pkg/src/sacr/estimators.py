"""Penalized linear estimators for scalar-on-function regression.

Every fit function takes a quadrature-weighted design ``A`` (N x p, see
:func:`sacr.fda.design_matrix`) and a response, and returns a
:class:`LinearFit`. The intercept is never penalized: least-squares fits
center ``y`` and report its mean as the intercept, while the SACR and
logistic problems carry the intercept as a free variable.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .errors import (
    AllWeightsInfinite,
    BothClassesRequired,
    GridMismatch,
    MissingStandardization,
    NumericalError,
)
from .fda import FunctionalDataset, StandardizationParams, design_matrix
from .linalg import cholesky_solve, second_difference_operator
from .qp import KktReport, QpProblem, solve_qp

ROUGHNESS_NULLSPACE_GUARD = 1e-10
W_TIKHONOV = 1e-10
ZERO_INITIAL = 1e-10
BAR_FLOOR = 1e-12
BAR_FREEZE = 1e-8

LOGIT_ESTIMATORS = {"sacr-logistic", "ridge-logistic"}


@dataclass(eq=False)
class LinearFit:
    intercept: float
    beta: np.ndarray
    estimator: str
    hyperparams: dict = field(default_factory=dict)
    info: dict = field(default_factory=dict)
    standardization: StandardizationParams | None = None

    @property
    def link(self) -> str:
        return "logit" if self.estimator in LOGIT_ESTIMATORS else "identity"

    def to_dict(self) -> dict:
        d = {
            "estimator": self.estimator,
            "hyperparams": dict(self.hyperparams),
            "intercept": float(self.intercept),
            "beta": np.asarray(self.beta, dtype=float).tolist(),
            "info": self.info,
        }
        if self.standardization is not None:
            d["standardization"] = self.standardization.to_dict()
        return d


@dataclass(eq=False)
class SacrFit(LinearFit):
    w: np.ndarray = None
    center: np.ndarray = None
    lam: float = math.nan
    phi: float = math.nan
    kkt: KktReport | None = None

    def to_dict(self) -> dict:
        d = super().to_dict()
        d["w"] = np.asarray(self.w, dtype=float).tolist()
        d["center"] = np.asarray(self.center, dtype=float).tolist()
        d["kkt"] = self.kkt.as_dict() if self.kkt is not None else None
        return d


def fit_from_dict(d: dict) -> LinearFit:
    std = d.get("standardization")
    std = StandardizationParams.from_dict(std) if std is not None else None
    common = dict(
        intercept=float(d["intercept"]),
        beta=np.asarray(d["beta"], dtype=float),
        estimator=d["estimator"],
        hyperparams=dict(d.get("hyperparams", {})),
        info=dict(d.get("info", {})),
        standardization=std,
    )
    if "w" in d:
        kkt = d.get("kkt")
        return SacrFit(
            **common,
            w=np.asarray(d["w"], dtype=float),
            center=np.asarray(d["center"], dtype=float),
            lam=float(common["hyperparams"].get("lambda", math.nan)),
            phi=float(common["hyperparams"].get("phi", math.nan)),
            kkt=KktReport(**kkt) if kkt else None,
        )
    return LinearFit(**common)


def save_fit(fit: LinearFit, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(fit.to_dict(), fh, indent=1)
        fh.write("\n")


def load_fit(path) -> LinearFit:
    with open(path, encoding="utf-8") as fh:
        return fit_from_dict(json.load(fh))


def _check_lambda(lam, allow_zero=False):
    if not np.isfinite(lam) or lam < 0 or (lam == 0 and not allow_zero):
        raise ValueError(f"lambda must be {'nonnegative' if allow_zero else 'positive'}, got {lam}")


def _center_response(y):
    y = np.asarray(y, dtype=float)
    ybar = float(y.mean())
    return y - ybar, ybar


# ---------------------------------------------------------------------------
# closed forms


def fit_centered_ridge(A, y, lam, c, intercept: bool = True) -> LinearFit:
    """Ridge shrinking toward ``c``: ``(A'A + lam I)^-1 (A'y + lam c)``.

    With ``intercept=True`` (default) ``y`` is centered first and its mean
    becomes the intercept; otherwise ``y`` is used as given and the
    intercept is 0.
    """
    _check_lambda(lam)
    A = np.asarray(A, dtype=float)
    c = np.asarray(c, dtype=float)
    if c.shape != (A.shape[1],) or not np.all(np.isfinite(c)):
        raise ValueError("center must be a finite vector with one entry per column of A")
    if intercept:
        yc, ybar = _center_response(y)
    else:
        yc, ybar = np.asarray(y, dtype=float), 0.0
    G = A.T @ A
    G[np.diag_indices_from(G)] += lam
    beta = cholesky_solve(G, A.T @ yc + lam * c)
    return LinearFit(ybar, beta, "centered-ridge", {"lambda": float(lam)})


def fit_ridge(A, y, lam, intercept: bool = True) -> LinearFit:
    fit = fit_centered_ridge(A, y, lam, np.zeros(np.shape(A)[1]), intercept)
    fit.estimator = "ridge"
    return fit


def fit_roughness(A, y, lam) -> LinearFit:
    """Second-difference roughness penalty ``lam * ||L beta||^2``."""
    _check_lambda(lam)
    A = np.asarray(A, dtype=float)
    L = second_difference_operator(A.shape[1])
    yc, ybar = _center_response(y)
    G = A.T @ A + lam * (L.T @ L)
    G[np.diag_indices_from(G)] += ROUGHNESS_NULLSPACE_GUARD
    beta = cholesky_solve(G, A.T @ yc)
    return LinearFit(ybar, beta, "roughness", {"lambda": float(lam)})


# ---------------------------------------------------------------------------
# SACR


def _penalty_hessian(lam, phi, center, delta):
    """Hessian (over stacked [beta, w]) of the two SACR penalty terms.

    penalty(beta, w) = 0.5 * v' P v with v = [beta, w].
    """
    p = center.size
    C = np.diag(center)
    a = lam * phi * delta
    b = lam * (1.0 - phi) * delta
    P = np.zeros((2 * p, 2 * p))
    P[:p, :p] = 2.0 * a * np.eye(p)
    P[:p, p:] = -2.0 * a * C
    P[p:, :p] = -2.0 * a * C
    Pww = 2.0 * a * np.diag(center ** 2)
    if b > 0:
        LC = second_difference_operator(p) * center[None, :]
        Pww += 2.0 * b * (LC.T @ LC)
    Pww[np.diag_indices_from(Pww)] += 2.0 * W_TIKHONOV
    P[p:, p:] = Pww
    return P


def default_center(A, y, lam, logistic=False) -> np.ndarray:
    """Initial center function: ridge (or L2 logistic) at penalty ``lam * dt``."""
    A = np.asarray(A, dtype=float)
    lam_dt = lam / A.shape[1]
    if logistic:
        return fit_ridge_logistic(A, y, lam_dt).beta
    return fit_ridge(A, y, lam_dt).beta


def _check_sacr_args(A, lam, phi, center):
    _check_lambda(lam)
    if not 0.0 < phi <= 1.0:
        raise ValueError(f"phi must lie in (0, 1], got {phi}")
    center = np.asarray(center, dtype=float)
    if center.shape != (A.shape[1],) or not np.all(np.isfinite(center)):
        raise ValueError("center must be a finite vector with one entry per column of A")
    if A.shape[1] < 3:
        raise ValueError("SACR needs at least 3 grid points")
    return center


def _constraints(p, delta):
    n = 1 + 2 * p
    Aeq = np.zeros((1, n))
    Aeq[0, 1 + p:] = delta
    lower = np.full(n, -np.inf)
    lower[1 + p:] = 0.0
    return Aeq, np.array([1.0]), lower


def assemble_sacr_qp(A, y, lam, phi, center) -> QpProblem:
    """QP over z = (beta0, beta, w) for the least-squares SACR objective.

    objective = ||y - beta0 - A beta||^2 + lam*phi*dt*||beta - C w||^2
                + lam*(1-phi)*dt*||L C w||^2 + 1e-10 ||w||^2
    with C = diag(center), subject to dt * sum(w) = 1 and w >= 0.
    """
    A = np.asarray(A, dtype=float)
    y = np.asarray(y, dtype=float)
    center = _check_sacr_args(A, lam, phi, center)
    N, p = A.shape
    delta = 1.0 / p
    M = np.hstack([np.ones((N, 1)), A])
    Q = np.zeros((1 + 2 * p, 1 + 2 * p))
    Q[: 1 + p, : 1 + p] = 2.0 * (M.T @ M)
    Q[1:, 1:] += _penalty_hessian(lam, phi, center, delta)
    q = np.zeros(1 + 2 * p)
    q[: 1 + p] = -2.0 * (M.T @ y)
    Aeq, beq, lower = _constraints(p, delta)
    return QpProblem(Q, q, Aeq, beq, lower)


def _solve_point(problem, point, tol=1e-8):
    try:
        return solve_qp(problem, tol=tol)
    except NumericalError as exc:
        exc.point = point
        exc.args = (f"{exc.args[0]} at {point}",) + exc.args[1:]
        raise


def fit_sacr(A, y, lam, phi, center=None) -> SacrFit:
    """Smoothly adaptively centered ridge (least-squares loss).

    When ``center`` is omitted it is the ordinary ridge solution for the
    same ``lam`` applied to the quadrature-weighted penalty, i.e.
    ``fit_ridge(A, y, lam * dt)``; both penalties then discretize the same
    integral.
    """
    A = np.asarray(A, dtype=float)
    if center is None:
        center = default_center(A, y, lam)
    problem = assemble_sacr_qp(A, y, lam, phi, center)
    point = {"lambda": float(lam), "phi": float(phi)}
    sol = _solve_point(problem, point)
    p = A.shape[1]
    return SacrFit(
        intercept=float(sol.z[0]),
        beta=sol.z[1 : 1 + p].copy(),
        estimator="sacr",
        hyperparams=point,
        info={"iterations": sol.iterations},
        w=sol.z[1 + p :].copy(),
        center=np.asarray(center, dtype=float).copy(),
        lam=float(lam),
        phi=float(phi),
        kkt=sol.kkt,
    )


# ---------------------------------------------------------------------------
# logistic loss


def _check_labels(labels):
    labels = np.asarray(labels, dtype=float)
    if not np.all(np.isin(labels, (0.0, 1.0))):
        raise ValueError("labels must be 0/1")
    if labels.min() == labels.max():
        raise BothClassesRequired("both classes must be present")
    return labels


def _sigmoid(eta):
    return np.exp(-np.logaddexp(0.0, -eta))


def logistic_loss(eta, labels) -> float:
    """Sum of log(1 + exp(-(2y - 1) eta))."""
    sign = 2.0 * np.asarray(labels, dtype=float) - 1.0
    return float(np.sum(np.logaddexp(0.0, -sign * eta)))


def sacr_logistic_objective(z, A, labels, lam, phi, center) -> float:
    """Penalized logistic objective at z = (beta0, beta, w)."""
    A = np.asarray(A, dtype=float)
    z = np.asarray(z, dtype=float)
    p = A.shape[1]
    P = _penalty_hessian(lam, phi, np.asarray(center, dtype=float), 1.0 / p)
    v = z[1:]
    return logistic_loss(z[0] + A @ z[1 : 1 + p], labels) + 0.5 * float(v @ P @ v)


def sacr_logistic_gradient(z, A, labels, lam, phi, center) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    z = np.asarray(z, dtype=float)
    labels = np.asarray(labels, dtype=float)
    p = A.shape[1]
    P = _penalty_hessian(lam, phi, np.asarray(center, dtype=float), 1.0 / p)
    resid = _sigmoid(z[0] + A @ z[1 : 1 + p]) - labels
    g = np.zeros_like(z)
    g[0] = resid.sum()
    g[1 : 1 + p] = A.T @ resid
    g[1:] += P @ z[1:]
    return g


def fit_ridge_logistic(A, labels, lam, tol=1e-10, max_iter=100) -> LinearFit:
    """L2-penalized logistic regression, ``loss + lam ||beta||^2`` (Newton)."""
    _check_lambda(lam)
    A = np.asarray(A, dtype=float)
    labels = _check_labels(labels)
    N, p = A.shape
    M = np.hstack([np.ones((N, 1)), A])
    pen = np.full(1 + p, 2.0 * lam)
    pen[0] = 0.0
    theta = np.zeros(1 + p)
    prior = labels.mean()
    theta[0] = math.log(prior / (1.0 - prior))

    def objective(th):
        return logistic_loss(M @ th, labels) + lam * float(th[1:] @ th[1:])

    f = objective(theta)
    converged = False
    for it in range(max_iter):
        prob = _sigmoid(M @ theta)
        grad = M.T @ (prob - labels) + pen * theta
        W = np.maximum(prob * (1.0 - prob), 1e-12)
        H = (M.T * W) @ M
        H[np.diag_indices_from(H)] += pen + 1e-12
        step = cholesky_solve(H, -grad)
        t = 1.0
        while True:
            cand = theta + t * step
            fc = objective(cand)
            if fc <= f + 1e-4 * t * float(grad @ step) or t < 1e-10:
                break
            t *= 0.5
        theta, f_old, f = cand, f, fc
        if abs(f_old - f) <= tol * max(1.0, abs(f)):
            converged = True
            break
    return LinearFit(float(theta[0]), theta[1:].copy(), "ridge-logistic",
                     {"lambda": float(lam)}, {"converged": converged})


def fit_sacr_logistic(A, labels, lam, phi, center=None, rtol=1e-8, max_iter=50) -> SacrFit:
    """SACR with the logistic loss, solved by an outer IRLS loop.

    Each outer step replaces the loss by its second-order expansion, solves
    the resulting QP and backtracks along the segment toward its solution
    (which stays feasible) until the penalized objective decreases.
    """
    A = np.asarray(A, dtype=float)
    labels = _check_labels(labels)
    if center is None:
        center = default_center(A, labels, lam, logistic=True)
    center = _check_sacr_args(A, lam, phi, center)
    N, p = A.shape
    M = np.hstack([np.ones((N, 1)), A])
    P = _penalty_hessian(lam, phi, center, 1.0 / p)
    Aeq, beq, lower = _constraints(p, 1.0 / p)
    point = {"lambda": float(lam), "phi": float(phi)}

    z = np.zeros(1 + 2 * p)
    prior = labels.mean()
    z[0] = math.log(prior / (1.0 - prior))
    z[1 + p :] = 1.0
    z[1 : 1 + p] = center

    def objective(zz):
        v = zz[1:]
        return logistic_loss(M @ zz[: 1 + p], labels) + 0.5 * float(v @ P @ v)

    f = objective(z)
    converged = False
    sol = None
    it = 0
    for it in range(1, max_iter + 1):
        theta = z[: 1 + p]
        prob = _sigmoid(M @ theta)
        W = np.maximum(prob * (1.0 - prob), 1e-12)
        H = (M.T * W) @ M
        g = M.T @ (prob - labels)
        Q = np.zeros((1 + 2 * p, 1 + 2 * p))
        Q[: 1 + p, : 1 + p] = H
        Q[1:, 1:] += P
        q = np.zeros(1 + 2 * p)
        q[: 1 + p] = g - H @ theta
        sol = _solve_point(QpProblem(Q, q, Aeq, beq, lower), point)
        d = sol.z - z
        t = 1.0
        while True:
            cand = z + t * d
            fc = objective(cand)
            if fc <= f or t < 1e-8:
                break
            t *= 0.5
        if fc > f:
            converged = True
            break
        z, f_old, f = cand, f, fc
        if f_old - f <= rtol * max(1.0, abs(f_old)):
            converged = True
            break

    kkt = sol.kkt if sol is not None else None
    return SacrFit(
        intercept=float(z[0]),
        beta=z[1 : 1 + p].copy(),
        estimator="sacr-logistic",
        hyperparams=point,
        info={"iterations": it, "converged": converged, "objective": f},
        w=z[1 + p :].copy(),
        center=center.copy(),
        lam=float(lam),
        phi=float(phi),
        kkt=kkt,
    )


# ---------------------------------------------------------------------------
# lasso family


@njit(cache=True)
def _cd_sweep(G, c, diag, half, beta, Gb, idx):
    delta_max = 0.0
    p = G.shape[0]
    for j in idx:
        gj = diag[j]
        if gj <= 0.0:
            continue
        old = beta[j]
        rho = c[j] - Gb[j] + gj * old
        new = max(abs(rho) - half, 0.0) / gj
        if rho < 0.0:
            new = -new
        if new != old:
            step = new - old
            for i in range(p):
                Gb[i] += G[j, i] * step  # G is symmetric; row access is contiguous
            beta[j] = new
            delta_max = max(delta_max, abs(step))
    return delta_max


@njit(cache=True)
def _cd_loop(G, c, lam, tol, max_sweeps, beta):
    p = c.size
    Gb = G @ beta
    diag = np.diag(G).copy()
    half = 0.5 * lam
    full = np.arange(p)
    sweeps = 0
    while sweeps < max_sweeps:
        sweeps += 1
        if _cd_sweep(G, c, diag, half, beta, Gb, full) < tol:
            return sweeps, True
        active = np.flatnonzero(beta)
        while sweeps < max_sweeps:
            sweeps += 1
            if _cd_sweep(G, c, diag, half, beta, Gb, active) < tol:
                break
    return sweeps, False


def _lasso_cd(G, c, lam, tol=1e-8, max_sweeps=100_000, beta0=None):
    """Coordinate descent on ``b'Gb - 2c'b + lam ||b||_1``.

    Sweeps alternate between the full coordinate set and the current active
    set; converged when a full sweep moves no coordinate by ``tol`` or more.
    """
    G = np.ascontiguousarray(G, dtype=float)
    c = np.ascontiguousarray(c, dtype=float)
    beta = np.zeros(c.size) if beta0 is None else np.array(beta0, dtype=float)
    sweeps, converged = _cd_loop(G, c, float(lam), float(tol), int(max_sweeps), beta)
    return beta, int(sweeps), bool(converged)


def fit_lasso(A, y, lam, max_sweeps=100_000) -> LinearFit:
    """Lasso ``||y - A b||^2 + lam * sum|b_j|`` by cyclic coordinate descent."""
    _check_lambda(lam, allow_zero=True)
    A = np.asarray(A, dtype=float)
    yc, ybar = _center_response(y)
    beta, sweeps, converged = _lasso_cd(A.T @ A, A.T @ yc, lam, max_sweeps=max_sweeps)
    return LinearFit(ybar, beta, "lasso", {"lambda": float(lam)},
                     {"sweeps": sweeps, "converged": converged})


def fit_adaptive_lasso(A, y, lam, gamma=1.0, initial=None) -> LinearFit:
    """Adaptive lasso with weights ``1/|initial_j|^gamma``.

    Coordinates with ``|initial_j| < 1e-10`` get an infinite weight and are
    returned as exactly zero. ``initial`` defaults to the ridge fit at ``lam``.
    """
    _check_lambda(lam, allow_zero=True)
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    A = np.asarray(A, dtype=float)
    if initial is None:
        initial = fit_ridge(A, y, max(lam, 1e-12)).beta
    initial = np.asarray(initial, dtype=float)
    keep = np.abs(initial) >= ZERO_INITIAL
    if not keep.any():
        raise AllWeightsInfinite("initial estimate is identically zero")
    scale = np.abs(initial[keep]) ** gamma  # = 1 / weight
    inner = fit_lasso(A[:, keep] * scale, y, lam)
    beta = np.zeros(A.shape[1])
    beta[keep] = inner.beta * scale
    return LinearFit(inner.intercept, beta, "adaptive-lasso",
                     {"lambda": float(lam), "gamma": float(gamma)}, inner.info)


def fit_relaxed_lasso(A, y, lam, phi_relax) -> LinearFit:
    """Lasso at ``lam``, then lasso at ``phi_relax * lam`` on its active set."""
    if not 0.0 < phi_relax <= 1.0:
        raise ValueError(f"phi_relax must lie in (0, 1], got {phi_relax}")
    A = np.asarray(A, dtype=float)
    first = fit_lasso(A, y, lam)
    hp = {"lambda": float(lam), "phi_relax": float(phi_relax)}
    active = np.flatnonzero(first.beta)
    beta = np.zeros(A.shape[1])
    if active.size == 0:
        return LinearFit(first.intercept, beta, "relaxed-lasso", hp, {"empty_active_set": True})
    if phi_relax == 1.0:
        # the second stage would re-solve the same problem
        return LinearFit(first.intercept, first.beta.copy(), "relaxed-lasso", hp,
                         {"empty_active_set": False, "active": int(active.size),
                          "converged": bool(first.info["converged"])})
    second = fit_lasso(A[:, active], y, phi_relax * lam)
    beta[active] = second.beta
    return LinearFit(second.intercept, beta, "relaxed-lasso", hp,
                     {"empty_active_set": False, "active": int(active.size),
                      "converged": bool(first.info["converged"] and second.info["converged"])})


def _polish_nonnegative(problem: QpProblem, c, s):
    """Active-set refinement of an interior point solution of a c >= 0 QP.

    Bounds with ``c_j < s_j`` are taken as active, the remaining
    coordinates are re-solved exactly, and the result is kept only if it
    is primal and dual feasible. Removes the O(sqrt(tol)) residue the
    interior point method leaves on degenerate zero coordinates.
    """
    active = c < s
    free = np.flatnonzero(~active)
    new = np.zeros_like(c)
    if free.size:
        try:
            new[free] = cholesky_solve(problem.Q[np.ix_(free, free)], -problem.q[free])
        except NumericalError:
            return c
    grad = problem.Q @ new + problem.q
    scale = max(1.0, float(np.max(np.abs(problem.q))))
    if new.min() >= 0.0 and grad[active].min(initial=0.0) >= -1e-10 * scale:
        return new
    return c


def fit_nng(A, y, lam, initial=None) -> LinearFit:
    """Non-negative garrote: ``beta_j = c_j * initial_j`` with ``c >= 0``.

    The shrinkage factors minimize ``||y - A diag(initial) c||^2 + lam sum c``
    and are found with the interior point QP solver.
    """
    _check_lambda(lam, allow_zero=True)
    A = np.asarray(A, dtype=float)
    if initial is None:
        initial = fit_ridge(A, y, max(lam, 1e-12)).beta
    initial = np.asarray(initial, dtype=float)
    yc, ybar = _center_response(y)
    At = A * initial
    p = A.shape[1]
    problem = QpProblem(2.0 * (At.T @ At), -2.0 * (At.T @ yc) + lam, lower=np.zeros(p))
    sol = _solve_point(problem, {"lambda": float(lam)})
    c = _polish_nonnegative(problem, sol.z, sol.s)
    return LinearFit(ybar, c * initial, "nng", {"lambda": float(lam)},
                     {"shrinkage": c.tolist(), "kkt": sol.kkt.as_dict()})


def fit_bar(A, y, lam, initial=None, tol=1e-8, max_iter=100) -> LinearFit:
    """Broken adaptive ridge: iterate ridge with penalties ``lam / b_j^2``.

    Each step solves ``(A'A + lam diag(1/max(b^2, 1e-12))) beta = A'y`` in the
    equivalent rescaled form ``beta = D (D A'A D + lam I)^-1 D A'y`` with
    ``D = diag(max(|b|, 1e-6))``. Coordinates falling below 1e-8 in
    magnitude are frozen at zero.
    """
    _check_lambda(lam)
    A = np.asarray(A, dtype=float)
    yc, ybar = _center_response(y)
    if initial is None:
        initial = fit_ridge(A, yc, lam).beta
    b = np.asarray(initial, dtype=float).copy()
    G = A.T @ A
    Ay = A.T @ yc
    b[np.abs(b) < BAR_FREEZE] = 0.0
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        alive = np.flatnonzero(b)
        new = np.zeros_like(b)
        if alive.size:
            d = np.maximum(np.abs(b[alive]), math.sqrt(BAR_FLOOR))
            K = G[np.ix_(alive, alive)] * np.outer(d, d)
            K[np.diag_indices_from(K)] += lam
            new[alive] = d * cholesky_solve(K, d * Ay[alive])
        new[np.abs(new) < BAR_FREEZE] = 0.0
        change = float(np.max(np.abs(new - b))) if b.size else 0.0
        b = new
        if change < tol:
            converged = True
            break
    return LinearFit(ybar, b, "bar", {"lambda": float(lam)},
                     {"iterations": it, "converged": converged})


def fit_null(A, y) -> LinearFit:
    """Constant predictor at the training mean."""
    y = np.asarray(y, dtype=float)
    return LinearFit(float(y.mean()), np.zeros(np.shape(A)[1]), "null")


# ---------------------------------------------------------------------------
# prediction


def linear_predictor(fit: LinearFit, A) -> np.ndarray:
    return fit.intercept + np.asarray(A, dtype=float) @ fit.beta


def predict(fit: LinearFit, dataset: FunctionalDataset, params: StandardizationParams | None = None,
            *, standardized: bool = False):
    """Predictions for raw (or already standardized) curves.

    Regression fits return the response on its original scale. Fits with a
    logit link return ``(probabilities, labels)``; other fits applied to a
    classification dataset return ``(scores, labels)`` thresholded at 0.5.
    """
    if dataset.p != np.size(fit.beta):
        raise GridMismatch(f"fit has {np.size(fit.beta)} grid points, data has {dataset.p}")
    params = params if params is not None else fit.standardization
    response_mean = 0.0
    if not standardized:
        if params is None:
            raise MissingStandardization("no standardization parameters for this fit")
        dataset = params.apply(dataset.with_arrays(response=np.zeros(dataset.n_samples)))
        response_mean = params.response_mean or 0.0
    eta = linear_predictor(fit, design_matrix(dataset))
    if fit.link == "logit":
        prob = _sigmoid(eta)
        return prob, (prob >= 0.5).astype(float)
    if dataset.classification:
        return eta, (eta >= 0.5).astype(float)
    return eta + response_mean
