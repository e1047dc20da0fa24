import numpy as np
import pytest
from conftest import project_affine_box, projected_gradient

from sacr import estimators as est
from sacr import fda
from sacr.errors import (
    AllWeightsInfinite,
    BothClassesRequired,
    GridMismatch,
    MissingStandardization,
)
from sacr.linalg import second_difference_operator
from sacr.qp import QpProblem, solve_qp


def centered_design(rng, n, p):
    A = rng.normal(size=(n, p))
    return A - A.mean(axis=0)


def orthonormal_design(rng, n, p):
    """Orthonormal columns that are also orthogonal to the constant vector."""
    Q, _ = np.linalg.qr(np.hstack([np.ones((n, 1)), rng.normal(size=(n, p))]))
    return Q[:, 1:]


def qp_twin(A, y, penalty_hessian, linear=None):
    """Solve ||y - b0 - A b||^2 + b' P b (+ linear'b) as a generic QP over (b0, b)."""
    N, p = A.shape
    M = np.hstack([np.ones((N, 1)), A])
    Q = 2.0 * M.T @ M
    Q[1:, 1:] += 2.0 * penalty_hessian
    q = -2.0 * M.T @ y
    if linear is not None:
        q[1:] += linear
    return solve_qp(QpProblem(Q, q)).z


def soft(x, t):
    return np.sign(x) * np.maximum(np.abs(x) - t, 0.0)


def weighted_cd(A, y, lam, weights, sweeps=20000):
    """Plain cyclic coordinate descent on sum r^2 + lam * sum w_j |b_j|."""
    y = y - y.mean()
    beta = np.zeros(A.shape[1])
    for _ in range(sweeps):
        old = beta.copy()
        for j in range(A.shape[1]):
            r = y - A @ beta + A[:, j] * beta[j]
            beta[j] = soft(A[:, j] @ r, lam * weights[j] / 2) / (A[:, j] @ A[:, j])
        if np.max(np.abs(beta - old)) < 1e-13:
            break
    return beta


def lasso_subgradient_violation(A, y, beta, lam):
    r = (y - y.mean()) - A @ beta
    g = 2.0 * A.T @ r
    zero = beta == 0
    v_zero = np.max(np.abs(g[zero]) - lam, initial=0.0)
    v_nz = np.max(np.abs(g[~zero] - lam * np.sign(beta[~zero])), initial=0.0)
    return max(v_zero, v_nz)


def fista_box(f, grad, z0, Aeq, beq, lower, iters=200000, tol=1e-12):
    """Projected gradient with backtracking for a smooth convex objective."""
    x = project_affine_box(z0, Aeq, beq, lower)
    yv, t, L = x.copy(), 1.0, 1.0
    for _ in range(iters):
        g = grad(yv)
        fy = f(yv)
        while True:
            cand = project_affine_box(yv - g / L, Aeq, beq, lower)
            d = cand - yv
            if f(cand) <= fy + g @ d + 0.5 * L * d @ d + 1e-15:
                break
            L *= 2.0
        t_new = 0.5 * (1 + np.sqrt(1 + 4 * t * t))
        yv = cand + (t - 1) / t_new * (cand - x)
        if np.max(np.abs(cand - x)) < tol:
            return cand
        if f(cand) > f(x):
            yv, t_new = cand.copy(), 1.0
        x, t = cand, t_new
    return x


@pytest.fixture
def sim():
    ds, params = fda.standardize(fda.simulate(fda.SimulationConfig(n_samples=40, grid_size=30, seed=1)))
    return fda.design_matrix(ds), ds.response


# --- closed forms ----------------------------------------------------------


def test_ridge_orthonormal(rng):
    A = orthonormal_design(rng, 20, 5)
    y = rng.normal(size=20)
    np.testing.assert_allclose(est.fit_ridge(A, y, 1.0).beta, A.T @ y / 2, atol=1e-12)


def test_ridge_huge_lambda(rng):
    A, y = centered_design(rng, 15, 6), rng.normal(size=15)
    b = est.fit_ridge(A, y, 1e12).beta
    assert np.max(np.abs(b)) <= 1e-6 * np.max(np.abs(A.T @ y))


def test_ridge_intercept_is_mean(rng):
    A, y = centered_design(rng, 15, 6), rng.normal(3.0, 1.0, 15)
    assert est.fit_ridge(A, y, 0.5).intercept == pytest.approx(y.mean())


def test_centered_zero_is_ridge(rng):
    A, y = rng.normal(size=(12, 5)), rng.normal(size=12)
    a = est.fit_centered_ridge(A, y, 0.7, np.zeros(5)).beta
    np.testing.assert_allclose(a, est.fit_ridge(A, y, 0.7).beta, atol=1e-12, rtol=0)


def test_centered_fixed_point():
    fit = est.fit_centered_ridge(np.eye(2), [2.0, 4.0], 1.0, [2.0, 4.0], intercept=False)
    np.testing.assert_allclose(fit.beta, [2.0, 4.0], atol=1e-14)
    assert fit.intercept == 0.0


def test_centered_infinite_shrinkage(rng):
    A, y, c = rng.normal(size=(10, 4)), rng.normal(size=10), rng.normal(size=4)
    np.testing.assert_allclose(est.fit_centered_ridge(A, y, 1e10, c).beta, c, rtol=1e-4)


def test_centered_ridge_unbiased_at_truth():
    rng = np.random.default_rng(7)
    A = centered_design(rng, 30, 10)
    beta = rng.normal(size=10)
    fits = np.array([
        est.fit_centered_ridge(A, A @ beta + rng.normal(size=30), 10.0, beta).beta for _ in range(500)
    ])
    se = fits.std(axis=0, ddof=1) / np.sqrt(500)
    assert np.all(np.abs(fits.mean(axis=0) - beta) <= 3 * se)


@pytest.mark.parametrize("seed", range(4))
def test_closed_forms_match_qp(seed):
    rng = np.random.default_rng(seed)
    N, p = int(rng.integers(10, 51)), int(rng.integers(3, 31))
    A, y = centered_design(rng, N, p), rng.normal(size=N)
    lam, c = float(rng.uniform(0.1, 5)), rng.normal(size=p)

    z = qp_twin(A, y, lam * np.eye(p))
    ridge = est.fit_ridge(A, y, lam)
    np.testing.assert_allclose(ridge.beta, z[1:], rtol=1e-6, atol=1e-6 * np.max(np.abs(z[1:])))
    assert ridge.intercept == pytest.approx(z[0], rel=1e-6, abs=1e-8)

    z = qp_twin(A, y, lam * np.eye(p), linear=-2.0 * lam * c)
    np.testing.assert_allclose(est.fit_centered_ridge(A, y, lam, c).beta, z[1:], rtol=1e-6,
                               atol=1e-6 * np.max(np.abs(z[1:])))

    L = second_difference_operator(p)
    z = qp_twin(A, y, lam * L.T @ L + 1e-10 * np.eye(p))
    np.testing.assert_allclose(est.fit_roughness(A, y, lam).beta, z[1:], rtol=1e-6,
                               atol=1e-6 * np.max(np.abs(z[1:])))


def test_roughness_keeps_affine(rng):
    p = 12
    t = fda.unit_grid(p)
    A = centered_design(rng, 30, p)
    beta = 2.0 - 3.0 * t
    fit = est.fit_roughness(A, A @ beta, 1e6)
    np.testing.assert_allclose(fit.beta, beta, atol=1e-6)


def test_roughness_limit_is_affine_fit(rng):
    p = 10
    t = fda.unit_grid(p)
    A, y = centered_design(rng, 25, p), rng.normal(size=25)
    basis = np.column_stack([np.ones(p), t])
    coef = np.linalg.lstsq(A @ basis, y - y.mean(), rcond=None)[0]
    np.testing.assert_allclose(est.fit_roughness(A, y, 1e12).beta, basis @ coef, atol=1e-4)


def test_roughness_small_lambda(rng):
    A, y = centered_design(rng, 30, 8), rng.normal(size=30)
    ref = np.linalg.solve(A.T @ A + 1e-10 * np.eye(8), A.T @ (y - y.mean()))
    np.testing.assert_allclose(est.fit_roughness(A, y, 1e-12).beta, ref, atol=1e-6)


# --- SACR ----------------------------------------------------------------


def test_sacr_qp_bookkeeping(rng):
    A, y = rng.normal(size=(8, 5)), rng.normal(size=8)
    prob = est.assemble_sacr_qp(A, y, 1.0, 0.5, rng.normal(size=5))
    assert prob.n == 11 and prob.m == 1
    assert prob.bounded.tolist() == list(range(6, 11))
    np.testing.assert_allclose(prob.Aeq, [[0] * 6 + [0.2] * 5])


def test_sacr_phi_one_drops_roughness(rng):
    A, y, c = rng.normal(size=(8, 5)), rng.normal(size=8), rng.normal(size=5)
    prob = est.assemble_sacr_qp(A, y, 3.0, 1.0, c)
    Qww = prob.Q[6:, 6:]
    expected = np.diag(2 * 3.0 * 0.2 * c**2 + 2e-10)
    np.testing.assert_array_equal(Qww, expected)


def test_sacr_zero_center_is_ridge(sim):
    A, y = sim
    lam, phi = 5.0, 0.4
    fit = est.fit_sacr(A, y, lam, phi, center=np.zeros(A.shape[1]))
    ridge = est.fit_ridge(A, y, lam * phi / A.shape[1])
    np.testing.assert_allclose(fit.beta, ridge.beta, atol=1e-6 * max(1, np.max(np.abs(ridge.beta))))
    np.testing.assert_allclose(fit.w, 1.0, atol=1e-6)


def test_sacr_large_lambda_matches_w_subproblem(rng):
    N, p = 40, 8
    A, y = centered_design(rng, N, p), rng.normal(size=N)
    c = rng.normal(size=p)
    fit = est.fit_sacr(A, y, 1e8, 1.0, center=c)
    # loss-only problem over (b0, w): ||y - b0 - A C w||^2, dt sum w = 1, w >= 0
    M = np.hstack([np.ones((N, 1)), A * c])
    Q, q = 2 * M.T @ M, -2 * M.T @ y
    Aeq = np.concatenate([[0.0], np.full(p, 1.0 / p)])[None, :]
    lower = np.concatenate([[-np.inf], np.zeros(p)])
    z = projected_gradient(Q, q, Aeq, np.array([1.0]), lower, iters=200000, tol=1e-14)
    np.testing.assert_allclose(fit.beta, c * z[1:], atol=1e-4 * np.max(np.abs(c)))


@pytest.mark.parametrize("lam,phi", [(0.01, 1.0), (1.0, 0.5), (30.0, 0.1), (1e3, 0.9)])
def test_sacr_invariants(sim, lam, phi):
    A, y = sim
    fit = est.fit_sacr(A, y, lam, phi)
    assert fit.kkt.max <= 1e-8
    assert abs(fit.w.mean() - 1.0) <= 1e-8
    assert abs(np.sum(fit.w - 1.0)) <= 1e-8 * A.shape[1]
    assert fit.w.min() >= -1e-10
    if fit.w.max() >= 1 + 1e-3:
        assert fit.w.min() <= 1 - 1e-6
    np.testing.assert_allclose(fit.center, est.fit_ridge(A, y, lam / A.shape[1]).beta)


def test_sacr_rejects_bad_phi(sim):
    A, y = sim
    for phi in (0.0, 1.5):
        with pytest.raises(ValueError):
            est.fit_sacr(A, y, 1.0, phi)


# --- logistic --------------------------------------------------------------


@pytest.fixture
def logistic_data(rng):
    A = rng.normal(size=(20, 5))
    labels = (A @ rng.normal(size=5) + 0.3 * rng.normal(size=20) > 0).astype(float)
    return A, labels


def test_logistic_gradient_finite_differences(rng, logistic_data):
    A, labels = logistic_data
    c = rng.normal(size=5)
    for _ in range(5):
        z = rng.normal(size=11)
        g = est.sacr_logistic_gradient(z, A, labels, 2.0, 0.6, c)
        fd = np.zeros_like(z)
        for i in range(z.size):
            e = np.zeros_like(z)
            e[i] = 1e-6
            fd[i] = (est.sacr_logistic_objective(z + e, A, labels, 2.0, 0.6, c)
                     - est.sacr_logistic_objective(z - e, A, labels, 2.0, 0.6, c)) / 2e-6
        np.testing.assert_allclose(g, fd, rtol=1e-5, atol=1e-5 * np.max(np.abs(fd)))


def test_logistic_symmetric_intercept(rng):
    X = rng.normal(size=(15, 6))
    labels = (X[:, 0] + X[:, 3] > 0).astype(float)
    A = np.vstack([X, -X])
    lab = np.concatenate([labels, 1 - labels])
    fit = est.fit_sacr_logistic(A, lab, 0.5, 0.7, center=np.zeros(6))
    assert abs(fit.intercept) <= 1e-6


def test_logistic_full_shrinkage(logistic_data):
    A, labels = logistic_data
    fit = est.fit_sacr_logistic(A, labels, 1e9, 1.0, center=np.zeros(5))
    assert np.max(np.abs(fit.beta)) <= 1e-6
    ds = fda.FunctionalDataset(fda.unit_grid(5), A * 5, labels, classification=True)
    prob, _ = est.predict(fit, ds, standardized=True)
    np.testing.assert_allclose(prob, labels.mean(), atol=1e-6)


def test_logistic_matches_projected_gradient(rng, logistic_data):
    A, labels = logistic_data
    lam, phi, c = 3.0, 0.6, rng.normal(size=5)
    fit = est.fit_sacr_logistic(A, labels, lam, phi, center=c)
    z_fit = np.concatenate([[fit.intercept], fit.beta, fit.w])
    Aeq = np.concatenate([np.zeros(6), np.full(5, 0.2)])[None, :]
    lower = np.concatenate([np.full(6, -np.inf), np.zeros(5)])
    z0 = np.concatenate([np.zeros(6), np.ones(5)])
    z_pg = fista_box(lambda z: est.sacr_logistic_objective(z, A, labels, lam, phi, c),
                     lambda z: est.sacr_logistic_gradient(z, A, labels, lam, phi, c),
                     z0, Aeq, np.array([1.0]), lower)
    f_fit = est.sacr_logistic_objective(z_fit, A, labels, lam, phi, c)
    f_pg = est.sacr_logistic_objective(z_pg, A, labels, lam, phi, c)
    assert f_fit <= f_pg + 1e-6
    assert abs(fit.w.mean() - 1) <= 1e-8 and fit.w.min() >= -1e-10


def test_logistic_needs_both_classes(rng):
    with pytest.raises(BothClassesRequired):
        est.fit_sacr_logistic(rng.normal(size=(6, 4)), np.ones(6), 1.0, 0.5)


def test_ridge_logistic_stationary(logistic_data):
    A, labels = logistic_data
    fit = est.fit_ridge_logistic(A, labels, 0.8)
    prob = 1 / (1 + np.exp(-(fit.intercept + A @ fit.beta)))
    assert abs(np.sum(prob - labels)) <= 1e-6
    np.testing.assert_allclose(A.T @ (prob - labels) + 1.6 * fit.beta, 0.0, atol=1e-6)


# --- lasso family ----------------------------------------------------------


def test_lasso_orthonormal_soft_threshold(rng):
    A = orthonormal_design(rng, 30, 6)
    y = A @ np.array([3.0, -2.0, 0.1, 0.0, 1.0, -0.05]) + 0.1 * rng.normal(size=30)
    lam = 0.8
    np.testing.assert_allclose(est.fit_lasso(A, y, lam).beta, soft(A.T @ y, lam / 2), atol=1e-10)


def test_lasso_full_sparsity(rng):
    A, y = centered_design(rng, 20, 7), rng.normal(size=20)
    lam = 2 * np.max(np.abs(A.T @ (y - y.mean())))
    assert np.all(est.fit_lasso(A, y, lam).beta == 0.0)


def test_lasso_ols_limit(rng):
    A, y = centered_design(rng, 30, 6), rng.normal(size=30)
    ols = np.linalg.lstsq(A, y - y.mean(), rcond=None)[0]
    np.testing.assert_allclose(est.fit_lasso(A, y, 0.0).beta, ols, atol=1e-6)


@pytest.mark.parametrize("seed", range(5))
def test_lasso_subgradient(seed):
    rng = np.random.default_rng(seed)
    A, y = centered_design(rng, 25, 15), rng.normal(size=25)
    lam = 0.3 * np.max(np.abs(2 * A.T @ y))
    fit = est.fit_lasso(A, y, lam)
    assert fit.info["converged"]
    assert lasso_subgradient_violation(A, y, fit.beta, lam) <= 1e-6


def test_adaptive_zero_initial_excluded(rng):
    A, y = centered_design(rng, 20, 5), rng.normal(size=20)
    fit = est.fit_adaptive_lasso(A, y, 0.1, initial=np.array([1.0, 0.0, -0.5, 2.0, 1.0]))
    assert fit.beta[1] == 0.0


def test_adaptive_uniform_weights(rng):
    A, y = centered_design(rng, 20, 5), rng.normal(size=20)
    fit = est.fit_adaptive_lasso(A, y, 1.0, gamma=1.0, initial=np.full(5, 2.0))
    np.testing.assert_allclose(fit.beta, est.fit_lasso(A, y, 0.5).beta, atol=1e-7)


def test_adaptive_matches_weighted_cd(rng):
    A, y = centered_design(rng, 20, 5), rng.normal(size=20)
    initial = rng.normal(size=5)
    for gamma in (0.5, 1.0, 2.0):
        fit = est.fit_adaptive_lasso(A, y, 2.0, gamma=gamma, initial=initial)
        ref = weighted_cd(A, y, 2.0, 1 / np.abs(initial) ** gamma)
        np.testing.assert_allclose(fit.beta, ref, atol=1e-6)


def test_adaptive_all_zero_initial(rng):
    with pytest.raises(AllWeightsInfinite):
        est.fit_adaptive_lasso(rng.normal(size=(5, 3)), rng.normal(size=5), 1.0, initial=np.zeros(3))


def test_relaxed_no_relaxation(rng):
    A, y = centered_design(rng, 20, 8), rng.normal(size=20)
    lam = 0.2 * np.max(np.abs(2 * A.T @ y))
    np.testing.assert_allclose(est.fit_relaxed_lasso(A, y, lam, 1.0).beta, est.fit_lasso(A, y, lam).beta,
                               atol=1e-10, rtol=0)


def test_relaxed_limit_is_restricted_ols(rng):
    A = centered_design(rng, 40, 10)
    y = A[:, [1, 4]] @ np.array([3.0, -2.0]) + 0.2 * rng.normal(size=40)
    lam = 0.5 * np.max(np.abs(2 * A.T @ (y - y.mean())))
    fit = est.fit_relaxed_lasso(A, y, lam, 1e-9)
    active = np.flatnonzero(est.fit_lasso(A, y, lam).beta)
    ref = np.zeros(10)
    ref[active] = np.linalg.lstsq(A[:, active], y - y.mean(), rcond=None)[0]
    np.testing.assert_allclose(fit.beta, ref, atol=1e-4)


def test_relaxed_empty_active_set(rng):
    A, y = centered_design(rng, 10, 4), rng.normal(size=10)
    fit = est.fit_relaxed_lasso(A, y, 1e6, 0.5)
    assert fit.info["empty_active_set"] and np.all(fit.beta == 0)


def test_nng_ols_fixed_point(rng):
    A, y = centered_design(rng, 30, 5), rng.normal(size=30)
    ols = np.linalg.lstsq(A, y - y.mean(), rcond=None)[0]
    fit = est.fit_nng(A, y, 0.0, initial=ols)
    np.testing.assert_allclose(fit.info["shrinkage"], 1.0, atol=1e-6)
    np.testing.assert_allclose(fit.beta, ols, atol=1e-6)


def test_nng_full_shrinkage(rng):
    A, y = centered_design(rng, 30, 5), rng.normal(size=30)
    initial = rng.normal(size=5)
    lam = 2 * np.max(np.abs((A * initial).T @ (y - y.mean())))
    fit = est.fit_nng(A, y, lam, initial=initial)
    np.testing.assert_allclose(fit.info["shrinkage"], 0.0, atol=1e-8)


def test_nng_kkt(rng):
    A, y = centered_design(rng, 30, 8), rng.normal(size=30)
    initial = rng.normal(size=8)
    lam = 1.0
    fit = est.fit_nng(A, y, lam, initial=initial)
    c = np.array(fit.info["shrinkage"])
    At = A * initial
    g = 2 * At.T @ (At @ c - (y - y.mean())) + lam
    assert c.min() >= -1e-10
    assert g.min() >= -1e-6
    assert np.max(np.abs(c * g)) <= 1e-6


def bar_design(rng, beta_ols):
    A = orthonormal_design(rng, 20, len(beta_ols))
    y = A @ np.asarray(beta_ols) + (np.eye(20) - A @ A.T) @ rng.normal(size=20)
    return A, y


def test_bar_scalar_zero(rng):
    A, y = bar_design(rng, [0.1, 1.0])
    fit = est.fit_bar(A, y, 0.01)
    assert fit.beta[0] == 0.0


def test_bar_scalar_root(rng):
    A, y = bar_design(rng, [1.0, -0.7])
    lam = 0.01
    b = A.T @ y
    root = (np.abs(b) + np.sqrt(b**2 - 4 * lam)) / 2 * np.sign(b)
    np.testing.assert_allclose(est.fit_bar(A, y, lam).beta, root, atol=1e-6)


def test_bar_ols_limit(rng):
    A, y = centered_design(rng, 30, 5), rng.normal(size=30)
    ols = np.linalg.lstsq(A, y - y.mean(), rcond=None)[0]
    np.testing.assert_allclose(est.fit_bar(A, y, 1e-12).beta, ols, atol=1e-6)


def test_bar_initial_insensitive(rng):
    A = orthonormal_design(rng, 40, 6) + 0.05 * centered_design(rng, 40, 6)
    y = A @ np.array([2.0, 0, -1.5, 0, 0, 1.0]) + 0.1 * rng.normal(size=40)
    lam = 0.05
    a = est.fit_bar(A, y, lam, initial=est.fit_ridge(A, y, lam).beta)
    b = est.fit_bar(A, y, lam, initial=est.fit_ridge(A, y, 10 * lam).beta)
    np.testing.assert_allclose(a.beta, b.beta, atol=1e-4)


# --- prediction and serialization -----------------------------------------


def test_predict_zero_fit():
    fit = est.LinearFit(2.5, np.zeros(4), "null")
    ds = fda.FunctionalDataset(fda.unit_grid(4), np.arange(12.0).reshape(3, 4), np.zeros(3))
    np.testing.assert_array_equal(est.predict(fit, ds, standardized=True), 2.5)


def test_predict_interpolating_fit(rng):
    A_raw = rng.normal(size=(6, 4))
    ds = fda.FunctionalDataset(fda.unit_grid(4), A_raw, np.zeros(6))
    beta = rng.normal(size=4)
    ds = ds.with_arrays(response=1.5 + fda.design_matrix(ds) @ beta)
    fit = est.LinearFit(1.5, beta, "ridge")
    np.testing.assert_allclose(est.predict(fit, ds, standardized=True) - ds.response, 0.0, atol=1e-14)


def test_predict_null_logit():
    fit = est.LinearFit(0.0, np.zeros(3), "sacr-logistic")
    ds = fda.FunctionalDataset(fda.unit_grid(3), np.ones((2, 3)), [0.0, 1.0], classification=True)
    prob, lab = est.predict(fit, ds, standardized=True)
    np.testing.assert_array_equal(prob, 0.5)
    np.testing.assert_array_equal(lab, 1.0)


def test_predict_affine_in_fit(rng):
    ds = fda.FunctionalDataset(fda.unit_grid(5), rng.normal(size=(4, 5)), np.zeros(4))
    f1 = est.LinearFit(0.3, rng.normal(size=5), "ridge")
    f2 = est.LinearFit(-1.1, rng.normal(size=5), "ridge")
    combo = est.LinearFit(2 * f1.intercept + f2.intercept, 2 * f1.beta + f2.beta, "ridge")
    lhs = est.predict(combo, ds, standardized=True)
    rhs = 2 * est.predict(f1, ds, standardized=True) + est.predict(f2, ds, standardized=True)
    np.testing.assert_allclose(lhs, rhs, atol=1e-13)


def test_predict_raw_uses_standardization(rng):
    raw = fda.simulate(fda.SimulationConfig(n_samples=20, grid_size=12, seed=5))
    std, params = fda.standardize(raw)
    fit = est.fit_ridge(fda.design_matrix(std), std.response, 0.1)
    fit.standardization = params
    manual = params.response_mean + fit.intercept + fda.design_matrix(std) @ fit.beta
    np.testing.assert_allclose(est.predict(fit, raw), manual, atol=1e-12)


def test_predict_errors(rng):
    fit = est.LinearFit(0.0, np.zeros(3), "ridge")
    ds3 = fda.FunctionalDataset(fda.unit_grid(3), np.ones((2, 3)), [0.0, 1.0])
    ds4 = fda.FunctionalDataset(fda.unit_grid(4), np.ones((2, 4)), [0.0, 1.0])
    with pytest.raises(MissingStandardization):
        est.predict(fit, ds3)
    with pytest.raises(GridMismatch):
        est.predict(fit, ds4, standardized=True)


def test_fit_json_round_trip(tmp_path, sim):
    A, y = sim
    fit = est.fit_sacr(A, y, 1.0, 0.5)
    est.save_fit(fit, tmp_path / "f.json")
    back = est.load_fit(tmp_path / "f.json")
    assert isinstance(back, est.SacrFit)
    np.testing.assert_array_equal(back.beta, fit.beta)
    np.testing.assert_array_equal(back.w, fit.w)
    assert back.hyperparams == fit.hyperparams and back.kkt == fit.kkt
    lin = est.fit_lasso(A, y, 0.5)
    est.save_fit(lin, tmp_path / "g.json")
    back = est.load_fit(tmp_path / "g.json")
    assert type(back) is est.LinearFit and back.estimator == "lasso"
    np.testing.assert_array_equal(back.beta, lin.beta)
