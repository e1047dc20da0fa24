import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def gaussian_elimination_solve(A, b):
    """Textbook elimination with partial pivoting, used as an oracle."""
    A = np.array(A, dtype=float)
    b = np.array(b, dtype=float).reshape(len(A), -1)
    n = len(A)
    M = np.hstack([A, b])
    for col in range(n):
        piv = col + int(np.argmax(np.abs(M[col:, col])))
        M[[col, piv]] = M[[piv, col]]
        for r in range(col + 1, n):
            M[r] -= M[r, col] / M[col, col] * M[col]
    x = np.zeros((n, b.shape[1]))
    for r in range(n - 1, -1, -1):
        x[r] = (M[r, n:] - M[r, r + 1 : n] @ x[r + 1 :]) / M[r, r]
    return x


def project_affine_box(v, Aeq, beq, lower, iters=2000, tol=1e-13):
    """Dykstra's alternating projection onto {Aeq z = beq} intersected with {z >= lower}."""
    pinv = np.linalg.pinv(Aeq) if Aeq.size else None
    x = v.copy()
    p = np.zeros_like(v)
    q = np.zeros_like(v)
    for _ in range(iters):
        yv = x + p
        if pinv is not None:
            yv_new = yv - pinv @ (Aeq @ yv - beq)
        else:
            yv_new = yv
        p = yv - yv_new
        zv = np.maximum(yv_new + q, lower)
        q = yv_new + q - zv
        if np.max(np.abs(zv - x)) < tol:
            x = zv
            break
        x = zv
    return x


def projected_gradient(Q, q, Aeq, beq, lower, z0=None, iters=20000, tol=1e-12):
    """Accelerated projected gradient on 0.5 z'Qz + q'z over the feasible set."""
    n = len(q)
    L = max(np.linalg.eigvalsh(Q).max(), 1e-12)
    step = 1.0 / L
    x = project_affine_box(np.zeros(n) if z0 is None else z0, Aeq, beq, lower)
    yv = x.copy()
    t = 1.0
    for _ in range(iters):
        x_new = project_affine_box(yv - step * (Q @ yv + q), Aeq, beq, lower)
        t_new = 0.5 * (1 + np.sqrt(1 + 4 * t * t))
        yv = x_new + (t - 1) / t_new * (x_new - x)
        if np.max(np.abs(x_new - x)) < tol:
            x = x_new
            break
        x, t = x_new, t_new
    return x


# acceptance verdicts, printed once at the end of the session
_CRITERIA = {}


def record_criterion(number, passed, detail):
    status = "SKIP" if passed is None else ("PASS" if passed else "FAIL")
    line = f"criterion {number}: {status} - {detail}"
    _CRITERIA[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        terminalreporter.write_line(_CRITERIA[number])
