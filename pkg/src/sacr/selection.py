"""Fold splitting, metrics, grid search and nested cross-validation."""

from __future__ import annotations

import itertools
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import estimators as est
from .errors import ConfigError, KTooLarge, LengthMismatch, SacrError
from .fda import FunctionalDataset, design_matrix, standardize

NUMBER_WORDS = {1: "one", 2: "two", 3: "three", 4: "four", 5: "five", 6: "six",
                7: "seven", 8: "eight", 9: "nine", 10: "ten"}

# hyperparameters each estimator is tuned over, in tie-break priority order
TUNED = {
    "null": (),
    "ridge": ("lambda",),
    "centered-ridge": ("lambda",),
    "roughness": ("lambda",),
    "sacr": ("lambda", "phi"),
    "sacr-logistic": ("lambda", "phi"),
    "ridge-logistic": ("lambda",),
    "lasso": ("lambda",),
    "adaptive-lasso": ("lambda", "gamma"),
    "relaxed-lasso": ("lambda", "phi_relax"),
    "nng": ("lambda",),
    "bar": ("lambda",),
}
ESTIMATORS = tuple(TUNED)
NEEDS_INITIAL = {"adaptive-lasso", "nng", "bar"}


def kfold_split(n: int, k: int, seed: int = 0, stratify_labels=None) -> list[np.ndarray]:
    """Shuffle ``range(n)`` and deal it into k folds.

    Fold sizes differ by at most one. With ``stratify_labels`` each class
    is shuffled separately and the classes are dealt in sequence, so every
    fold holds within one sample of its share of each class.
    """
    if k < 2:
        raise ConfigError("k must be at least 2")
    if k > n:
        raise KTooLarge(f"cannot split {n} samples into {k} folds")
    rng = np.random.default_rng(seed)
    if stratify_labels is None:
        order = rng.permutation(n)
    else:
        labels = np.asarray(stratify_labels)
        if labels.shape != (n,):
            raise LengthMismatch("stratify_labels must have length n")
        order = np.concatenate([rng.permutation(np.flatnonzero(labels == c)) for c in np.unique(labels)])
    folds = [[] for _ in range(k)]
    for pos, i in enumerate(order):
        folds[pos % k].append(int(i))
    return [np.array(sorted(f), dtype=int) for f in folds]


def _check_pair(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise LengthMismatch(f"lengths differ: {a.size} vs {b.size}")
    if a.size == 0:
        raise LengthMismatch("empty input")
    return a, b


def metric_mse(predictions, truth) -> float:
    a, b = _check_pair(predictions, truth)
    return float(np.mean((a - b) ** 2))


def metric_accuracy(predicted, truth) -> float:
    a, b = _check_pair(predicted, truth)
    return float(100.0 * np.mean(a == b))


@dataclass(frozen=True)
class HyperGrid:
    lambda_values: tuple = tuple(np.logspace(-4, 4, 20).tolist())
    phi_values: tuple = tuple(round(0.1 * i, 10) for i in range(1, 11))
    gamma_values: tuple = (0.5, 1.0, 2.0)
    phi_relax_values: tuple = (0.1, 0.25, 0.5, 0.75, 1.0)

    def __post_init__(self):
        for name in ("lambda_values", "phi_values", "gamma_values", "phi_relax_values"):
            vals = tuple(float(v) for v in getattr(self, name))
            if not vals:
                raise ConfigError(f"{name} must be nonempty")
            object.__setattr__(self, name, vals)
        if any(v <= 0 for v in self.lambda_values):
            raise ConfigError("lambda values must be positive")
        if any(not 0 < v <= 1 for v in self.phi_values + self.phi_relax_values):
            raise ConfigError("phi values must lie in (0, 1]")
        if any(v <= 0 for v in self.gamma_values):
            raise ConfigError("gamma values must be positive")

    def values(self, name):
        return {"lambda": self.lambda_values, "phi": self.phi_values,
                "gamma": self.gamma_values, "phi_relax": self.phi_relax_values}[name]

    def points(self, estimator: str) -> list[dict]:
        names = TUNED[estimator]
        return [dict(zip(names, combo)) for combo in itertools.product(*(self.values(n) for n in names))]


@dataclass(frozen=True, eq=False)
class EstimatorSpec:
    """An estimator name plus options that are fixed during tuning.

    ``center`` fixes the SACR / centered-ridge center instead of computing
    it from each training set. ``initial_lambdas`` is the grid used to pick
    the ridge initial estimate of the two-stage estimators.
    """

    name: str
    center: np.ndarray | None = None
    initial_lambdas: tuple | None = None
    initial_folds: int = 3

    def __post_init__(self):
        if self.name not in TUNED:
            raise ConfigError(f"unknown estimator {self.name!r}; choose from {', '.join(ESTIMATORS)}")


def _as_spec(spec) -> EstimatorSpec:
    return spec if isinstance(spec, EstimatorSpec) else EstimatorSpec(spec)


def ridge_cv_initial(A, y, lambdas, k=3, seed=0) -> np.ndarray:
    """Ridge solution at the lambda minimizing k-fold validation mse."""
    lambdas = sorted(lambdas)
    folds = kfold_split(len(y), k, seed)
    scores = []
    for lam in lambdas:
        errs = []
        for f in folds:
            train = np.setdiff1d(np.arange(len(y)), f)
            fit = est.fit_ridge(A[train], y[train], lam)
            errs.append(metric_mse(est.linear_predictor(fit, A[f]), y[f]))
        scores.append(np.mean(errs))
    best = min(range(len(lambdas)), key=lambda i: (scores[i], -lambdas[i]))
    return est.fit_ridge(A, y, lambdas[best]).beta


def fit_point(spec, A, y, point: dict, classification: bool = False, initial=None) -> est.LinearFit:
    """Fit one estimator at one hyperparameter point on a standardized design."""
    spec = _as_spec(spec)
    name = spec.name
    lam = point.get("lambda")
    if name == "null":
        return est.fit_null(A, y)
    if name == "ridge":
        return est.fit_ridge(A, y, lam)
    if name == "centered-ridge":
        c = spec.center if spec.center is not None else np.zeros(A.shape[1])
        return est.fit_centered_ridge(A, y, lam, c)
    if name == "roughness":
        return est.fit_roughness(A, y, lam)
    if name == "sacr":
        return est.fit_sacr(A, y, lam, point["phi"], spec.center)
    if name == "sacr-logistic":
        return est.fit_sacr_logistic(A, y, lam, point["phi"], spec.center)
    if name == "ridge-logistic":
        return est.fit_ridge_logistic(A, y, lam)
    if name == "lasso":
        return est.fit_lasso(A, y, lam)
    if name == "adaptive-lasso":
        return est.fit_adaptive_lasso(A, y, lam, point.get("gamma", 1.0), initial)
    if name == "relaxed-lasso":
        return est.fit_relaxed_lasso(A, y, lam, point["phi_relax"])
    if name == "nng":
        return est.fit_nng(A, y, lam, initial)
    if name == "bar":
        return est.fit_bar(A, y, lam, initial)
    raise ConfigError(f"unknown estimator {name!r}")


def _prepare(train: FunctionalDataset):
    std, params = standardize(train)
    return std, params, design_matrix(std)


def _score(fit, params, test: FunctionalDataset, classification: bool) -> float:
    out = est.predict(fit, test, params)
    if classification:
        return metric_accuracy(out[1], test.response)
    return metric_mse(out, test.response)


def _loss(score, classification):
    return 100.0 - score if classification else score


def _initial_for(spec, A, y, grid: HyperGrid, seed):
    if spec.name not in NEEDS_INITIAL:
        return None
    lambdas = spec.initial_lambdas or grid.lambda_values
    return ridge_cv_initial(A, y, lambdas, k=spec.initial_folds, seed=seed)


def _workers(n_jobs):
    if n_jobs is None:
        n_jobs = int(os.environ.get("SACR_NUM_THREADS", "1") or 1)
    cap = os.environ.get("SACR_NUM_THREADS")
    if cap:
        n_jobs = min(n_jobs, int(cap))
    return max(1, n_jobs)


def _map(fn, items, n_jobs):
    workers = _workers(n_jobs)
    if workers == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))  # preserves input order


def _select_key(row, names):
    # round so that numerically identical scores tie; then prefer more regularization
    return (float(f"{row['loss']:.12g}"),) + tuple(-row["point"][n] for n in names)


@dataclass
class GridSearchResult:
    selected: dict
    table: list  # rows: point, fold_scores, mean, sd, loss
    failed: list  # rows: point, error


def grid_search(spec, dataset: FunctionalDataset, grid: HyperGrid | None = None, k_inner: int = 3,
                seed: int = 0, stratify: bool | None = None, n_jobs: int | None = None) -> GridSearchResult:
    """Pick the hyperparameters minimizing mean validation loss over k folds.

    Standardization, SACR centers and two-stage initial estimates are all
    recomputed from each training fold. Ties go to larger lambda, then to
    larger values of the secondary parameter.
    """
    spec = _as_spec(spec)
    grid = grid or HyperGrid()
    classification = dataset.classification
    if stratify is None:
        stratify = classification
    folds = kfold_split(dataset.n_samples, k_inner, seed, dataset.response if stratify else None)
    prepared = []
    for f in folds:
        train = dataset.subset(np.setdiff1d(np.arange(dataset.n_samples), f))
        std, params, A = _prepare(train)
        initial = _initial_for(spec, A, std.response, grid, seed)
        prepared.append((std, params, A, initial, dataset.subset(f)))

    points = grid.points(spec.name) or [{}]

    def evaluate(point):
        scores = []
        try:
            for std, params, A, initial, test in prepared:
                fit = fit_point(spec, A, std.response, point, classification, initial)
                scores.append(_score(fit, params, test, classification))
        except (SacrError, np.linalg.LinAlgError, ValueError) as exc:
            return {"point": point, "error": f"{type(exc).__name__}: {exc}"}
        if not all(math.isfinite(s) for s in scores):
            return {"point": point, "error": "non-finite fold score"}
        mean = float(np.mean(scores))
        return {"point": point, "fold_scores": scores, "mean": mean,
                "sd": float(np.std(scores, ddof=1)) if len(scores) > 1 else 0.0,
                "loss": _loss(mean, classification)}

    rows = _map(evaluate, points, n_jobs)
    table = [r for r in rows if "error" not in r]
    failed = [r for r in rows if "error" in r]
    if not table:
        raise SacrError(f"every grid point failed for {spec.name}: {failed[0]['error']}")
    names = TUNED[spec.name]
    best = min(table, key=lambda r: _select_key(r, names))
    return GridSearchResult(dict(best["point"]), table, failed)


def protocol_string(repeats: int, k_outer: int, k_inner: int) -> str:
    rep = NUMBER_WORDS.get(repeats, str(repeats))
    noun = "repetition" if repeats == 1 else "repetitions"
    return (f"{rep} random {noun} of {k_outer}-fold cross-validation, "
            f"with {k_inner}-fold cross-validation for grid search")


@dataclass
class CvReport:
    estimator: str
    metric: str
    protocol: str
    outer_scores: list = field(default_factory=list)
    selected: list = field(default_factory=list)  # one dict per outer fold
    inner_tables: list = field(default_factory=list)
    failed: list = field(default_factory=list)

    @property
    def mean(self) -> float:
        return float(np.mean(self.outer_scores))

    @property
    def sd(self) -> float:
        return float(np.std(self.outer_scores, ddof=1)) if len(self.outer_scores) > 1 else 0.0

    def summary(self) -> str:
        return f"{format_number(self.mean)} ± {format_number(self.sd, 2)}"

    def to_dict(self) -> dict:
        return {
            "estimator": self.estimator,
            "metric": self.metric,
            "protocol": self.protocol,
            "mean": self.mean,
            "sd": self.sd,
            "outer_scores": self.outer_scores,
            "selected": self.selected,
            "inner_tables": self.inner_tables,
            "failed": self.failed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)

    def to_text(self) -> str:
        return comparison_table([self])


def format_number(x: float, digits: int = 4) -> str:
    return f"{x:.{digits}g}"


def comparison_table(reports: list) -> str:
    """Plain-text table, one ``name  mean ± sd`` row per estimator."""
    if not reports:
        return ""
    width = max(len(r.estimator) for r in reports) + 2
    lines = [f"# {reports[0].protocol}", f"# metric: {reports[0].metric}"]
    lines += [f"{r.estimator:<{width}}{r.summary()}" for r in reports]
    return "\n".join(lines) + "\n"


def nested_evaluate(spec, dataset: FunctionalDataset, grid: HyperGrid | None = None, k_outer: int = 5,
                    k_inner: int = 3, repeats: int = 1, seed: int = 0, stratify: bool | None = None,
                    n_jobs: int | None = None) -> CvReport:
    """Repeated outer k-fold evaluation with an inner grid search per fold."""
    spec = _as_spec(spec)
    grid = grid or HyperGrid()
    classification = dataset.classification
    if stratify is None:
        stratify = classification
    report = CvReport(spec.name, "accuracy (%)" if classification else "mse",
                      protocol_string(repeats, k_outer, k_inner))
    seeds = np.random.SeedSequence(seed).generate_state(repeats).tolist()
    for r, rseed in enumerate(seeds):
        folds = kfold_split(dataset.n_samples, k_outer, rseed, dataset.response if stratify else None)
        for i, f in enumerate(folds):
            train = dataset.subset(np.setdiff1d(np.arange(dataset.n_samples), f))
            test = dataset.subset(f)
            inner_seed = rseed + i + 1
            search = grid_search(spec, train, grid, k_inner, inner_seed, stratify, n_jobs)
            std, params, A = _prepare(train)
            initial = _initial_for(spec, A, std.response, grid, inner_seed)
            fit = fit_point(spec, A, std.response, search.selected, classification, initial)
            report.outer_scores.append(_score(fit, params, test, classification))
            report.selected.append(search.selected)
            report.inner_tables.append(
                [{k: row[k] for k in ("point", "mean", "sd")} for row in search.table]
            )
            report.failed.extend({"repeat": r, "fold": i, **row} for row in search.failed)
    return report
