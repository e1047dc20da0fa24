"""Functional data on an equispaced grid: ingestion, standardization,
quadrature and the B-spline curve simulator."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import (
    ConfigError,
    DataError,
    GridMismatch,
    MissingValues,
    NonBinaryLabels,
    ParseError,
    RaggedRows,
    TOutsideKnotRange,
)

MISSING_TOKENS = {"", "na", "nan", "null", "none", "?"}


def unit_grid(p: int) -> np.ndarray:
    """Right endpoints ``j/p`` of the p cells partitioning [0, 1]."""
    return np.arange(1, p + 1, dtype=float) / p


@dataclass(frozen=True, eq=False)
class FunctionalDataset:
    """N curves sampled on a shared equispaced grid, with one response each."""

    grid: np.ndarray
    curves: np.ndarray
    response: np.ndarray
    classification: bool = False
    labels: tuple | None = None  # raw values mapped to 0 and 1, if any

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float).reshape(-1)
        curves = np.array(self.curves, dtype=float, ndmin=2)
        response = np.asarray(self.response, dtype=float).reshape(-1)
        if curves.shape[1] != grid.size:
            raise DataError(f"curves have {curves.shape[1]} columns but the grid has {grid.size} points")
        if curves.shape[0] != response.size:
            raise DataError(f"{curves.shape[0]} curves but {response.size} responses")
        if grid.size > 1:
            steps = np.diff(grid)
            if np.any(steps <= 0):
                raise DataError("grid must be strictly increasing")
            if np.max(np.abs(steps - steps[0])) > 1e-12:
                raise DataError("grid must be equispaced")
        bad = np.flatnonzero(~np.all(np.isfinite(curves), axis=1) | ~np.isfinite(response))
        if bad.size:
            raise MissingValues(bad.tolist())
        if self.classification and not np.all(np.isin(response, (0.0, 1.0))):
            raise NonBinaryLabels("classification responses must be 0/1")
        grid.flags.writeable = False
        curves.flags.writeable = False
        response.flags.writeable = False
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "curves", curves)
        object.__setattr__(self, "response", response)

    @property
    def n_samples(self) -> int:
        return self.curves.shape[0]

    @property
    def p(self) -> int:
        return self.grid.size

    @property
    def delta(self) -> float:
        return 1.0 / self.p

    def subset(self, idx) -> "FunctionalDataset":
        idx = np.asarray(idx)
        return FunctionalDataset(self.grid, self.curves[idx], self.response[idx],
                                 self.classification, self.labels)

    def with_arrays(self, curves=None, response=None) -> "FunctionalDataset":
        return FunctionalDataset(
            self.grid,
            self.curves if curves is None else curves,
            self.response if response is None else response,
            self.classification,
            self.labels,
        )


@dataclass(frozen=True, eq=False)
class StandardizationParams:
    means: np.ndarray
    scales: np.ndarray
    response_mean: float | None = None
    constant_columns: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=int))

    def apply(self, dataset: FunctionalDataset) -> FunctionalDataset:
        if dataset.p != self.means.size:
            raise GridMismatch(
                f"dataset has {dataset.p} grid points, standardization expects {self.means.size}"
            )
        curves = (dataset.curves - self.means) / self.scales
        response = dataset.response
        if self.response_mean is not None:
            response = response - self.response_mean
        return dataset.with_arrays(curves, response)

    def to_dict(self) -> dict:
        return {
            "means": self.means.tolist(),
            "scales": self.scales.tolist(),
            "response_mean": self.response_mean,
            "constant_columns": np.asarray(self.constant_columns).tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "StandardizationParams":
        return cls(
            np.asarray(d["means"], dtype=float),
            np.asarray(d["scales"], dtype=float),
            d.get("response_mean"),
            np.asarray(d.get("constant_columns", []), dtype=int),
        )


def standardize(dataset: FunctionalDataset) -> tuple[FunctionalDataset, StandardizationParams]:
    """Center and scale every grid column; center the response for regression.

    Scales are sample standard deviations. Constant columns keep scale 1
    and are listed in ``params.constant_columns``.
    """
    if dataset.n_samples < 2:
        raise DataError("standardization needs at least two samples")
    X = dataset.curves
    means = X.mean(axis=0)
    centered = X - means
    sds = centered.std(axis=0, ddof=1)
    constant = sds <= 1e-12 * np.maximum(1.0, np.abs(means))
    scales = np.where(constant, 1.0, sds)
    response_mean = None if dataset.classification else float(dataset.response.mean())
    params = StandardizationParams(means, scales, response_mean, np.flatnonzero(constant))
    return params.apply(dataset), params


def design_matrix(dataset: FunctionalDataset) -> np.ndarray:
    """Quadrature-weighted design: ``A[i, j] = x_i(t_j) * dt`` (right Riemann sum)."""
    return dataset.curves * dataset.delta


def _parse_cell(text: str, row: int, col: int) -> float:
    t = text.strip()
    if t.lower() in MISSING_TOKENS:
        return math.nan
    try:
        return float(t)
    except ValueError:
        raise ParseError(f"non-numeric cell {t!r}", row=row, col=col) from None


def load_csv(path, response_column=-1, label_mode: bool = False, header: bool = True) -> FunctionalDataset:
    """Read curves and a response from a comma-separated file.

    ``response_column`` is a header name or a (possibly negative) 0-based
    index; all other columns, in file order, are the curve evaluations.
    ``None`` reads every column as a curve value and sets the response to 0.
    Reported row/column numbers are 1-based file positions.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    if not rows:
        raise ParseError("empty file")
    names = None
    first_data_line = 1
    if header:
        names = [c.strip() for c in rows[0]]
        rows = rows[1:]
        first_data_line = 2
    if not rows:
        raise ParseError("no data rows")
    width = len(names) if names is not None else len(rows[0])
    for i, r in enumerate(rows):
        if len(r) != width:
            raise RaggedRows(f"row {i + first_data_line} has {len(r)} cells, expected {width}")

    if response_column is None:
        rcol = None
    elif isinstance(response_column, str) and not _is_int(response_column):
        if names is None or response_column not in names:
            raise ParseError(f"response column {response_column!r} not found")
        rcol = names.index(response_column)
    else:
        rcol = int(response_column)
        if not -width <= rcol < width:
            raise ParseError(f"response column index {rcol} out of range for {width} columns")
        rcol %= width
    if rcol is not None and width < 2:
        raise ParseError("need at least one curve column besides the response")

    values = np.array(
        [[_parse_cell(c, i + first_data_line, j + 1) for j, c in enumerate(r)] for i, r in enumerate(rows)]
    )
    missing = np.flatnonzero(np.isnan(values).any(axis=1))
    if missing.size:
        raise MissingValues((missing + first_data_line).tolist())
    if rcol is None:
        return FunctionalDataset(unit_grid(width), values, np.zeros(len(values)))
    response = values[:, rcol]
    curves = np.delete(values, rcol, axis=1)
    labels = None
    if label_mode:
        distinct = np.unique(response)
        if distinct.size != 2:
            raise NonBinaryLabels(f"expected two distinct labels, found {distinct.size}")
        labels = (float(distinct[0]), float(distinct[1]))
        response = (response == distinct[1]).astype(float)
    return FunctionalDataset(unit_grid(curves.shape[1]), curves, response, label_mode, labels)


def _is_int(s: str) -> bool:
    try:
        int(s)
        return True
    except ValueError:
        return False


def save_csv(dataset: FunctionalDataset, path, response_name: str = "y") -> None:
    """Write curves then response, one sample per row, with a header."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([f"x{j}" for j in range(dataset.p)] + [response_name])
        response = dataset.response
        if dataset.labels is not None:
            response = np.where(response == 1.0, dataset.labels[1], dataset.labels[0])
        for row, r in zip(dataset.curves, response):
            w.writerow([repr(float(v)) for v in row] + [repr(float(r))])


def bspline_basis(degree: int, knots, t) -> np.ndarray:
    """Evaluate all B-splines of a clamped knot vector (Cox-de Boor).

    Returns an array of shape (len(t), len(knots) - degree - 1). The last
    knot interval is closed on the right so the basis still sums to one at
    the upper boundary.
    """
    knots = np.asarray(knots, dtype=float)
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if degree < 0:
        raise ConfigError("degree must be nonnegative")
    if np.any(np.diff(knots) < 0):
        raise ConfigError("knots must be nondecreasing")
    nbasis = knots.size - degree - 1
    if nbasis < 1:
        raise ConfigError("not enough knots for the requested degree")
    lo, hi = knots[degree], knots[-degree - 1]
    outside = (t < lo) | (t > hi)
    if outside.any():
        raise TOutsideKnotRange(f"{int(outside.sum())} evaluation points outside [{lo}, {hi}]")

    # degree 0: indicator of [k_i, k_{i+1}), last nonempty interval closed
    nint = knots.size - 1
    B = np.zeros((t.size, nint))
    for i in range(nint):
        if knots[i + 1] > knots[i]:
            B[:, i] = (t >= knots[i]) & (t < knots[i + 1])
    last = np.flatnonzero(np.diff(knots) > 0)[-1]
    B[t == knots[last + 1], last] = 1.0

    for d in range(1, degree + 1):
        nb = nint - d
        new = np.zeros((t.size, nb))
        for i in range(nb):
            left = knots[i + d] - knots[i]
            right = knots[i + d + 1] - knots[i + 1]
            if left > 0:
                new[:, i] += (t - knots[i]) / left * B[:, i]
            if right > 0:
                new[:, i] += (knots[i + d + 1] - t) / right * B[:, i + 1]
        B = new
    return B


def clamped_knots(inner_knots: int, low: float, high: float, degree: int = 3) -> np.ndarray:
    inner = np.linspace(low, high, inner_knots + 2)[1:-1]
    return np.concatenate([np.full(degree + 1, low), inner, np.full(degree + 1, high)])


@dataclass(frozen=True)
class SimulationConfig:
    n_samples: int = 50
    grid_size: int = 150
    inner_knots: int = 35
    knot_range: tuple[float, float] = (-0.5, 1.5)
    correlated: bool = False
    rho: float = 0.9
    noise_sd: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.inner_knots < 4:
            raise ConfigError("inner_knots must be at least 4")
        if self.grid_size < 3:
            raise ConfigError("grid_size must be at least 3")
        if self.n_samples < 1:
            raise ConfigError("n_samples must be positive")
        if self.noise_sd < 0:
            raise ConfigError("noise_sd must be nonnegative")
        lo, hi = self.knot_range
        if not (lo < 0 and hi > 1):
            raise ConfigError("knot_range must strictly contain [0, 1]")
        if self.correlated and not -1 < self.rho < 1:
            raise ConfigError("rho must lie in (-1, 1)")

    @property
    def n_coefficients(self) -> int:
        return self.inner_knots + 4


def coefficient_covariance(config: SimulationConfig) -> np.ndarray:
    k = config.n_coefficients
    if not config.correlated:
        return np.eye(k)
    lag = np.abs(np.subtract.outer(np.arange(k), np.arange(k)))
    return config.rho ** lag


def default_true_beta(grid, amplitude: float = 40.0) -> np.ndarray:
    """Sparse, smooth stand-in coefficient function.

    Two raised-cosine bumps supported on [0.1, 0.3] and [0.55, 0.8] (the
    second one negative and wider), exactly zero elsewhere.
    """
    t = np.asarray(grid, dtype=float)

    def bump(a, b):
        u = (t - a) / (b - a)
        inside = (u > 0) & (u < 1)
        return np.where(inside, 0.5 * (1.0 - np.cos(2.0 * np.pi * u)), 0.0)

    return amplitude * (bump(0.1, 0.3) - 0.7 * bump(0.55, 0.8))


def simulate(config: SimulationConfig, true_beta: Callable | Sequence | None = None) -> FunctionalDataset:
    """Draw curves from a random cubic B-spline model and linear responses.

    ``true_beta`` is either values on the grid or a callable of the grid;
    ``None`` uses :func:`default_true_beta`.
    """
    grid = unit_grid(config.grid_size)
    if true_beta is None:
        beta = default_true_beta(grid)
    elif callable(true_beta):
        beta = np.asarray(true_beta(grid), dtype=float)
    else:
        beta = np.asarray(true_beta, dtype=float)
    if beta.shape != grid.shape:
        raise ConfigError(f"true_beta has {beta.size} values, grid has {grid.size}")

    rng = np.random.default_rng(config.seed)
    knots = clamped_knots(config.inner_knots, *config.knot_range)
    B = bspline_basis(3, knots, grid)
    cov = coefficient_covariance(config)
    chol = np.linalg.cholesky(cov)
    xi = rng.standard_normal((config.n_samples, config.n_coefficients)) @ chol.T
    curves = xi @ B.T
    signal = (curves * (1.0 / config.grid_size)) @ beta
    noise = rng.standard_normal(config.n_samples) * config.noise_sd
    return FunctionalDataset(grid, curves, signal + noise)
