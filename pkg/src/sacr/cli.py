"""Command-line interface: ``sacr {simulate,fit,evaluate,predict}``.

Exit codes: 0 success, 2 usage error, 3 data error, 4 numerical failure.
Every run writes ``<command>_config.txt`` with the resolved options to the
output directory. Options can also come from a flat ``key = value`` file
given with ``--config``; flags on the command line take precedence.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import numpy as np

from . import estimators as est
from . import fda
from . import selection as sel
from .errors import ConfigError, DataError, NumericalError, SacrError

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERICAL = 4

FIT_ESTIMATORS = ("ridge", "centered-ridge", "roughness", "sacr", "sacr-logistic", "ridge-logistic",
                  "lasso", "adaptive-lasso", "relaxed-lasso", "nng", "bar")


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# argument types


def _positive(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return v


def _nonnegative(text):
    v = float(text)
    if not v >= 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative, got {text}")
    return v


def _unit_interval(text):
    v = float(text)
    if not 0 < v <= 1:
        raise argparse.ArgumentTypeError(f"must lie in (0, 1], got {text}")
    return v


def _count(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return v


def _value_list(text):
    """``a,b,c`` or ``lo:hi:n`` (n log-spaced values from lo to hi)."""
    text = text.strip()
    if ":" in text:
        lo, hi, n = text.split(":")
        return tuple(np.logspace(np.log10(float(lo)), np.log10(float(hi)), int(n)).tolist())
    vals = tuple(float(t) for t in text.split(",") if t.strip())
    if not vals:
        raise argparse.ArgumentTypeError("empty value list")
    return vals


def _bool(text):
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected a boolean, got {text}")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# ---------------------------------------------------------------------------
# parser


def _add_common(p):
    p.add_argument("--out-dir", default="out", help="directory for all outputs (created if needed)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--config", help="flat key = value file; command-line flags win")


def _add_data(p):
    p.add_argument("--data", required=True, help="CSV with one row per curve")
    p.add_argument("--response-col", default="-1", help="response column name or 0-based index")
    p.add_argument("--no-header", action="store_true", help="the CSV has no header row")
    p.add_argument("--classification", action="store_true", help="two-class labels in the response column")


def _add_grid(p):
    p.add_argument("--lambdas", type=_value_list, default=None, help="list a,b,c or lo:hi:n (log-spaced)")
    p.add_argument("--phis", type=_value_list, default=None)
    p.add_argument("--gammas", type=_value_list, default=None)
    p.add_argument("--phi-relaxes", type=_value_list, default=None)
    p.add_argument("--k-inner", type=_count, default=3)
    p.add_argument("--stratify", type=_bool, nargs="?", const=True, default=None,
                   help="stratify folds by class (default: on for classification)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sacr", description="Smoothly adaptively centered ridge for functional data.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("simulate", help="draw a B-spline curve dataset")
    _add_common(p)
    p.add_argument("--n-samples", type=_count, default=50)
    p.add_argument("--grid-size", type=_count, default=150)
    p.add_argument("--inner-knots", type=_count, default=35)
    p.add_argument("--correlated", action="store_true", help="AR(1)-correlated spline coefficients")
    p.add_argument("--rho", type=float, default=0.9)
    p.add_argument("--noise-sd", type=_nonnegative, default=1.0)

    p = sub.add_parser("fit", help="fit one estimator and export coefficients")
    _add_common(p)
    _add_data(p)
    p.add_argument("--estimator", required=True, choices=FIT_ESTIMATORS)
    p.add_argument("--lambda", dest="lam", type=_positive)
    p.add_argument("--phi", type=_unit_interval)
    p.add_argument("--gamma", type=_positive)
    p.add_argument("--phi-relax", type=_unit_interval)
    p.add_argument("--center-file", help="center on the standardized scale, one value per grid point")
    p.add_argument("--cv", action="store_true", help="choose hyperparameters by grid search")
    _add_grid(p)

    p = sub.add_parser("evaluate", help="nested cross-validation of one or more estimators")
    _add_common(p)
    _add_data(p)
    p.add_argument("--estimator", action="append", default=[],
                   help="estimator name; repeat or give a comma-separated list")
    p.add_argument("--k-outer", type=_count, default=5)
    p.add_argument("--repeats", type=_count, default=1)
    p.add_argument("--jobs", type=_count, default=None, help="worker threads (capped by SACR_NUM_THREADS)")
    _add_grid(p)

    p = sub.add_parser("predict", help="apply a saved fit to new curves")
    _add_common(p)
    p.add_argument("--fit", required=True, help="fit JSON written by 'sacr fit'")
    p.add_argument("--data", required=True)
    p.add_argument("--response-col", default="none",
                   help="response column name or index, or 'none' when every column is a curve value")
    p.add_argument("--no-header", action="store_true")
    return parser


def _read_config(path) -> dict:
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file: {exc}") from None
    for n, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{n}: expected key = value")
        key, value = (t.strip() for t in line.split("=", 1))
        out[key.lstrip("-").replace("-", "_")] = value
    return out


def _apply_config(subparser, values: dict):
    """Turn config strings into subparser defaults (so explicit flags still win)."""
    actions = {a.dest: a for a in subparser._actions}
    aliases = {"lambda": "lam"}
    defaults = {}
    for key, text in values.items():
        dest = aliases.get(key, key)
        action = actions.get(dest)
        if action is None or dest in ("help", "config"):
            raise UsageError(f"unknown config key {key!r}")
        try:
            if isinstance(action, argparse._StoreTrueAction):
                value = _bool(text)
            elif isinstance(action, argparse._AppendAction):
                value = [text]
            else:
                value = action.type(text) if action.type else text
        except (argparse.ArgumentTypeError, ValueError) as exc:
            raise UsageError(f"config key {key!r}: {exc}") from None
        if action.choices is not None and value not in action.choices:
            raise UsageError(f"config key {key!r}: invalid choice {value!r}")
        defaults[dest] = value
    for action in subparser._actions:
        if action.dest in defaults:
            action.required = False
    subparser.set_defaults(**defaults)


def _prescan(argv):
    """Command name and --config path, found before full parsing."""
    command = next((a for a in argv if not a.startswith("-")), None)
    config = None
    for i, a in enumerate(argv):
        if a == "--config" and i + 1 < len(argv):
            config = argv[i + 1]
        elif a.startswith("--config="):
            config = a.split("=", 1)[1]
    return command, config


def parse_args(argv):
    argv = list(argv)
    parser = build_parser()
    command, config = _prescan(argv)
    subparsers = parser._subparsers._group_actions[0].choices
    if config and command in subparsers:
        # config values become defaults, so explicit flags still win
        _apply_config(subparsers[command], _read_config(config))
    args = parser.parse_args(argv)
    if args.command is None:
        raise UsageError("a command is required: simulate, fit, evaluate or predict")
    return args


# ---------------------------------------------------------------------------
# output helpers


def _fmt(v) -> str:
    return repr(float(v))


def _write_rows(path, header, columns):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in zip(*columns):
            w.writerow([_fmt(v) for v in row])


def _write_text(path, text):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _echo_config(args, out_dir):
    items = {k: v for k, v in sorted(vars(args).items())}
    lines = []
    for k, v in items.items():
        if isinstance(v, (list, tuple)):
            v = ",".join(repr(x) if isinstance(x, float) else str(x) for x in v)
        lines.append(f"{k} = {v}")
    _write_text(os.path.join(out_dir, f"{args.command}_config.txt"), "\n".join(lines) + "\n")


def _load(args) -> fda.FunctionalDataset:
    col = args.response_col
    if isinstance(col, str) and col.lower() == "none":
        col = None
    return fda.load_csv(args.data, response_column=col, label_mode=getattr(args, "classification", False),
                        header=not args.no_header)


def _grid(args) -> sel.HyperGrid:
    kw = {}
    for flag, name in (("lambdas", "lambda_values"), ("phis", "phi_values"),
                       ("gammas", "gamma_values"), ("phi_relaxes", "phi_relax_values")):
        v = getattr(args, flag, None)
        if v is not None:
            kw[name] = v
    return sel.HyperGrid(**kw)


# ---------------------------------------------------------------------------
# commands


def cmd_simulate(args) -> int:
    config = fda.SimulationConfig(
        n_samples=args.n_samples, grid_size=args.grid_size, inner_knots=args.inner_knots,
        correlated=args.correlated, rho=args.rho, noise_sd=args.noise_sd, seed=args.seed,
    )
    ds = fda.simulate(config)
    beta = fda.default_true_beta(ds.grid)
    fda.save_csv(ds, os.path.join(args.out_dir, "simulated.csv"))
    _write_rows(os.path.join(args.out_dir, "true_beta.csv"), ["t", "beta"], [ds.grid, beta])
    print(f"wrote {ds.n_samples} curves on {ds.p} grid points to {args.out_dir}")
    return EXIT_OK


_HYPER_FLAGS = {"lambda": ("lam", "--lambda"), "phi": ("phi", "--phi"),
                "gamma": ("gamma", "--gamma"), "phi_relax": ("phi_relax", "--phi-relax")}


def _read_center(path, p) -> np.ndarray:
    values = []
    with open(path, encoding="utf-8") as fh:
        for n, line in enumerate(fh, 1):
            for tok in line.replace(",", " ").split():
                try:
                    values.append(float(tok))
                except ValueError:
                    if n > 1 or values:
                        raise DataError(f"{path}:{n}: non-numeric center value {tok!r}") from None
    if len(values) != p:
        raise DataError(f"center file has {len(values)} values, data has {p} grid points")
    return np.array(values)


def cmd_fit(args) -> int:
    name = args.estimator
    ds = _load(args)
    if name in ("sacr-logistic", "ridge-logistic") and not ds.classification:
        raise UsageError(f"{name} needs --classification")
    std, params = fda.standardize(ds)
    A = fda.design_matrix(std)
    center = _read_center(args.center_file, ds.p) if args.center_file else None
    if center is not None and name not in ("centered-ridge", "sacr", "sacr-logistic"):
        raise UsageError(f"--center-file does not apply to {name}")
    spec = sel.EstimatorSpec(name, center=center)
    grid = _grid(args)

    if args.cv:
        search = sel.grid_search(spec, ds, grid, args.k_inner, args.seed, args.stratify)
        point = search.selected
        _write_text(os.path.join(args.out_dir, "grid_search.json"),
                    json.dumps({"selected": point, "table": search.table, "failed": search.failed}, indent=1)
                    + "\n")
    else:
        point = {}
        for hp in sel.TUNED[name]:
            dest, flag = _HYPER_FLAGS[hp]
            value = getattr(args, dest)
            if value is None:
                if hp == "gamma":
                    value = 1.0
                else:
                    raise UsageError(f"{name} needs {flag} (or --cv)")
            point[hp] = value

    initial = None
    if name in sel.NEEDS_INITIAL:
        initial = sel.ridge_cv_initial(A, std.response, grid.lambda_values, seed=args.seed)
    fit = sel.fit_point(spec, A, std.response, point, ds.classification, initial)
    fit.standardization = params
    fit.info["classification"] = ds.classification
    if ds.labels is not None:
        fit.info["labels"] = list(ds.labels)
    est.save_fit(fit, os.path.join(args.out_dir, "fit.json"))

    if isinstance(fit, est.SacrFit):
        _write_rows(os.path.join(args.out_dir, "coefficients.csv"), ["t", "beta", "w", "center"],
                    [ds.grid, fit.beta, fit.w, fit.center])
    else:
        _write_rows(os.path.join(args.out_dir, "coefficients.csv"), ["t", "beta"], [ds.grid, fit.beta])

    out = est.predict(fit, ds, params)
    if isinstance(out, tuple):
        _write_rows(os.path.join(args.out_dir, "fitted.csv"), ["score", "label", "observed"],
                    [out[0], out[1], ds.response])
    else:
        _write_rows(os.path.join(args.out_dir, "fitted.csv"), ["fitted", "residual"],
                    [out, ds.response - out])
    print(f"{name} at {json.dumps(point)}: intercept {fit.intercept:.6g}")
    return EXIT_OK


def cmd_evaluate(args) -> int:
    names = [n.strip() for item in args.estimator for n in item.split(",") if n.strip()]
    if not names:
        raise UsageError("give at least one --estimator")
    for n in names:
        if n not in sel.TUNED:
            raise UsageError(f"unknown estimator {n!r}; choose from {', '.join(sel.ESTIMATORS)}")
    ds = _load(args)
    grid = _grid(args)
    reports, failures = [], []
    for n in names:
        try:
            rep = sel.nested_evaluate(n, ds, grid, args.k_outer, args.k_inner, args.repeats, args.seed,
                                      args.stratify, args.jobs)
        except SacrError as exc:
            failures.append(f"{n}: {type(exc).__name__}: {exc}")
            print(f"{n} failed: {exc}", file=sys.stderr)
            continue
        reports.append(rep)
        _write_text(os.path.join(args.out_dir, f"report_{n}.json"), rep.to_json() + "\n")
        _write_text(os.path.join(args.out_dir, f"report_{n}.txt"), rep.to_text())
    table = sel.comparison_table(reports) if reports else ""
    if failures:
        table += "".join(f"# failed {f}\n" for f in failures)
    _write_text(os.path.join(args.out_dir, "comparison.txt"), table)
    print(sel.protocol_string(args.repeats, args.k_outer, args.k_inner))
    print(table, end="")
    return EXIT_NUMERICAL if failures else EXIT_OK


def cmd_predict(args) -> int:
    fit = est.load_fit(args.fit)
    ds = _load(args)
    classification = bool(fit.info.get("classification", False))
    if classification:
        response = ds.response
        labels = fit.info.get("labels")
        if labels is not None and args.response_col.lower() != "none":
            if not np.all(np.isin(response, labels)):
                raise DataError(f"labels must be one of {labels}")
            response = (response == labels[1]).astype(float)
        ds = fda.FunctionalDataset(ds.grid, ds.curves, response, classification=True)
    out = est.predict(fit, ds)
    path = os.path.join(args.out_dir, "predictions.csv")
    if isinstance(out, tuple):
        _write_rows(path, ["probability" if fit.link == "logit" else "score", "label"], [out[0], out[1]])
    else:
        _write_rows(path, ["prediction"], [out])
    print(f"wrote {ds.n_samples} predictions to {path}")
    return EXIT_OK


COMMANDS = {"simulate": cmd_simulate, "fit": cmd_fit, "evaluate": cmd_evaluate, "predict": cmd_predict}


def main(argv=None) -> int:
    try:
        args = parse_args(sys.argv[1:] if argv is None else argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        os.makedirs(args.out_dir, exist_ok=True)
        _echo_config(args, args.out_dir)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"sacr {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, OSError) as exc:
        print(f"sacr {args.command}: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ConfigError as exc:
        print(f"sacr {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericalError, SacrError, np.linalg.LinAlgError, ValueError) as exc:
        print(f"sacr {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
