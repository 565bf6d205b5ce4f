"""Command-line interface.

Commands: fit, test-iid, test-garch, test-skew, simulate, power-study,
var-backtest.  CSV in, JSON out (stdout and/or --out); exit codes: 0 success,
2 validation error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .calibration import (
    ExperimentConfig,
    garch_bootstrap_pvalue,
    iid_test,
    parse_config_file,
    power_study,
    skew_bootstrap_pvalue,
    var_backtest,
)
from .estimation import estimate_skew_model, fit_ml
from .garch import CCCParams, default_simulation_preset, ebe_fit, sample_ccc
from .sampling import (
    ALTERNATIVE_FAMILIES,
    DiscreteSpectralMeasure,
    SkewStableModel,
    sample_alternative,
    sample_skew,
    sample_spherical,
    substream,
)
from .spherical import load_or_build_amplitude_table
from .univariate import EstimationError, ParameterError

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def read_csv_matrix(path) -> np.ndarray:
    """Strict CSV reader: comma separator, optional single header line,
    rectangular, all finite.  Raises CliError with a line number."""
    if not os.path.exists(path):
        raise CliError(f"input file not found: {path}", EXIT_VALIDATION)
    rows = []
    n_cols = None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            fields = line.split(",")
            try:
                row = [float(v) for v in fields]
            except ValueError:
                if lineno == 1:
                    continue  # header
                raise CliError(f"malformed CSV at line {lineno}: {line!r}",
                               EXIT_VALIDATION)
            if any(not math.isfinite(v) for v in row):
                raise CliError(f"non-finite value at line {lineno}",
                               EXIT_VALIDATION)
            if n_cols is None:
                n_cols = len(row)
            elif len(row) != n_cols:
                raise CliError(
                    f"ragged CSV at line {lineno}: {len(row)} fields, "
                    f"expected {n_cols}", EXIT_VALIDATION)
            rows.append(row)
    if not rows:
        raise CliError("empty CSV", EXIT_VALIDATION)
    return np.asarray(rows, dtype=float)


def _emit(args, command, config, result):
    doc = {
        "library": "stablegof",
        "version": __version__,
        "command": command,
        "config": config,
        "result": result,
    }
    text = json.dumps(doc, indent=2, default=_json_default)
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    print(text)


def _json_default(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    raise TypeError(f"not JSON serializable: {type(obj)}")


def _parse_weights(text, p):
    w = np.array([float(v) for v in text.split(",")])
    if w.shape[0] != p:
        raise CliError(f"--weights needs {p} entries", EXIT_VALIDATION)
    return w


def cmd_fit(args):
    x = read_csv_matrix(args.input)
    if args.mode == "garch":
        fit = ebe_fit(x, args.alpha0, intercept=args.intercept)
        ph = fit.params_hat
        result = {
            "mu": ph.mu, "a1": np.diag(ph.a1), "b1": np.diag(ph.b1),
            "corr": ph.corr, "omega": ph.omega,
            "loglik_per_equation": fit.loglik_per_equation,
            "converged": fit.converged.tolist(),
        }
    elif args.mode == "skew":
        model = estimate_skew_model(x, None if args.alpha0 is None else args.alpha0)
        result = {
            "alpha": model.alpha, "delta": model.delta,
            "spectral_points": model.measure.points,
            "spectral_weights": model.measure.weights,
        }
    else:
        table = (load_or_build_amplitude_table(args.alpha0, x.shape[1])
                 if args.alpha0 < 2.0 else None)
        fit = fit_ml(x, args.alpha0, table)
        result = {
            "delta": fit.delta_hat, "dispersion": fit.dispersion_hat,
            "loglik": fit.loglik, "iterations": fit.iterations,
            "converged": fit.converged,
        }
    _emit(args, "fit", {"alpha0": args.alpha0, "mode": args.mode,
                        "input": args.input}, result)


def cmd_test_iid(args):
    x = read_csv_matrix(args.input)
    tuning = ({"statistic": "kotz", "nu": args.nu, "r": args.r}
              if args.nu is not None else {"statistic": "stablecf", "r": args.r})
    out = iid_test(x, args.alpha0, tuning, args.boot, args.seed, args.level)
    _emit(args, "test-iid", {"alpha0": args.alpha0, "tuning": tuning,
                             "boot": args.boot, "seed": args.seed,
                             "level": args.level, "input": args.input},
          out.as_dict())


def cmd_test_garch(args):
    x = read_csv_matrix(args.input)
    tuning = {"statistic": "stablecf", "r": args.r}
    out = garch_bootstrap_pvalue(x, args.alpha0, tuning, args.boot, args.seed,
                                 args.level, intercept=args.intercept)
    _emit(args, "test-garch", {"alpha0": args.alpha0, "tuning": tuning,
                               "boot": args.boot, "seed": args.seed,
                               "level": args.level, "intercept": args.intercept,
                               "input": args.input}, out.as_dict())


def cmd_test_skew(args):
    x = read_csv_matrix(args.input)
    alpha_mode = "estimated" if args.alpha0 is None else args.alpha0
    out = skew_bootstrap_pvalue(x, alpha_mode, args.r, args.m, args.boot,
                                args.seed, args.level)
    _emit(args, "test-skew", {"alpha0": alpha_mode, "r": args.r, "m": args.m,
                              "boot": args.boot, "seed": args.seed,
                              "level": args.level, "input": args.input},
          out.as_dict())


def cmd_simulate(args):
    rng = substream(args.seed, 0)
    if args.law == "stable":
        x = sample_spherical(args.alpha, args.p, args.n, rng)
    elif args.law == "skew-stable":
        if args.p != 2:
            raise CliError("skew-stable simulation is bivariate", EXIT_VALIDATION)
        pts = DiscreteSpectralMeasure.circle_grid(5)
        weights = np.array([0.1, 0.3, 0.1, 0.4, 0.1])
        x = sample_skew(SkewStableModel(args.alpha, np.zeros(2),
                                        DiscreteSpectralMeasure(pts, weights)),
                        args.n, rng)
    elif args.law == "garch":
        preset = default_simulation_preset(args.p)
        x = sample_ccc(preset, args.n,
                       lambda m, r: sample_spherical(args.alpha, args.p, m, r),
                       rng)
    elif args.law in ALTERNATIVE_FAMILIES:
        x = sample_alternative(args.law, args.p, args.n, rng, nu=args.nu)
    else:
        raise CliError(f"unknown law {args.law!r}", EXIT_VALIDATION)
    if args.csv_out:
        np.savetxt(args.csv_out, x, delimiter=",", fmt="%.17g")
        print(f"wrote {x.shape[0]}x{x.shape[1]} CSV to {args.csv_out}")
    else:
        np.savetxt(sys.stdout, x, delimiter=",", fmt="%.17g")


def cmd_power_study(args):
    cfg = parse_config_file(args.config)
    if args.threads is not None:
        cfg.workers = args.threads
    records = power_study(cfg)
    _emit(args, "power-study", {"config_file": args.config,
                                "resolved": _cfg_dict(cfg)},
          {"table": records})
    if args.pretty:
        print(f"{'method':<18}{'tuning':<26}{'rej %':>8}{'se':>6}")
        for r in records:
            print(f"{r['method']:<18}{str(r['tuning']):<26}"
                  f"{r['rejections']:>8.1f}{r['se']:>6.1f}")


def _cfg_dict(cfg: ExperimentConfig):
    d = dict(cfg.__dict__)
    return d


def cmd_var_backtest(args):
    x = read_csv_matrix(args.input)
    w = _parse_weights(args.weights, x.shape[1])
    levels = [float(v) for v in args.level.split(",")]
    res = var_backtest(x, args.alpha0, levels, args.window, w,
                       intercept=args.intercept)
    _emit(args, "var-backtest", {"alpha0": args.alpha0, "levels": levels,
                                 "window": args.window,
                                 "weights": w, "input": args.input}, res)


def build_parser():
    ap = argparse.ArgumentParser(
        prog="stable-gof",
        description="Goodness-of-fit tests for multivariate stable laws")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, seeded=True):
        p.add_argument("--out", help="also write the JSON document here")
        if seeded:
            p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("fit", help="estimate model parameters")
    p.add_argument("--input", required=True)
    p.add_argument("--alpha0", type=float, default=None)
    p.add_argument("--mode", choices=["iid", "garch", "skew"], default="iid")
    p.add_argument("--intercept", action="store_true")
    common(p, seeded=False)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("test-iid", help="elliptical stable test, i.i.d. data")
    p.add_argument("--input", required=True)
    p.add_argument("--alpha0", type=float, required=True)
    p.add_argument("--r", type=float, default=1.0)
    p.add_argument("--nu", type=int, default=None,
                   help="use the Kotz weight with this nu")
    p.add_argument("--boot", type=int, default=500)
    p.add_argument("--level", type=float, default=0.10)
    common(p)
    p.set_defaults(func=cmd_test_iid)

    p = sub.add_parser("test-garch", help="stable innovations test, CCC-GARCH")
    p.add_argument("--input", required=True)
    p.add_argument("--alpha0", type=float, required=True)
    p.add_argument("--r", type=float, default=1.0)
    p.add_argument("--boot", type=int, default=1000)
    p.add_argument("--level", type=float, default=0.10)
    p.add_argument("--intercept", action="store_true")
    common(p)
    p.set_defaults(func=cmd_test_garch)

    p = sub.add_parser("test-skew", help="asymmetric stable test (bivariate)")
    p.add_argument("--input", required=True)
    p.add_argument("--alpha0", type=float, default=None,
                   help="fixed stability index; omit to estimate")
    p.add_argument("--r", type=float, default=1.0)
    p.add_argument("--m", type=int, default=10)
    p.add_argument("--boot", type=int, default=500)
    p.add_argument("--level", type=float, default=0.10)
    common(p)
    p.set_defaults(func=cmd_test_skew)

    p = sub.add_parser("simulate", help="draw samples and write CSV")
    p.add_argument("--law", required=True,
                   help="stable | skew-stable | garch | " +
                        " | ".join(ALTERNATIVE_FAMILIES))
    p.add_argument("--alpha", type=float, default=1.8)
    p.add_argument("--nu", type=float, default=None)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out", dest="csv_out", help="output CSV path")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("power-study", help="run a study from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--pretty", action="store_true")
    common(p, seeded=False)
    p.set_defaults(func=cmd_power_study)

    p = sub.add_parser("var-backtest", help="one-step-ahead portfolio VaR")
    p.add_argument("--input", required=True)
    p.add_argument("--alpha0", type=float, required=True)
    p.add_argument("--level", default="0.05,0.01")
    p.add_argument("--window", type=int, required=True)
    p.add_argument("--weights", required=True)
    p.add_argument("--intercept", action="store_true", default=True)
    common(p, seeded=False)
    p.set_defaults(func=cmd_var_backtest)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (ParameterError, EstimationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (FloatingPointError, np.linalg.LinAlgError, RuntimeError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
