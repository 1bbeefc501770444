"""Command-line front end: ``sigtron {stats,train,cv,sweep,compare}``.

Every option may also be given through an environment variable named after
the flag with an ``SGT_`` prefix (``--calpha-mag`` -> ``SGT_CALPHA_MAG``).
Explicit flags win over the environment.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import replace
from fractions import Fraction

import numpy as np

from . import classify as clf
from .data import concat, imbalance_stats, kfold_assign, load_dataset, split_half, standardize
from .exceptions import (
    ConfigurationError,
    DataError,
    NumericFailure,
    UnsupportedParameterError,
)
from .loss import SIC, Focal, Logistic
from .optim import OptimConfig

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3
SUCCESS_SHARE = 0.95
MAXA_CELL = (Fraction(7, 8), Fraction(8, 7))
ENV_PREFIX = "SGT_"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fraction(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number or fraction: {text!r}") from None


def _add_common(p):
    p.add_argument("train", help="training split (or the whole set with --split-half)")
    p.add_argument("test", nargs="?", help="test split")
    p.add_argument("--format", choices=["csv", "libsvm"], help="input format (default: by extension)")
    p.add_argument("--split-half", action="store_true",
                   help="use the first/second half of TRAIN as train/test")
    p.add_argument("--no-standardize", action="store_true",
                   help="skip dimension-wise standardization")


def _add_model(p, loss=True):
    if loss:
        p.add_argument("--loss", choices=["sic", "focal", "logistic"], default="sic")
        p.add_argument("--alpha-pos", type=_fraction, default=Fraction(1))
        p.add_argument("--alpha-neg", type=_fraction, default=Fraction(1))
        p.add_argument("--pi", type=float, default=0.5)
        p.add_argument("--gamma", type=float, default=1.0)
        p.add_argument("--xi", type=float, default=0.0)
    p.add_argument("--calpha-mag", type=float, default=2.0)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--lambda", dest="lam", type=float, help="fixed regularization weight")
    group.add_argument("--cv-folds", type=int, default=4)
    p.add_argument("--m", type=int, default=40, help="L-BFGS memory")
    p.add_argument("--c2", type=float, default=0.4, help="strong Wolfe constant")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    p.add_argument("--out", help="output path or prefix")


def build_parser():
    parser = _Parser(prog="sigtron", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("stats", help="class and scale-class imbalance ratios")
    _add_common(p)

    p = sub.add_parser("train", help="fit one model and report accuracy")
    _add_common(p)
    _add_model(p)

    p = sub.add_parser("cv", help="cross-validated accuracy over the lambda grid")
    _add_common(p)
    _add_model(p)

    p = sub.add_parser("sweep", help="SIC accuracy over the (alpha+, alpha-) grid")
    _add_common(p)
    _add_model(p, loss=False)
    p.add_argument("--alphas", type=int, default=10,
                   help="grid uses |alpha-1| = 1/k for k = 1..ALPHAS (default 10)")

    p = sub.add_parser("compare", help="focal grid and logistic baseline against SIC")
    _add_common(p)
    _add_model(p, loss=False)
    p.add_argument("--alpha-pos", type=_fraction)
    p.add_argument("--alpha-neg", type=_fraction)
    p.add_argument("--alphas", type=int, default=10,
                   help="SIC sweep size when no fixed cell is given")
    return parser


def _env_defaults(parser, environ):
    """Turn ``SGT_*`` variables into parser defaults, validated by the parser."""
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            for sp in action.choices.values():
                _env_defaults(sp, environ)
            continue
        if not action.option_strings:
            continue
        flag = max(action.option_strings, key=len)
        key = ENV_PREFIX + flag.lstrip("-").replace("-", "_").upper()
        if key not in environ:
            continue
        raw = environ[key]
        if action.nargs == 0:
            value = raw.strip().lower() in ("1", "true", "yes", "on")
        else:
            try:
                value = action.type(raw) if action.type else raw
            except (ValueError, argparse.ArgumentTypeError) as exc:
                raise UsageError(f"{key}={raw!r}: {exc}") from None
            if action.choices is not None and value not in action.choices:
                raise UsageError(f"{key}={raw!r}: choose from {list(action.choices)}")
        parser.set_defaults(**{action.dest: value})


def parse_args(argv=None, environ=None):
    parser = build_parser()
    _env_defaults(parser, os.environ if environ is None else environ)
    args = parser.parse_args(argv)
    if getattr(args, "lam", None) is not None and args.lam < 0:
        raise UsageError("--lambda must be nonnegative")
    if getattr(args, "jobs", 1) < 1:
        raise UsageError("--jobs must be positive")
    if getattr(args, "cv_folds", 4) < 2:
        raise UsageError("--cv-folds must be at least 2")
    if getattr(args, "alphas", 1) < 1:
        raise UsageError("--alphas must be positive")
    return args


def config_dict(args):
    """JSON-ready echo of the parsed configuration."""
    out = {}
    for k, v in sorted(vars(args).items()):
        out[k] = str(v) if isinstance(v, Fraction) else v
    return out


# ---------------------------------------------------------------------------
# data handling


def _load_splits(args, require_test=False):
    train = load_dataset(args.train, args.format)
    test = None
    if args.test:
        if args.split_half:
            raise UsageError("--split-half takes a single input file")
        test = load_dataset(args.test, args.format)
        if test.n_features != train.n_features:
            raise ConfigurationError("train and test have different feature counts")
        test = _align_labels(train, test)
    elif args.split_half:
        train, test = split_half(train)
    if require_test and test is None:
        raise UsageError("this command needs a test split (or --split-half)")
    return train, test


def _align_labels(train, test):
    """Re-express test labels in the train label encoding."""
    if train.binary and test.binary and train.classes == test.classes:
        return test
    names = list(train.classes)
    raw = ([test.classes[1] if y == 1 else test.classes[0] for y in test.labels]
           if test.binary else [test.classes[y] for y in test.labels])
    unknown = sorted({str(r) for r in raw} - {str(n) for n in names} - {""})
    if unknown:
        raise DataError(f"test labels not seen in training: {', '.join(unknown)}")
    index = {str(n): i for i, n in enumerate(names)}
    ids = np.array([index[str(r)] for r in raw])
    if train.binary:
        labels = np.where(ids == 1, 1, -1)
    else:
        labels = ids
    return replace(test, labels=labels, classes=train.classes, binary=train.binary)


def _prepare(args, require_test=False):
    train, test = _load_splits(args, require_test)
    if not args.no_standardize:
        _, out = standardize(train, [test] if test is not None else [])
        train = out[0]
        test = out[1] if test is not None else None
    return train, test


def _optim(args):
    try:
        return OptimConfig(m=args.m, c2=args.c2)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _spec(args):
    if args.loss == "logistic":
        return Logistic()
    if args.loss == "focal":
        return Focal(args.pi, args.gamma, args.xi)
    return SIC.from_alphas(float(args.alpha_pos), float(args.alpha_neg), args.calpha_mag)


def _fmt(v):
    return "nan" if v is None or v != v else f"{v:.2f}"


# ---------------------------------------------------------------------------
# commands


def _stats_rows(ds):
    if ds.binary:
        s = imbalance_stats(ds)
        return (s.r_c,), (s.r_sc,)
    rc, rsc = [], []
    for k in range(ds.n_classes):
        if not np.any(ds.labels == k) or np.all(ds.labels == k):
            continue
        s = imbalance_stats(ds, positive_class=k)
        rc.append(s.r_c)
        rsc.append(s.r_sc)
    if not rc:
        raise ConfigurationError("need at least two populated classes")
    return (min(rc), max(rc)), (min(rsc), max(rsc))


def cmd_stats(args, out):
    train, test = _load_splits(args)
    parts = [("combined", concat(train, test) if test is not None else train), ("train", train)]
    if test is not None:
        parts.append(("test", test))
    if not args.no_standardize:
        # benchmark convention: standardize the combined data once
        st, _ = standardize(parts[0][1])
        parts = [(name, ds.with_features(st.transform(ds.features))) for name, ds in parts]
    binary = train.binary
    head = "split,n,r_c,r_sc" if binary else "split,n,r_c_min,r_c_max,r_sc_min,r_sc_max"
    print(head, file=out)
    for name, ds in parts:
        rc, rsc = _stats_rows(ds)
        print(",".join([name, str(ds.n_samples)] + [f"{v:.4f}" for v in rc + rsc]), file=out)
    if test is None:
        print("test: n/a", file=out)
    return EXIT_OK


def cmd_train(args, out):
    train, test = _prepare(args)
    cfg = _optim(args)
    model = clf.fit_model(train, _spec(args), cfg, args.cv_folds, args.seed, args.lam)
    lam_txt = ",".join(f"{l:g}" for l in model.lambdas)
    print(f"lambda: {lam_txt}", file=out)
    for h in model.planes:
        t = h.trace
        print(f"iterations: {t.n_iter}  status: {t.status}  "
              f"|grad|_inf: {t.final_grad_norm:.3e}", file=out)
    print(f"train accuracy: {_fmt(clf.accuracy(model.predict(train.features), train.labels))}",
          file=out)
    if test is not None:
        print(f"test accuracy: {_fmt(clf.accuracy(model.predict(test.features), test.labels))}",
              file=out)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            dim = train.n_features
            fh.write("class," + ",".join(f"w{i + 1}" for i in range(dim)) + ",b\n")
            labels = [train.classes[1]] if model.binary else list(train.classes)
            for lab, h in zip(labels, model.planes):
                fh.write(f"{lab}," + ",".join(repr(float(v)) for v in h.w) + f",{h.b!r}\n")
        _write_json(args.out + ".json", {"config": config_dict(args),
                                         "lambda": list(model.lambdas)})
    return EXIT_OK


def cmd_cv(args, out):
    train, _ = _prepare(args)
    cfg = _optim(args)
    spec = _spec(args)
    train = kfold_assign(train, args.cv_folds, args.seed)
    views = [("", train)] if train.binary else [
        (f"{train.classes[k]}", train.one_vs_rest(k)) for k in range(train.n_classes)]
    report = {}
    for name, view in views:
        best, means = clf.cross_validate_lambda(view, spec, cfg, args.cv_folds, args.seed)
        prefix = f"[{name}] " if name else ""
        print(f"{prefix}lambda,cv_accuracy", file=out)
        for lam, acc in zip(clf.LAMBDA_GRID, means):
            print(f"{prefix}{lam:g},{acc:.4f}", file=out)
        print(f"{prefix}best lambda: {best:g}", file=out)
        report[name or "binary"] = {"best": best, "means": list(map(float, means))}
    if args.out:
        _write_json(args.out, {"config": config_dict(args), "cv": report})
    return EXIT_OK


def _write_json(path, payload):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)


def _sweep(args, train, test, cfg):
    return clf.sweep_alpha_grid(train, test, args.calpha_mag, cfg, args.cv_folds, args.seed,
                                kmax=args.alphas, jobs=args.jobs, lam=args.lam)


def _sweep_exit(res, out):
    n = res.accuracy.size
    if res.n_failed:
        print(f"failed cells: {res.n_failed}/{n}", file=out)
        for cell, err in sorted(res.errors.items()):
            print(f"  ({cell[0]}, {cell[1]}): {err}", file=out)
    return EXIT_OK if (n - res.n_failed) >= SUCCESS_SHARE * n else EXIT_NUMERIC


def cmd_sweep(args, out):
    train, test = _prepare(args, require_test=True)
    cfg = _optim(args)
    start = time.perf_counter()
    res = _sweep(args, train, test, cfg)
    wall = time.perf_counter() - start
    best = res.best_cell
    if best is None:
        print("best cell: none (all cells failed)", file=out)
    else:
        print(f"best cell: alpha+={best[0]} alpha-={best[1]} accuracy={best[2]:.2f}", file=out)
    if all(a in res.alphas_pos for a in MAXA_CELL):
        print(f"fixed cell (7/8, 8/7) accuracy: {_fmt(res.cell(*MAXA_CELL))}", file=out)
    print(f"cells: {res.accuracy.size}  wall time: {wall:.1f} s", file=out)
    if args.out:
        res.write(args.out)
        side = res.sidecar()
        side["config"] = config_dict(args)
        _write_json(f"{args.out}.json", side)
    else:
        out.write(res.to_csv())
    return _sweep_exit(res, out)


def cmd_compare(args, out):
    train, test = _prepare(args, require_test=True)
    cfg = _optim(args)
    grid = clf.focal_grid()
    specs = [Logistic()] + [Focal(p, g, x) for p, g, x in grid]
    names = ["logistic"] + [
        f"focal pi={p:g} gamma={g} xi={x}"
        + (" (logistic-equivalent)" if (p, g, x) == (0.5, 1, 0) else "")
        for p, g, x in grid]
    sweep = None
    if (args.alpha_pos is None) != (args.alpha_neg is None):
        raise UsageError("give both --alpha-pos and --alpha-neg, or neither")
    if args.alpha_pos is not None:
        specs.append(SIC.from_alphas(float(args.alpha_pos), float(args.alpha_neg),
                                     args.calpha_mag))
        names.append(f"sic alpha+={args.alpha_pos} alpha-={args.alpha_neg}")
    results = clf.evaluate_specs(train, test, specs, cfg, args.cv_folds, args.seed, args.jobs,
                                  args.lam)
    rows = [(n, acc, lams, err) for n, (acc, lams, err) in zip(names, results)]
    if args.alpha_pos is None:
        sweep = _sweep(args, train, test, cfg)
        best = sweep.best_cell
        if best is not None:
            i = sweep.alphas_pos.index(best[0])
            j = sweep.alphas_neg.index(best[1])
            rows.append((f"sic best cell alpha+={best[0]} alpha-={best[1]}", best[2],
                         sweep.chosen_lambda[i][j], None))
    lines = ["model,test_accuracy,lambda"]
    for name, acc, lams, _ in rows:
        lines.append(f"{name},{_fmt(acc)},{';'.join(f'{l:g}' for l in lams)}")
    focal_acc = [r[1] for r in rows[1:1 + len(grid)]]
    summary = (f"focal models: {len(grid)}  best focal: {_fmt(np.nanmax(focal_acc))}  "
               f"logistic: {_fmt(rows[0][1])}")
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        _write_json(args.out + ".json", {
            "config": config_dict(args),
            "failed": {n: e for n, _, _, e in rows if e},
            "sweep": None if sweep is None else sweep.sidecar(),
        })
    else:
        out.write(text)
    print(summary, file=out)
    n_fail = sum(1 for r in rows if r[3] is not None)
    if sweep is not None:
        n_fail += sweep.n_failed
    total = len(rows) + (0 if sweep is None else sweep.accuracy.size - 1)
    return EXIT_OK if (total - n_fail) >= SUCCESS_SHARE * total else EXIT_NUMERIC


COMMANDS = {"stats": cmd_stats, "train": cmd_train, "cv": cmd_cv,
            "sweep": cmd_sweep, "compare": cmd_compare}


def main(argv=None, environ=None, out=None):
    out = sys.stdout if out is None else out
    try:
        args = parse_args(argv, environ)
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"sigtron: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UnsupportedParameterError as exc:
        print(f"sigtron: bad parameter: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, ConfigurationError, OSError) as exc:
        print(f"sigtron: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (NumericFailure, FloatingPointError, ArithmeticError) as exc:
        print(f"sigtron: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
