"""Command-line pipeline: fetch, features, reorder, label, dataset, train,
predict, evaluate and report.

Exit codes: 0 on success, 1 for usage or configuration errors, 2 for data
errors (unreadable matrices, missing rows, bad model files, ...).
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import json
import os
import sys
import time
import warnings
from concurrent.futures import ThreadPoolExecutor

from . import __version__
from .errors import ConfigError, EmptyDataset, IncompleteRecord, ParseError, ReorderError
from .features import bandwidth, extract_features, profile
from .fill import etree_column_counts, label_from_timings, proxy_label, read_timings
from .matrix import apply_permutation, symmetrize
from .ml import (
    ALGORITHMS,
    DEFAULT_GRIDS,
    Dataset,
    evaluate,
    grid_search,
    load_model,
    parse_grid_spec,
    predict,
    read_dataset,
    save_model,
    train_classifier,
    train_test_split,
    write_dataset,
)
from .ml.scaling import KINDS
from .mmio import default_cache_dir, fetch_collection_matrix, read_matrix_market, write_matrix_market
from .orderings import LABELS, NDConfig, OrderingLabel, ordering_for_graph
from .report import read_predictions, render_table, report_csv, summarize
from .synth import generate_corpus


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _warn(msg):
    print(f"warning: {msg}", file=sys.stderr)


@contextlib.contextmanager
def _output(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _matrix_name(path):
    base = os.path.basename(path)
    return base[:-4] if base.endswith(".mtx") else base


def _mtx_files(paths):
    """Expand directories to their ``.mtx`` files in sorted name order."""
    out = []
    for p in paths:
        if os.path.isdir(p):
            out.extend(os.path.join(p, f) for f in sorted(os.listdir(p)) if f.endswith(".mtx"))
        elif os.path.exists(p):
            out.append(p)
        else:
            raise ParseError(f"no such file or directory: {p}")
    return out


def _map(fn, items, jobs):
    """``fn`` over ``items`` in input order; exceptions are returned, not raised."""

    def safe(x):
        try:
            return fn(x)
        except (ReorderError, OSError) as exc:
            return exc

    if jobs > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(safe, items))
    return [safe(x) for x in items]


def _collect(names, results, skip_bad, what):
    """Pair names with results; report failures and fail unless ``skip_bad``."""
    good, failed = [], []
    for name, res in zip(names, results):
        if isinstance(res, Exception):
            msg = res.strerror if isinstance(res, OSError) and res.strerror else str(res)
            failed.append(name)
            print(f"{'warning' if skip_bad else 'error'}: {name}: {msg}", file=sys.stderr)
        else:
            good.append((name, res))
    if failed and not skip_bad:
        raise ParseError(f"{len(failed)} {what} failed: {', '.join(failed)}")
    return good


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------


def cmd_fetch(args):
    cache = args.cache or default_cache_dir()
    for spec in args.matrices:
        group, sep, name = spec.partition("/")
        if not sep:
            raise ConfigError(f"expected GROUP/NAME, got {spec!r}")
        print(fetch_collection_matrix(group, name, cache, base_url=args.base_url))
    return 0


def _features_of(path):
    return extract_features(read_matrix_market(path)).as_array()


def cmd_features(args):
    files = _mtx_files(args.inputs)
    names = [_matrix_name(f) for f in files]
    rows = _collect(names, _map(_features_of, files, args.jobs), args.skip_bad, "matrices")
    d = Dataset([n for n, _ in rows], [r for _, r in rows], [""] * len(rows))
    with _output(args.output) as fh:
        write_dataset(d, fh)
    return 0


def cmd_reorder(args):
    m = read_matrix_market(args.matrix)
    label = OrderingLabel.parse(args.algorithm)
    g = symmetrize(m)
    p = ordering_for_graph(g, label, NDConfig(args.leaf_threshold))
    pm = apply_permutation(m, p)
    cost = etree_column_counts(g, p)
    if args.output:
        with open(args.output, "wb") as fh:
            write_matrix_market(pm, fh)
    if args.perm_output:
        with open(args.perm_output, "w") as fh:
            fh.write("\n".join(str(v) for v in p.perm.tolist()) + "\n")
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["matrix", "algorithm", "bandwidth_before", "bandwidth_after", "profile_before",
                "profile_after", "fill_in", "factor_nnz", "flops"])
    w.writerow([_matrix_name(args.matrix), label.value, bandwidth(m), bandwidth(pm), profile(m),
                profile(pm), cost.fill_in, cost.factor_nnz, cost.flops])
    return 0


def _label_rows(d, args):
    if args.mode == "proxy":
        if not args.matrices:
            raise ConfigError("proxy mode needs --matrices DIR")
        missing = [n for n in d.names if not os.path.exists(os.path.join(args.matrices, n + ".mtx"))]
        if missing:
            raise IncompleteRecord(f"no matrix file in {args.matrices} for: {', '.join(missing)}")
        cfg = NDConfig(args.leaf_threshold)

        def one(name):
            return proxy_label(read_matrix_market(os.path.join(args.matrices, name + ".mtx")), cfg).value

        results = _map(one, d.names, args.jobs)
    else:
        if not args.timings:
            raise ConfigError("timings mode needs --timings CSV")
        records = read_timings(args.timings)
        missing = [n for n in d.names if n not in records]
        if missing:
            raise IncompleteRecord(f"no timing row for: {', '.join(missing)}")
        results = [label_from_timings(records[n]).value for n in d.names]
    return _collect(d.names, results, args.skip_bad, "labels")


def cmd_label(args):
    d = read_dataset(args.features)
    good = dict(_label_rows(d, args))
    keep = [i for i, n in enumerate(d.names) if n in good]
    out = d.subset(keep)
    out = out.with_labels([good[n] for n in out.names])
    with _output(args.output) as fh:
        write_dataset(out, fh)
    return 0


def cmd_dataset(args):
    cfg = NDConfig(args.leaf_threshold)
    if args.synthetic:
        corpus = generate_corpus(args.synthetic, seed=args.seed, n_min=args.n_min, n_max=args.n_max)
        if args.matrices_out:
            os.makedirs(args.matrices_out, exist_ok=True)
            for name, m in corpus:
                with open(os.path.join(args.matrices_out, name + ".mtx"), "wb") as fh:
                    write_matrix_market(m, fh)

        def one(item):
            return extract_features(item[1]).as_array(), proxy_label(item[1], cfg).value

        names = [n for n, _ in corpus]
        rows = _collect(names, _map(one, corpus, args.jobs), False, "matrices")
    elif args.source:
        files = _mtx_files([args.source])

        def one(path):
            m = read_matrix_market(path)
            return extract_features(m).as_array(), proxy_label(m, cfg).value

        rows = _collect([_matrix_name(f) for f in files], _map(one, files, args.jobs), args.skip_bad, "matrices")
    else:
        raise ConfigError("dataset needs a matrix directory or --synthetic N")
    d = Dataset([n for n, _ in rows], [r[0] for _, r in rows], [r[1] for _, r in rows])
    with _output(args.output) as fh:
        write_dataset(d, fh)
    if args.train_out or args.test_out:
        if not (args.train_out and args.test_out):
            raise ConfigError("--train-out and --test-out go together")
        train, test = train_test_split(d, args.ratio, args.seed)
        write_dataset(train, args.train_out)
        write_dataset(test, args.test_out)
    return 0


def _load_labeled(path):
    d = read_dataset(path)
    if len(d) == 0:
        raise EmptyDataset(f"{path} has no rows")
    if not d.labeled:
        unlabeled = [n for n, y in zip(d.names, d.y) if not y]
        raise ParseError(f"{path}: unlabeled rows: {', '.join(unlabeled[:10])}")
    return d


def cmd_train(args):
    d = _load_labeled(args.dataset)
    grid = parse_grid_spec(args.grid) if args.grid else DEFAULT_GRIDS[args.algorithm]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        if len(d.classes()) < 2 or len(d) < args.k:
            best = {k: v[0] for k, v in grid.items()}
            table = [(best, float("nan"))]
            _warn("too few rows or classes for cross-validation; using the first grid point")
        else:
            best, table = grid_search(d, args.algorithm, grid, k=args.k, seed=args.seed,
                                      scaler=args.scaler, n_jobs=args.jobs)
        model = train_classifier(d, args.algorithm, best, seed=args.seed, scaler=args.scaler, n_jobs=args.jobs)
    for note in model.warnings:
        _warn(note)
    save_model(model, args.output)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["params", "cv_accuracy"])
    for params, score in table:
        w.writerow([json.dumps(params, sort_keys=True), f"{score:.4f}"])
    print(f"best: {json.dumps(best, sort_keys=True)}", file=sys.stderr)
    return 0


def cmd_predict(args):
    model = load_model(args.model)
    files = _mtx_files(args.inputs)

    def one(path):
        m = read_matrix_market(path)
        t0 = time.perf_counter()
        label = predict(model, extract_features(m))
        return label, time.perf_counter() - t0

    rows = _collect([_matrix_name(f) for f in files], _map(one, files, args.jobs), args.skip_bad, "matrices")
    with _output(args.output) as fh:
        for name, (label, secs) in rows:
            fh.write(f"{name},{label}\n" if args.no_times else f"{name},{label},{secs:.6f}\n")
    return 0


def cmd_evaluate(args):
    model = load_model(args.model)
    r = evaluate(model, _load_labeled(args.dataset))
    print(f"accuracy: {r.accuracy_percent:.2f}% ({r.p_true}/{r.p_all})")
    width = max(len(lab) for lab in r.labels)
    print(f"{'true/pred':<9}  " + "  ".join(f"{lab:>{width}}" for lab in r.labels))
    for lab, row in zip(r.labels, r.confusion):
        print(f"{lab:<9}  " + "  ".join(f"{c:>{width}}" for c in row))
    return 0


def cmd_report(args):
    timings = read_timings(args.timings)
    preds = read_predictions(args.predictions)
    times = [s for _, _, s in preds]
    summary = summarize(timings, [(n, lab) for n, lab, _ in preds],
                        None if args.no_times or None in times else times)
    sys.stdout.write(render_table(summary))
    if args.csv_out:
        with open(args.csv_out, "w", newline="") as fh:
            fh.write(report_csv(summary))
    return 0


# --------------------------------------------------------------------------
# argument parsing
# --------------------------------------------------------------------------


def _common(defaults: bool):
    """Flags accepted both before and after the subcommand."""
    p = argparse.ArgumentParser(add_help=False)
    d = (lambda v: v) if defaults else (lambda v: argparse.SUPPRESS)
    p.add_argument("--seed", type=int, default=d(42), help="master random seed (default 42)")
    p.add_argument("--cache", default=d(None), help="matrix cache directory")
    p.add_argument("--skip-bad", action="store_true", default=d(False), help="warn about bad inputs instead of failing")
    p.add_argument("--no-times", action="store_true", default=d(False), help="omit wall-clock fields")
    p.add_argument("--jobs", type=int, default=d(1), help="worker threads (default 1)")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="reorder-advisor", description=__doc__.split("\n\n")[0], parents=[_common(True)])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = [_common(False)]
    leaf = dict(type=int, default=32, help="nested-dissection leaf size (default 32)")
    algos = [lab.value.lower() for lab in LABELS] + ["scotch"]

    p = sub.add_parser("fetch", parents=common, help="download collection matrices into the cache")
    p.add_argument("matrices", nargs="+", metavar="GROUP/NAME")
    p.add_argument("--base-url", default="https://sparse.tamu.edu/MM")
    p.set_defaults(func=cmd_fetch)

    p = sub.add_parser("features", parents=common, help="feature CSV for .mtx files or directories")
    p.add_argument("inputs", nargs="+")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_features)

    p = sub.add_parser("reorder", parents=common, help="apply one ordering and report its cost")
    p.add_argument("matrix")
    p.add_argument("-a", "--algorithm", type=str.lower, choices=algos, default="amd")
    p.add_argument("-o", "--output", help="write the permuted matrix here")
    p.add_argument("--perm-output", help="write perm[old] = new, one per line")
    p.add_argument("--leaf-threshold", **leaf)
    p.set_defaults(func=cmd_reorder)

    p = sub.add_parser("label", parents=common, help="fill the label column of a feature CSV")
    p.add_argument("features")
    p.add_argument("--mode", choices=("proxy", "timings"), default="proxy")
    p.add_argument("--matrices", help="directory holding <name>.mtx (proxy mode)")
    p.add_argument("--timings", help="matrix,rcm,amd,nd,scotch CSV (timings mode)")
    p.add_argument("--leaf-threshold", **leaf)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_label)

    p = sub.add_parser("dataset", parents=common, help="labeled dataset from a directory or a synthetic corpus")
    p.add_argument("source", nargs="?", help="directory of .mtx files")
    p.add_argument("--synthetic", type=int, metavar="N", help="generate N synthetic matrices instead")
    p.add_argument("--n-min", type=int, default=50)
    p.add_argument("--n-max", type=int, default=2000)
    p.add_argument("--matrices-out", help="also write the synthetic matrices here")
    p.add_argument("--ratio", type=float, default=0.8, help="train fraction for --train-out/--test-out")
    p.add_argument("--train-out")
    p.add_argument("--test-out")
    p.add_argument("--leaf-threshold", **leaf)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_dataset)

    p = sub.add_parser("train", parents=common, help="grid search, refit and save a model")
    p.add_argument("dataset")
    p.add_argument("-o", "--output", required=True, help="model file to write")
    p.add_argument("--algorithm", choices=ALGORITHMS, default="random_forest")
    p.add_argument("--scaler", choices=KINDS, default="standardization")
    p.add_argument("--grid", help="JSON object, JSON file or key=v1,v2;key2=v3")
    p.add_argument("-k", "--k", type=int, default=5, dest="k", help="cross-validation folds (default 5)")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", parents=common, help="predict an ordering per matrix")
    p.add_argument("model")
    p.add_argument("inputs", nargs="+")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("evaluate", parents=common, help="accuracy and confusion matrix on a labeled CSV")
    p.add_argument("model")
    p.add_argument("dataset")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("report", parents=common, help="solve-time summary of predictions")
    p.add_argument("timings")
    p.add_argument("predictions")
    p.add_argument("--csv-out", help="write per-matrix rows as CSV")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.jobs < 1:
        print("error: --jobs must be >= 1", file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except ReorderError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:  # argument values the parser could not vet
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
