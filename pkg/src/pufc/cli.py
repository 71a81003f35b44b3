"""
Batch command-line front end.

Subcommands: cluster, split, run, sweep-epsilon, sweep-fraction, compare.
Every artifact is written under --out and starts with a comment block of
the fully resolved configuration so a run can be reproduced exactly.
Exit codes: 0 success, 1 usage error, 2 data error, 3 algorithm failure.
"""
import argparse
import os
import sys

import numpy as np

from . import baselines, classifiers, dataset as ds, evaluation, figures, pipeline, smuc


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_dataset_flags(p):
    p.add_argument("--dataset", required=True, help="path to a CSV file with a header row")
    p.add_argument("--label-col", required=True, help="label column name or zero-based index")
    p.add_argument("--positive-label", required=True, help="raw label value mapped to +1")
    p.add_argument("--drop-cols", default="", help="comma-separated columns to drop")
    p.add_argument("--binarize-col", default=None, help="numeric column to threshold into labels")
    p.add_argument("--binarize-threshold", type=float, default=None)
    p.add_argument("--no-standardize", action="store_true")
    p.add_argument("--name", default=None, help="dataset name used in reports")


def _add_experiment_flags(p, with_method=True):
    if with_method:
        p.add_argument("--method", default="pufc", choices=sorted(evaluation.METHODS))
    p.add_argument("--classifier", default="nearest-centroid",
                   choices=classifiers.classifier_kinds())
    p.add_argument("--epsilon", type=float, default=0.1)
    p.add_argument("--eta", type=float, default=1.0)
    p.add_argument("--labeled-frac", type=float, default=0.3)
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-5)
    p.add_argument("--max-iter", type=int, default=None,
                   help="iteration cap for the clustering loop and baseline loops")
    p.add_argument("--spy-ratio", type=float, default=0.10)
    p.add_argument("--noise-level", type=float, default=0.15)
    p.add_argument("--jobs", type=int, default=1, help="fold-level parallelism")


def build_parser():
    parser = _Parser(prog="pufc", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    for cmd, helptext in [
        ("cluster", "fit the fuzzy clustering once and dump the membership matrix"),
        ("split", "run the reliable-sample split once over the whole dataset"),
        ("run", "one cross-validated experiment cell"),
        ("sweep-epsilon", "cross-validated sweep over band widths"),
        ("sweep-fraction", "cross-validated sweep over labeled fractions"),
        ("compare", "run several methods under identical folds and masks"),
    ]:
        p = sub.add_parser(cmd, help=helptext)
        _add_dataset_flags(p)
        _add_experiment_flags(p, with_method=(cmd in ("run",)))
        p.add_argument("--out", required=True, help="output directory")
        if cmd == "sweep-epsilon":
            p.add_argument("--grid", default="0,0.05,0.1,0.15,0.2,0.25,0.3,0.35,0.4,0.45",
                           help="comma-separated epsilon values")
        if cmd == "sweep-fraction":
            p.add_argument("--fractions", default="0.2,0.3,0.4,0.5,0.6")
        if cmd == "compare":
            p.add_argument("--methods", default="pufc,spy,basic,pruning")
    return parser


def _smuc_config(args):
    return smuc.SmucConfig(eta=args.eta, tol=args.tol,
                           max_iter=args.max_iter if args.max_iter else 300)


def _experiment_config(args, method=None):
    return evaluation.ExperimentConfig(
        method=method or getattr(args, "method", "pufc"),
        labeled_fraction=args.labeled_frac,
        epsilon=args.epsilon,
        folds=args.folds,
        seed=args.seed,
        classifier_kind=args.classifier,
        smuc=_smuc_config(args),
        spy_ratio=args.spy_ratio,
        noise_level=args.noise_level,
        max_iter=args.max_iter if args.max_iter else 50,
        standardize=not args.no_standardize,
    )


def _validate(args):
    if not 0.0 <= args.epsilon < 0.5:
        raise UsageError(f"--epsilon must be in [0, 0.5), got {args.epsilon}")
    if not 0.0 < args.labeled_frac <= 1.0:
        raise UsageError(f"--labeled-frac must be in (0, 1], got {args.labeled_frac}")
    if args.folds < 2:
        raise UsageError("--folds must be >= 2")
    if args.eta <= 0:
        raise UsageError("--eta must be > 0")
    if (args.binarize_col is None) != (args.binarize_threshold is None):
        raise UsageError("--binarize-col and --binarize-threshold go together")


def _load(args):
    label_col = int(args.label_col) if args.label_col.lstrip("-").isdigit() else args.label_col
    drop = [c for c in args.drop_cols.split(",") if c]
    drop = [int(c) if c.lstrip("-").isdigit() else c for c in drop]
    d = ds.load_csv(args.dataset, label_col, args.positive_label,
                    drop_columns=drop, name=args.name)
    if args.binarize_col is not None:
        d = ds.binarize(d, args.binarize_col, args.binarize_threshold)
    return d


def _config_header(args):
    keys = sorted(k for k in vars(args) if k != "command")
    lines = [f"# command = {args.command}"]
    lines += [f"# {k} = {getattr(args, k)}" for k in keys]
    return "\n".join(lines) + "\n"


def _write(out_dir, filename, header, body):
    path = os.path.join(out_dir, filename)
    with open(path, "w") as fh:
        fh.write(header)
        fh.write(body)
    return path


def _cmd_cluster(args, d, out, header):
    train = np.arange(d.n)
    data = d if args.no_standardize else ds.standardize(d, train)
    pu = ds.make_pu_view(data, train, args.labeled_frac, args.seed)
    order = np.concatenate([pu.positive_indices, pu.unlabeled_indices])
    prior = smuc.seed_prior(order.size, 2, [(i, 0) for i in range(pu.positive_indices.size)])
    model = smuc.fit(data.features[order], prior, _smuc_config(args))
    _write(out, "smuc_report.txt", header, smuc.model_report(model))
    _write(out, "memberships.csv", header, smuc.memberships_csv(model))
    figures.plot_objective_trace(model.objective_trace, os.path.join(out, "objective.png"))
    return 0


def _cmd_split(args, d, out, header):
    train = np.arange(d.n)
    data = d if args.no_standardize else ds.standardize(d, train)
    pu = ds.make_pu_view(data, train, args.labeled_frac, args.seed)
    cfg = pipeline.PufcConfig(epsilon=args.epsilon, smuc=_smuc_config(args),
                              classifier_kind=args.classifier)
    model = pipeline.run_pufc(data.features, pu, cfg)
    _write(out, "split_report.txt", header, pipeline.split_report(model, pu))
    _write(out, "pu_manifest.txt", header, ds.pu_view_manifest(pu))
    s = model.split
    category = np.empty(pu.unlabeled_indices.size, dtype=object)
    category[s.rn] = "rn"
    category[s.rp] = "rp"
    category[s.noise] = "noise"
    rows = ["index,u_plus,category,final_label"]
    for pos, idx in enumerate(pu.unlabeled_indices):
        rows.append(f"{idx},{s.u_plus[pos]:.10f},{category[pos]},{model.labeled_u[pos]}")
    _write(out, "split.csv", header, "\n".join(rows) + "\n")
    return 0


def _cmd_run(args, d, out, header):
    cfg = _experiment_config(args)
    result = evaluation.run_cv_experiment(d, cfg, n_jobs=args.jobs)
    plan = ds.stratified_k_fold(d, cfg.folds, cfg.seed)
    body = evaluation.FOLD_CSV_HEADER + "\n" + "\n".join(
        evaluation.fold_csv_rows(d.name, result)) + "\n"
    _write(out, "folds.csv", header, body)
    _write(out, "summary.csv", header,
           evaluation.SUMMARY_CSV_HEADER + "\n" + evaluation.summary_csv_row(d.name, result) + "\n")
    _write(out, "folds_manifest.txt", header, ds.fold_plan_manifest(plan))
    s = result.summary
    text = (f"dataset {d.name}  method {cfg.method}  classifier {cfg.classifier_kind}\n"
            f"labeled_fraction {cfg.labeled_fraction}  epsilon {cfg.epsilon}  folds {cfg.folds}\n"
            f"mean F = {s.mean_pct:.4f}%  std = {s.std_pct:.4f}%\n")
    _write(out, "summary.txt", header, text)
    if all(result.flags):
        print("warning: every fold failed; see folds.csv flags", file=sys.stderr)
        return 3
    return 0


def _sweep_outputs(args, d, out, header, results, xlabel, figure_fn, figure_name):
    fold_lines = [evaluation.FOLD_CSV_HEADER]
    summary_lines = [evaluation.SUMMARY_CSV_HEADER]
    for _, r in results:
        fold_lines += evaluation.fold_csv_rows(d.name, r)
        summary_lines.append(evaluation.summary_csv_row(d.name, r))
    _write(out, "folds.csv", header, "\n".join(fold_lines) + "\n")
    _write(out, "sweep.csv", header, "\n".join(summary_lines) + "\n")
    cells = [[(r.summary.mean_pct, r.summary.std_pct) for _, r in results]]
    table = evaluation.render_table([d.name], [f"{x}" for x, _ in results], cells,
                                    mark_best_per_row=True)
    _write(out, "table.txt", header, f"# columns: {xlabel}\n" + table)
    figure_fn(results, os.path.join(out, figure_name))
    return 0


def _cmd_sweep_epsilon(args, d, out, header):
    grid = [float(x) for x in args.grid.split(",") if x]
    for e in grid:
        if not 0.0 <= e < 0.5:
            raise UsageError(f"grid epsilon {e} outside [0, 0.5)")
    results, best = evaluation.epsilon_sweep(d, grid, _experiment_config(args, "pufc"),
                                             n_jobs=args.jobs)
    rc = _sweep_outputs(args, d, out, header, results, "epsilon",
                        figures.plot_epsilon_sweep, "epsilon_sweep.png")
    e, r = results[best]
    _write(out, "best.txt", header,
           f"best epsilon = {e}  mean F = {r.summary.mean_pct:.4f}%  "
           f"std = {r.summary.std_pct:.4f}%\n")
    return rc


def _cmd_sweep_fraction(args, d, out, header):
    fractions = [float(x) for x in args.fractions.split(",") if x]
    for f in fractions:
        if not 0.0 < f <= 1.0:
            raise UsageError(f"fraction {f} outside (0, 1]")
    results = evaluation.fraction_sweep(d, fractions, _experiment_config(args, "pufc"),
                                        n_jobs=args.jobs)
    return _sweep_outputs(args, d, out, header, results, "labeled fraction",
                          figures.plot_fraction_sweep, "fraction_sweep.png")


def _cmd_compare(args, d, out, header):
    methods = [m for m in args.methods.split(",") if m]
    for m in methods:
        if m not in evaluation.METHODS:
            raise UsageError(f"unknown method {m!r}")
    results, best = evaluation.compare_methods(d, methods, _experiment_config(args, methods[0]),
                                               n_jobs=args.jobs)
    fold_lines = [evaluation.FOLD_CSV_HEADER]
    summary_lines = [evaluation.SUMMARY_CSV_HEADER]
    for _, r in results:
        fold_lines += evaluation.fold_csv_rows(d.name, r)
        summary_lines.append(evaluation.summary_csv_row(d.name, r))
    _write(out, "folds.csv", header, "\n".join(fold_lines) + "\n")
    _write(out, "comparison.csv", header, "\n".join(summary_lines) + "\n")
    cells = [[(r.summary.mean_pct, r.summary.std_pct) for _, r in results]]
    table = evaluation.render_table([d.name], methods, cells, mark_best_per_row=True)
    _write(out, "table.txt", header, table)
    figures.plot_method_comparison(results, os.path.join(out, "comparison.png"))
    return 0


_COMMANDS = {
    "cluster": _cmd_cluster,
    "split": _cmd_split,
    "run": _cmd_run,
    "sweep-epsilon": _cmd_sweep_epsilon,
    "sweep-fraction": _cmd_sweep_fraction,
    "compare": _cmd_compare,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _validate(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1

    try:
        d = _load(args)
    except ds.DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2

    os.makedirs(args.out, exist_ok=True)
    header = _config_header(args)
    try:
        return _COMMANDS[args.command](args, d, args.out, header)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except ds.DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except (pipeline.PufcError, smuc.SmucError, classifiers.ClassifierError,
            ValueError) as exc:
        print(f"algorithm failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
