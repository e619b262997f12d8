"""Seed sweeps of the active-learning loop, written out as CSV and SVG."""
import csv
import io
import logging
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from ..datasets import (ImbalanceConfig, NoiseConfig, apply_imbalance, corrupt_labels, generate_blobs,
                        imbalanced_classes, load_idx_pair, stratified_split)
from ..errors import AlignmentError, ConfigError, FormatError
from ..loop import LoopConfig, StepRecord, run_loop
from ..metrics import aggregate_runs
from ..model import MlpSpec
from ..pool import ActivePool
from ..seeding import derive_seed
from .config import BlobsSource, config_from_dict, config_to_dict
from .svg import line_chart

log = logging.getLogger(__name__)

HEADER_COMMENT = "# alearn-results v1"
SWEEP_AXES = {
    "noise_lambda": float,
    "epochs": int,
    "query_size": int,
    "pool_limit": int,
    "imbalance_delta": int,
}


@dataclass
class ResultRow:
    scenario: str
    heuristic: str
    seed: int
    step: int
    labelled_count: int
    nll: float
    accuracy: float
    f1: tuple
    wall_time: float


def build_datasets(cfg, seed):
    """Return ``(train, test, shrunk_classes)`` for one seed of a scenario.

    Imbalance and label noise touch the training split only.
    """
    ds_cfg = cfg.dataset
    src = ds_cfg.source
    if isinstance(src, BlobsSource):
        full = generate_blobs(src.n_per_class + src.n_test_per_class, src.classes, src.dim, src.spread,
                              derive_seed(seed, "data"))
        train, test = stratified_split(full, src.n_test_per_class, derive_seed(seed, "split"))
    else:
        train = load_idx_pair(src.images, src.labels, src.limit, src.classes)
        if src.test_images is not None:
            test = load_idx_pair(src.test_images, src.test_labels, src.test_limit, train.n_classes)
        else:
            train, test = stratified_split(train, src.n_test_per_class, derive_seed(seed, "split"))
    shrunk = np.array([], dtype=np.int64)
    if ds_cfg.imbalance_delta:
        imb = ImbalanceConfig(ds_cfg.imbalance_delta, ds_cfg.keep_fraction, derive_seed(seed, "imb"))
        shrunk = imbalanced_classes(imb, train.n_classes)
        train = apply_imbalance(train, imb)
    if ds_cfg.noise_lambda:
        train = corrupt_labels(train, NoiseConfig(ds_cfg.noise_lambda, derive_seed(seed, "noise")))
    return train, test, shrunk


def loop_config(cfg, heuristic, seed):
    lp = cfg.loop
    return LoopConfig(
        initial_labels=lp.initial_labels,
        query_size=lp.query_size,
        mc_samples=lp.mc_samples,
        pool_limit=None if lp.pool_limit < 0 else lp.pool_limit,
        label_budget=lp.label_budget,
        heuristic=heuristic,
        train=cfg.train,
        seed=seed,
    )


def run_cell(cfg, heuristic, seed, on_step=None):
    """Run the loop for one ``(heuristic, seed)`` pair; returns its StepRecords."""
    train, test, _ = build_datasets(cfg, seed)
    spec = MlpSpec(train.dim, cfg.model.hidden, train.n_classes, cfg.model.dropout)
    return run_loop(ActivePool(train), spec, loop_config(cfg, heuristic, seed), test, on_step=on_step)


def run_cells(cfg):
    """``{heuristic: [records per seed]}`` in config order."""
    runs = {}
    for heuristic in cfg.heuristics:
        runs[heuristic] = []
        for seed in cfg.seeds:
            log.info("%s: %s seed %d", cfg.id, heuristic, seed)
            runs[heuristic].append(run_cell(cfg, heuristic, seed))
    return runs


def _g(x):
    return f"{x:.6g}"


def rows_from_runs(cfg, runs):
    rows = []
    for heuristic in cfg.heuristics:
        for seed, records in zip(cfg.seeds, runs[heuristic]):
            for r in records:
                rows.append(ResultRow(cfg.id, heuristic, seed, r.step, r.labelled_count, r.test_nll,
                                      r.test_accuracy, tuple(float(v) for v in r.per_class_f1), r.wall_time))
    return rows


def _results_header(n_classes):
    return (["scenario", "heuristic", "seed", "step", "labelled_count", "nll", "accuracy"]
            + [f"f1_class_{k}" for k in range(n_classes)] + ["wall_time"])


def format_results(rows):
    buf = io.StringIO()
    buf.write(HEADER_COMMENT + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(_results_header(len(rows[0].f1) if rows else 0))
    for r in rows:
        writer.writerow([r.scenario, r.heuristic, r.seed, r.step, r.labelled_count, _g(r.nll), _g(r.accuracy),
                         *(_g(v) for v in r.f1), _g(r.wall_time)])
    return buf.getvalue()


def summarize(runs, heuristics):
    """Aggregate runs per heuristic; adds active gain against Random when present."""
    summaries = [aggregate_runs(runs[h], heuristic=h) for h in heuristics]
    gains = None
    if "Random" in heuristics:
        base = summaries[list(heuristics).index("Random")]
        for s in summaries:
            if not np.array_equal(s.labelled_counts, base.labelled_counts):
                raise AlignmentError("heuristics followed different labelled-count schedules")
        gains = [base.nll_mean - s.nll_mean for s in summaries]
    return summaries, gains


def summary_header(n_classes, with_gain):
    cols = ["scenario", "heuristic", "step", "labelled_count", "n_seeds",
            "nll_mean", "nll_std", "accuracy_mean", "accuracy_std"]
    for k in range(n_classes):
        cols += [f"f1_class_{k}_mean", f"f1_class_{k}_std"]
    return cols + (["active_gain"] if with_gain else [])


def summary_rows(scenario, summaries, gains):
    rows = []
    for i, s in enumerate(summaries):
        for step, count in enumerate(s.labelled_counts):
            row = [scenario, s.heuristic, step, int(count), s.n_seeds,
                   _g(s.nll_mean[step]), _g(s.nll_std[step]),
                   _g(s.accuracy_mean[step]), _g(s.accuracy_std[step])]
            for k in range(s.f1_mean.shape[1]):
                row += [_g(s.f1_mean[step, k]), _g(s.f1_std[step, k])]
            if gains is not None:
                row.append(_g(gains[i][step]))
            rows.append(row)
    return rows


def _csv_text(header, rows):
    buf = io.StringIO()
    buf.write(HEADER_COMMENT + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _write(path, text):
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(text)


def _n_classes(summaries):
    return summaries[0].f1_mean.shape[1] if summaries[0].f1_mean.ndim == 2 else 0


def _write_scenario(cfg, out):
    runs = run_cells(cfg)
    rows = rows_from_runs(cfg, runs)
    summaries, gains = summarize(runs, cfg.heuristics)
    header = summary_header(_n_classes(summaries), gains is not None)
    srows = summary_rows(cfg.id, summaries, gains)
    out.mkdir(parents=True, exist_ok=True)
    _write(out / "results.csv", format_results(rows))
    _write(out / "summary.csv", _csv_text(header, srows))
    report(out)
    return rows, header, srows


def run_scenario(cfg, output_dir=None):
    """Run every ``(heuristic, seed)`` cell and write results, summary and plots.

    Returns the list of ``ResultRow``.
    """
    out = Path(output_dir if output_dir is not None else cfg.output_dir)
    return _write_scenario(cfg, out)[0]


def parse_axis_values(axis, values):
    if axis not in SWEEP_AXES:
        raise ConfigError(f"unknown sweep axis {axis!r}; expected one of {sorted(SWEEP_AXES)}", "axis")
    if isinstance(values, str):
        values = [v.strip() for v in values.split(",") if v.strip()]
    kind = SWEEP_AXES[axis]
    parsed = []
    for v in values:
        try:
            if kind is int and isinstance(v, float) and not v.is_integer():
                raise ValueError(v)
            parsed.append(kind(v))
        except ValueError:
            raise ConfigError(f"cannot read {v!r} as {kind.__name__}", "values") from None
    if not parsed:
        raise ConfigError("need at least one value", "values")
    return parsed


def apply_axis(cfg, axis, value):
    """A copy of ``cfg`` with the sweep axis set to ``value``, re-validated."""
    ds, tr, lp = cfg.dataset, cfg.train, cfg.loop
    if axis == "noise_lambda":
        cfg = replace(cfg, dataset=replace(ds, noise_lambda=value))
    elif axis == "epochs":
        cfg = replace(cfg, train=replace(tr, epochs=value))
    elif axis == "query_size":
        cfg = replace(cfg, loop=replace(lp, query_size=value))
    elif axis == "pool_limit":
        cfg = replace(cfg, loop=replace(lp, pool_limit=value))
    elif axis == "imbalance_delta":
        cfg = replace(cfg, dataset=replace(ds, imbalance_delta=value))
    else:
        raise ConfigError(f"unknown sweep axis {axis!r}", "axis")
    return config_from_dict(config_to_dict(cfg))


def _value_tag(value):
    return repr(value) if isinstance(value, float) else str(value)


def sweep(base, axis, values, output_dir=None):
    """Run one scenario per axis value and write a combined ``sweep.csv``.

    Each value gets its own sub-directory ``<axis>=<value>`` holding the
    ordinary scenario outputs.
    """
    values = parse_axis_values(axis, values)
    configs = [apply_axis(replace(base, id=f"{base.id}_{axis}={_value_tag(v)}"), axis, v) for v in values]
    out = Path(output_dir if output_dir is not None else base.output_dir)
    combined, header = [], None
    for value, cfg in zip(values, configs):
        _, header, srows = _write_scenario(cfg, out / f"{axis}={_value_tag(value)}")
        combined += [[axis, _value_tag(value), *r] for r in srows]
    _write(out / "sweep.csv", _csv_text(["axis", "axis_value", *header], combined))
    return out / "sweep.csv"


def read_results(path):
    """Parse a ``results.csv`` into ``{heuristic: {seed: [StepRecord]}}`` (file order)."""
    try:
        with open(path, encoding="utf-8", newline="") as f:
            text = f.read()
    except FileNotFoundError:
        raise FormatError(f"{path}: no results file") from None
    lines = text.splitlines()
    if not lines or lines[0] != HEADER_COMMENT:
        raise FormatError(f"{path}: missing '{HEADER_COMMENT}' header line")
    reader = csv.reader(lines[1:])
    header = next(reader, None)
    fixed = ["scenario", "heuristic", "seed", "step", "labelled_count", "nll", "accuracy"]
    if header is None or header[:7] != fixed or header[-1] != "wall_time":
        raise FormatError(f"{path}: unexpected column layout")
    f1_cols = header[7:-1]
    if f1_cols != [f"f1_class_{k}" for k in range(len(f1_cols))]:
        raise FormatError(f"{path}: unexpected per-class F1 columns")
    runs = {}
    for lineno, row in enumerate(reader, start=3):
        if len(row) != len(header):
            raise FormatError(f"{path}:{lineno}: expected {len(header)} fields, got {len(row)}")
        try:
            record = StepRecord(int(row[3]), int(row[4]), float(row[5]), float(row[6]),
                                np.array([float(v) for v in row[7:-1]]), float(row[-1]))
            seed = int(row[2])
        except ValueError as exc:
            raise FormatError(f"{path}:{lineno}: {exc}") from None
        runs.setdefault(row[1], {}).setdefault(seed, []).append(record)
    if not runs:
        raise FormatError(f"{path}: no result rows")
    return runs


def plot_metric_names(n_classes):
    return ["nll", "accuracy"] + [f"f1_class_{k}" for k in range(n_classes)]


_Y_LABELS = {"nll": "test NLL (nats)", "accuracy": "test accuracy"}


def report(results_dir):
    """Write one SVG per metric (mean +/- std against labelled count) from ``results.csv``.

    Nothing is written unless every chart renders.
    """
    results_dir = Path(results_dir)
    runs = read_results(results_dir / "results.csv")
    try:
        summaries = [aggregate_runs(list(by_seed.values()), heuristic=h) for h, by_seed in runs.items()]
    except AlignmentError as exc:
        raise FormatError(f"{results_dir / 'results.csv'}: {exc}") from None
    charts = {}
    for name in plot_metric_names(_n_classes(summaries)):
        series = []
        for s in summaries:
            mean, std = s.metric(name)
            series.append((s.heuristic, s.labelled_counts.tolist(), mean.tolist(), std.tolist()))
        ylabel = _Y_LABELS.get(name, name.replace("f1_class_", "F1, class "))
        charts[f"{name}.svg"] = line_chart(f"{ylabel} vs labelled items", "labelled items", ylabel, series)
    for filename, text in charts.items():
        _write(results_dir / filename, text)
    return sorted(results_dir / f for f in charts)
