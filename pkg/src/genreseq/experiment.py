"""End-to-end experiment runner: ingest, cluster, train, trim, report.

One run walks the full pipeline for each requested cell x feature-mode
combination: a pooled baseline over all users (stage BC), per-cluster
models after k-means (AC rows), and per-cluster models retrained on
sub-genre-trimmed data (BT/AT rows).  Every random choice derives from
the single config seed, so identical configs produce byte-identical
report files.
"""

from __future__ import annotations

import json
import math
import os
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .clustering import ClusterModel, kmeans, rating_profile
from .evaluation import (
    DEFAULT_THRESHOLD,
    DEFAULT_TRIM_METRICS,
    ClusterMetrics,
    MovieGenreMatrix,
    apply_trim_to_dataset,
    cluster_metrics,
    confusion_counts,
    mean_cluster_metrics,
    select_trim_clusters,
    trim_genres,
)
from .ingest import (
    SyntheticSpec,
    UserSequence,
    build_sequences,
    generate_synthetic,
    load_movies,
    load_ratings,
)
from .nets import CellKind, TrainConfig, predict, train
from .transitions import (
    Dataset,
    FeatureMode,
    TransitionModel,
    featurize,
    genre_samples,
    write_probability_csv,
)

STAGES = (
    "BC",
    "AC-best",
    "AC-worst",
    "AC-mean",
    "BT-mean",
    "BT-worst",
    "AT-worst",
    "AT-mean",
)

REPORT_HEADER = "cell,mode,stage,cluster,recall,precision,accuracy,f1"

WORKERS_ENV_VAR = "GENRESEQ_WORKERS"


@dataclass
class ExperimentConfig:
    """Everything one experiment needs; all randomness flows from ``seed``."""

    ratings_path: str | Path | None = None
    movies_path: str | Path | None = None
    synthetic: SyntheticSpec | None = None
    k: int = 7
    eta: float = 0.5
    theta: float = 0.1
    cells: tuple[CellKind, ...] = (CellKind.RNN,)
    modes: tuple[FeatureMode, ...] = (FeatureMode.PRODUCT,)
    train: TrainConfig = field(default_factory=TrainConfig)
    split_fraction: float = 0.8
    seed: int = 0
    out_dir: str | Path | None = None
    max_users: int | None = None
    trim_metrics: tuple[str, ...] = DEFAULT_TRIM_METRICS
    threshold: float = DEFAULT_THRESHOLD
    dump_transitions: bool = False
    weighted_means: bool = False


@dataclass(frozen=True)
class ReportRow:
    cell: str
    mode: str
    stage: str
    cluster: str
    recall: float
    precision: float
    accuracy: float
    f1: float


@dataclass(frozen=True)
class EvalReport:
    """Aggregate stage rows plus the per-cluster detail behind them."""

    rows: tuple[ReportRow, ...]
    ac_metrics: dict[tuple[str, str], tuple[ClusterMetrics, ...]] = field(default_factory=dict)
    at_metrics: dict[tuple[str, str], tuple[ClusterMetrics, ...]] = field(default_factory=dict)

    def get(self, cell: str, mode: str, stage: str) -> ReportRow:
        for row in self.rows:
            if (row.cell, row.mode, row.stage) == (cell, mode, stage):
                return row
        raise KeyError((cell, mode, stage))


def derive_seed(*parts: int | str) -> int:
    """Stable derived seed from the experiment seed and a role tag."""
    entropy: list[int] = []
    for part in parts:
        if isinstance(part, str):
            entropy.extend(part.encode("utf-8"))
        else:
            entropy.append(int(part) & 0xFFFFFFFFFFFFFFFF)
    return int(np.random.SeedSequence(entropy).generate_state(1)[0])


def split_users(
    sequences: Sequence[UserSequence], fraction: float, seed: int
) -> tuple[list[UserSequence], list[UserSequence]]:
    """Seeded shuffle; first ceil(fraction * N) users train, rest test."""
    if not 0.0 < fraction < 1.0:
        raise ValueError("fraction must be in (0, 1)")
    n = len(sequences)
    n_train = math.ceil(fraction * n)
    perm = np.random.default_rng(seed).permutation(n)
    train_set = [sequences[i] for i in perm[:n_train]]
    test_set = [sequences[i] for i in perm[n_train:]]
    return train_set, test_set


def _pool_map(fn: Callable, items: Sequence) -> list:
    """Run cluster-level work items, optionally on a bounded thread pool."""
    workers = int(os.environ.get(WORKERS_ENV_VAR, "1"))
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _load_sequences(config: ExperimentConfig) -> list[UserSequence]:
    if config.synthetic is not None:
        sequences, _ = generate_synthetic(config.synthetic)
        return sequences
    if config.ratings_path is None or config.movies_path is None:
        raise ValueError("config needs ratings_path and movies_path or a synthetic spec")
    movies = load_movies(config.movies_path)
    events = load_ratings(config.ratings_path)
    sequences, _ = build_sequences(events, movies)
    return sequences


def _subsample(sequences: list[UserSequence], config: ExperimentConfig) -> list[UserSequence]:
    if config.max_users is None or len(sequences) <= config.max_users:
        return sequences
    rng = np.random.default_rng(derive_seed(config.seed, "sample"))
    idx = rng.choice(len(sequences), size=config.max_users, replace=False)
    return [sequences[i] for i in sorted(idx)]


def _evaluate(params, dataset: Dataset, cluster: int, config: ExperimentConfig) -> ClusterMetrics:
    probs = predict(params, dataset.inputs)
    counts = confusion_counts(probs, dataset.targets, config.threshold)
    return cluster_metrics(cluster, counts, config.trim_metrics)


def _metrics_row(cell: CellKind, mode: FeatureMode, stage: str, cluster: str, m) -> ReportRow:
    return ReportRow(
        cell.value, mode.value, stage, cluster, m.recall, m.precision, m.accuracy, m.f1
    )


def run_experiment(config: ExperimentConfig) -> EvalReport:
    """Execute the full pipeline and (optionally) write report files."""
    sequences = _subsample(_load_sequences(config), config)

    global_train, global_test = split_users(
        sequences, config.split_fraction, derive_seed(config.seed, "split-global")
    )

    profiles = [rating_profile(s) for s in sequences]
    cmodel: ClusterModel = kmeans(profiles, config.k, seed=derive_seed(config.seed, "kmeans"))
    members: dict[int, list[UserSequence]] = defaultdict(list)
    for seq in sequences:
        members[cmodel.assignment[seq.user_id]].append(seq)
    cluster_ids = sorted(members)

    splits = {
        c: split_users(
            members[c], config.split_fraction, derive_seed(config.seed, "split-cluster", c)
        )
        for c in cluster_ids
    }

    global_tm = TransitionModel.from_sequences(-1, global_train)
    cluster_tm = {c: TransitionModel.from_sequences(c, splits[c][0]) for c in cluster_ids}

    global_train_samples = genre_samples(global_train)
    global_test_samples = genre_samples(global_test)
    cluster_samples = {
        c: (genre_samples(splits[c][0]), genre_samples(splits[c][1])) for c in cluster_ids
    }

    bc_data: dict[FeatureMode, tuple[Dataset, Dataset]] = {}
    cl_data: dict[tuple[int, FeatureMode], tuple[Dataset, Dataset]] = {}
    for mode in config.modes:
        bc_data[mode] = (
            featurize(global_train_samples, global_tm.probs, mode),
            featurize(global_test_samples, global_tm.probs, mode),
        )
        for c in cluster_ids:
            cl_data[(c, mode)] = (
                featurize(cluster_samples[c][0], cluster_tm[c].probs, mode),
                featurize(cluster_samples[c][1], cluster_tm[c].probs, mode),
            )

    rows: list[ReportRow] = []
    ac_details: dict[tuple[str, str], tuple[ClusterMetrics, ...]] = {}
    at_details: dict[tuple[str, str], tuple[ClusterMetrics, ...]] = {}

    for cell in config.cells:
        for mode in config.modes:
            train_ds, test_ds = bc_data[mode]
            bc_cfg = replace(
                config.train, seed=derive_seed(config.seed, "train-bc", cell.value, mode.value)
            )
            bc_params = train(train_ds, cell, bc_cfg).params
            bc_m = _evaluate(bc_params, test_ds, -1, config)
            rows.append(_metrics_row(cell, mode, "BC", "all", bc_m))

            def cluster_run(c: int) -> ClusterMetrics:
                tr, te = cl_data[(c, mode)]
                cfg = replace(
                    config.train,
                    seed=derive_seed(config.seed, "train-ac", c, cell.value, mode.value),
                )
                params = train(tr, cell, cfg).params
                return _evaluate(params, te, c, config)

            ac = {m.cluster: m for m in _pool_map(cluster_run, cluster_ids)}
            best = min(cluster_ids, key=lambda c: (-ac[c].f1, c))
            worst = min(cluster_ids, key=lambda c: (ac[c].f1, c))
            ac_mean = mean_cluster_metrics(
                [ac[c] for c in cluster_ids], config.weighted_means
            )
            rows.append(_metrics_row(cell, mode, "AC-best", str(best), ac[best]))
            rows.append(_metrics_row(cell, mode, "AC-worst", str(worst), ac[worst]))
            rows.append(_metrics_row(cell, mode, "AC-mean", "mean", ac_mean))
            rows.append(_metrics_row(cell, mode, "BT-mean", "mean", ac_mean))
            rows.append(_metrics_row(cell, mode, "BT-worst", str(worst), ac[worst]))
            ac_details[(cell.value, mode.value)] = tuple(ac[c] for c in cluster_ids)

            selected = select_trim_clusters(ac.values(), config.eta)
            at = dict(ac)
            for c in sorted(selected):
                mgm = MovieGenreMatrix.from_sequences(c, members[c])
                _, zeroed = trim_genres(mgm, config.theta)
                if not zeroed:
                    continue
                masked_train, _ = apply_trim_to_dataset(cluster_samples[c][0], zeroed)
                masked_test, _ = apply_trim_to_dataset(cluster_samples[c][1], zeroed)
                if not masked_train or not masked_test:
                    continue
                tr = featurize(masked_train, cluster_tm[c].probs, mode)
                te = featurize(masked_test, cluster_tm[c].probs, mode)
                cfg = replace(
                    config.train,
                    seed=derive_seed(config.seed, "train-ac", c, cell.value, mode.value),
                )
                params = train(tr, cell, cfg).params
                at[c] = _evaluate(params, te, c, config)
            at_worst = min(cluster_ids, key=lambda c: (at[c].f1, c))
            at_mean = mean_cluster_metrics(
                [at[c] for c in cluster_ids], config.weighted_means
            )
            rows.append(_metrics_row(cell, mode, "AT-worst", str(at_worst), at[at_worst]))
            rows.append(_metrics_row(cell, mode, "AT-mean", "mean", at_mean))
            at_details[(cell.value, mode.value)] = tuple(at[c] for c in cluster_ids)

    report = EvalReport(tuple(rows), ac_details, at_details)
    if config.out_dir is not None:
        transitions = None
        if config.dump_transitions:
            transitions = {"all": global_tm.probs}
            transitions.update({str(c): cluster_tm[c].probs for c in cluster_ids})
        emit_report(report, config.out_dir, transitions)
    return report


def _atomic_write(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def report_csv_text(report: EvalReport) -> str:
    lines = [REPORT_HEADER]
    for r in report.rows:
        lines.append(
            f"{r.cell},{r.mode},{r.stage},{r.cluster},"
            f"{r.recall:.4f},{r.precision:.4f},{r.accuracy:.4f},{r.f1:.4f}"
        )
    return "\n".join(lines) + "\n"


def emit_report(
    report: EvalReport,
    out_dir: str | Path,
    transitions: dict[str, np.ndarray] | None = None,
) -> list[Path]:
    """Write report.csv / report.json (and matrix dumps) atomically."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    csv_path = out / "report.csv"
    _atomic_write(csv_path, report_csv_text(report))
    written.append(csv_path)

    records = [
        {
            "cell": r.cell,
            "mode": r.mode,
            "stage": r.stage,
            "cluster": r.cluster,
            "recall": round(r.recall, 4),
            "precision": round(r.precision, 4),
            "accuracy": round(r.accuracy, 4),
            "f1": round(r.f1, 4),
        }
        for r in report.rows
    ]
    json_path = out / "report.json"
    _atomic_write(json_path, json.dumps(records, indent=2) + "\n")
    written.append(json_path)

    for name, probs in (transitions or {}).items():
        path = out / f"transitions_{name}.csv"
        tmp = path.with_name(path.name + ".tmp")
        write_probability_csv(probs, tmp)
        os.replace(tmp, path)
        written.append(path)
    return written


def read_report_csv(path: str | Path) -> tuple[ReportRow, ...]:
    """Parse a report.csv back into rows (values at written precision)."""
    lines = Path(path).read_text(encoding="utf-8").strip().splitlines()
    if not lines or lines[0] != REPORT_HEADER:
        raise ValueError("not a report.csv file")
    rows = []
    for line in lines[1:]:
        cell, mode, stage, cluster, rec, prec, acc, f1 = line.split(",")
        rows.append(
            ReportRow(cell, mode, stage, cluster, float(rec), float(prec), float(acc), float(f1))
        )
    return tuple(rows)
