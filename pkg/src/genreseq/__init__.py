"""Sequential movie-genre prediction toolkit.

Pipeline: MovieLens-format ingestion into per-user 5-movie sequences,
k-means clustering of genre rating profiles, per-cluster genre transition
matrices and average transition vectors, from-scratch recurrent networks
(RNN / LSTM / GRU) trained to predict the next movie's genres, sub-genre
trimming of weak clusters, and micro-averaged recall / precision /
accuracy / F1 reporting.
"""

from .clustering import ClusterModel, RatingProfile, assign_cluster, kmeans, rating_profile
from .datagen import write_archetype_dataset
from .errors import (
    EmptyDataset,
    EmptyGenreList,
    EmptyGenreSupport,
    GenreSeqError,
    InvalidSpec,
    LengthMismatch,
    MalformedRow,
    RatingOutOfRange,
    ShapeMismatch,
    TooFewUsers,
    UnknownGenre,
)
from .evaluation import (
    ClusterMetrics,
    ConfusionCounts,
    Metrics,
    MovieGenreMatrix,
    apply_trim_to_dataset,
    cluster_metrics,
    confusion_counts,
    mean_cluster_metrics,
    metrics,
    select_trim_clusters,
    trim_genres,
)
from .experiment import (
    EvalReport,
    ExperimentConfig,
    ReportRow,
    derive_seed,
    emit_report,
    read_report_csv,
    run_experiment,
    split_users,
)
from .genres import GENRES, N_GENRES, encode_genres, genre_index, support, support_names
from .ingest import (
    MovieCatalog,
    RatingEvent,
    SyntheticSpec,
    UserSequence,
    build_sequences,
    generate_synthetic,
    load_movies,
    load_ratings,
)
from .nets import (
    CellKind,
    NetParams,
    TrainConfig,
    TrainResult,
    backward,
    bce_loss,
    forward_sequence,
    gru_step,
    init_params,
    load_checkpoint,
    lstm_step,
    predict,
    rnn_step,
    save_checkpoint,
    train,
)
from .transitions import (
    Dataset,
    FeatureMode,
    GenreSample,
    TransitionModel,
    atv,
    build_dataset,
    combine,
    count_transitions,
    featurize,
    genre_samples,
    normalize_transitions,
    write_probability_csv,
)

__version__ = "0.1.0"

__all__ = [
    "GENRES",
    "N_GENRES",
    "genre_index",
    "encode_genres",
    "support",
    "support_names",
    "GenreSeqError",
    "UnknownGenre",
    "EmptyGenreList",
    "EmptyGenreSupport",
    "MalformedRow",
    "RatingOutOfRange",
    "InvalidSpec",
    "TooFewUsers",
    "ShapeMismatch",
    "EmptyDataset",
    "LengthMismatch",
    "RatingEvent",
    "UserSequence",
    "MovieCatalog",
    "SyntheticSpec",
    "load_movies",
    "load_ratings",
    "build_sequences",
    "generate_synthetic",
    "RatingProfile",
    "ClusterModel",
    "rating_profile",
    "kmeans",
    "assign_cluster",
    "TransitionModel",
    "FeatureMode",
    "GenreSample",
    "Dataset",
    "count_transitions",
    "normalize_transitions",
    "atv",
    "combine",
    "genre_samples",
    "featurize",
    "build_dataset",
    "write_probability_csv",
    "CellKind",
    "TrainConfig",
    "NetParams",
    "TrainResult",
    "init_params",
    "rnn_step",
    "lstm_step",
    "gru_step",
    "forward_sequence",
    "bce_loss",
    "backward",
    "predict",
    "train",
    "save_checkpoint",
    "load_checkpoint",
    "ConfusionCounts",
    "Metrics",
    "ClusterMetrics",
    "MovieGenreMatrix",
    "confusion_counts",
    "metrics",
    "cluster_metrics",
    "select_trim_clusters",
    "trim_genres",
    "apply_trim_to_dataset",
    "mean_cluster_metrics",
    "ExperimentConfig",
    "EvalReport",
    "ReportRow",
    "run_experiment",
    "split_users",
    "emit_report",
    "read_report_csv",
    "derive_seed",
    "write_archetype_dataset",
]
