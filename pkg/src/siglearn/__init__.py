"""Learnable time-series signatures: PIP-seeded initialization, joint
Transformer training with differentiable signature distances, UCR-style
benchmarking, and an exploration-bundle service for the companion UI."""

from .core import (
    ConfigError,
    Dataset,
    RunConfig,
    Signature,
    TimeSeries,
    UnsupportedDatasetError,
    map_labels,
    split_dataset,
)
from .preprocess import FilterReport, filter_series, normalize, segment_series
from .initialize import (
    Candidate,
    PipSet,
    entropy,
    extract_pips,
    generate_candidates,
    information_gain,
    init_signatures,
    perpendicular_distance,
    znorm_positions,
)
from .features import (
    FeatureTensor,
    MatchResult,
    SigMatrix,
    assign_clusters,
    dtw_distance,
    fuse,
    feature_tensor,
    match_score,
    seq_dist,
    signature_transform,
    soft_seq_dist,
    stat_features_window,
    windowed_features,
)
from .model import TrainedModel, bce_loss, forward, predict, train
from .bench import BenchResult, load_ucr_tsv, run_variant, save_ucr_tsv, scalability_sweep
from .bundle import build_bundle, export_bundle, kde_density, load_bundle, normalize_densities

__version__ = "0.1.0"
