"""Fine-grained multi-segment pattern matching over streaming time series."""

from ._backend import BACKEND
from .core import (
    MatchReport,
    Pattern,
    is_fine_grained_match,
    load_pattern,
    normalized_euclidean,
    save_pattern,
    segment_bounds,
    validate_pattern,
)
from .elb import (
    BlockFeature,
    ElbProfile,
    block_feature,
    block_matches,
    build_profile,
    build_profile_ele,
    build_profile_seq,
    max_distance,
    theta_ele,
    theta_seq,
)
from .engine import EngineStats, MatchEngine, run
from .postprocess import (
    big_delta,
    delta,
    optimal_breakpoint,
    potential_set,
    verify_adaptive,
    verify_baseline,
)

__version__ = "0.1.0"
