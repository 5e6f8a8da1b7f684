from .engine import (
    GivenValues,
    count_consistent,
    enumerate_completed,
)
from .generate import GenerationResult, generate_completed
from .model import SearchConfig, SearchModel, default_node_budget
from .rng import SplitMix64, derive

__all__ = [
    "GivenValues",
    "count_consistent",
    "enumerate_completed",
    "GenerationResult",
    "generate_completed",
    "SearchConfig",
    "SearchModel",
    "default_node_budget",
    "SplitMix64",
    "derive",
]
