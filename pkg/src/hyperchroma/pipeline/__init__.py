"""Constructive pipeline: transversals, partitions, and the two end-to-end colorers."""
from .errors import CertificateError, HypothesisError
from .transversal import HeavyHierarchy, TransversalResult, extract_transversal, heavy_hierarchy
from .partition import (
    HalvingResult,
    PartitionResult,
    RecursionState,
    eps_partition,
    partition_full,
    random_halving,
)

__all__ = [
    "CertificateError",
    "HalvingResult",
    "HeavyHierarchy",
    "HypothesisError",
    "PartitionResult",
    "RecursionState",
    "TransversalResult",
    "eps_partition",
    "extract_transversal",
    "heavy_hierarchy",
    "partition_full",
    "random_halving",
]

from .coloring import ColoringResult, base_color, color_corlin, color_cortri  # noqa: E402

__all__ += ["ColoringResult", "base_color", "color_corlin", "color_cortri"]
