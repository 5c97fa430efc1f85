"""Grid tensors, matricization ranks, and receptive-field bounds for
overlapping convolutional arithmetic circuits."""

import json as _json

try:
    from ._convac import (  # type: ignore[attr-defined]
        alpha_min_receptive,
        analyze_json,
        claim3_rank,
        conv_pool_bound,
        random_rank,
        rank_exact,
        theorem3_rank,
        total_receptive,
        total_stride,
        verify_suite,
        vgg_effective_b,
    )
except ImportError:  # pragma: no cover - build-tree layout
    from _convac import (  # type: ignore[no-redef]
        alpha_min_receptive,
        analyze_json,
        claim3_rank,
        conv_pool_bound,
        random_rank,
        rank_exact,
        theorem3_rank,
        total_receptive,
        total_stride,
        verify_suite,
        vgg_effective_b,
    )

__all__ = [
    "alpha_min_receptive",
    "analyze",
    "analyze_json",
    "claim3_rank",
    "conv_pool_bound",
    "random_rank",
    "rank_exact",
    "theorem3_rank",
    "total_receptive",
    "total_stride",
    "verify_suite",
    "vgg_effective_b",
]


def _as_text(arch):
    return _json.dumps(arch) if isinstance(arch, dict) else arch


def analyze(arch):
    """Analysis report (layer table plus rank bound) as a dictionary.

    ``arch`` may be an architecture document dict or its JSON text.
    """
    return _json.loads(analyze_json(_as_text(arch)))
