"""Exact null distributions of the Wilcoxon rank-sum statistic, with ties."""

import json

from ._core import (
    CapExceeded,
    Error,
    InputError,
    brute_force,
    mixture,
    moments,
    normal_table,
    pattern_ranks,
    pmf_pattern,
    pmf_ranks,
    pmf_untied,
    qbinomial,
    symbolic_mixture,
)
from ._core import rank_sum_test as _rank_sum_test

__all__ = [
    "CapExceeded",
    "Error",
    "InputError",
    "brute_force",
    "mixture",
    "moments",
    "normal_table",
    "pattern_ranks",
    "pmf_pattern",
    "pmf_ranks",
    "pmf_untied",
    "qbinomial",
    "rank_sum_test",
    "symbolic_mixture",
]


def rank_sum_test(x, y, **options):
    """Exact rank-sum test of sample x against sample y; returns the report as a dict."""
    return json.loads(_rank_sum_test(list(map(float, x)), list(map(float, y)), **options))
