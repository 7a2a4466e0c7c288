"""Maximum rank correlation estimation under response-biased sampling."""

import json as _json

from ._core import (
    Dataset,
    MrcError,
    draw_biased_sample,
    evaluate_fast,
    evaluate_naive,
    evaluate_smoothed,
    evaluate_weighted,
    ipw_least_squares,
    mrc_fit,
    resample_fit,
)
from ._core import run_scenario as _run_scenario



def run_scenario(*args, **kwargs):
    """Run a simulation cell; returns the parsed JSON report."""
    return _json.loads(_run_scenario(*args, **kwargs))


__all__ = [
    "Dataset",
    "MrcError",
    "draw_biased_sample",
    "evaluate_fast",
    "evaluate_naive",
    "evaluate_smoothed",
    "evaluate_weighted",
    "ipw_least_squares",
    "mrc_fit",
    "resample_fit",
    "run_scenario",
]
