"""Python front end for the bigbang C++ library."""

import json

from ._bigbang import (
    BigBangError,
    ImaginaryBranchError,
    ObstructionError,
    approach,
    bounce,
    exponents,
    real_pow,
    w_from_pq,
)
from . import _bigbang


def classify(w):
    return json.loads(_bigbang.classify_json(str(w)))


def reduce(**params):
    return json.loads(_bigbang.reduce_json({k: str(v) for k, v in params.items()}))


def sweep(grid, jobs=0, **params):
    return json.loads(_bigbang.sweep_json({k: str(v) for k, v in params.items()}, [str(w) for w in grid], jobs))


__all__ = [
    "BigBangError",
    "ImaginaryBranchError",
    "ObstructionError",
    "approach",
    "bounce",
    "classify",
    "exponents",
    "real_pow",
    "reduce",
    "sweep",
    "w_from_pq",
]
