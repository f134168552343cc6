"""pathlab: an exact verification laboratory for join trees over path graphs,
shift permutations, pathset relations, and bounded-depth product formulas."""

from .paths import (
    EMPTY,
    PathGraph,
    full_path,
    gap,
    make_path,
    single_edge,
    union_all,
    vec_delta,
    vec_lambda,
    vec_lambda_delta,
    vec_measures,
)

__all__ = [
    "EMPTY",
    "PathGraph",
    "full_path",
    "gap",
    "make_path",
    "single_edge",
    "union_all",
    "vec_delta",
    "vec_lambda",
    "vec_lambda_delta",
    "vec_measures",
]

__version__ = "0.1.0"
