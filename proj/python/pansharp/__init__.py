"""Pan-sharpening with exact generalized-inverse fusion."""

from ._pansharp import (
    PansharpError,
    ablate,
    estimate_response,
    full_rank_left_pinv,
    fuse,
    generate_pair,
    gsa_weights,
    moore_penrose,
    numerical_rank,
    penrose_residuals,
    random_cube,
    solve_prior_inverse,
)

__all__ = [
    "PansharpError",
    "ablate",
    "estimate_response",
    "full_rank_left_pinv",
    "fuse",
    "generate_pair",
    "gsa_weights",
    "moore_penrose",
    "numerical_rank",
    "penrose_residuals",
    "random_cube",
    "solve_prior_inverse",
]
