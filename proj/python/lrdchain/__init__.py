"""Binary Markov chain with power-law jumps, reference generators and Hurst estimators."""

from ._lrdchain import (
    LrdError,
    ModelParams,
    acf,
    alpha_to_hurst,
    equilibrium_pi,
    equilibrium_tail,
    estimate,
    estimate_all,
    fgn_generate,
    generate,
    hurst_to_alpha,
    jump_prob,
    jump_tail,
    law_checks,
    map_generate,
    methods,
    validity_threshold,
)

__all__ = [
    "LrdError",
    "ModelParams",
    "acf",
    "alpha_to_hurst",
    "equilibrium_pi",
    "equilibrium_tail",
    "estimate",
    "estimate_all",
    "fgn_generate",
    "generate",
    "hurst_to_alpha",
    "jump_prob",
    "jump_tail",
    "law_checks",
    "map_generate",
    "methods",
    "validity_threshold",
]
