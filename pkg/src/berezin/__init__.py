"""Numerics for the modular-equivariant Berezin quantization of the
upper half-plane: reproducing kernels, star products, Toeplitz calculus,
traces over the fundamental domain, discrete-series coefficient integrals,
and the cyclic cocycles of the deformation.
"""

from .bergman import SpaceParams, kernel_gram, normalization_c, project
from .geometry import (DISK, HALF_PLANE, Measure, Point, cayley,
                       cayley_inverse, d_invariant, mobius_act, pair_factor)
from .groups import (GroupElement, HaarChart, arg_branch, automorphy_j,
                     n_cocycle, projective_multiplier, reduce_to_fundamental)
from .symbols import (FiniteRankOp, br_apply, br_spectral_check, compose_exact,
                      lambda_norm, m_bound, semiclassical_limit, star_product,
                      symbol_of, toeplitz_symbol, trace_duality)

__all__ = [
    "DISK", "HALF_PLANE", "Point", "Measure", "GroupElement", "HaarChart",
    "SpaceParams", "FiniteRankOp", "pair_factor", "d_invariant", "mobius_act",
    "cayley", "cayley_inverse", "arg_branch", "automorphy_j", "n_cocycle",
    "projective_multiplier", "reduce_to_fundamental", "normalization_c",
    "kernel_gram", "project", "symbol_of", "compose_exact", "star_product",
    "toeplitz_symbol", "br_apply", "br_spectral_check", "lambda_norm",
    "m_bound", "trace_duality", "semiclassical_limit",
]
