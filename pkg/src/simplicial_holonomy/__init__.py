"""Exact simplicial de Rham theory with divided powers: forms, fiberwise
integration over products of simplices, iterated integrals on path spaces
and holonomy as an A-infinity functor."""

from .chains import Chain, enumerate_maximal
from .derham import GForm
from .dpalg import THETA, ZERO, DPPoly, definite_integral, dp_mul, to_rational
from .holonomy import Cochain, hol, iterated_integral
from .integrate import chain_integral, fiberwise, stokes_residual
from .linfty import LInftyAlgebra, abelian, from_dg_lie
from .simplicial import FormMap, global_form, path_space, simplex

__version__ = "0.1.0"

__all__ = [
    "Chain", "Cochain", "DPPoly", "FormMap", "GForm", "LInftyAlgebra", "THETA", "ZERO",
    "abelian", "chain_integral", "definite_integral", "dp_mul", "enumerate_maximal",
    "fiberwise", "from_dg_lie", "global_form", "hol", "iterated_integral", "path_space",
    "simplex", "stokes_residual", "to_rational",
]
