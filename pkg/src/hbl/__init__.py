"""Exact polytope computations for Brascamp-Lieb type inequalities and
numerical experiments with the associated trilinear forms."""

from .subspace import Subspace
from .polytope import HBLInstance, young, holder, loomis_whitney
from .bfunc import Monomial, Sum, Rho, RhoComposed, IntegralFamily
from .lab import GridFunction, Triple, eval_functional

__version__ = "0.1.0"
