"""Exact toolkit for finite-dimensional phase spaces of matrix quadruples,
their flows and loop-group action, the associated rational Grassmannian
points with Baker functions, and the bispectral operator calculus."""

from .scalar import Scalar, sc, set_tolerance, tolerance
from .cmspace import CMPoint, Quadruple

__version__ = "0.1.0"

__all__ = ["Scalar", "sc", "set_tolerance", "tolerance",
           "CMPoint", "Quadruple", "__version__"]
