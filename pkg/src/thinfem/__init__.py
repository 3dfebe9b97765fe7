"""Finite elements and interpolation error analysis on meshes with thin elements.

Subpackages: geometry (simplex metrics), mesh (representation, generators,
conformity, file I/O), quality (good/ordinary/bad classification), covering
(virtual covers for bad elements), interp (interpolation + seminorms),
poisson (P1 solver + convergence experiment), cli (command-line front end).
"""

from . import _kernels
from .errors import ThinFEMError

__version__ = "0.1.0"
__all__ = ["ThinFEMError", "__version__", "_kernels"]
