"""Exception types raised across the package."""


class ThinFEMError(Exception):
    """Base class for all package-specific errors."""


class DegenerateSimplex(ThinFEMError):
    """Simplex measure below the degeneracy floor; metric undefined."""


class InvalidParam(ThinFEMError, ValueError):
    """Parameter outside its documented range."""


class EmptyMesh(ThinFEMError):
    """Operation requires a mesh with at least one element."""


class ParseError(ThinFEMError):
    """Malformed mesh or plan file; carries the 1-based line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InvalidPlan(ThinFEMError):
    """Cover plan references invalid element ids or is structurally broken."""


class DimensionUnsupported(ThinFEMError):
    """Operation implemented for 2D meshes only."""


class AmbiguousLongestEdge(ThinFEMError):
    """Two edges tie as longest within tolerance; cover construction refused."""


class ConflictingCoverValues(ThinFEMError):
    """A vertex receives inconsistent values from two different covers."""


class InvalidCoverGeometry(ThinFEMError):
    """A cluster vertex falls outside its covering simplex beyond tolerance."""


class MissingHessian(ThinFEMError):
    """Field supplies no Hessian but a second-order quantity was requested."""


class UnsupportedDegree(ThinFEMError, ValueError):
    """No quadrature rule available for the requested degree."""


class NoConvergence(ThinFEMError):
    """Iterative solver failed to reach tolerance; carries the iteration cap."""

    def __init__(self, iterations, residual=None):
        self.iterations = iterations
        self.residual = residual
        msg = f"no convergence within {iterations} iterations"
        if residual is not None:
            msg += f" (relative residual {residual:.3e})"
        super().__init__(msg)
