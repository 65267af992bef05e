"""Exception types raised across the package."""


class PolytopeError(Exception):
    """Base class for geometric and combinatorial failures."""


class LowerDimensionalError(PolytopeError, ValueError):
    """Input points do not affinely span the ambient space.

    Attributes
    ----------
    affine_dim : int
        Dimension of the affine hull of the input.
    """

    def __init__(self, affine_dim, ambient_dim):
        self.affine_dim = affine_dim
        self.ambient_dim = ambient_dim
        super().__init__(
            f"points span an affine subspace of dimension {affine_dim} "
            f"in R^{ambient_dim}"
        )


class UnboundedError(PolytopeError, ValueError):
    """Inequality system defines an unbounded polyhedron; ``ray`` is a recession direction."""

    def __init__(self, ray):
        self.ray = tuple(ray)
        super().__init__(f"system is unbounded along recession ray {self.ray}")


class InfeasibleError(PolytopeError, ValueError):
    """Inequality system is empty.

    ``certificate`` is a nonnegative multiplier vector y with y^T A = 0 on the
    variable part and y . a0 < 0 (Farkas alternative).
    """

    def __init__(self, certificate):
        self.certificate = tuple(certificate)
        super().__init__("system is infeasible (Farkas certificate attached)")


class IncidenceError(PolytopeError, ValueError):
    """A point lies on a hyperplane where a strict side was required."""


class ResourceLimitError(PolytopeError, RuntimeError):
    """Problem instance exceeds a documented desk-scale limit."""


class DomainError(ValueError):
    """Arguments outside the domain of a formula."""


class ApexError(DomainError):
    """Ratio undefined at the simplex (the apex of the cone, 0/0)."""


class PreconditionError(ValueError):
    """A structural flag required by an operation is missing."""


class GenusError(PolytopeError, ValueError):
    """Rotation system is not planar (Euler characteristic differs from 2)."""


class ConnectivityError(PolytopeError, ValueError):
    """Graph is not 3-connected."""


class StructuralError(PolytopeError, RuntimeError):
    """A feasibility problem that must be solvable for valid input is not."""


class ConvergenceError(PolytopeError, RuntimeError):
    """Iterative solver did not reach its tolerance.

    Attributes
    ----------
    history : list of float
        Residual norm after each iteration.
    """

    def __init__(self, message, history=()):
        self.history = list(history)
        super().__init__(message)


class ClosureError(PolytopeError, RuntimeError):
    """Laid-out kites fail to close up within tolerance."""


class RealizationError(PolytopeError, RuntimeError):
    """A realized polytope does not have the requested combinatorics."""


class AdmissibilityError(PolytopeError, ValueError):
    """Deep vertex truncation data is not admissible at some vertex."""

    def __init__(self, message, vertex=None):
        self.vertex = vertex
        super().__init__(message)


class ConstructionError(PolytopeError, RuntimeError):
    """A construction could not be completed."""


class ParseError(ValueError):
    """Malformed input file, with 1-based line number when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
