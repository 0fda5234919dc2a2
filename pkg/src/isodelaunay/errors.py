"""Exception hierarchy shared across the package."""


class IsodelaunayError(Exception):
    """Base class for all package errors."""


class InputError(IsodelaunayError):
    """Malformed user input (files, configuration)."""


class FlipSelfGlued(IsodelaunayError):
    """Both sides of the edge lie in a single triangle; no quadrilateral."""


class FlipDegenerate(IsodelaunayError):
    """Flipping would create a triangle of non-positive area."""


class NonPositiveDeterminant(IsodelaunayError):
    pass


class AxisAlignedEdge(IsodelaunayError):
    """An edge period with vanishing real or imaginary part."""

    def __init__(self, edge, message=None):
        self.edge = edge
        super().__init__(message or f"edge {edge} is axis-aligned")


class NotVeering(IsodelaunayError):
    pass


class NotGeneric(IsodelaunayError):
    """Surface admits no L-infinity Delaunay triangulation; carries a witness."""

    def __init__(self, witness, message=None):
        self.witness = witness
        super().__init__(message or f"not generic: {witness}")


class NoCircumsquare(IsodelaunayError):
    pass


class NonTermination(IsodelaunayError):
    """A guarded loop exceeded its move budget; defect signal, exit code 4."""


class NotACylinder(IsodelaunayError):
    pass


class NonPositiveStretch(IsodelaunayError):
    pass


class CapExhausted(IsodelaunayError):
    """A bounded separatrix/cylinder search ran past its cap without resolving."""


class ChartMismatch(IsodelaunayError):
    pass


class InvalidPath(IsodelaunayError):
    pass


class BudgetExhausted(IsodelaunayError):
    """Exploration ran out of budget; the atlas store is resumable."""


class SeedNotGeneric(IsodelaunayError):
    pass


class PersistentDegeneracy(IsodelaunayError):
    """No tested tilt epsilon produced a generic surface."""


class CertificateFailure(IsodelaunayError):
    pass


class Infeasible(IsodelaunayError):
    pass


class IncompatibleReference(IsodelaunayError):
    pass


class IncompleteAtlas(IsodelaunayError):
    pass


class NotSimplicial(IsodelaunayError):
    """Quotient violated simplicial axioms; indicates insufficient subdivision."""


class Disconnected(IsodelaunayError):
    pass


class UnknownLemma(IsodelaunayError):
    pass


class PerturbationFailure(IsodelaunayError):
    pass
