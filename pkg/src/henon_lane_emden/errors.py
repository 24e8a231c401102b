"""Exception hierarchy shared by all modules."""


class HLEError(Exception):
    """Base class for computational failures (CLI exit code 1)."""


class HomogeneousRegime(HLEError):
    """The exponent system is singular because 1/p + 1/q = 1.

    ``endpoints`` carries the two ends ``X, X'`` of the collapsed segment when
    raised by :func:`~henon_lane_emden.power.q_vertices`.
    """

    def __init__(self, message, endpoints=None):
        super().__init__(message)
        self.endpoints = endpoints


class NotInScope(HLEError):
    """Preconditions of a numerical construction are not met."""


class NoConvergence(HLEError):
    """An iterative method exhausted its budget.

    ``diagnostics`` holds the best iterate found, when available.
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


NonConvergence = NoConvergence


class GridTooCoarse(HLEError):
    """Discrete Rayleigh minimum drifts too much under refinement."""


class StepSizeUnderflow(HLEError):
    """The adaptive integrator could not keep the step size above its floor."""


class NonPositiveCentral(HLEError):
    """Central values of a radial shooting problem must be positive."""


class CoincidentPoints(HLEError):
    """Green function requested at its pole x = y."""


class Divergent(HLEError):
    """A local mass integral is infinite at the origin."""
