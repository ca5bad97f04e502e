"""Exception taxonomy shared by the whole package."""


class HalfInvError(Exception):
    """Base class for all errors raised by halfinv."""


class ConfigError(HalfInvError):
    """Invalid job description, grid spec, or parameter combination."""


class PoleReached(HalfInvError):
    """A closed-form coefficient was evaluated at or beyond its pole."""


class Unsolvable(HalfInvError):
    """The membership/positivity gate rejected the data.

    Carries the membership report (and the positivity margin when the
    failure happened at the factorization gate) so callers can still
    write out the diagnostic.
    """

    def __init__(self, message, report=None, margin=None):
        super().__init__(message)
        self.report = report
        self.margin = margin


class NumericalError(HalfInvError):
    """A numerical procedure failed in a detectable way."""


class BracketFailure(NumericalError):
    """No sign change found in an eigenvalue seed window after widening."""


class NotAnEigenvalue(NumericalError):
    """A norming constant was requested at a non-root of the characteristic."""


class NoConvergence(NumericalError):
    """An iterative scheme exceeded its iteration budget."""


class IllConditioned(NumericalError):
    """Condition estimate of a linear system exceeded the trust threshold."""


class SingularSystem(NumericalError):
    """A dense linear system was numerically singular."""


class BoundaryDegenerate(NumericalError):
    """An eigenfunction vanished at the right endpoint within tolerance."""
