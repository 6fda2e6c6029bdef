class CoreRevealerError(Exception):
    """Base class for all errors raised by this package."""


class UnknownIdError(CoreRevealerError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


class InvalidProblemError(CoreRevealerError, ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class ProfileError(CoreRevealerError, ValueError):
    pass


class GraphError(CoreRevealerError, ValueError):
    """A graph operation was called on input violating its precondition."""


class RationalizationError(CoreRevealerError, ValueError):
    pass


class CertificateError(CoreRevealerError, ValueError):
    """A certificate does not match the problem it is claimed for."""


class PreconditionError(CoreRevealerError, ValueError):
    pass


class CoalitionStructureError(CoreRevealerError, ValueError):
    """A coalition is malformed, as opposed to merely not blocking."""


class GuardExceededError(CoreRevealerError, ValueError):
    """An instance is too large for brute-force enumeration."""


class InstanceFormatError(CoreRevealerError, ValueError):
    """Malformed JSON or schema violation in an instance or profile file."""
