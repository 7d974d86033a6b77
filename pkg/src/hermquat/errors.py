"""Exception types shared across the package."""


class Error(Exception):
    """Base class for every error raised by this package."""


class InputError(Error):
    """Malformed or out-of-contract input (bad JSON, composite modulus, ...)."""


class RankError(Error):
    """A matrix or vector family does not have the required rank."""


class NotHermitianError(Error):
    """A quadratic form fails the norm-scaling law of hermitian forms."""


class DegenerateFormError(Error):
    """The hermitian form is degenerate where nondegeneracy is required."""


class NotIntegralError(Error):
    """A form/lattice pair fails integrality where it is required."""


class MembershipError(Error):
    """A vector does not lie in the lattice it is required to belong to."""


class BStabilityError(Error):
    """A lattice is not stable under the ring of integers acting on it."""


class ClosureError(Error):
    """A lattice inside an algebra is not closed under multiplication."""


class HypothesisError(Error):
    """A square-free discriminant hypothesis fails at a prime."""

    def __init__(self, message: str, prime: int | None = None):
        super().__init__(message)
        self.prime = prime


class UnsupportedRamificationError(Error):
    """2-adically ramified input; outside the supported theory."""


class InvariantViolation(Error):
    """An identity that provably holds failed exactly; almost surely a bug."""
