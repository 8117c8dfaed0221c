"""Exception hierarchy shared by every layer of the package."""


class EllipticError(Exception):
    """Base class for all package errors."""


class NonConvergence(EllipticError):
    """A series or product hit its truncation cap before reaching the tail threshold."""


class PoleError(EllipticError):
    """An evaluation point lies on (or within the lattice tolerance of) a pole."""


class DomainError(EllipticError, ValueError):
    """Arguments outside the domain of an operation."""


class BalanceViolation(DomainError):
    """A summation formula was requested for parameters that are not balanced."""


class InfiniteSum(EllipticError):
    """Pairing of two combs whose supports overlap on an infinite set."""


class LatticeMismatch(EllipticError):
    """Two shift lattices are not commensurate."""


class ConfigError(EllipticError):
    """Malformed verification config."""


class UnknownSuite(EllipticError, KeyError):
    """Requested identity suite does not exist."""
