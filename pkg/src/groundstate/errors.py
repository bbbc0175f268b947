"""Exception hierarchy shared across the package."""

from __future__ import annotations


class GroundstateError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(GroundstateError, ValueError):
    """A data object violates one of its invariants."""


class SchemaError(GroundstateError, ValueError):
    """A serialized document is malformed or of the wrong kind."""


class ConvergenceError(GroundstateError, RuntimeError):
    """An iterative solver failed to reach its convergence criteria."""


class UnsupportedError(GroundstateError, ValueError):
    """A requested variant (basis, method, element) is not supported."""


class RegistryError(GroundstateError, ValueError):
    """Base class for algorithm-registry errors."""


class DuplicateRegistrationError(RegistryError):
    """(kind, name) pair registered twice."""


class UnknownKindError(RegistryError):
    """Requested algorithm kind has no registrations."""


class UnknownImplementationError(RegistryError):
    """Requested implementation name is not registered under its kind."""


class SettingsError(RegistryError):
    """Unknown settings key or ill-typed settings value."""


class SettingsLockedError(RegistryError):
    """Write attempted on settings locked after execution."""
