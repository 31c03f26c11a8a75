"""Exception hierarchy shared by every module.

Law *violations* are never raised: they are returned inside a
:class:`~hsgkit.report.Report`.  Exceptions are reserved for inputs that
cannot be checked at all (dangling ids, broken preconditions, capacity).
"""


class HSGError(Exception):
    """Base class for all package errors."""


class MalformedInputError(HSGError, ValueError):
    """A table or document references an undeclared id or is structurally broken."""


class PreconditionError(HSGError, ValueError):
    """An operation was called on inputs that violate its precondition."""


class CapacityError(HSGError):
    """An enumeration would exceed the configured cap."""


class TruncationError(CapacityError):
    """A free path extension would produce composites longer than the bound."""


class NotFoundError(HSGError, KeyError):
    """A named token, axis, preset or package does not exist."""

    def __str__(self):
        return str(self.args[0]) if self.args else "not found"


class GuardTypeError(HSGError, TypeError):
    """A guard expression is ill-typed against the grid it is evaluated on."""


class RegistryConflict(HSGError):
    """Duplicate package id, symbol collision, dependent packages or root removal."""


class DependencyError(HSGError):
    """Unresolved dependency or dependency cycle in a registry."""

    def __init__(self, message, path=()):
        super().__init__(message)
        self.path = list(path)


class DocumentError(HSGError):
    """A document failed to parse or validate.

    ``code`` is one of ``syntax``, ``unknown-kind``, ``schema``,
    ``undeclared-symbol``.  ``line``/``column`` are 1-based when known.
    """

    def __init__(self, code, message, line=None, column=None, path=()):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{code}: {message}{where}")
        self.code = code
        self.line = line
        self.column = column
        self.path = tuple(path)


class SimulationInvariantError(HSGError, AssertionError):
    """Raised when a world invariant is breached; reaching it is a bug."""


class NotADomainError(PreconditionError):
    """A ring has zero divisors; ``witness`` is the first pair found."""

    def __init__(self, message, witness):
        super().__init__(message)
        self.witness = witness
