"""Exception taxonomy shared by every module."""


class SchurError(Exception):
    """Base class for toolkit errors."""


class ValidationError(SchurError):
    """A Cayley table or subgroup failed its structural invariants."""


class ParseError(SchurError):
    """Presentation text could not be parsed; carries line/column."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class EnumerationError(SchurError):
    """Coset enumeration did not close within its budget."""


class SizeError(SchurError):
    """An input exceeds a configured size cap."""


class UndecidedError(SchurError):
    """Isomorphism search exhausted its budget without an answer."""


class ConsistencyError(SchurError):
    """An internal invariant failed; indicates a bug or corrupt input."""


class CatalogError(SchurError):
    """Unknown catalog id, uncovered family, or catalog integrity failure."""
