"""Domain errors raised by itertime.

Every error can be rendered as the status mapping used on the CLI error
stream via :meth:`ItertimeError.to_dict`.
"""

from typing import Any, Iterable, Optional


class ItertimeError(Exception):
    """Root of every domain error."""

    def __init__(self, message: str = "", **details: Any):
        super().__init__(message)
        self.message = message
        self.details = details

    @property
    def error_type(self) -> str:
        return type(self).__name__

    def to_dict(self) -> dict:
        """Returns the machine-readable error object.

        Returns:
            dict: status, error type, message and any structured details.
        """
        result = {
            "status": "error",
            "error_type": self.error_type,
            "error_message": self.message,
        }
        if self.details:
            result["details"] = {k: _jsonable(v) for k, v in self.details.items()}
        return result


def _jsonable(value: Any) -> Any:
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    if isinstance(value, (list, tuple, set, frozenset)):
        return [_jsonable(v) for v in value]
    return str(value)


# core-time

class InvalidInterval(ItertimeError, ValueError):
    pass


class EmptyInput(ItertimeError, ValueError):
    pass


class NotASeries(ItertimeError, ValueError):
    def __init__(self, first: Any, second: Any, message: Optional[str] = None):
        super().__init__(
            message or f"{first} and {second} are not ordered and disjoint",
            first=first,
            second=second,
        )
        self.pair = (first, second)


class OutOfRange(ItertimeError, IndexError):
    pass


class NotAnElement(ItertimeError, LookupError):
    pass


class NotIncluded(ItertimeError, ValueError):
    pass


class NoComponent(ItertimeError, LookupError):
    pass


class IncompatibleEquivalence(ItertimeError, ValueError):
    pass


class BadPattern(ItertimeError, ValueError):
    pass


# calendar / cti

class UnknownName(ItertimeError, LookupError):
    pass


class ParseError(ItertimeError, ValueError):
    def __init__(self, message: str, position: int, expected: Iterable[str] = ()):
        expected = tuple(expected)
        super().__init__(message, position=position, expected=expected)
        self.position = position
        self.expected = expected


class DegenerateFamily(ItertimeError, ValueError):
    pass


class Unclassified(ItertimeError, LookupError):
    pass


# allen / network

class EmptyRelation(ItertimeError, ValueError):
    pass


class UnknownVocabName(ItertimeError, LookupError):
    pass


class EmptyAfterIntersection(ItertimeError, ValueError):
    def __init__(self, source: str, target: str):
        super().__init__(
            f"constraint between {source} and {target} became empty",
            source=source,
            target=target,
        )


class NoScenario(ItertimeError):
    pass


class InconsistentNetwork(ItertimeError):
    pass


# sdt

class InsolubleStructure(ItertimeError, ValueError):
    pass


# itermodel

class MissingCadre(ItertimeError, ValueError):
    pass


class EmptyTriggerSeries(ItertimeError, ValueError):
    pass


class OverrideOutOfSlot(ItertimeError, ValueError):
    pass


# extractor

class UnknownLabel(ItertimeError, LookupError):
    pass
