"""Iterated temporal reference: series of intervals, iterative adverbials,
Allen constraint networks and aspect structures."""

from .calendars import CalendarName, Frame, gen
from .cti import parse, render
from .denotation import DenoteOptions, compare, denote, evaluate, resolve, witness
from .errors import ItertimeError
from .series import ConvexInterval, Series

__all__ = [
    "CalendarName",
    "ConvexInterval",
    "DenoteOptions",
    "Frame",
    "ItertimeError",
    "Series",
    "compare",
    "denote",
    "evaluate",
    "gen",
    "parse",
    "render",
    "resolve",
    "witness",
]
