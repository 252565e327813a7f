"""Grammar of iterative temporal adverbials (CTI).

Input is folded to lowercase ASCII first (:func:`normalize`), then parsed
with pyparsing into the frozen AST classes below. :func:`render` writes the
canonical surface form back.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

import pyparsing as pp
import regex

from .calendars import FEMININE, SURFACE_FORMS, CalendarName
from .errors import ParseError
from .text import fold

logger = logging.getLogger(__name__)

pp.ParserElement.enable_packrat()


class Determiner(str, Enum):
    LES = "les"
    UN = "un"
    PLUPART = "plupart"
    CERTAINS = "certains"


class Frequentative(str, Enum):
    SOUVENT = "souvent"
    PARFOIS = "parfois"
    RAREMENT = "rarement"


@dataclass(frozen=True)
class NcSpec:
    name: CalendarName
    suite: Optional["CtiAst"] = None


@dataclass(frozen=True)
class Det:
    det: Determiner
    spec: NcSpec


@dataclass(frozen=True)
class Par:
    """n NC1 par NC2."""

    n: int
    nc1: CalendarName
    nc2: NcSpec

    def __post_init__(self):
        _positive(self.n)


@dataclass(frozen=True)
class FoisPar:
    n: int
    nc: NcSpec

    def __post_init__(self):
        _positive(self.n)


@dataclass(frozen=True)
class Sur:
    """n NC sur p."""

    n: int
    p: int
    nc: NcSpec

    def __post_init__(self):
        _positive(self.n)
        _positive(self.p)
        if self.n > self.p:
            raise ValueError(f"{self.n} sur {self.p}: n must not exceed p")


@dataclass(frozen=True)
class TousLesN:
    n: int
    nc: NcSpec

    def __post_init__(self):
        _positive(self.n)


@dataclass(frozen=True)
class Nth:
    n: int
    nc: CalendarName
    parent: Optional["CtiAst"] = None

    def __post_init__(self):
        _positive(self.n)


@dataclass(frozen=True)
class Clock:
    hour: int
    minute: int = 0
    scope: Optional["CtiAst"] = None

    def __post_init__(self):
        if not (0 <= self.hour <= 23 and 0 <= self.minute <= 59):
            raise ValueError(f"no such clock time {self.hour}h{self.minute:02d}")


@dataclass(frozen=True)
class IntdefExpr:
    """de A a B, optionally restricted to a trailing suite."""

    a: "CtiAst"
    b: "CtiAst"
    within: Optional["CtiAst"] = None


@dataclass(frozen=True)
class Freq:
    adverb: Frequentative
    inner: "CtiAst"


CtiAst = Union[Det, NcSpec, Par, FoisPar, Sur, TousLesN, Nth, Clock, IntdefExpr, Freq]


def _positive(n: int) -> None:
    if n < 1:
        raise ValueError(f"quantities must be at least 1, got {n}")


_ELISION = regex.compile(r"\b([ld])'\s*")
_PUNCT = regex.compile(r"[^\w\s'-]+")
_SPACES = regex.compile(r"\s+")


def normalize(text: str) -> str:
    """Folds case and accents, expands elisions and collapses spaces."""
    text = fold(text)
    text = _ELISION.sub(lambda m: m[1] + "e ", text)
    text = _PUNCT.sub(" ", text)
    return _SPACES.sub(" ", text).strip()


# -- lexicon

NUMBER_WORDS = {
    "un": 1, "une": 1, "deux": 2, "trois": 3, "quatre": 4, "cinq": 5, "six": 6,
    "sept": 7, "huit": 8, "neuf": 9, "dix": 10, "onze": 11, "douze": 12,
    "treize": 13, "quatorze": 14, "quinze": 15, "seize": 16, "vingt": 20, "trente": 30,
}
ORDINAL_WORDS = {
    "premier": 1, "premiere": 1, "premiers": 1, "premieres": 1,
    "second": 2, "seconde": 2, "deuxieme": 2, "troisieme": 3, "quatrieme": 4,
    "cinquieme": 5, "sixieme": 6, "septieme": 7, "huitieme": 8, "neuvieme": 9,
    "dixieme": 10, "dernier": -1, "derniere": -1,
}
FREQUENTATIVES = {
    "souvent": Frequentative.SOUVENT,
    "frequemment": Frequentative.SOUVENT,
    "parfois": Frequentative.PARFOIS,
    "quelquefois": Frequentative.PARFOIS,
    "rarement": Frequentative.RAREMENT,
}
DURATION_UNITS = {"jours", "semaines", "mois", "ans", "annees", "heures", "minutes"}


def _words(table: dict) -> pp.ParserElement:
    """Longest keyword first, each replaced by its table value."""
    return pp.MatchFirst(
        [pp.Keyword(key).set_parse_action(pp.replace_with(table[key])) for key in sorted(table, key=len, reverse=True)]
    )


def _phrase(text: str, value) -> pp.ParserElement:
    return pp.And([pp.Keyword(word) for word in text.split()]).set_parse_action(pp.replace_with(value))


def _kw(*words: str) -> pp.ParserElement:
    return pp.Suppress(pp.MatchFirst([pp.Keyword(w) for w in sorted(words, key=len, reverse=True)]))


NC = _words(SURFACE_FORMS).set_name("calendar name")
DIGITS = pp.Regex(r"\d+\b").set_parse_action(lambda t: int(t[0]))
NUMBER = (DIGITS | _words(NUMBER_WORDS)).set_name("number")
ORDINAL = (
    pp.Regex(r"\d+(?:ere|er|re|eme|e)s?\b").set_parse_action(lambda t: int(regex.match(r"\d+", t[0])[0]))
    | _words({k: v for k, v in ORDINAL_WORDS.items() if v > 0})
).set_name("ordinal")

DETERMINER = pp.MatchFirst(
    [
        _phrase("la plupart des", Determiner.PLUPART),
        _phrase("la plupart de les", Determiner.PLUPART),
        _phrase("presque tous les", Determiner.PLUPART),
        _phrase("presque toutes les", Determiner.PLUPART),
        _phrase("tous les", Determiner.LES),
        _phrase("toutes les", Determiner.LES),
        _phrase("un certain", Determiner.UN),
        _phrase("une certaine", Determiner.UN),
        _phrase("chaque", Determiner.LES),
        _phrase("les", Determiner.LES),
        _phrase("le", Determiner.LES),
        _phrase("la", Determiner.LES),
        _phrase("un", Determiner.UN),
        _phrase("une", Determiner.UN),
        _phrase("certains", Determiner.CERTAINS),
        _phrase("certaines", Determiner.CERTAINS),
        _phrase("quelques", Determiner.CERTAINS),
        _phrase("des", Determiner.CERTAINS),
    ]
).set_name("determiner")


@dataclass(frozen=True)
class _ClockTime:
    hour: int
    minute: int


def _clock_from_regex(tokens) -> _ClockTime:
    found = regex.match(r"(\d{1,2})\s*h(?:eures?)?\s*(\d{2})?", tokens[0])
    return _ClockTime(int(found[1]), int(found[2] or 0))


CLOCK_TIME = (
    pp.Regex(r"\d{1,2}\s*h(?:eures?)?(?:\s*\d{2})?\b").set_parse_action(_clock_from_regex)
    | (_words(NUMBER_WORDS) + _kw("heures", "heure", "h") + pp.Optional(DIGITS, default=0)).set_parse_action(
        lambda t: _ClockTime(t[0], t[1])
    )
    | _phrase("midi", _ClockTime(12, 0))
    | _phrase("minuit", _ClockTime(0, 0))
).set_name("clock time")
CLOCK = _kw("a") + CLOCK_TIME

CTI = pp.Forward().set_name("CTI")
CORE = pp.Forward().set_name("CTI")
NCSPEC = pp.Forward().set_name("calendar name")

BARE = NCSPEC.copy().add_parse_action(lambda t: Det(Determiner.LES, t[0]))
SUITE = (_kw("de", "en") + (CORE | BARE)) | (_kw("des", "du") + BARE)
NCSPEC <<= (NC + pp.Optional(SUITE)).set_parse_action(lambda t: NcSpec(t[0], t[1] if len(t) > 1 else None))

TOUS_LES_N = (_kw("tous", "toutes") + _kw("les") + NUMBER + NCSPEC).set_parse_action(lambda t: TousLesN(t[0], t[1]))
UN_DE_CHAQUE = (_kw("un", "une") + NC + _kw("de", "en") + _kw("chaque") + NCSPEC).set_parse_action(
    lambda t: Par(1, t[0], t[1])
)
FOIS_PAR = (NUMBER + _kw("fois") + _kw("par") + NCSPEC).set_parse_action(lambda t: FoisPar(t[0], t[1]))
PAR = (NUMBER + NC + _kw("par") + NCSPEC).set_parse_action(lambda t: Par(t[0], t[1], t[2]))
SUR = (NUMBER + NCSPEC + _kw("sur") + NUMBER).set_parse_action(lambda t: Sur(t[0], t[2], t[1]))
NTH = (_kw("le", "la", "les") + ORDINAL + NC + pp.Optional(SUITE)).set_parse_action(
    lambda t: Nth(t[0], t[1], t[2] if len(t) > 2 else None)
)
DET_EXPR = (DETERMINER + NCSPEC).set_parse_action(lambda t: Det(t[0], t[1]))

CORE <<= TOUS_LES_N | UN_DE_CHAQUE | FOIS_PAR | PAR | SUR | NTH | DET_EXPR


def _term(tokens):
    if len(tokens) == 3 or (len(tokens) == 2 and isinstance(tokens[0], int)):
        return Nth(tokens[0], tokens[1], tokens[2] if len(tokens) > 2 else None)
    return Det(Determiner.LES, NcSpec(tokens[0], tokens[1] if len(tokens) > 1 else None))


TERM = (pp.Optional(ORDINAL) + NC + pp.Optional(SUITE)).set_parse_action(_term)


def _intdef(tokens) -> IntdefExpr:
    first, second = tokens[0], tokens[1]
    # "de lundi a vendredi de mars": the trailing suite restricts the whole span
    if isinstance(first, Det) and isinstance(second, Det) and first.spec.suite is None and second.spec.suite is not None:
        return IntdefExpr(first, Det(Determiner.LES, NcSpec(second.spec.name)), second.spec.suite)
    return IntdefExpr(first, second)


INTDEF = (_kw("de", "du") + TERM + _kw("a") + pp.Optional(_kw("la", "le")) + TERM).set_parse_action(_intdef)
FREQ = (_words(FREQUENTATIVES) + CTI).set_parse_action(lambda t: Freq(t[0], t[1]))
CLOCK_FIRST = (CLOCK + pp.Optional(CORE)).set_parse_action(
    lambda t: Clock(t[0].hour, t[0].minute, t[1] if len(t) > 1 else None)
)
CORE_CLOCK = (CORE + pp.Optional(CLOCK)).set_parse_action(
    lambda t: Clock(t[1].hour, t[1].minute, t[0]) if len(t) > 1 else t[0]
)

CTI <<= FREQ | INTDEF | CLOCK_FIRST | CORE_CLOCK
GRAMMAR = CTI + pp.StringEnd()

_DURATIVE_QUELQUES = regex.compile(r"\bquelques (" + "|".join(sorted(DURATION_UNITS)) + r")\b(?! (?:de|du|des|en)\b)")


def parse(text: str) -> CtiAst:
    """Parses a CTI into its AST.

    Raises:
        ParseError: with the failing position and what the grammar expected there.
    """
    normalized = normalize(text)
    durative = _DURATIVE_QUELQUES.search(normalized)
    if durative:
        raise ParseError(
            f"'{durative[0]}' reads as a duration, not an iteration",
            position=durative.start(),
            expected=("calendar name other than a duration unit",),
        )
    try:
        ast = GRAMMAR.parse_string(normalized, parse_all=True)[0]
    except pp.ParseBaseException as exc:
        wanted = regex.match(r"Expected (.+?)(?:, found .*)?$", exc.msg)
        expected = (wanted[1] if wanted else exc.msg,)
        raise ParseError(f"cannot parse {normalized!r} at {exc.loc}: {exc.msg}", position=exc.loc, expected=expected) from exc
    except ValueError as exc:
        raise ParseError(f"cannot parse {normalized!r}: {exc}", position=0) from exc
    logger.debug("parsed %r as %r", normalized, ast)
    return ast


# -- rendering


def _form(name: CalendarName, plural: bool) -> str:
    return name.plural if plural else name.singular


def _render_spec(spec: NcSpec, plural: bool) -> str:
    text = _form(spec.name, plural)
    if spec.suite is not None:
        text += " " + _render_suite(spec.suite)
    return text


def _render_suite(suite: CtiAst) -> str:
    if isinstance(suite, Det) and suite.det is Determiner.LES:
        return "de " + _render_spec(suite.spec, plural=False)
    return "de " + render(suite)


def _render_term(term: CtiAst) -> str:
    if isinstance(term, Nth):
        return _render_nth_body(term)
    return _render_spec(term.spec, plural=False)


def _render_nth_body(node: Nth) -> str:
    text = f"{node.n}e {_form(node.nc, False)}"
    if node.parent is not None:
        text += " " + _render_suite(node.parent)
    return text


def render(ast: CtiAst) -> str:
    """Canonical surface text; parsing it gives back an equal AST."""
    if isinstance(ast, Det):
        feminine = ast.spec.name in FEMININE
        if ast.det is Determiner.LES:
            return "les " + _render_spec(ast.spec, plural=True)
        if ast.det is Determiner.UN:
            return ("une " if feminine else "un ") + _render_spec(ast.spec, plural=False)
        if ast.det is Determiner.PLUPART:
            return "la plupart des " + _render_spec(ast.spec, plural=True)
        return ("certaines " if feminine else "certains ") + _render_spec(ast.spec, plural=True)
    if isinstance(ast, NcSpec):
        return "les " + _render_spec(ast, plural=True)
    if isinstance(ast, Par):
        return f"{ast.n} {_form(ast.nc1, ast.n > 1)} par {_render_spec(ast.nc2, plural=False)}"
    if isinstance(ast, FoisPar):
        return f"{ast.n} fois par {_render_spec(ast.nc, plural=False)}"
    if isinstance(ast, Sur):
        return f"{ast.n} {_render_spec(ast.nc, plural=ast.n > 1)} sur {ast.p}"
    if isinstance(ast, TousLesN):
        return f"tous les {ast.n} {_render_spec(ast.nc, plural=True)}"
    if isinstance(ast, Nth):
        return "le " + _render_nth_body(ast)
    if isinstance(ast, Clock):
        time = f"a {ast.hour}h{ast.minute:02d}" if ast.minute else f"a {ast.hour}h"
        return time if ast.scope is None else f"{render(ast.scope)} {time}"
    if isinstance(ast, IntdefExpr):
        text = f"de {_render_term(ast.a)} a {_render_term(ast.b)}"
        if ast.within is not None:
            text += " " + _render_suite(ast.within)
        return text
    if isinstance(ast, Freq):
        return f"{ast.adverb.value} {render(ast.inner)}"
    raise TypeError(f"not a CTI node: {ast!r}")
