"""Named calendar series over a finite frame.

Units are expanded with ``dateutil.rrule`` from an anchor before the frame
origin, then converted to integer minute offsets and kept whole (strict) or
clipped (soft) at the frame boundaries.
"""

import logging
from dataclasses import dataclass
from datetime import datetime, time, timedelta
from enum import Enum
from typing import Callable, Iterator, Union

from dateutil.parser import isoparse
from dateutil.relativedelta import relativedelta
from dateutil.rrule import DAILY, HOURLY, MONTHLY, WEEKLY, YEARLY, rrule, weekday
from dateutil.rrule import FR, MO, SA, SU, TH, TU, WE

from .config import get_settings
from .errors import InvalidInterval, UnknownName
from .series import ConvexInterval, Mode, Series, extracted, included, series_to_dict
from .text import fold

logger = logging.getLogger(__name__)

MINUTE = timedelta(minutes=1)


@dataclass(frozen=True)
class Frame:
    """The reference frame: every instant is a minute offset from ``origin``."""

    origin: datetime
    horizon: datetime

    def __post_init__(self):
        if self.origin >= self.horizon:
            raise InvalidInterval(f"frame origin {self.origin} is not before horizon {self.horizon}")

    @classmethod
    def from_iso(cls, start: str, end: str) -> "Frame":
        return cls(_naive(isoparse(start)), _naive(isoparse(end)))

    @property
    def span(self) -> int:
        return (self.horizon - self.origin) // MINUTE

    @property
    def interval(self) -> ConvexInterval:
        return ConvexInterval(0, self.span)

    def as_series(self) -> Series:
        return Series([self.interval])

    def instant(self, moment: datetime) -> int:
        return (moment - self.origin) // MINUTE

    def datetime_at(self, instant: int) -> datetime:
        return self.origin + instant * MINUTE

    def parse_instant(self, text: str) -> int:
        return self.instant(_naive(isoparse(text)))

    def render(self, series: Series) -> list[list[str]]:
        return series_to_dict(series, self.origin)["iso"]


def _naive(moment: datetime) -> datetime:
    if moment.tzinfo is not None:
        logger.debug("dropping time zone from %s", moment.isoformat())
        return moment.replace(tzinfo=None)
    return moment


class CalendarName(str, Enum):
    JOUR = "jour"
    SEMAINE = "semaine"
    MOIS = "mois"
    AN = "an"
    HEURE = "heure"
    SAISON = "saison"
    LUNDI = "lundi"
    MARDI = "mardi"
    MERCREDI = "mercredi"
    JEUDI = "jeudi"
    VENDREDI = "vendredi"
    SAMEDI = "samedi"
    DIMANCHE = "dimanche"
    JANVIER = "janvier"
    FEVRIER = "fevrier"
    MARS = "mars"
    AVRIL = "avril"
    MAI = "mai"
    JUIN = "juin"
    JUILLET = "juillet"
    AOUT = "aout"
    SEPTEMBRE = "septembre"
    OCTOBRE = "octobre"
    NOVEMBRE = "novembre"
    DECEMBRE = "decembre"
    PRINTEMPS = "printemps"
    ETE = "ete"
    AUTOMNE = "automne"
    HIVER = "hiver"
    MATIN = "matin"
    APRES_MIDI = "apres-midi"
    SOIR = "soir"
    NUIT = "nuit"

    @classmethod
    def parse(cls, text: str) -> "CalendarName":
        """Accepts accented or ASCII, singular or plural surface forms."""
        key = fold(text).strip()
        name = SURFACE_FORMS.get(key)
        if name is None:
            raise UnknownName(f"unknown calendar name {text!r}")
        return name

    @property
    def singular(self) -> str:
        return _PLURALS.get(self, (self.value, self.value))[0]

    @property
    def plural(self) -> str:
        return _PLURALS.get(self, (self.value, self.value + "s"))[1]


WEEKDAYS: dict[CalendarName, weekday] = {
    CalendarName.LUNDI: MO,
    CalendarName.MARDI: TU,
    CalendarName.MERCREDI: WE,
    CalendarName.JEUDI: TH,
    CalendarName.VENDREDI: FR,
    CalendarName.SAMEDI: SA,
    CalendarName.DIMANCHE: SU,
}
MONTHS: dict[CalendarName, int] = {
    name: number
    for number, name in enumerate(
        [
            CalendarName.JANVIER, CalendarName.FEVRIER, CalendarName.MARS,
            CalendarName.AVRIL, CalendarName.MAI, CalendarName.JUIN,
            CalendarName.JUILLET, CalendarName.AOUT, CalendarName.SEPTEMBRE,
            CalendarName.OCTOBRE, CalendarName.NOVEMBRE, CalendarName.DECEMBRE,
        ],
        start=1,
    )
}
SEASONS = (CalendarName.PRINTEMPS, CalendarName.ETE, CalendarName.AUTOMNE, CalendarName.HIVER)
DAY_PARTS = (CalendarName.MATIN, CalendarName.APRES_MIDI, CalendarName.SOIR, CalendarName.NUIT)

_PLURALS = {
    CalendarName.MOIS: ("mois", "mois"),
    CalendarName.AN: ("an", "ans"),
    CalendarName.PRINTEMPS: ("printemps", "printemps"),
    CalendarName.APRES_MIDI: ("apres-midi", "apres-midi"),
    CalendarName.MARS: ("mars", "mars"),
}
for _month in MONTHS:
    _PLURALS.setdefault(_month, (_month.value, _month.value))

SURFACE_FORMS: dict[str, CalendarName] = {}
for _name in CalendarName:
    SURFACE_FORMS[_name.singular] = _name
    SURFACE_FORMS[_name.plural] = _name
SURFACE_FORMS.update({"annee": CalendarName.AN, "annees": CalendarName.AN, "apres-midis": CalendarName.APRES_MIDI})

FEMININE = frozenset({CalendarName.SEMAINE, CalendarName.HEURE, CalendarName.SAISON, CalendarName.NUIT})


def _midnight(moment: datetime) -> datetime:
    return datetime.combine(moment.date(), time())


Span = tuple[datetime, datetime]


def _units(rule: rrule, length: Union[relativedelta, Callable[[datetime], datetime]]) -> Iterator[Span]:
    for start in rule:
        end = length(start) if callable(length) else start + length
        yield start, end


def _season_spans(season: CalendarName, frame: Frame) -> Iterator[Span]:
    starts = get_settings().season_starts
    order = [s.value for s in SEASONS]
    month, day = starts[season.value]
    next_month, next_day = starts[order[(order.index(season.value) + 1) % len(order)]]

    def season_end(start: datetime) -> datetime:
        year = start.year + (1 if (next_month, next_day) <= (month, day) else 0)
        return datetime(year, next_month, next_day)

    rule = rrule(YEARLY, bymonth=month, bymonthday=day,
                 dtstart=datetime(frame.origin.year - 1, 1, 1), until=frame.horizon)
    return _units(rule, season_end)


def _spans(name: CalendarName, frame: Frame) -> Iterator[Span]:
    origin, until = frame.origin, frame.horizon
    if name is CalendarName.HEURE:
        start = origin.replace(minute=0, second=0, microsecond=0)
        return _units(rrule(HOURLY, dtstart=start, until=until), relativedelta(hours=1))
    if name is CalendarName.JOUR:
        return _units(rrule(DAILY, dtstart=_midnight(origin), until=until), relativedelta(days=1))
    if name is CalendarName.SEMAINE:
        monday = _midnight(origin) - timedelta(days=origin.weekday())
        return _units(rrule(WEEKLY, dtstart=monday, until=until), relativedelta(weeks=1))
    if name is CalendarName.MOIS:
        first = _midnight(origin).replace(day=1)
        return _units(rrule(MONTHLY, dtstart=first, until=until), relativedelta(months=1))
    if name is CalendarName.AN:
        return _units(rrule(YEARLY, dtstart=datetime(origin.year, 1, 1), until=until), relativedelta(years=1))
    if name in WEEKDAYS:
        rule = rrule(WEEKLY, byweekday=WEEKDAYS[name], dtstart=_midnight(origin), until=until)
        return _units(rule, relativedelta(days=1))
    if name in MONTHS:
        rule = rrule(YEARLY, bymonth=MONTHS[name], bymonthday=1,
                     dtstart=datetime(origin.year, 1, 1), until=until)
        return _units(rule, relativedelta(months=1))
    if name in SEASONS:
        return _season_spans(name, frame)
    if name is CalendarName.SAISON:
        return iter(sorted(span for season in SEASONS for span in _season_spans(season, frame)))
    begin, end = get_settings().day_parts[name.value]
    rule = rrule(DAILY, dtstart=_midnight(origin) - timedelta(days=1), until=until)
    return ((day + begin * MINUTE, day + end * MINUTE) for day in rule)


def gen(name: CalendarName, frame: Frame, mode: Mode = "strict") -> Series:
    """All units called ``name`` meeting the frame, whole or clipped."""
    items = []
    for start, end in _spans(name, frame):
        beg, stop = frame.instant(start), frame.instant(end)
        if stop <= 0 or beg >= frame.span:
            continue
        if mode == "strict":
            if beg >= 0 and stop <= frame.span:
                items.append(ConvexInterval(beg, stop))
        else:
            items.append(ConvexInterval(max(beg, 0), min(stop, frame.span)))
    logger.debug("gen %s over %s: %d units (%s)", name.value, frame, len(items), mode)
    return Series(items)


class LexiconRelation(str, Enum):
    SORTE_DE = "sorte_de"
    INCLUSION = "inclusion"


def lexicon_holds(relation: LexiconRelation, first: CalendarName, second: CalendarName, frame: Frame) -> bool:
    """Checks a lexicon relation extensionally over the frame."""
    narrower = gen(first, frame, "strict")
    wider = gen(second, frame, "soft")
    if LexiconRelation(relation) is LexiconRelation.SORTE_DE:
        return extracted(narrower, wider)
    return included(narrower, wider)
