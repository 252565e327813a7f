from datetime import date

import pytest

from itertime.calendars import Frame
from itertime.series import ConvexInterval, Series


@pytest.fixture
def year_2005():
    return Frame.from_iso("2005-01-01", "2006-01-01")


@pytest.fixture
def march_2005():
    return Frame.from_iso("2005-03-01", "2005-04-01")


@pytest.fixture
def years_2004_2005():
    return Frame.from_iso("2004-01-01", "2006-01-01")


@pytest.fixture
def years_2004_2006():
    return Frame.from_iso("2004-01-01", "2007-01-01")


def spans(*pairs):
    """Series from (beg, end) pairs; a lone int is a point."""
    return Series(ConvexInterval.point(p) if isinstance(p, int) else ConvexInterval(*p) for p in pairs)


def days(frame, series):
    """Calendar dates of the items' starts."""
    return [frame.datetime_at(item.beg).date() for item in series]


def d(text: str) -> date:
    return date.fromisoformat(text)
