"""Integer timeline, convex and generalized intervals, and the series algebra.

Instants are integer minutes from a frame origin. A ConvexInterval with
beg < end is the half-open span [beg, end); beg == end is a point. Read as
sets of instants, a span holds beg..end-1 and a point holds its single
instant.
"""

import logging
from bisect import bisect_left, bisect_right
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from datetime import datetime, timedelta
from itertools import pairwise
from typing import Callable, Hashable, Iterable, Iterator, Literal, Optional, Union

from .errors import (
    BadPattern,
    EmptyInput,
    IncompatibleEquivalence,
    InvalidInterval,
    NoComponent,
    NotAnElement,
    NotASeries,
    NotIncluded,
    OutOfRange,
)

logger = logging.getLogger(__name__)

Mode = Literal["strict", "soft"]


@dataclass(frozen=True, order=True)
class ConvexInterval:
    beg: int
    end: int

    def __post_init__(self):
        if self.beg > self.end:
            raise InvalidInterval(f"interval end {self.end} precedes beg {self.beg}")

    @classmethod
    def point(cls, at: int) -> "ConvexInterval":
        return cls(at, at)

    @property
    def is_point(self) -> bool:
        return self.beg == self.end

    @property
    def length(self) -> int:
        return self.end - self.beg

    def contains(self, other: "ConvexInterval") -> bool:
        """Point-wise inclusion of ``other`` in this interval."""
        if other.is_point:
            if self.is_point:
                return other.beg == self.beg
            return self.beg <= other.beg < self.end
        return not self.is_point and self.beg <= other.beg and other.end <= self.end

    def intersection(self, other: "ConvexInterval") -> Optional["ConvexInterval"]:
        if self.is_point:
            return self if other.contains(self) else None
        if other.is_point:
            return other if self.contains(other) else None
        beg, end = max(self.beg, other.beg), min(self.end, other.end)
        return ConvexInterval(beg, end) if beg < end else None

    def intersects(self, other: "ConvexInterval") -> bool:
        return self.intersection(other) is not None

    def __repr__(self) -> str:
        if self.is_point:
            return f"[{self.beg}]"
        return f"[{self.beg},{self.end})"


class GeneralizedInterval:
    """A finite union of convex intervals.

    Touching spans are merged into maximal runs for containment tests;
    points not covered by a span stay as runs of their own.
    """

    __slots__ = ("parts", "_runs", "_run_begs")

    def __init__(self, parts: Iterable[ConvexInterval]):
        self.parts = tuple(sorted(set(parts)))
        if not self.parts:
            raise EmptyInput("a generalized interval needs at least one part")
        runs: list[ConvexInterval] = []
        for part in (p for p in self.parts if not p.is_point):
            if runs and part.beg <= runs[-1].end:
                runs[-1] = ConvexInterval(runs[-1].beg, max(runs[-1].end, part.end))
            else:
                runs.append(part)
        spans = list(runs)
        for part in (p for p in self.parts if p.is_point):
            if not any(span.contains(part) for span in _candidates(spans, part)):
                runs.append(part)
        runs.sort()
        self._runs = tuple(runs)
        self._run_begs = [run.beg for run in runs]

    @property
    def beg(self) -> int:
        return self.parts[0].beg

    @property
    def end(self) -> int:
        return max(part.end for part in self.parts)

    @property
    def runs(self) -> tuple[ConvexInterval, ...]:
        return self._runs

    def contains(self, interval: ConvexInterval) -> bool:
        k = bisect_right(self._run_begs, interval.beg) - 1
        return any(self._runs[i].contains(interval) for i in (k - 1, k) if i >= 0)

    def clip(self, interval: ConvexInterval) -> list[ConvexInterval]:
        """Pieces of ``interval`` lying inside this generalized interval."""
        pieces = []
        k = max(bisect_right(self._run_begs, interval.beg) - 2, 0)
        for run in self._runs[k:]:
            if run.beg > interval.end:
                break
            piece = interval.intersection(run)
            if piece is not None:
                pieces.append(piece)
        return pieces

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GeneralizedInterval) and self.parts == other.parts

    def __hash__(self) -> int:
        return hash(self.parts)

    def __repr__(self) -> str:
        return "{" + ", ".join(map(repr, self.parts)) + "}"


def _candidates(spans: list[ConvexInterval], point: ConvexInterval) -> list[ConvexInterval]:
    k = bisect_right([s.beg for s in spans], point.beg) - 1
    return [spans[k]] if k >= 0 else []


class Series(Sequence[ConvexInterval]):
    """Ordered, pairwise-disjoint convex intervals; validated on construction."""

    __slots__ = ("_items", "_begs")

    def __init__(self, items: Iterable[ConvexInterval] = ()):
        self._items = tuple(items)
        for first, second in pairwise(self._items):
            if first.end > second.beg or first == second:
                raise NotASeries(first, second)
        self._begs = [item.beg for item in self._items]

    @property
    def items(self) -> tuple[ConvexInterval, ...]:
        return self._items

    def __len__(self) -> int:
        return len(self._items)

    def __getitem__(self, index):
        if isinstance(index, slice):
            return Series(self._items[index])
        return self._items[index]

    def __iter__(self) -> Iterator[ConvexInterval]:
        return iter(self._items)

    def __contains__(self, interval: object) -> bool:
        return isinstance(interval, ConvexInterval) and self._position(interval) is not None

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Series):
            return self._items == other._items
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._items)

    def __repr__(self) -> str:
        return f"Series({list(self._items)!r})"

    def _position(self, interval: ConvexInterval) -> Optional[int]:
        k = bisect_left(self._begs, interval.beg)
        while k < len(self._items) and self._begs[k] == interval.beg:
            if self._items[k] == interval:
                return k
            k += 1
        return None

    def _component_index(self, interval: ConvexInterval) -> Optional[int]:
        k = bisect_right(self._begs, interval.beg) - 1
        for i in (k - 1, k):
            if i >= 0 and self._items[i].contains(interval):
                return i
        return None


def order_leq(first: ConvexInterval, second: ConvexInterval) -> bool:
    return first.end <= second.beg


def convexify(parts: Iterable[ConvexInterval]) -> ConvexInterval:
    """Smallest convex interval covering every part."""
    parts = list(parts.parts if isinstance(parts, GeneralizedInterval) else parts)
    if not parts:
        raise EmptyInput("convexify needs at least one interval")
    return ConvexInterval(min(p.beg for p in parts), max(p.end for p in parts))


def make_series(items: Iterable[ConvexInterval]) -> Series:
    return Series(items)


def nth(series: Series, n: int) -> ConvexInterval:
    if not 1 <= n <= len(series):
        raise OutOfRange(f"index {n} outside 1..{len(series)}")
    return series[n - 1]


def ordre(series: Series, interval: ConvexInterval) -> int:
    position = series._position(interval)
    if position is None:
        raise NotAnElement(f"{interval!r} is not an element of the series")
    return position + 1


def succ(series: Series, interval: ConvexInterval) -> Optional[ConvexInterval]:
    rank = ordre(series, interval)
    return series[rank] if rank < len(series) else None


def fst(series: Series) -> ConvexInterval:
    if not series:
        raise EmptyInput("empty series has no first element")
    return series[0]


def ext(series: Series) -> GeneralizedInterval:
    if not series:
        raise EmptyInput("empty series has no extension")
    return GeneralizedInterval(series)


def included(first: Series, second: Series) -> bool:
    return all(second._component_index(item) is not None for item in first)


def extracted(first: Series, second: Series) -> bool:
    return all(item in second for item in first)


def compos(interval: ConvexInterval, parent: Series) -> ConvexInterval:
    index = parent._component_index(interval)
    if index is None:
        raise NoComponent(f"no component of the parent series contains {interval!r}")
    return parent[index]


class RatioMap(Mapping[ConvexInterval, int]):
    """Count of child items per parent component."""

    __slots__ = ("parent", "counts")

    def __init__(self, parent: Series, counts: Sequence[int]):
        self.parent = parent
        self.counts = tuple(counts)

    def __getitem__(self, component: ConvexInterval) -> int:
        return self.counts[ordre(self.parent, component) - 1]

    def __iter__(self) -> Iterator[ConvexInterval]:
        return iter(self.parent)

    def __len__(self) -> int:
        return len(self.parent)

    def total(self) -> int:
        return sum(self.counts)

    def is_constant(self, n: Optional[int] = None) -> bool:
        values = set(self.counts)
        if n is None:
            return len(values) <= 1
        return values <= {n}

    def __repr__(self) -> str:
        return f"RatioMap({list(self.counts)})"


def ratio(child: Series, parent: Series) -> RatioMap:
    counts = [0] * len(parent)
    for item in child:
        index = parent._component_index(item)
        if index is None:
            raise NotIncluded(f"{item!r} lies in no component of the parent series")
        counts[index] += 1
    return RatioMap(parent, counts)


def _as_series(reference: Union[Series, ConvexInterval]) -> Series:
    return Series([reference]) if isinstance(reference, ConvexInterval) else reference


def complement(series: Series, reference: Union[Series, ConvexInterval]) -> Series:
    """Maximal sub-spans of the reference holding no instant of ``series``."""
    reference = _as_series(reference)
    if not included(series, reference):
        raise NotIncluded("the series is not included in the reference")
    inside: list[list[ConvexInterval]] = [[] for _ in reference]
    for item in series:
        inside[reference._component_index(item)].append(item)
    pieces: list[ConvexInterval] = []
    for component, items in zip(reference, inside):
        if component.is_point:
            if not items:
                pieces.append(component)
            continue
        cursor = component.beg
        for item in items:
            if item.beg > cursor:
                pieces.append(ConvexInterval(cursor, item.beg))
            cursor = max(cursor, item.end if not item.is_point else item.beg + 1)
        if cursor < component.end:
            pieces.append(ConvexInterval(cursor, component.end))
    return Series(pieces)


def gap(series: Series) -> Series:
    """The holes between consecutive items."""
    pieces = []
    for first, second in pairwise(series):
        start = first.beg + 1 if first.is_point else first.end
        if start < second.beg:
            pieces.append(ConvexInterval(start, second.beg))
    return Series(pieces)


def restrict(
    series: Series,
    window: Union[ConvexInterval, GeneralizedInterval],
    mode: Mode = "strict",
) -> Series:
    if mode == "strict":
        return Series(item for item in series if window.contains(item))
    if isinstance(window, ConvexInterval):
        window = GeneralizedInterval([window])
    return Series(piece for item in series for piece in window.clip(item))


def restrict_series(series: Series, parent: Series, mode: Mode = "strict") -> Series:
    if not parent:
        return Series()
    return restrict(series, ext(parent), mode)


def _ranks_in_components(series: Series, parent: Series) -> Iterator[tuple[ConvexInterval, int]]:
    counts: dict[int, int] = {}
    for item in series:
        index = parent._component_index(item)
        if index is None:
            continue
        counts[index] = counts.get(index, 0) + 1
        yield item, counts[index]


def restrict_nth(series: Series, parent: Series, n: int) -> Series:
    """Items that are the n-th of ``series`` inside their parent component."""
    return restrict_set(series, parent, {n})


def restrict_set(series: Series, parent: Series, ranks: Iterable[int]) -> Series:
    ranks = set(ranks)
    if not ranks or min(ranks) < 1:
        raise BadPattern("ranks must be a nonempty set of positive integers")
    return Series(item for item, rank in _ranks_in_components(series, parent) if rank in ranks)


def restrict_pred(series: Series, predicate: Callable[[ConvexInterval], bool]) -> Series:
    return Series(item for item in series if predicate(item))


class QuotientSeries(Series):
    """Class hulls that remember which source item went to which class.

    A point at the end of a hull cannot be told apart geometrically from
    the start of the next hull; lookups of source items use the grouping.
    """

    __slots__ = ("_classes",)

    def __init__(self, hulls: Iterable[ConvexInterval], classes: dict[ConvexInterval, int]):
        super().__init__(hulls)
        self._classes = classes

    def _component_index(self, interval: ConvexInterval) -> Optional[int]:
        index = self._classes.get(interval)
        if index is not None:
            return index
        return super()._component_index(interval)


def quotient(series: Series, grouping: Callable[[int], Hashable]) -> Series:
    """Convex hull of each class, classes keyed by the 1-based item index."""
    classes: list[list[ConvexInterval]] = []
    seen: set = set()
    current = object()
    for index, item in enumerate(series, start=1):
        key = grouping(index)
        if key != current:
            if key in seen:
                raise IncompatibleEquivalence(f"class {key!r} is not a contiguous run of indices")
            seen.add(key)
            current = key
            classes.append([])
        classes[-1].append(item)
    hulls = []
    for position, members in enumerate(classes):
        hull = convexify(members)
        last = members[-1]
        # a trailing point must stay inside its half-open hull
        if last.is_point and not hull.is_point and last.beg == hull.end:
            following = classes[position + 1][0] if position + 1 < len(classes) else None
            if following is None or following.beg > hull.end:
                hull = ConvexInterval(hull.beg, hull.end + 1)
        hulls.append(hull)
    membership = {item: position for position, members in enumerate(classes) for item in members}
    return QuotientSeries(hulls, membership)


def agglo(series: Series, n: int) -> Series:
    """Merge consecutive items in packets of ``n``."""
    if n < 1:
        raise BadPattern(f"packet size must be at least 1, got {n}")
    return quotient(series, lambda i: (i - 1) // n)


def extract_first(series: Series, n: int) -> Series:
    if n < 0:
        raise BadPattern(f"cannot extract {n} items")
    return series[:n]


def extract_last(series: Series, n: int) -> Series:
    if n < 0:
        raise BadPattern(f"cannot extract {n} items")
    return series[len(series) - min(n, len(series)):]


def extract_pattern(series: Series, n: int, p: int) -> Series:
    """Keep ``n`` items, drop ``p - n``, repeatedly."""
    if p < 1 or n < 0 or n > p:
        raise BadPattern(f"invalid pattern {n} out of {p}")
    return Series(item for i, item in enumerate(series) if i % p < n)


def begins(series: Series) -> Series:
    points: list[ConvexInterval] = []
    for item in series:
        if not points or points[-1].beg != item.beg:
            points.append(ConvexInterval.point(item.beg))
    return Series(points)


def intdef(starts: Series, stops: Series) -> Series:
    """Span from each start to the first stop strictly after it."""
    spans = []
    begs = [item.beg for item in stops]
    for start in starts:
        k = bisect_left(begs, start.end)
        while k < len(stops) and stops[k] == start:
            k += 1
        if k == len(stops):
            continue
        spans.append(convexify((start, stops[k])))
    return Series(spans)


def is_contiguous(series: Series) -> bool:
    return all(first.end == second.beg for first, second in pairwise(series))


def series_to_dict(series: Series, origin: Optional[datetime] = None) -> dict:
    """JSON form of a series, with ISO-8601 renderings when an origin is given."""
    data = {"items": [[item.beg, item.end] for item in series]}
    if origin is not None:
        data["iso"] = [
            [
                (origin + timedelta(minutes=item.beg)).isoformat(timespec="minutes"),
                (origin + timedelta(minutes=item.end)).isoformat(timespec="minutes"),
            ]
            for item in series
        ]
    return data


def series_from_dict(data: dict) -> Series:
    return Series(ConvexInterval(int(beg), int(end)) for beg, end in data["items"])
