"""Compositional evaluation of CTI trees over a frame.

A CTI denotes either a concrete series or a family of sub-series given by
a base series and a membership constraint. Families are resolved to one
canonical member by :func:`witness`: first elements, or evenly spaced
points for "n fois par".
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Literal, Optional, Union

from .calendars import CalendarName, Frame, gen
from .config import get_settings
from .cti import (
    Clock,
    CtiAst,
    Det,
    Determiner,
    Freq,
    FoisPar,
    Frequentative,
    IntdefExpr,
    NcSpec,
    Nth,
    Par,
    Sur,
    TousLesN,
    parse,
)
from .errors import DegenerateFamily, NotIncluded
from .series import (
    ConvexInterval,
    Series,
    agglo,
    begins,
    extract_pattern,
    extracted,
    included,
    intdef,
    ratio,
    restrict_nth,
    restrict_series,
    series_to_dict,
)

logger = logging.getLogger(__name__)


class Membership(str, Enum):
    EXTRACTED = "extracted"
    INCLUDED = "included"


@dataclass(frozen=True)
class Exact:
    series: Series


@dataclass(frozen=True)
class Card:
    k: int

    def __post_init__(self):
        if self.k < 0:
            raise ValueError(f"cardinality must be nonnegative, got {self.k}")


@dataclass(frozen=True)
class RatioConst:
    """Every parent component holds exactly ``n`` candidate items."""

    parent: Series
    n: int
    membership: Membership = Membership.EXTRACTED

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"ratio must be at least 1, got {self.n}")


@dataclass(frozen=True)
class Threshold:
    op: Literal["gt", "lt"]
    seuil: Fraction
    min_card: int = 0

    def __post_init__(self):
        if self.op not in ("gt", "lt"):
            raise ValueError(f"unknown threshold operator {self.op!r}")
        if not 0 < self.seuil < 1:
            raise ValueError(f"threshold {self.seuil} is not in (0, 1)")
        if self.min_card < 0:
            raise ValueError("min_card must be nonnegative")

    def accepts(self, count: int, size: int) -> bool:
        if size == 0 or count < self.min_card:
            return False
        share = Fraction(count, size)
        return share > self.seuil if self.op == "gt" else share < self.seuil


Constraint = Union[Exact, Card, RatioConst, Threshold]


@dataclass(frozen=True)
class Family:
    base: Series
    constraint: Constraint


@dataclass(frozen=True)
class Concrete:
    series: Series


@dataclass(frozen=True)
class Quantified:
    family: Family


Denotation = Union[Concrete, Quantified]


@dataclass(frozen=True)
class DenoteOptions:
    """Evaluation switches.

    Attributes:
        soft: Restrict by suites in soft mode instead of strict.
        lenient: Drop parent components that cannot host a ratio's count.
        flexible_every: Read "tous les n NC" as one item per packet of n.
    """

    soft: bool = False
    lenient: bool = False
    flexible_every: bool = False

    @property
    def mode(self) -> str:
        return "soft" if self.soft else "strict"


# -- family membership and canonical choice


def _hosted(series: Series, parent: Series) -> Series:
    return Series(item for item in series if parent._component_index(item) is not None)


def family_check(candidate: Series, family: Family) -> bool:
    """Whether ``candidate`` belongs to ``family``."""
    constraint, base = family.constraint, family.base
    if isinstance(constraint, Exact):
        return candidate == constraint.series
    if isinstance(constraint, Card):
        return extracted(candidate, base) and len(candidate) == constraint.k
    if isinstance(constraint, RatioConst):
        holds = extracted if constraint.membership is Membership.EXTRACTED else included
        if not holds(candidate, base):
            return False
        try:
            return ratio(candidate, constraint.parent).is_constant(constraint.n)
        except NotIncluded:
            return False
    return extracted(candidate, base) and constraint.accepts(len(candidate), len(base))


def _evenly_spaced(component: ConvexInterval, n: int) -> list[ConvexInterval]:
    return [
        ConvexInterval.point(component.beg + (k + 1) * component.length // (n + 1))
        for k in range(n)
    ]


def _can_host(component: ConvexInterval, hosted: int, constraint: RatioConst) -> bool:
    if constraint.membership is Membership.EXTRACTED:
        return hosted >= constraint.n
    return component.length >= constraint.n + 1


def witness(family: Family) -> Series:
    """The canonical member of ``family``.

    Raises:
        DegenerateFamily: when the canonical choice does not satisfy the
            constraint, which for these rules means no member exists.
    """
    constraint, base = family.constraint, family.base
    if isinstance(constraint, Exact):
        chosen = constraint.series
    elif isinstance(constraint, Card):
        if constraint.k > len(base):
            raise DegenerateFamily(f"cannot pick {constraint.k} items out of {len(base)}")
        chosen = base[: constraint.k]
    elif isinstance(constraint, RatioConst):
        chosen = _ratio_witness(base, constraint)
    elif constraint.op == "gt":
        size = len(base)
        chosen = base[: min(size, math.floor(constraint.seuil * size) + 1)]
    else:
        size = len(base)
        chosen = base[: max(constraint.min_card, math.ceil(constraint.seuil * size) - 1)]
    if not family_check(chosen, family):
        raise DegenerateFamily(
            f"no series of {len(base)} items satisfies {constraint!r}",
            base_size=len(base),
        )
    return chosen


def _ratio_witness(base: Series, constraint: RatioConst) -> Series:
    parent = constraint.parent
    if constraint.membership is Membership.INCLUDED:
        for component in parent:
            if not _can_host(component, 0, constraint):
                raise DegenerateFamily(f"{component!r} is too short for {constraint.n} distinct instants")
        return Series(point for component in parent for point in _evenly_spaced(component, constraint.n))
    counts = ratio(_hosted(base, parent), parent)
    chosen: list[ConvexInterval] = []
    seen = [0] * len(parent)
    for item in base:
        index = parent._component_index(item)
        if index is None:
            continue
        if counts.counts[index] < constraint.n:
            raise DegenerateFamily(
                f"{parent[index]!r} holds {counts.counts[index]} items, fewer than {constraint.n}"
            )
        if seen[index] < constraint.n:
            chosen.append(item)
            seen[index] += 1
    missing = [parent[i] for i, count in enumerate(counts.counts) if count == 0]
    if missing:
        raise DegenerateFamily(f"{missing[0]!r} holds no item of the base series")
    return Series(chosen)


def _lenient_parent(base: Series, constraint: RatioConst) -> RatioConst:
    parent = constraint.parent
    counts = ratio(_hosted(base, parent), parent).counts
    kept = [c for c, hosted in zip(parent, counts) if _can_host(c, hosted, constraint)]
    if len(kept) < len(parent):
        logger.warning(
            "lenient mode: dropping %d of %d parent components that cannot host %d items",
            len(parent) - len(kept),
            len(parent),
            constraint.n,
        )
    return RatioConst(Series(kept), constraint.n, constraint.membership)


# -- evaluation


def resolve(denotation: Denotation) -> Series:
    """The series a denotation stands for: itself or its witness."""
    if isinstance(denotation, Concrete):
        return denotation.series
    return witness(denotation.family)


@dataclass
class _Evaluator:
    frame: Frame
    opts: DenoteOptions
    _cache: dict = field(default_factory=dict)

    def gen(self, name: CalendarName) -> Series:
        if name not in self._cache:
            self._cache[name] = gen(name, self.frame, "strict")
        return self._cache[name]

    def series(self, ast: Optional[CtiAst]) -> Series:
        if ast is None:
            return self.frame.as_series()
        return resolve(self.denote(ast))

    def spec(self, spec: NcSpec) -> Series:
        units = self.gen(spec.name)
        if spec.suite is None:
            return units
        return restrict_series(units, self.series(spec.suite), self.opts.mode)

    def quantified(self, base: Series, constraint: Constraint) -> Quantified:
        if isinstance(constraint, RatioConst) and self.opts.lenient:
            constraint = _lenient_parent(base, constraint)
        family = Family(base, constraint)
        witness(family)
        return Quantified(family)

    def denote(self, ast: CtiAst) -> Denotation:
        handler: Callable = self._HANDLERS.get(type(ast))
        if handler is None:
            raise TypeError(f"not a CTI node: {ast!r}")
        return handler(self, ast)

    def _det(self, ast: Det) -> Denotation:
        series = self.spec(ast.spec)
        settings = get_settings()
        if ast.det is Determiner.LES:
            return Concrete(series)
        if ast.det is Determiner.UN:
            return self.quantified(series, Card(1))
        if ast.det is Determiner.PLUPART:
            return self.quantified(series, Threshold("gt", settings.threshold("plupart")))
        return self.quantified(series, Threshold("lt", settings.threshold("certains"), 1))

    def _ncspec(self, ast: NcSpec) -> Denotation:
        return Concrete(self.spec(ast))

    def _par(self, ast: Par) -> Denotation:
        parent = self.spec(ast.nc2)
        base = restrict_series(self.gen(ast.nc1), parent, self.opts.mode)
        return self.quantified(base, RatioConst(parent, ast.n, Membership.EXTRACTED))

    def _fois_par(self, ast: FoisPar) -> Denotation:
        parent = self.spec(ast.nc)
        return self.quantified(parent, RatioConst(parent, ast.n, Membership.INCLUDED))

    def _sur(self, ast: Sur) -> Denotation:
        series = self.spec(ast.nc)
        packets = agglo(series, ast.p)
        trailing = len(series) % ast.p
        # a trailing packet too short for n is cut by the frame; lenient mode drops it with a warning
        if packets and 0 < trailing < ast.n and not self.opts.lenient:
            packets = packets[:-1]
        return self.quantified(series, RatioConst(packets, ast.n, Membership.EXTRACTED))

    def _tous_les_n(self, ast: TousLesN) -> Denotation:
        series = self.spec(ast.nc)
        if self.opts.flexible_every:
            return self.quantified(series, RatioConst(agglo(series, ast.n), 1, Membership.EXTRACTED))
        return Concrete(extract_pattern(series, 1, ast.n))

    def _nth(self, ast: Nth) -> Denotation:
        return Concrete(restrict_nth(self.gen(ast.nc), self.series(ast.parent), ast.n))

    def _clock(self, ast: Clock) -> Denotation:
        hours = restrict_nth(self.gen(CalendarName.HEURE), self.gen(CalendarName.JOUR), ast.hour + 1)
        shift = ast.minute
        points = Series(ConvexInterval.point(item.beg + shift) for item in begins(hours))
        if ast.scope is not None:
            points = restrict_series(points, self.series(ast.scope), "strict")
        return Concrete(points)

    def _intdef(self, ast: IntdefExpr) -> Denotation:
        spans = intdef(self.series(ast.a), self.series(ast.b))
        if ast.within is not None:
            spans = restrict_series(spans, self.series(ast.within), "soft")
        return Concrete(spans)

    def _freq(self, ast: Freq) -> Denotation:
        series = self.series(ast.inner)
        settings = get_settings()
        if ast.adverb is Frequentative.SOUVENT:
            constraint = Threshold("gt", settings.threshold("plupart"))
        elif ast.adverb is Frequentative.PARFOIS:
            constraint = Threshold("lt", settings.threshold("certains"), 1)
        else:
            constraint = Threshold("lt", settings.threshold("rarement"), 1)
        return self.quantified(series, constraint)

    _HANDLERS = {
        Det: _det,
        NcSpec: _ncspec,
        Par: _par,
        FoisPar: _fois_par,
        Sur: _sur,
        TousLesN: _tous_les_n,
        Nth: _nth,
        Clock: _clock,
        IntdefExpr: _intdef,
        Freq: _freq,
    }


def denote(ast: CtiAst, frame: Frame, opts: Optional[DenoteOptions] = None) -> Denotation:
    """Evaluates a CTI tree over ``frame``.

    Raises:
        DegenerateFamily: when a quantified denotation has no member.
    """
    denotation = _Evaluator(frame, opts or DenoteOptions()).denote(ast)
    logger.debug("denoted %r as %s", ast, type(denotation).__name__)
    return denotation


def evaluate(text: str, frame: Frame, opts: Optional[DenoteOptions] = None) -> Denotation:
    """Parses and denotes a CTI given as text."""
    return denote(parse(text), frame, opts)


def constraint_to_dict(constraint: Constraint) -> dict:
    if isinstance(constraint, Exact):
        return {"kind": "exact", "series": series_to_dict(constraint.series)["items"]}
    if isinstance(constraint, Card):
        return {"kind": "card", "k": constraint.k}
    if isinstance(constraint, RatioConst):
        return {
            "kind": "ratio",
            "n": constraint.n,
            "membership": constraint.membership.value,
            "parent": series_to_dict(constraint.parent)["items"],
        }
    return {
        "kind": "threshold",
        "op": constraint.op,
        "seuil": str(constraint.seuil),
        "min_card": constraint.min_card,
    }


def denotation_to_dict(denotation: Denotation, frame: Frame, family: bool = False) -> dict:
    """JSON form for the CLI: kind, resolved series and optionally the family."""
    series = resolve(denotation)
    data = {
        "kind": "concrete" if isinstance(denotation, Concrete) else "quantified",
        "series": frame.render(series),
    }
    if family and isinstance(denotation, Quantified):
        data["family"] = {
            "base": frame.render(denotation.family.base),
            "constraint": constraint_to_dict(denotation.family.constraint),
        }
    return data


# -- comparison


def _instants(item: ConvexInterval) -> tuple[int, int]:
    return item.beg, item.beg + 1 if item.is_point else item.end


def _common(first: Series, second: Series) -> Series:
    """Instants shared by two series, as a series of maximal pieces per item pair."""
    pieces, i, j = [], 0, 0
    while i < len(first) and j < len(second):
        (a_lo, a_hi), (b_lo, b_hi) = _instants(first[i]), _instants(second[j])
        lo, hi = max(a_lo, b_lo), min(a_hi, b_hi)
        if lo < hi:
            piece = ConvexInterval.point(lo) if first[i].is_point or second[j].is_point else ConvexInterval(lo, hi)
            if not pieces or pieces[-1] != piece:
                pieces.append(piece)
        if a_hi <= b_hi:
            i += 1
        else:
            j += 1
    return Series(pieces)


@dataclass(frozen=True)
class ComparisonReport:
    equal: bool
    first_extracted_from_second: bool
    second_extracted_from_first: bool
    first_included_in_second: bool
    second_included_in_first: bool
    common: Series

    @property
    def point_disjoint(self) -> bool:
        return not self.common

    @property
    def overlapping(self) -> bool:
        return bool(self.common)

    def flags(self) -> list[str]:
        names = []
        if self.equal:
            names.append("equal")
        if self.first_extracted_from_second or self.second_extracted_from_first:
            names.append("extracted-either-way")
        if self.first_included_in_second or self.second_included_in_first:
            names.append("included-either-way")
        names.append("overlapping" if self.overlapping else "point-disjoint")
        return names

    def to_dict(self, frame: Optional[Frame] = None) -> dict:
        data = {
            "flags": self.flags(),
            "first_extracted_from_second": self.first_extracted_from_second,
            "second_extracted_from_first": self.second_extracted_from_first,
            "first_included_in_second": self.first_included_in_second,
            "second_included_in_first": self.second_included_in_first,
            "common": series_to_dict(self.common, frame.origin if frame else None),
        }
        return data


def compare(first: Denotation, second: Denotation, frame: Optional[Frame] = None) -> ComparisonReport:
    """Extensional comparison of two denotations through their witnesses."""
    a, b = resolve(first), resolve(second)
    if frame is not None:
        a = restrict_series(a, frame.as_series())
        b = restrict_series(b, frame.as_series())
    return ComparisonReport(
        equal=a == b,
        first_extracted_from_second=extracted(a, b),
        second_extracted_from_first=extracted(b, a),
        first_included_in_second=included(a, b),
        second_included_in_first=included(b, a),
        common=_common(a, b),
    )
