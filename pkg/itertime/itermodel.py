"""Iterations as an iterator plus an iterative model.

The model holds one or more process models placed in model time, offsets
from a model origin that never touch the frame. Instantiation clones the
model into each slot the iterator yields on the frame timeline, mapping
offsets affinely into the slot. Process models may carry a nested
iteration, instantiated inside the slot of their parent.
"""

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, PositiveInt, model_validator

from .allen import BaseRelation, Relation, RelationSet, as_set, parse_relation, relation_between
from .calendars import CalendarName, Frame, gen
from .config import get_settings
from .denotation import evaluate, resolve
from .errors import EmptyTriggerSeries, InvalidInterval, MissingCadre, OutOfRange, OverrideOutOfSlot
from .network import PathConsistencyResult, QualNetwork, path_consistency
from .series import ConvexInterval, Series, restrict, restrict_series

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ModelSpan:
    """A span in model time; not comparable with frame instants."""

    beg: int
    end: int

    def __post_init__(self):
        if self.beg > self.end:
            raise InvalidInterval(f"model span [{self.beg},{self.end}) is reversed")

    @property
    def length(self) -> int:
        return self.end - self.beg


class RelationKind(str, Enum):
    TEMPORAL = "temporal"
    CAUSAL = "causal"
    MERONYMIC = "meronymic"


SUCCESSION = RelationSet([BaseRelation.P, BaseRelation.M])
OVERLAP = RelationSet([BaseRelation.O])


@dataclass(frozen=True)
class ModelRelation:
    kind: RelationKind
    source: str
    target: str
    relation: Optional[Relation] = None

    def __post_init__(self):
        if self.kind is RelationKind.TEMPORAL and self.relation is None:
            raise ValueError("a temporal relation needs an Allen relation")

    def allen(self) -> RelationSet:
        """Allen reading: causes precede or meet their effects, parts overlap."""
        if self.kind is RelationKind.CAUSAL:
            return SUCCESSION
        if self.kind is RelationKind.MERONYMIC:
            return OVERLAP
        return as_set(self.relation)


@dataclass(frozen=True)
class ProcessModel:
    name: str
    model_interval: ModelSpan
    reference_interval: Optional[ModelSpan] = None
    nested: Optional["Iteration"] = None

    def __post_init__(self):
        for span in (self.model_interval, self.reference_interval):
            if span is not None and not isinstance(span, ModelSpan):
                raise TypeError(f"process model {self.name!r} takes model spans, got {type(span).__name__}")


@dataclass(frozen=True)
class IterativeModel:
    slots: tuple[ProcessModel, ...]
    relations: tuple[ModelRelation, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "slots", tuple(self.slots))
        object.__setattr__(self, "relations", tuple(self.relations))
        if not self.slots:
            raise ValueError("an iterative model needs at least one process model")
        names = [slot.name for slot in self.slots]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate process model names in {names}")
        for relation in self.relations:
            if relation.source not in names or relation.target not in names:
                raise ValueError(f"relation {relation.source} -> {relation.target} names an unknown slot")

    @property
    def span(self) -> ModelSpan:
        return ModelSpan(
            min(slot.model_interval.beg for slot in self.slots),
            max(slot.model_interval.end for slot in self.slots),
        )


# -- iterators


@dataclass(frozen=True)
class ByIntervals:
    series: Series

    def __post_init__(self):
        if not self.series:
            raise ValueError("an interval iterator needs a nonempty series")


@dataclass(frozen=True)
class Numeric:
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"a numeric iterator needs n >= 1, got {self.n}")


@dataclass(frozen=True)
class Frequential:
    frequency: Literal["souvent", "parfois", "rarement"]
    unit_hint: CalendarName


@dataclass(frozen=True)
class Eventive:
    triggers: Series


Iterator = Union[ByIntervals, Numeric, Frequential, Eventive]


@dataclass(frozen=True)
class Iteration:
    iterator: Iterator
    model: IterativeModel
    cadre: Optional[ConvexInterval] = None
    intrinsically_bounded: Optional[bool] = None

    def __post_init__(self):
        derived = {Numeric: True, Frequential: False}.get(type(self.iterator))
        if derived is not None and self.intrinsically_bounded not in (None, derived):
            raise ValueError(f"{type(self.iterator).__name__} iterations have intrinsically_bounded={derived}")
        if self.intrinsically_bounded is None:
            object.__setattr__(self, "intrinsically_bounded", bool(derived))


@dataclass(frozen=True)
class Itere:
    index: int
    anchor: ConvexInterval
    slot: ConvexInterval
    realized_slots: dict[str, ConvexInterval]
    overrides: dict[str, Any] = field(default_factory=dict)
    children: dict[str, list["Itere"]] = field(default_factory=dict)

    def to_dict(self, frame: Optional[Frame] = None) -> dict:
        def span(interval: ConvexInterval):
            if frame is None:
                return [interval.beg, interval.end]
            return [frame.datetime_at(interval.beg).isoformat(timespec="minutes"),
                    frame.datetime_at(interval.end).isoformat(timespec="minutes")]

        return {
            "index": self.index,
            "anchor": span(self.anchor),
            "slots": {name: span(interval) for name, interval in self.realized_slots.items()},
            "overrides": {k: str(v) for k, v in self.overrides.items()},
            "children": {name: [c.to_dict(frame) for c in kids] for name, kids in self.children.items()},
        }


def _map(span: ModelSpan, hull: ModelSpan, target: ConvexInterval) -> ConvexInterval:
    """Affine image of a model span when ``hull`` is stretched onto ``target``."""
    if hull.length == 0:
        return ConvexInterval.point(target.beg)

    def image(t: int) -> int:
        return target.beg + (t - hull.beg) * target.length // hull.length

    return ConvexInterval(image(span.beg), image(span.end))


def _evenly_placed(cadre: ConvexInterval, n: int) -> list[ConvexInterval]:
    starts = [cadre.beg + (k + 1) * cadre.length // (n + 1) for k in range(n)]
    ends = starts[1:] + [cadre.end]
    if len(set(starts)) < n:
        raise InvalidInterval(f"cadre {cadre!r} is too short for {n} occurrences")
    return [ConvexInterval(start, end) for start, end in zip(starts, ends)]


def _slots(iteration: Iteration, frame: Frame, within: Optional[ConvexInterval]) -> list[ConvexInterval]:
    iterator = iteration.iterator
    bounds = within or iteration.cadre
    if isinstance(iterator, ByIntervals):
        series = restrict(iterator.series, frame.interval)
        return list(restrict(series, within) if within is not None else series)
    if isinstance(iterator, Numeric):
        if bounds is None:
            raise MissingCadre("a numeric iteration needs a cadre to place its occurrences")
        return _evenly_placed(bounds, iterator.n)
    if isinstance(iterator, Frequential):
        units = gen(iterator.unit_hint, frame)
        if bounds is not None:
            units = restrict(units, bounds)
        capacity = len(units)
        count = int(get_settings().density(iterator.frequency) * capacity + 0.5)
        return [units[(2 * k + 1) * capacity // (2 * count)] for k in range(count)]
    if not iterator.triggers:
        raise EmptyTriggerSeries("an eventive iteration needs at least one trigger")
    return list(restrict(iterator.triggers, within) if within is not None else iterator.triggers)


def instantiate(iteration: Iteration, frame: Frame, within: Optional[ConvexInterval] = None) -> list[Itere]:
    """Clones the model into every slot the iterator yields.

    Args:
        iteration: The iteration to realize.
        frame: Reference frame of the conventional timeline.
        within: Span of an enclosing itere when the iteration is nested.

    Returns:
        list[Itere]: One itere per slot, in timeline order.

    Raises:
        MissingCadre: A numeric iteration has neither cadre nor enclosing span.
        EmptyTriggerSeries: An eventive iteration has no trigger.
    """
    model = iteration.model
    hull = model.span
    eventive = isinstance(iteration.iterator, Eventive)
    iteres = []
    for index, slot in enumerate(_slots(iteration, frame, within), start=1):
        realized = {process.name: _map(process.model_interval, hull, slot) for process in model.slots}
        if eventive:
            realized["trigger"] = slot
        children = {
            process.name: instantiate(process.nested, frame, realized[process.name])
            for process in model.slots
            if process.nested is not None
        }
        iteres.append(Itere(index, slot, slot, realized, children=children))
    Series(itere.anchor for itere in iteres)
    logger.debug("instantiated %d iteres with %s", len(iteres), type(iteration.iterator).__name__)
    return iteres


def _remap(interval: ConvexInterval, old: ConvexInterval, new: ConvexInterval) -> ConvexInterval:
    if old.length == 0:
        return ConvexInterval.point(new.beg)
    return ConvexInterval(
        new.beg + (interval.beg - old.beg) * new.length // old.length,
        new.beg + (interval.end - old.beg) * new.length // old.length,
    )


def override(iteres: list[Itere], index: int, patch: dict[str, Any]) -> list[Itere]:
    """Returns a copy where the itere at 1-based ``index`` carries ``patch``.

    ``anchor`` (an interval) and ``start`` (an instant, duration kept) move
    the itere and must stay inside its slot; any other key is stored as is.

    Raises:
        OutOfRange: No itere has that index.
        OverrideOutOfSlot: The moved anchor leaves the slot.
    """
    if not 1 <= index <= len(iteres):
        raise OutOfRange(f"no itere {index} among {len(iteres)}")
    target = iteres[index - 1]
    anchor = target.anchor
    if "anchor" in patch:
        value = patch["anchor"]
        anchor = value if isinstance(value, ConvexInterval) else ConvexInterval(*value)
    if "start" in patch:
        anchor = ConvexInterval(patch["start"], patch["start"] + anchor.length)
    if not target.slot.contains(anchor):
        raise OverrideOutOfSlot(
            f"anchor {anchor!r} leaves slot {target.slot!r} of itere {index}",
            index=index,
        )
    realized = {name: _remap(span, target.anchor, anchor) for name, span in target.realized_slots.items()}
    patched = replace(target, anchor=anchor, realized_slots=realized, overrides={**target.overrides, **patch})
    return [patched if i == index - 1 else itere for i, itere in enumerate(iteres)]


def model_consistency(model: IterativeModel, from_offsets: bool = True) -> PathConsistencyResult:
    """Path consistency over the process models, in model time.

    Declared relations are intersected with the ones read off the model
    offsets when ``from_offsets`` is set and both spans are proper.
    """
    network = QualNetwork(slot.name for slot in model.slots)
    for relation in model.relations:
        network.add_constraint(relation.source, relation.target, relation.allen())
    if from_offsets:
        slots = list(model.slots)
        for i, first in enumerate(slots):
            for second in slots[i + 1:]:
                a, b = first.model_interval, second.model_interval
                if a.length and b.length:
                    network.add_constraint(first.name, second.name, relation_between(a.beg, a.end, b.beg, b.end))
    return path_consistency(network)


def hybrid_eventive(triggers: Series, name: CalendarName, frame: Frame) -> Eventive:
    """Eventive iterator whose triggers must also fall on ``name`` units."""
    return Eventive(restrict_series(triggers, gen(name, frame)))


# -- JSON specification


class IteratorSpec(BaseModel):
    kind: Literal["by_intervals", "numeric", "frequential", "eventive"]
    cti: Optional[str] = None
    n: Optional[PositiveInt] = None
    frequency: Optional[Literal["souvent", "parfois", "rarement"]] = None
    unit: Optional[str] = None
    triggers: list[tuple[str, str]] = Field(default_factory=list)
    within: Optional[str] = None

    @model_validator(mode="after")
    def _fields_for_kind(self) -> "IteratorSpec":
        needed = {"by_intervals": "cti", "numeric": "n", "frequential": "frequency"}.get(self.kind)
        if needed and getattr(self, needed) is None:
            raise ValueError(f"{self.kind} iterator needs '{needed}'")
        if self.kind == "frequential" and self.unit is None:
            raise ValueError("frequential iterator needs 'unit'")
        return self

    def build(self, frame: Frame) -> Iterator:
        if self.kind == "by_intervals":
            return ByIntervals(resolve(evaluate(self.cti, frame)))
        if self.kind == "numeric":
            return Numeric(self.n)
        if self.kind == "frequential":
            return Frequential(self.frequency, CalendarName.parse(self.unit))
        triggers = Series(_frame_span(frame, pair) for pair in self.triggers)
        if self.within:
            return hybrid_eventive(triggers, CalendarName.parse(self.within), frame)
        return Eventive(triggers)


class SlotSpec(BaseModel):
    name: str
    start: int
    end: int
    reference: Optional[tuple[int, int]] = None
    nested: Optional["IterationSpec"] = None

    def build(self, frame: Frame) -> ProcessModel:
        return ProcessModel(
            self.name,
            ModelSpan(self.start, self.end),
            ModelSpan(*self.reference) if self.reference else None,
            self.nested.build(frame) if self.nested else None,
        )


class RelationSpec(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    kind: RelationKind
    source: str = Field(alias="from")
    target: str = Field(alias="to")
    relation: Optional[str] = None

    def build(self) -> ModelRelation:
        relation = parse_relation(self.relation) if self.relation else None
        return ModelRelation(self.kind, self.source, self.target, relation)


class ModelSpec(BaseModel):
    slots: list[SlotSpec] = Field(min_length=1)
    relations: list[RelationSpec] = Field(default_factory=list)

    def build(self, frame: Frame) -> IterativeModel:
        return IterativeModel(
            tuple(slot.build(frame) for slot in self.slots),
            tuple(relation.build() for relation in self.relations),
        )


class IterationSpec(BaseModel):
    """The iteration JSON: iterator, model, optional cadre and bound flag."""

    iterator: IteratorSpec
    model: ModelSpec
    cadre: Optional[tuple[str, str]] = None
    bounded: Optional[bool] = None

    def build(self, frame: Frame) -> Iteration:
        return Iteration(
            self.iterator.build(frame),
            self.model.build(frame),
            _frame_span(frame, self.cadre) if self.cadre else None,
            self.bounded,
        )


def _frame_span(frame: Frame, pair: tuple[str, str]) -> ConvexInterval:
    return ConvexInterval(frame.parse_instant(pair[0]), frame.parse_instant(pair[1]))


SlotSpec.model_rebuild()
