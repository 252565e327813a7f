"""Allen interval algebra on the lattice coding of the thirteen base relations.

Each base relation is coded by the positions (0..4) of the first interval's
endpoints relative to the second interval. Composition is computed once from
endpoint placements over small integers and held in numpy tables.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Union

import numpy as np
import regex

from .errors import EmptyRelation, ParseError, UnknownVocabName

logger = logging.getLogger(__name__)


class BaseRelation(str, Enum):
    P = "p"
    M = "m"
    O = "o"
    FI = "fi"
    DI = "di"
    S = "s"
    EQ = "eq"
    SI = "si"
    D = "d"
    F = "f"
    OI = "oi"
    MI = "mi"
    PI = "pi"

    @property
    def code(self) -> tuple[int, int]:
        return CODES[self]

    @property
    def index(self) -> int:
        return _INDEX[self]

    def __repr__(self) -> str:
        return self.value


CODES: dict[BaseRelation, tuple[int, int]] = {
    BaseRelation.P: (0, 0),
    BaseRelation.M: (0, 1),
    BaseRelation.O: (0, 2),
    BaseRelation.FI: (0, 3),
    BaseRelation.DI: (0, 4),
    BaseRelation.S: (1, 2),
    BaseRelation.EQ: (1, 3),
    BaseRelation.SI: (1, 4),
    BaseRelation.D: (2, 2),
    BaseRelation.F: (2, 3),
    BaseRelation.OI: (2, 4),
    BaseRelation.MI: (3, 4),
    BaseRelation.PI: (4, 4),
}
BASE_RELATIONS: tuple[BaseRelation, ...] = tuple(BaseRelation)
_INDEX = {rel: i for i, rel in enumerate(BASE_RELATIONS)}
_BY_CODE = {code: rel for rel, code in CODES.items()}

_TRANSPOSE = {
    BaseRelation.P: BaseRelation.PI,
    BaseRelation.M: BaseRelation.MI,
    BaseRelation.O: BaseRelation.OI,
    BaseRelation.S: BaseRelation.SI,
    BaseRelation.D: BaseRelation.DI,
    BaseRelation.F: BaseRelation.FI,
    BaseRelation.EQ: BaseRelation.EQ,
}
_TRANSPOSE.update({v: k for k, v in list(_TRANSPOSE.items())})


def _position(x: int, y1: int, y2: int) -> int:
    if x < y1:
        return 0
    if x == y1:
        return 1
    if x < y2:
        return 2
    if x == y2:
        return 3
    return 4


def relation_between(x1: int, x2: int, y1: int, y2: int) -> BaseRelation:
    """Base relation of the proper interval (x1, x2) to (y1, y2)."""
    if not (x1 < x2 and y1 < y2):
        raise ValueError("Allen relations hold between proper intervals only")
    return _BY_CODE[(_position(x1, y1, y2), _position(x2, y1, y2))]


def _build_composition() -> np.ndarray:
    table = np.zeros((13, 13), dtype=np.uint16)
    spans = [(a, b) for a in range(7) for b in range(a + 1, 7)]
    for x in spans:
        for y in spans:
            rxy = relation_between(*x, *y).index
            for z in spans:
                ryz = relation_between(*y, *z).index
                table[rxy, ryz] |= 1 << relation_between(*x, *z).index
    return table


def _build_row_composition(table: np.ndarray) -> np.ndarray:
    # rows[r, mask] = r composed with every base relation in mask
    rows = np.zeros((13, 1 << 13), dtype=np.uint16)
    for bit in range(13):
        low = 1 << bit
        rows[:, low:2 * low] = rows[:, :low] | table[:, bit][:, None]
    return rows


COMPOSITION = _build_composition()
_ROWS = _build_row_composition(COMPOSITION)


class RelationSet:
    """A disjunction of base relations, stored as a 13-bit mask."""

    __slots__ = ("mask",)

    def __init__(self, relations: Union[int, Iterable[BaseRelation]] = 0):
        if isinstance(relations, (int, np.integer)):
            mask = int(relations)
        else:
            mask = 0
            for rel in relations:
                mask |= 1 << BaseRelation(rel).index
        if not 0 <= mask < 1 << 13:
            raise ValueError(f"invalid relation mask {mask}")
        self.mask = mask

    def __iter__(self) -> Iterator[BaseRelation]:
        return (rel for rel in BASE_RELATIONS if self.mask >> rel.index & 1)

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __contains__(self, rel: object) -> bool:
        return isinstance(rel, BaseRelation) and bool(self.mask >> rel.index & 1)

    def __bool__(self) -> bool:
        return self.mask != 0

    def __eq__(self, other: object) -> bool:
        if isinstance(other, ConvexRelation):
            other = other.extension
        return isinstance(other, RelationSet) and self.mask == other.mask

    def __hash__(self) -> int:
        return hash(self.mask)

    def __and__(self, other: "RelationSet") -> "RelationSet":
        return RelationSet(self.mask & as_set(other).mask)

    def __or__(self, other: "RelationSet") -> "RelationSet":
        return RelationSet(self.mask | as_set(other).mask)

    def issubset(self, other: "RelationSet") -> bool:
        return self.mask & ~as_set(other).mask == 0

    def as_vector(self) -> np.ndarray:
        return (self.mask >> np.arange(13)) & 1 == 1

    def __repr__(self) -> str:
        return format_relation(self)


FULL = RelationSet((1 << 13) - 1)
EMPTY = RelationSet(0)


def _lattice_bound(relations: Iterable[BaseRelation], pick) -> BaseRelation:
    codes = [rel.code for rel in relations]
    return _BY_CODE[(pick(c[0] for c in codes), pick(c[1] for c in codes))]


def lattice_inf(relations: Iterable[BaseRelation]) -> BaseRelation:
    return _lattice_bound(relations, min)


def lattice_sup(relations: Iterable[BaseRelation]) -> BaseRelation:
    return _lattice_bound(relations, max)


def lattice_leq(first: BaseRelation, second: BaseRelation) -> bool:
    return first.code[0] <= second.code[0] and first.code[1] <= second.code[1]


@dataclass(frozen=True)
class ConvexRelation:
    """The lattice interval [lo, hi]."""

    lo: BaseRelation
    hi: BaseRelation

    def __post_init__(self):
        if not lattice_leq(self.lo, self.hi):
            raise ValueError(f"[{self.lo.value},{self.hi.value}] is not a lattice interval")

    @property
    def extension(self) -> RelationSet:
        return RelationSet(r for r in BASE_RELATIONS if lattice_leq(self.lo, r) and lattice_leq(r, self.hi))

    def __repr__(self) -> str:
        return f"[{self.lo.value},{self.hi.value}]"


Relation = Union[RelationSet, ConvexRelation, BaseRelation]


def as_set(relation: Relation) -> RelationSet:
    if isinstance(relation, RelationSet):
        return relation
    if isinstance(relation, ConvexRelation):
        return relation.extension
    return RelationSet([relation])


def compose_base(first: BaseRelation, second: BaseRelation) -> RelationSet:
    return RelationSet(int(COMPOSITION[first.index, second.index]))


def compose_set(first: Relation, second: Relation) -> RelationSet:
    first, second = as_set(first), as_set(second)
    indices = [rel.index for rel in first]
    if not indices or not second:
        return EMPTY
    return RelationSet(int(np.bitwise_or.reduce(_ROWS[indices, second.mask])))


def compose_convex(first: ConvexRelation, second: ConvexRelation) -> ConvexRelation:
    """Convex composition from two table lookups."""
    return ConvexRelation(
        lattice_inf(compose_base(first.lo, second.lo)),
        lattice_sup(compose_base(first.hi, second.hi)),
    )


def transpose(relation: Relation) -> RelationSet:
    return RelationSet(_TRANSPOSE[rel] for rel in as_set(relation))


def convex_hull(relation: Relation) -> ConvexRelation:
    relation = as_set(relation)
    if not relation:
        raise EmptyRelation("the empty relation has no convex hull")
    return ConvexRelation(lattice_inf(relation), lattice_sup(relation))


def is_convex(relation: Relation) -> bool:
    relation = as_set(relation)
    return bool(relation) and convex_hull(relation).extension == relation


# relations lying on a lower-dimensional face of the lattice
_LOW_DIMENSION = RelationSet(
    [BaseRelation.M, BaseRelation.FI, BaseRelation.S, BaseRelation.EQ,
     BaseRelation.SI, BaseRelation.F, BaseRelation.MI]
)


def is_preconvex(relation: Relation) -> bool:
    relation = as_set(relation)
    if not relation:
        return False
    removed = convex_hull(relation).extension.mask & ~relation.mask
    return removed & ~_LOW_DIMENSION.mask == 0


def is_pointizable(relation: Relation) -> bool:
    """Hull minus whole slices where one endpoint sits on an odd position."""
    relation = as_set(relation)
    if not relation:
        return False
    hull = convex_hull(relation).extension
    removed = hull.mask & ~relation.mask
    covered = 0
    for axis in (0, 1):
        for value in (1, 3):
            piece = RelationSet(r for r in hull if r.code[axis] == value).mask
            if piece and piece & ~removed == 0:
                covered |= piece
    return covered == removed


def convex_relations() -> list[ConvexRelation]:
    return [
        ConvexRelation(lo, hi)
        for lo in BASE_RELATIONS
        for hi in BASE_RELATIONS
        if lattice_leq(lo, hi)
    ]


def preconvex_relations() -> list[RelationSet]:
    return [RelationSet(mask) for mask in range(1, 1 << 13) if is_preconvex(RelationSet(mask))]


def _cv(lo: str, hi: str) -> ConvexRelation:
    return ConvexRelation(BaseRelation(lo), BaseRelation(hi))


VOCABULARIES: dict[str, dict[str, ConvexRelation]] = {
    "gosselin": {
        "SUCC": _cv("d", "pi"),
        "SIMUL": _cv("m", "mi"),
        "PREC": _cv("p", "di"),
        "ACCESS": _cv("fi", "si"),
    },
    "freksa": {
        "ol": _cv("p", "di"),
        "yo": _cv("d", "pi"),
        "pr": _cv("p", "m"),
        "hh": _cv("s", "si"),
        "tt": _cv("fi", "f"),
        "sd": _cv("mi", "pi"),
        "sv": _cv("di", "pi"),
        "sb": _cv("p", "d"),
        "bd": _cv("o", "pi"),
        "db": _cv("p", "oi"),
        "ct": _cv("o", "oi"),
        "ob": _cv("p", "o"),
        "yb": _cv("oi", "pi"),
        "oc": _cv("o", "di"),
        "sc": _cv("di", "oi"),
        "bc": _cv("o", "d"),
        "yc": _cv("d", "oi"),
    },
    "accary": {
        "common_period": _cv("m", "mi"),
        "begin_before": _cv("p", "di"),
        "fuzzy_before": _cv("p", "m"),
        "fuzzy_during": _cv("s", "f"),
        "common_begin": _cv("s", "si"),
        "common_end": _cv("fi", "f"),
        "begin_in": _cv("s", "mi"),
        "end_in": _cv("m", "f"),
        "first_to_end": _cv("p", "f"),
    },
}

FREKSA_NAMES = {
    "older": "ol",
    "younger": "yo",
    "precedes": "pr",
    "head_to_head": "hh",
    "tail_to_tail": "tt",
    "succeeds": "sd",
    "survives": "sv",
    "survived_by": "sb",
    "born_before_death": "bd",
    "died_after_birth": "db",
    "contemporary": "ct",
    "older_and_survived_by": "ob",
    "younger_and_survives": "yb",
    "older_contemporary": "oc",
    "surviving_contemporary": "sc",
    "survived_by_contemporary": "bc",
    "younger_contemporary": "yc",
}

_SOURCE_PREFIXES = {"g": "gosselin", "f": "freksa", "a": "accary"}


def vocab(source: str, name: str) -> ConvexRelation:
    table = VOCABULARIES.get(source.lower())
    if table is None:
        raise UnknownVocabName(f"unknown vocabulary {source!r}")
    if source.lower() == "gosselin":
        name = name.upper()
    elif source.lower() == "freksa":
        name = FREKSA_NAMES.get(name.lower(), name.lower())
    relation = table.get(name)
    if relation is None:
        raise UnknownVocabName(f"{name!r} is not in the {source} vocabulary")
    return relation


_SET_SYNTAX = regex.compile(r"\{\s*(?:\w+\s*(?:,\s*\w+\s*)*)?\}")
_INTERVAL_SYNTAX = regex.compile(r"\[\s*(\w+)\s*,\s*(\w+)\s*\]")
_VOCAB_SYNTAX = regex.compile(r"([gfa]):(\w+)")


def parse_relation(text: str) -> Relation:
    """Reads ``{p,m}``, ``[p,di]`` or a vocabulary name such as ``g:SUCC``."""
    text = text.strip()
    try:
        if _SET_SYNTAX.fullmatch(text):
            names = [part.strip() for part in text[1:-1].split(",") if part.strip()]
            return RelationSet(BaseRelation(name) for name in names)
        if found := _INTERVAL_SYNTAX.fullmatch(text):
            return ConvexRelation(BaseRelation(found[1]), BaseRelation(found[2]))
        if found := _VOCAB_SYNTAX.fullmatch(text):
            return vocab(_SOURCE_PREFIXES[found[1]], found[2])
        if text in BaseRelation._value2member_map_:
            return BaseRelation(text)
    except ValueError as exc:
        raise ParseError(f"bad relation {text!r}: {exc}", position=0) from exc
    raise ParseError(f"bad relation {text!r}", position=0, expected=("{...}", "[a,b]", "g:NAME"))


def format_relation(relation: Relation) -> str:
    if isinstance(relation, ConvexRelation):
        return repr(relation)
    return "{" + ",".join(rel.value for rel in as_set(relation)) + "}"
