"""Aspect and tense calculus over interval bounds.

A clause is turned into point constraints between the bounds of its
intervals: utterance [01,02], process [B1,B2], reference [I,II], one
[ct1,ct2] per circumstancial, and for iterative readings the series
[Bs1,Bs2] with its reference [Is,IIs]. Conflicting instructions are
resolved by contracting the process onto its initial bound or by
iterating it; when neither restores consistency the structure is
insoluble.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from itertools import product
from typing import Annotated, Iterable, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PositiveInt, field_validator, model_validator

from .allen import BASE_RELATIONS, RelationSet
from .config import get_settings
from .cti import parse
from .errors import InsolubleStructure
from .network import QualNetwork

logger = logging.getLogger(__name__)


class Vendler(str, Enum):
    ETAT = "etat"
    ACTIVITE = "activite"
    ACCOMPLISSEMENT = "accomplissement"
    ACHEVEMENT = "achevement"

    @property
    def telic(self) -> bool:
        return self in (Vendler.ACCOMPLISSEMENT, Vendler.ACHEVEMENT)


class Tense(str, Enum):
    PRESENT = "present"
    IMPARFAIT = "imparfait"
    PASSE_SIMPLE = "passe_simple"
    PASSE_COMPOSE = "passe_compose"
    PLUS_QUE_PARFAIT = "plus_que_parfait"
    FUTUR = "futur"


class Aspect(str, Enum):
    AORISTIQUE = "aoristique"
    INACCOMPLI = "inaccompli"
    ACCOMPLI = "accompli"
    PROSPECTIF = "prospectif"


class TenseValue(str, Enum):
    PASSE = "passe"
    PRESENT = "present"
    FUTUR = "futur"


class Diagnosis(str, Enum):
    OK = "ok"
    RESOLVED_ITERATION = "resolved_iteration"
    RESOLVED_CONTRACTION = "resolved_contraction"
    INSOLUBLE = "insoluble"


class Reading(str, Enum):
    ITERATIVE = "iterative"
    DURATIVE = "durative"
    AMBIGUOUS = "ambiguous"


class PointRel(str, Enum):
    LT = "<"
    LE = "<="
    EQ = "="
    ADJ = "adj"


class PointConstraint(BaseModel):
    model_config = ConfigDict(frozen=True)

    left: str
    rel: PointRel
    right: str

    def __str__(self) -> str:
        return f"{self.left} {self.rel.value} {self.right}"


def _c(left: str, rel: PointRel, right: str) -> PointConstraint:
    return PointConstraint(left=left, rel=rel, right=right)


LT, LE, EQ, ADJ = PointRel.LT, PointRel.LE, PointRel.EQ, PointRel.ADJ

# -- clause records


class PendantDuree(BaseModel):
    kind: Literal["pendant"] = "pendant"
    minutes: PositiveInt


class EnDuree(BaseModel):
    kind: Literal["en"] = "en"
    minutes: PositiveInt


class DepuisDuree(BaseModel):
    kind: Literal["depuis"] = "depuis"
    minutes: PositiveInt


class AClock(BaseModel):
    kind: Literal["clock"] = "clock"
    hour: int = Field(ge=0, le=23)
    minute: int = Field(default=0, ge=0, le=59)


class CtiCirc(BaseModel):
    kind: Literal["cti"] = "cti"
    text: str

    @field_validator("text")
    @classmethod
    def _parses(cls, value: str) -> str:
        parse(value)
        return value


Circumstancial = Annotated[Union[PendantDuree, EnDuree, DepuisDuree, AClock, CtiCirc], Field(discriminator="kind")]


class Adverb(BaseModel):
    kind: Literal["encore", "deja", "iterative_count", "frequency"]
    n: Optional[PositiveInt] = None
    frequency: Optional[Literal["souvent", "parfois", "rarement"]] = None

    @model_validator(mode="after")
    def _parameters(self) -> "Adverb":
        if self.kind == "iterative_count" and self.n is None:
            raise ValueError("iterative_count needs n")
        if self.kind == "frequency" and self.frequency is None:
            raise ValueError("frequency needs a frequency class")
        return self

    @property
    def iterative(self) -> bool:
        return self.kind in ("iterative_count", "frequency")


class Clause(BaseModel):
    vendler: Vendler
    reiterable: bool = True
    plausible_duration: bool = True
    tense: Tense
    circumstancials: list[Circumstancial] = Field(default_factory=list)
    adverb: Optional[Adverb] = None

    @field_validator("circumstancials")
    @classmethod
    def _one_per_kind(cls, value: list) -> list:
        kinds = [c.kind for c in value]
        duplicated = {k for k in kinds if kinds.count(k) > 1}
        if duplicated:
            raise ValueError(f"more than one circumstancial of kind {sorted(duplicated)}")
        return value

    def coded(self) -> tuple[Aspect, TenseValue]:
        """Aspect and absolute tense coded by the verb form."""
        aspect, value = get_settings().tense_map[self.tense.value]
        aspect = Aspect(aspect)
        if self.tense is Tense.PASSE_COMPOSE and any(c.kind == "depuis" for c in self.circumstancials):
            aspect = Aspect.ACCOMPLI
        return aspect, TenseValue(value)


# -- point solver


class PointNetwork:
    """Closure of {<, <=, =} constraints over named points.

    ``adj`` collapses its two points: a punctual bound pair has no extent.
    """

    def __init__(self, constraints: Iterable[PointConstraint]):
        constraints = list(constraints)
        self.points: list[str] = []
        for constraint in constraints:
            for name in (constraint.left, constraint.right):
                if name not in self.points:
                    self.points.append(name)
        self._index = {name: i for i, name in enumerate(self.points)}
        size = len(self.points)
        self.le = np.eye(size, dtype=bool)
        self.lt = np.zeros((size, size), dtype=bool)
        for constraint in constraints:
            i, j = self._index[constraint.left], self._index[constraint.right]
            rel = constraint.rel
            if rel is ADJ:
                rel = EQ
            self.le[i, j] = True
            if rel is LT:
                self.lt[i, j] = True
            elif rel is EQ:
                self.le[j, i] = True
        for k in range(size):
            self.lt |= (self.lt[:, k, None] & self.le[None, k, :]) | (self.le[:, k, None] & self.lt[None, k, :])
            self.le |= self.le[:, k, None] & self.le[None, k, :]

    @property
    def consistent(self) -> bool:
        return not self.lt.diagonal().any()

    def entails(self, left: str, rel: PointRel, right: str) -> bool:
        i, j = self._index[left], self._index[right]
        if rel is LT:
            return bool(self.lt[i, j])
        if rel is LE:
            return bool(self.le[i, j])
        return bool(self.le[i, j] and self.le[j, i])

    def excludes(self, left: str, rel: PointRel, right: str) -> bool:
        """Whether ``left rel right`` contradicts the closure."""
        i, j = self._index[left], self._index[right]
        if rel is LT:
            return bool(self.le[j, i])
        if rel is EQ:
            return bool(self.lt[i, j] or self.lt[j, i])
        return bool(self.lt[j, i])


# -- instructions


Level = Literal["occurrences", "series"]
OCCURRENCE_BOUNDS = ("B1", "B2", "I", "II")
SERIES_BOUNDS = ("Bs1", "Bs2", "Is", "IIs")


def _aspect(aspect: Aspect, b1: str, b2: str, i: str, ii: str) -> list[PointConstraint]:
    if aspect is Aspect.AORISTIQUE:
        return [_c(i, EQ, b1), _c(ii, EQ, b2)]
    if aspect is Aspect.INACCOMPLI:
        return [_c(b1, LT, i), _c(ii, LT, b2)]
    if aspect is Aspect.ACCOMPLI:
        return [_c(b2, LT, i)]
    return [_c(ii, LT, b1)]


def _tense(value: TenseValue, i: str, ii: str) -> list[PointConstraint]:
    if value is TenseValue.PASSE:
        return [_c(ii, LT, "01")]
    if value is TenseValue.PRESENT:
        return [_c(i, LE, "02"), _c("01", LE, ii)]
    return [_c("02", LT, i)]


def circumstancial_bounds(position: int) -> tuple[str, str]:
    """Endpoint names of the n-th circumstancial: ct1/ct2, ct1'/ct2', ..."""
    prime = "'" * position
    return f"ct1{prime}", f"ct2{prime}"


def _circumstancial(
    circ: Circumstancial, ct: tuple[str, str], bounds: tuple[str, str, str, str], aspect: Aspect
) -> list[PointConstraint]:
    ct1, ct2 = ct
    b1, b2, i, ii = bounds
    if circ.kind == "pendant":
        return [_c(ct1, EQ, b1), _c(b1, EQ, i), _c(ct2, EQ, b2), _c(b2, EQ, ii), _c(ct1, LT, ct2)]
    if circ.kind == "en":
        return [_c(ct1, EQ, b1), _c(ct2, EQ, b2), _c(ct1, LT, ct2)]
    if circ.kind == "depuis":
        start = b2 if aspect is Aspect.ACCOMPLI else b1
        return [_c(ct1, EQ, start), _c(ct2, EQ, ii), _c(ct1, LT, i)]
    if circ.kind == "clock":
        if aspect is Aspect.AORISTIQUE:
            return [_c(ct1, ADJ, ct2), _c(ct1, LE, b1), _c(b2, LE, ct2)]
        return [_c(ct1, ADJ, ct2), _c(ct1, EQ, i), _c(ct2, EQ, ii)]
    return [_c(ct1, LT, ct2), _c(ct1, LE, b1), _c(b2, LE, ct2)]


@dataclass(frozen=True)
class _Layout:
    iterative: bool = False
    contracted: bool = False
    scopes: tuple[Level, ...] = ()


def _process_constraint(clause: Clause, contracted: bool) -> PointConstraint:
    if clause.vendler is Vendler.ACHEVEMENT or contracted:
        return _c("B1", ADJ, "B2")
    return _c("B1", LT, "B2")


def _assemble(clause: Clause, layout: _Layout) -> list[PointConstraint]:
    """Bound constraints for a layout.

    Under iteration the occurrences are aoristic and the series level keeps
    the aspect coded by the tense: an imperfect gives an inaccompli series,
    a passé composé an aoristic one.
    """
    aspect, value = clause.coded()
    constraints = [_c("01", LT, "02"), _process_constraint(clause, layout.contracted), _c("I", LE, "II")]
    if layout.iterative:
        constraints += _aspect(Aspect.AORISTIQUE, *OCCURRENCE_BOUNDS)
        constraints += [
            _c("Bs1", LE, "B1"), _c("B2", LE, "Bs2"), _c("Bs1", LT, "Bs2"), _c("Is", LE, "IIs"),
        ]
        constraints += _aspect(aspect, *SERIES_BOUNDS)
        constraints += _tense(value, "Is", "IIs")
    else:
        constraints += _aspect(aspect, *OCCURRENCE_BOUNDS)
        constraints += _tense(value, "I", "II")
    for position, circ in enumerate(clause.circumstancials):
        scope = layout.scopes[position] if layout.iterative else "occurrences"
        bounds = SERIES_BOUNDS if scope == "series" else OCCURRENCE_BOUNDS
        level_aspect = Aspect.AORISTIQUE if layout.iterative and scope == "occurrences" else aspect
        constraints += _circumstancial(circ, circumstancial_bounds(position), bounds, level_aspect)
    return constraints


def instructions(clause: Clause) -> list[PointConstraint]:
    """Every bound constraint the clause's markers code, unchecked."""
    return _assemble(clause, _Layout())


# -- iteration


@dataclass(frozen=True)
class SeriesBounding:
    intrinsic: bool
    count: Optional[int] = None
    density: Optional[str] = None


def adverb_iteration(clause: Clause) -> Optional[SeriesBounding]:
    """Bounding of the series an iterative adverb builds.

    Returns:
        SeriesBounding: intrinsic with a count for repetition adverbs,
        extrinsic with a density class for frequency adverbs, or None when
        the clause has no iterative adverb.
    """
    adverb = clause.adverb
    if adverb is None or not adverb.iterative:
        return None
    if adverb.kind == "iterative_count":
        return SeriesBounding(intrinsic=True, count=adverb.n)
    return SeriesBounding(intrinsic=False, density=adverb.frequency)


def _level_order(circ: Circumstancial, clause: Clause, series_intrinsic: bool, trigger: str) -> list[Level]:
    """Levels a circumstancial may attach to, most plausible first."""
    telic = clause.vendler.telic
    if circ.kind == "pendant":
        levels: list[Level] = []
        occurrences_ok, series_ok = not telic, not series_intrinsic
        order = ["series", "occurrences"] if trigger in ("marker", "plausibility") else ["occurrences", "series"]
        for level in order:
            if (level == "series" and series_ok) or (level == "occurrences" and occurrences_ok):
                levels.append(level)
        return levels
    if circ.kind == "en":
        return [lvl for lvl, ok in (("series", series_intrinsic), ("occurrences", telic)) if ok]
    if circ.kind == "depuis":
        return ["series"]
    return ["occurrences"]


def _bounds_legal(clause: Clause) -> bool:
    """[pendant] needs extrinsic bounds and [en] intrinsic ones."""
    for circ in clause.circumstancials:
        if circ.kind == "pendant" and clause.vendler.telic:
            return False
        if circ.kind == "en" and not clause.vendler.telic:
            return False
    return True


class SdtStructure(BaseModel):
    model_config = ConfigDict(frozen=True)

    intervals: dict[str, tuple[str, str]]
    bounds: list[PointConstraint]
    aspect: Aspect
    aspect_series: Optional[Aspect] = None
    tense_value: TenseValue
    diagnosis: Diagnosis
    telic: bool
    series_intrinsic: Optional[bool] = None
    scopes: dict[str, Level] = Field(default_factory=dict)
    density: Optional[str] = None

    @property
    def iterative(self) -> bool:
        return "serie" in self.intervals


def _intervals(clause: Clause, iterative: bool) -> dict[str, tuple[str, str]]:
    roles = {"enonciation": ("01", "02"), "proces": ("B1", "B2"), "reference": ("I", "II")}
    for position, _ in enumerate(clause.circumstancials):
        roles["circonstanciel" + "'" * position] = circumstancial_bounds(position)
    if iterative:
        roles["serie"] = ("Bs1", "Bs2")
        roles["serie_reference"] = ("Is", "IIs")
    return roles


def _structure(clause: Clause, layout: _Layout, diagnosis: Diagnosis, series_intrinsic: Optional[bool]) -> SdtStructure:
    aspect, value = clause.coded()
    bounding = adverb_iteration(clause)
    return SdtStructure(
        intervals=_intervals(clause, layout.iterative),
        bounds=_assemble(clause, layout),
        aspect=Aspect.AORISTIQUE if layout.iterative else aspect,
        aspect_series=aspect if layout.iterative else None,
        tense_value=value,
        diagnosis=diagnosis,
        telic=clause.vendler.telic,
        series_intrinsic=series_intrinsic if layout.iterative else None,
        scopes={
            "circonstanciel" + "'" * i: scope for i, scope in enumerate(layout.scopes)
        } if layout.iterative else {},
        density=bounding.density if bounding else None,
    )


def _consistent(clause: Clause, layout: _Layout) -> bool:
    return PointNetwork(_assemble(clause, layout)).consistent


def _iterate(clause: Clause, trigger: str) -> Optional[_Layout]:
    bounding = adverb_iteration(clause)
    series_intrinsic = bounding.intrinsic if bounding else False
    options = [_level_order(c, clause, series_intrinsic, trigger) for c in clause.circumstancials]
    for scopes in product(*options):
        layout = _Layout(iterative=True, scopes=tuple(scopes))
        if _consistent(clause, layout):
            return layout
    return None


def build_structure(clause: Clause) -> SdtStructure:
    """Assembles, checks and if needed deforms the clause's structure.

    Returns:
        SdtStructure: the structure with its diagnosis; insolubility is a
        diagnosis, not an error.
    """
    bounding = adverb_iteration(clause)
    series_intrinsic = bounding.intrinsic if bounding else False
    explicit = bounding is not None or any(c.kind == "cti" for c in clause.circumstancials)
    if explicit:
        layout = _iterate(clause, "marker")
        if layout is None:
            logger.debug("iterative marker without a consistent scoping")
            return _structure(clause, _Layout(), Diagnosis.INSOLUBLE, None)
        return _structure(clause, layout, Diagnosis.OK, series_intrinsic)

    simple = _Layout()
    if _bounds_legal(clause) and _consistent(clause, simple):
        if not clause.plausible_duration:
            if clause.reiterable:
                layout = _iterate(clause, "plausibility")
                if layout is not None:
                    return _structure(clause, layout, Diagnosis.RESOLVED_ITERATION, False)
            logger.warning("implausible duration left unresolved")
        return _structure(clause, simple, Diagnosis.OK, None)

    punctual_circ = any(c.kind == "clock" for c in clause.circumstancials)
    if punctual_circ and clause.vendler is not Vendler.ACHEVEMENT:
        contracted = _Layout(contracted=True)
        if _bounds_legal(clause) and _consistent(clause, contracted):
            logger.debug("conflict resolved by contraction onto the initial bound")
            return _structure(clause, contracted, Diagnosis.RESOLVED_CONTRACTION, None)
    if clause.reiterable:
        layout = _iterate(clause, "conflict")
        if layout is not None:
            logger.debug("conflict resolved by iteration with scopes %s", layout.scopes)
            return _structure(clause, layout, Diagnosis.RESOLVED_ITERATION, False)
    return _structure(clause, simple, Diagnosis.INSOLUBLE, None)


def encore_deja(clause: Clause, adverb: Literal["encore", "deja"]) -> Reading:
    """Iterative or durative reading of encore/deja."""
    if adverb not in ("encore", "deja"):
        raise ValueError(f"{adverb!r} is neither encore nor deja")
    aspect, _ = clause.coded()
    if aspect is Aspect.AORISTIQUE or clause.vendler.telic:
        return Reading.ITERATIVE
    if aspect is Aspect.INACCOMPLI:
        return Reading.AMBIGUOUS
    return Reading.DURATIVE


# -- relative tense


class RelativeTense(str, Enum):
    SIMULTANEITE = "simultaneite"
    ANTERIORITE = "anteriorite"
    POSTERIORITE = "posteriorite"


# templates over (I, II) of the first clause and (I', II') of the second
SIMULTANEITE = (("I", LE, "II'"), ("I'", LE, "II"))
ANTERIORITE = (("II", LT, "I'"),)
POSTERIORITE = (("II'", LT, "I"),)
_RELATIVE = {
    RelativeTense.SIMULTANEITE: SIMULTANEITE,
    RelativeTense.ANTERIORITE: ANTERIORITE,
    RelativeTense.POSTERIORITE: POSTERIORITE,
}


def relative_tense_constraints(
    kind: RelativeTense, first: tuple[str, str], second: tuple[str, str]
) -> list[PointConstraint]:
    """Instantiates a relative tense between two reference intervals."""
    names = {"I": first[0], "II": first[1], "I'": second[0], "II'": second[1]}
    return [_c(names[left], rel, names[right]) for left, rel, right in _RELATIVE[RelativeTense(kind)]]


# -- Allen projection


def _allowed(points: PointNetwork, first: tuple[str, str], second: tuple[str, str]) -> RelationSet:
    y1, y2 = second
    allowed = []
    for relation in BASE_RELATIONS:
        fits = True
        for x, position in zip(first, relation.code):
            required = {
                0: ((x, LT, y1),),
                1: ((x, EQ, y1),),
                2: ((y1, LT, x), (x, LT, y2)),
                3: ((x, EQ, y2),),
                4: ((y2, LT, x),),
            }[position]
            if any(points.excludes(*r) for r in required):
                fits = False
                break
        if fits:
            allowed.append(relation)
    return RelationSet(allowed)


def to_network(structure: SdtStructure) -> QualNetwork:
    """One node per role interval, edges read off the bound constraints.

    Raises:
        InsolubleStructure: for an insoluble structure.
    """
    if structure.diagnosis is Diagnosis.INSOLUBLE:
        raise InsolubleStructure("an insoluble structure has no network")
    points = PointNetwork(structure.bounds)
    network = QualNetwork(structure.intervals)
    roles = list(structure.intervals.items())
    for index, (source, first) in enumerate(roles):
        for target, second in roles[index + 1:]:
            network.add_constraint(source, target, _allowed(points, first, second))
    return network
