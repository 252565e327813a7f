"""Functional classification of temporal expressions.

An expression is a site (it creates a circumstancial interval, convex or
not), a positioning marker, an internal-temporality descriptor or a
selector. CTIs parsed by the grammar are sites or selectors; other forms
come from a fixed phrase table and a few patterns.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

import regex

from .cti import CtiAst, Nth, normalize, parse
from .errors import ParseError, Unclassified

logger = logging.getLogger(__name__)


class CategoryKind(str, Enum):
    SITE_CONVEXE = "site-convexe"
    SITE_NON_CONVEXE = "site-non-convexe"
    MARQUEUR_DE_POSITIONNEMENT = "marqueur-de-positionnement"
    DESCRIPTEUR_DE_TEMPORALITE_INTERNE = "descripteur-de-temporalite-interne"
    SELECTEUR = "selecteur"


SUBKINDS = {
    CategoryKind.SITE_CONVEXE: {"relatif-deictique", "relatif-anaphorique", "absolu", "duree"},
    CategoryKind.MARQUEUR_DE_POSITIONNEMENT: {"sequentialite", "recouvrement"},
}


@dataclass(frozen=True)
class Category:
    kind: CategoryKind
    subkind: Optional[str] = None

    def __post_init__(self):
        allowed = SUBKINDS.get(self.kind, set())
        if (self.subkind is None) != (not allowed) or (self.subkind and self.subkind not in allowed):
            raise ValueError(f"{self.kind.value} does not take subkind {self.subkind!r}")

    @property
    def tag(self) -> str:
        return self.kind.value if self.subkind is None else f"{self.kind.value}/{self.subkind}"

    def __str__(self) -> str:
        return self.tag


DEICTIQUE = Category(CategoryKind.SITE_CONVEXE, "relatif-deictique")
ANAPHORIQUE = Category(CategoryKind.SITE_CONVEXE, "relatif-anaphorique")
ABSOLU = Category(CategoryKind.SITE_CONVEXE, "absolu")
DUREE = Category(CategoryKind.SITE_CONVEXE, "duree")
NON_CONVEXE = Category(CategoryKind.SITE_NON_CONVEXE)
SEQUENTIALITE = Category(CategoryKind.MARQUEUR_DE_POSITIONNEMENT, "sequentialite")
RECOUVREMENT = Category(CategoryKind.MARQUEUR_DE_POSITIONNEMENT, "recouvrement")
INTERNE = Category(CategoryKind.DESCRIPTEUR_DE_TEMPORALITE_INTERNE)
SELECTEUR = Category(CategoryKind.SELECTEUR)

PHRASES: dict[str, Category] = {
    **dict.fromkeys(
        ["demain", "hier", "aujourd'hui", "maintenant", "dorenavant", "desormais", "le mois prochain",
         "le mois dernier", "la semaine prochaine", "la semaine derniere", "le annee derniere",
         "le annee prochaine", "cette annee", "ce mois-ci", "cette semaine"],
        DEICTIQUE,
    ),
    **dict.fromkeys(
        ["le lendemain", "la veille", "le mois precedent", "le mois suivant", "le annee suivante",
         "le annee precedente", "la semaine suivante", "la semaine precedente", "ce jour-la"],
        ANAPHORIQUE,
    ),
    **dict.fromkeys(
        ["puis", "apres", "apres que", "avant", "avant que", "plus tard", "ensuite", "des que",
         "a peine", "aussitot", "bientot", "enfin", "alors"],
        SEQUENTIALITE,
    ),
    **dict.fromkeys(
        ["en meme temps", "simultanement", "pendant que", "au cours de", "lorsque", "quand", "tandis que",
         "alors que"],
        RECOUVREMENT,
    ),
    **dict.fromkeys(
        ["peu a peu", "regulierement", "au fur et a mesure", "progressivement", "lentement", "rapidement",
         "souvent", "parfois", "rarement", "frequemment", "de temps en temps", "sans cesse"],
        INTERNE,
    ),
    **dict.fromkeys(
        ["au debut de", "a la fin de", "au milieu de", "cette fois-ci", "cette fois", "la derniere fois",
         "la premiere fois"],
        SELECTEUR,
    ),
}

_COUNT = r"(?:\d+|une?|deux|trois|quatre|cinq|six|sept|huit|neuf|dix|quinze|vingt|trente|quelques)"
_UNIT = r"(?:minutes?|heures?|jours?|semaines?|mois|ans|annees?|siecles?)"
_YEAR = r"\d{2,4}"

PATTERNS: list[tuple[regex.Pattern, Category]] = [
    (regex.compile(rf"^tous les .+ (?:de|en) {_YEAR}$"), NON_CONVEXE),
    (regex.compile(rf"^(?:pendant|durant) (?:ces|les) .*(?:derniers|dernieres)"), DEICTIQUE),
    (regex.compile(rf"^(?:pendant|durant) les .*(?:precedents|precedentes|suivants|suivantes)$"), ANAPHORIQUE),
    (regex.compile(rf"^(?:pendant|durant|en) {_COUNT} {_UNIT}$"), DUREE),
    (regex.compile(rf"^(?:apres|dans|au bout de) {_COUNT} {_UNIT}$"), SEQUENTIALITE),
    (regex.compile(rf"^il y a {_COUNT} {_UNIT}$"), DEICTIQUE),
    (regex.compile(rf"^{_COUNT} fois de suite$"), INTERNE),
    (regex.compile(rf"^{_COUNT} fois$"), INTERNE),
    (regex.compile(r"^(?:la|les) .*\b(?:\d+(?:e|eme|ere|er)|premiere?s?|derniere?s?|\w+ieme)s? fois$"), SELECTEUR),
    (regex.compile(r"^les \w+ (?:premieres|dernieres) fois$"), SELECTEUR),
    (regex.compile(rf"^(?:depuis|jusqu'(?:a|en)|a partir de|des) .*{_YEAR}$"), ABSOLU),
    (regex.compile(rf"^de .+ a .+ {_YEAR}$"), ABSOLU),
    (regex.compile(rf"^(?:en|au debut de|a la fin de|au milieu de|au) .*\b{_YEAR}$"), ABSOLU),
    (regex.compile(r"^au \w+ siecle$"), ABSOLU),
    (regex.compile(r"^(?:le|la) (?:mois|semaine|annee|jour|le annee) (?:prochaine?|derniere?)$"), DEICTIQUE),
    (regex.compile(r"^(?:le|la) (?:mois|semaine|annee|jour|le annee) (?:precedente?|suivante?)$"), ANAPHORIQUE),
]


def classify(expression: Union[str, CtiAst]) -> Category:
    """Assigns an expression to one of the four functional categories.

    Args:
        expression: A phrase or an already parsed CTI tree.

    Returns:
        Category: The category, with its subcategory for convex sites and markers.

    Raises:
        Unclassified: If the phrase is neither in the table nor a CTI.
    """
    if not isinstance(expression, str):
        return _classify_ast(expression)
    phrase = normalize(expression)
    if phrase in PHRASES:
        return PHRASES[phrase]
    for pattern, category in PATTERNS:
        if pattern.search(phrase):
            logger.debug("%r classified by pattern %s", phrase, pattern.pattern)
            return category
    try:
        ast = parse(phrase)
    except ParseError as exc:
        raise Unclassified(f"cannot classify {expression!r}", phrase=phrase) from exc
    return _classify_ast(ast)


def _classify_ast(ast: CtiAst) -> Category:
    return SELECTEUR if isinstance(ast, Nth) else NON_CONVEXE
