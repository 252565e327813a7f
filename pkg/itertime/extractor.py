"""Surface patterns for iterative adverbials in running text.

Text is folded character by character so match offsets index the
original string. Candidates from all patterns compete: the longest wins,
ties go to the more specific pattern, and accepted matches never overlap.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Literal, Optional, Union

import regex

from .calendars import CalendarName
from .cti import CtiAst, parse
from .errors import ParseError, UnknownLabel, UnknownName
from .text import fold, fold_aligned

logger = logging.getLogger(__name__)


class PatternId(str, Enum):
    TOUS_LES = "TOUS_LES"
    TOUS_LES_N = "TOUS_LES_N"
    CHAQUE = "CHAQUE"
    FOIS_PAR = "FOIS_PAR"
    PAR_LABEL = "PAR_LABEL"
    LABEL_PAR_LABEL = "LABEL_PAR_LABEL"
    NIEME_DE = "NIEME_DE"
    PLUPART = "PLUPART"
    N_SUR_N = "N_SUR_N"
    CERTAINS = "CERTAINS"
    N_PAR_LABEL = "N_PAR_LABEL"
    GENERIQUE = "GENERIQUE"


PeriodKind = Literal["continuous", "discontinuous"]

CONTINUOUS = ("annee", "an", "heure", "jour", "minute", "mois", "saison", "seconde", "semaine", "semestre", "trimestre")
DISCONTINUOUS = (
    "lundi", "mardi", "mercredi", "jeudi", "vendredi", "samedi", "dimanche",
    "matin", "apres-midi", "soir", "nuit", "noel",
    "janvier", "fevrier", "mars", "avril", "mai", "juin", "juillet", "aout",
    "septembre", "octobre", "novembre", "decembre",
    "printemps", "ete", "automne", "hiver",
)
WEEKDAYS = DISCONTINUOUS[:7]
_INVARIANT = {"mois", "mars", "printemps", "apres-midi", "noel"}

NUMBERS = {
    "un": 1, "une": 1, "deux": 2, "trois": 3, "quatre": 4, "cinq": 5, "six": 6, "sept": 7,
    "huit": 8, "neuf": 9, "dix": 10, "onze": 11, "douze": 12, "quinze": 15, "vingt": 20,
    "trente": 30, "cent": 100,
}
ORDINALS = {
    "premier": 1, "premiers": 1, "premiere": 1, "premieres": 1, "deuxieme": 2, "deuxiemes": 2,
    "second": 2, "seconds": 2, "troisieme": 3, "troisiemes": 3, "quatrieme": 4, "cinquieme": 5,
    "dernier": -1, "derniers": -1, "derniere": -1, "dernieres": -1,
}


def _plural(lemma: str) -> str:
    if lemma in _INVARIANT or lemma.endswith(("s", "x")):
        return lemma
    return lemma + "s"


@dataclass
class Vocabulary:
    """Period labels: surface form to lemma, lemma to period kind."""

    kinds: dict[str, PeriodKind] = field(default_factory=dict)
    surfaces: dict[str, str] = field(default_factory=dict)

    def add(self, lemma: str, kind: PeriodKind) -> None:
        lemma = fold(lemma).strip()
        self.kinds[lemma] = kind
        self.surfaces[lemma] = lemma
        self.surfaces.setdefault(_plural(lemma), lemma)

    def lemma(self, label: str) -> str:
        key = fold(label).strip()
        if key not in self.surfaces:
            raise UnknownLabel(f"{label!r} is not a period label")
        return self.surfaces[key]

    def copy(self) -> "Vocabulary":
        return Vocabulary(dict(self.kinds), dict(self.surfaces))


def default_vocabulary() -> Vocabulary:
    vocabulary = Vocabulary()
    for lemma in CONTINUOUS:
        vocabulary.add(lemma, "continuous")
    for lemma in DISCONTINUOUS:
        vocabulary.add(lemma, "discontinuous")
    vocabulary.surfaces["ans"] = "an"
    vocabulary.surfaces["annees"] = "annee"
    return vocabulary


def load_vocabulary(path: Union[str, Path], base: Optional[Vocabulary] = None) -> Vocabulary:
    """Extends a vocabulary with a word list.

    Each non-comment line holds a label, optionally followed by
    ``continuous`` or ``discontinuous`` (the default).
    """
    vocabulary = (base or default_vocabulary()).copy()
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        word, _, kind = line.partition(" ")
        kind = kind.strip() or "discontinuous"
        if kind not in ("continuous", "discontinuous"):
            raise ValueError(f"unknown period kind {kind!r} for {word!r}")
        vocabulary.add(word, kind)
    return vocabulary


@dataclass(frozen=True)
class Match:
    pattern: PatternId
    span: tuple[int, int]
    label: str
    sentence: str
    n: Optional[int] = None
    p: Optional[int] = None
    ordinal: Optional[int] = None
    unit: Optional[str] = None
    parent: Optional[str] = None

    def to_dict(self) -> dict:
        data = asdict(self)
        data["pattern"] = self.pattern.value
        data["span"] = list(self.span)
        return {k: v for k, v in data.items() if v is not None}


def _alternation(words: Iterable[str]) -> str:
    return "|".join(regex.escape(w) for w in sorted(set(words), key=len, reverse=True))


_SENTENCE_END = regex.compile(r"(?<=[.!?…])\s+")


class Extractor:
    """Compiled patterns over one label vocabulary."""

    def __init__(self, vocabulary: Optional[Vocabulary] = None):
        self.vocabulary = vocabulary or default_vocabulary()
        surfaces = _alternation(self.vocabulary.surfaces)
        discontinuous = _alternation(
            s for s, lemma in self.vocabulary.surfaces.items() if self.vocabulary.kinds.get(lemma) == "discontinuous"
        )
        label = rf"(?P<label>{surfaces})"
        unit = rf"(?P<unit>{surfaces})"
        number = rf"(?P<n>\d+|{_alternation(NUMBERS)})"
        ordinal = rf"(?P<ordinal>\d+(?:e|es|eme|emes|er|ers|ere|eres)|{_alternation(ORDINALS)})"
        weekdays = _alternation(WEEKDAYS)
        sources = [
            (PatternId.TOUS_LES_N, rf"\b(?:tous|toutes) les {number} {label}\b"),
            (PatternId.TOUS_LES, rf"\b(?:tous|toutes) les {label}\b"),
            (PatternId.CHAQUE, rf"\bchaque {label}\b"),
            (PatternId.N_PAR_LABEL, rf"\b{number} {unit} par {label}\b"),
            (PatternId.LABEL_PAR_LABEL, rf"\b{unit} par {label}\b"),
            (PatternId.FOIS_PAR, rf"\b(?:(?:{number}|plusieurs|quelques) )?fois par {label}\b"),
            (
                PatternId.NIEME_DE,
                rf"\b(?:les|la|le) {ordinal} {label} (?:de |du |des |d')(?P<parent>(?:chaque )?(?:{surfaces}))\b",
            ),
            (PatternId.PLUPART, rf"\bla plupart des {label}\b"),
            (PatternId.N_SUR_N, rf"\b{number} {label} sur (?P<p>\d+|{_alternation(NUMBERS)})\b"),
            (PatternId.CERTAINS, rf"\b(?:certains|certaines|quelques) {label}\b"),
            (PatternId.PAR_LABEL, rf"(?<!\bfois\s)\bpar {label}\b"),
            (
                PatternId.GENERIQUE,
                rf"\b(?:souvent )?(?:le |la |les |l')(?P<label>{discontinuous})\b",
            ),
        ]
        self.patterns = [(pid, regex.compile(source)) for pid, source in sources]
        self._priority = {pid: rank for rank, (pid, _) in enumerate(self.patterns)}
        self._weekdays = regex.compile(rf"^(?:{weekdays})s?$")

    # -- scanning

    def _candidates(self, folded: str) -> list[tuple[PatternId, regex.Match]]:
        found = []
        for pid, pattern in self.patterns:
            for hit in pattern.finditer(folded, overlapped=True):
                if pid is PatternId.GENERIQUE and not self._generic_ok(hit, folded):
                    continue
                found.append((pid, hit))
        return found

    def _generic_ok(self, hit: regex.Match, folded: str) -> bool:
        label = hit["label"]
        rest = folded[hit.end():]
        if self._weekdays.match(label) and regex.match(r"\s+\d", rest):
            return False
        if label == "matin" and regex.match(r"\s+du\b", rest):
            return False
        if label == "soir" and regex.match(r"\s+meme\b", rest):
            return False
        return True

    def _match(self, pid: PatternId, hit: regex.Match, offset: int, sentence: str) -> Match:
        groups = hit.groupdict()

        def number(key: str) -> Optional[int]:
            value = groups.get(key)
            if value is None:
                return None
            return int(value) if value.isdigit() else NUMBERS[value]

        ordinal = groups.get("ordinal")
        if ordinal is not None:
            ordinal = ORDINALS[ordinal] if ordinal in ORDINALS else int(regex.match(r"\d+", ordinal)[0])
        start, end = hit.span()
        return Match(
            pattern=pid,
            span=(offset + start, offset + end),
            label=hit["label"],
            sentence=sentence,
            n=number("n"),
            p=number("p"),
            ordinal=ordinal,
            unit=groups.get("unit"),
            parent=groups.get("parent"),
        )

    def scan_line(self, line: str, offset: int = 0, pattern: Optional[PatternId] = None) -> list[Match]:
        folded = fold_aligned(line)
        matches: list[Match] = []
        for sentence_span in _sentences(line):
            s0, s1 = sentence_span
            chunk = folded[s0:s1]
            candidates = sorted(
                self._candidates(chunk),
                key=lambda c: (-(c[1].end() - c[1].start()), self._priority[c[0]], c[1].start()),
            )
            taken: list[tuple[int, int]] = []
            for pid, hit in candidates:
                start, end = hit.span()
                if any(start < b and a < end for a, b in taken):
                    continue
                taken.append((start, end))
                matches.append(self._match(pid, hit, offset + s0, line[s0:s1]))
        matches.sort(key=lambda m: m.span)
        if pattern is not None:
            matches = [m for m in matches if m.pattern is PatternId(pattern)]
        return matches

    def scan(self, text: str, pattern: Optional[PatternId] = None, jobs: int = 1) -> list[Match]:
        """All non-overlapping matches in ``text``, in reading order.

        Lines are scanned independently; with ``jobs`` > 1 they are spread
        over a thread pool and merged back in order.
        """
        lines, offsets, position = [], [], 0
        for line in text.splitlines(keepends=True):
            lines.append(line.rstrip("\r\n"))
            offsets.append(position)
            position += len(line)
        if jobs > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                per_line = list(pool.map(lambda args: self.scan_line(*args, pattern), zip(lines, offsets)))
        else:
            per_line = [self.scan_line(line, offset, pattern) for line, offset in zip(lines, offsets)]
        matches = [match for found in per_line for match in found]
        logger.debug("scanned %d lines, %d matches", len(lines), len(matches))
        return matches

    # -- classification and translation

    def classify_period(self, label: str) -> PeriodKind:
        """Continuous or discontinuous period.

        A "tous les n <unit>" phrase is discontinuous whatever its unit.

        Raises:
            UnknownLabel: If the label is not in the vocabulary.
        """
        folded = fold(label).strip()
        if regex.match(rf"^(?:tous|toutes) les (?:\d+|{_alternation(NUMBERS)}) ", folded):
            return "discontinuous"
        return self.vocabulary.kinds[self.vocabulary.lemma(folded)]

    def to_cti(self, match: Match) -> Optional[CtiAst]:
        """The CTI tree a match stands for, or None when it has no grammar counterpart."""
        text = self._cti_text(match)
        if text is None:
            return None
        try:
            return parse(text)
        except ParseError as exc:
            logger.warning("cannot translate %s match %r: %s", match.pattern.value, match.label, exc.message)
            return None

    def _cti_text(self, match: Match) -> Optional[str]:
        label = match.label
        pid = match.pattern
        if pid is PatternId.TOUS_LES:
            return f"tous les {label}"
        if pid is PatternId.TOUS_LES_N:
            return f"tous les {match.n} {label}"
        if pid is PatternId.CHAQUE:
            return f"chaque {label}"
        if pid is PatternId.FOIS_PAR:
            return f"{match.n} fois par {label}" if match.n else None
        if pid is PatternId.N_PAR_LABEL:
            return f"{match.n} {match.unit} par {label}"
        if pid is PatternId.PLUPART:
            return f"la plupart des {label}"
        if pid is PatternId.CERTAINS:
            return f"certains {label}"
        if pid is PatternId.N_SUR_N:
            return f"{match.n} {label} sur {match.p}"
        if pid is PatternId.NIEME_DE and match.ordinal and match.ordinal > 0 and match.parent:
            try:
                singular = CalendarName.parse(label).singular
            except UnknownName:
                return None
            return f"le {match.ordinal}e {singular} de {match.parent}"
        return None


def _sentences(line: str) -> list[tuple[int, int]]:
    spans, start = [], 0
    for gap in _SENTENCE_END.finditer(line):
        spans.append((start, gap.start()))
        start = gap.end()
    if start < len(line):
        spans.append((start, len(line)))
    return spans


DEFAULT = Extractor()


def scan(text: str, pattern: Optional[PatternId] = None, jobs: int = 1) -> list[Match]:
    return DEFAULT.scan(text, pattern, jobs)


def classify_period(label: str) -> PeriodKind:
    return DEFAULT.classify_period(label)


def to_cti(match: Match) -> Optional[CtiAst]:
    return DEFAULT.to_cti(match)
