"""Accent and case folding shared by the parsers."""

import unicodedata

import regex

_MARKS = regex.compile(r"\p{Mn}+")


def fold(text: str) -> str:
    """Lowercase ASCII-ish form: diacritics stripped, typographic apostrophes unified."""
    text = unicodedata.normalize("NFKD", text.replace("’", "'"))
    return _MARKS.sub("", text).lower()


def fold_aligned(text: str) -> str:
    """Like :func:`fold` but character-for-character, so offsets survive."""
    return "".join(_fold_char(ch) for ch in text)


def _fold_char(ch: str) -> str:
    if ch == "’":
        return "'"
    base = _MARKS.sub("", unicodedata.normalize("NFKD", ch)).lower()
    if len(base) == 1:
        return base
    lowered = ch.lower()
    return lowered if len(lowered) == 1 else ch
