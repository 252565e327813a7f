import pytest

from itertime.categories import (
    ABSOLU,
    ANAPHORIQUE,
    DEICTIQUE,
    DUREE,
    INTERNE,
    NON_CONVEXE,
    RECOUVREMENT,
    SELECTEUR,
    SEQUENTIALITE,
    Category,
    CategoryKind,
    classify,
)
from itertime.cti import parse
from itertime.errors import Unclassified


@pytest.mark.parametrize(
    "phrase, expected",
    [
        ("tous les lundis", NON_CONVEXE),
        ("un dimanche sur deux", NON_CONVEXE),
        ("souvent le lundi", NON_CONVEXE),
        ("tous les lundis de 2005", NON_CONVEXE),
        ("le mois prochain", DEICTIQUE),
        ("la semaine dernière", DEICTIQUE),
        ("il y a deux ans", DEICTIQUE),
        ("le lendemain", ANAPHORIQUE),
        ("en 2005", ABSOLU),
        ("depuis 1990", ABSOLU),
        ("pendant trois jours", DUREE),
        ("puis", SEQUENTIALITE),
        ("dans deux jours", SEQUENTIALITE),
        ("pendant que", RECOUVREMENT),
        ("peu à peu", INTERNE),
        ("3 fois", INTERNE),
        ("le 2e lundi de mars", SELECTEUR),
        ("la troisième fois", SELECTEUR),
        ("au début de", SELECTEUR),
    ],
)
def test_classify(phrase, expected):
    assert classify(phrase) == expected


def test_classify_parsed_tree():
    assert classify(parse("le 2e lundi de mars")) == SELECTEUR
    assert classify(parse("tous les jours à 8h")) == NON_CONVEXE


def test_tags():
    assert classify("le mois prochain").tag == "site-convexe/relatif-deictique"
    assert str(classify("peu à peu")) == "descripteur-de-temporalite-interne"


def test_unclassified():
    with pytest.raises(Unclassified) as info:
        classify("la pluie sur la ville")
    assert info.value.to_dict()["details"]["phrase"] == "la pluie sur la ville"


@pytest.mark.parametrize(
    "kind, subkind",
    [(CategoryKind.SITE_CONVEXE, None), (CategoryKind.SELECTEUR, "absolu"), (CategoryKind.SITE_CONVEXE, "duree-longue")],
)
def test_subkinds_are_checked(kind, subkind):
    with pytest.raises(ValueError):
        Category(kind, subkind)
