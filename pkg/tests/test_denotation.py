from datetime import datetime
from fractions import Fraction

import pytest

from conftest import d, days
from itertime.calendars import CalendarName, Frame, gen
from itertime.denotation import (
    Card,
    Concrete,
    DenoteOptions,
    Exact,
    Family,
    Membership,
    Quantified,
    RatioConst,
    Threshold,
    compare,
    denotation_to_dict,
    evaluate,
    family_check,
    resolve,
    witness,
)
from itertime.errors import DegenerateFamily
from itertime.series import agglo


@pytest.fixture
def ten_mondays():
    return Frame.from_iso("2005-03-07", "2005-05-16")


def test_mondays_of_march(years_2004_2005):
    result = evaluate("tous les lundis de mars", years_2004_2005)
    assert isinstance(result, Concrete)
    assert days(years_2004_2005, result.series) == [
        d("2004-03-01"), d("2004-03-08"), d("2004-03-15"), d("2004-03-22"), d("2004-03-29"),
        d("2005-03-07"), d("2005-03-14"), d("2005-03-21"), d("2005-03-28"),
    ]


def test_second_monday_of_march(years_2004_2005):
    result = evaluate("le 2e lundi de mars", years_2004_2005)
    assert days(years_2004_2005, result.series) == [d("2004-03-08"), d("2005-03-14")]


def test_every_fifth_day_starts_with_the_frame(march_2005):
    result = evaluate("tous les 5 jours", march_2005)
    assert [day.day for day in days(march_2005, result.series)] == [1, 6, 11, 16, 21, 26, 31]


def test_flexible_every_picks_one_per_packet(year_2005):
    strict = resolve(evaluate("tous les 2 lundis", year_2005))
    flexible = evaluate("tous les 2 lundis", year_2005, DenoteOptions(flexible_every=True))
    assert isinstance(flexible, Quantified)
    assert resolve(flexible) == strict


def test_un_picks_the_first(march_2005):
    result = evaluate("un lundi", march_2005)
    assert isinstance(result, Quantified)
    assert result.family.constraint == Card(1)
    assert days(march_2005, resolve(result)) == [d("2005-03-07")]


def test_plupart_threshold(ten_mondays):
    result = evaluate("la plupart des lundis", ten_mondays)
    family = result.family
    assert family.constraint == Threshold("gt", Fraction("0.66"))
    assert len(family.base) == 10
    assert len(witness(family)) == 7
    assert family_check(family.base, family)
    assert family_check(family.base[:7], family)
    assert not family_check(family.base[:6], family)


def test_certains_threshold(ten_mondays):
    family = evaluate("certains lundis", ten_mondays).family
    assert family_check(family.base[:2], family)
    assert not family_check(family.base[:4], family)
    assert not family_check(family.base[:0], family)


def test_candidate_outside_the_base_never_belongs(ten_mondays):
    family = evaluate("la plupart des lundis", ten_mondays).family
    tuesdays = gen(CalendarName.MARDI, ten_mondays)
    assert not family_check(tuesdays, family)


@pytest.mark.parametrize("start, end", [("2005-03-07", "2005-03-08"), ("2005-03-01", "2005-03-22")])
def test_certains_over_three_items_or_fewer_is_degenerate(start, end):
    with pytest.raises(DegenerateFamily):
        evaluate("certains lundis", Frame.from_iso(start, end))


def test_trois_fois_par_jour_spreads_points():
    frame = Frame.from_iso("2005-03-01", "2005-03-03")
    result = evaluate("3 fois par jour", frame)
    assert result.family.constraint.membership is Membership.INCLUDED
    moments = [frame.datetime_at(item.beg) for item in resolve(result)]
    assert moments == [
        datetime(2005, 3, 1, 6), datetime(2005, 3, 1, 12), datetime(2005, 3, 1, 18),
        datetime(2005, 3, 2, 6), datetime(2005, 3, 2, 12), datetime(2005, 3, 2, 18),
    ]
    assert all(item.is_point for item in resolve(result))


def test_trois_jours_par_semaine(march_2005):
    result = evaluate("trois jours par semaine", march_2005)
    assert [day.day for day in days(march_2005, resolve(result))] == [7, 8, 9, 14, 15, 16, 21, 22, 23]


def test_ratio_needs_enough_items_unless_lenient(year_2005):
    with pytest.raises(DegenerateFamily):
        evaluate("5 lundis par mois", year_2005)
    result = evaluate("5 lundis par mois", year_2005, DenoteOptions(lenient=True))
    picked = days(year_2005, resolve(result))
    assert len(picked) == 20
    assert {day.month for day in picked} == {1, 5, 8, 10}


def test_un_sur_deux(march_2005):
    result = evaluate("un lundi sur deux", march_2005)
    assert days(march_2005, resolve(result)) == [d("2005-03-07"), d("2005-03-21")]


def test_sur_keeps_a_trailing_packet_that_can_host_n():
    august = Frame.from_iso("2005-08-01", "2005-09-01")
    result = evaluate("un lundi sur deux", august)
    assert len(result.family.constraint.parent) == 3
    assert days(august, resolve(result)) == [d("2005-08-01"), d("2005-08-15"), d("2005-08-29")]
    assert resolve(result) == resolve(evaluate("tous les deux lundis", august))
    flexible = evaluate("tous les deux lundis", august, DenoteOptions(flexible_every=True))
    assert resolve(flexible) == resolve(result)


def test_sur_with_a_short_trailing_packet(march_2005):
    # 31 days: the fifth packet holds 3 days
    three = evaluate("3 jours sur 7", march_2005)
    assert len(three.family.constraint.parent) == 5
    assert [day.day for day in days(march_2005, resolve(three))] == [
        1, 2, 3, 8, 9, 10, 15, 16, 17, 22, 23, 24, 29, 30, 31,
    ]
    four = evaluate("4 jours sur 7", march_2005)
    assert len(four.family.constraint.parent) == 4
    assert len(resolve(four)) == 16
    lenient = evaluate("4 jours sur 7", march_2005, DenoteOptions(lenient=True))
    assert resolve(lenient) == resolve(four)


def test_clock_times():
    frame = Frame.from_iso("2005-03-01", "2005-03-04")
    result = evaluate("tous les jours à 8h30", frame)
    assert [frame.datetime_at(item.beg) for item in result.series] == [
        datetime(2005, 3, 1, 8, 30), datetime(2005, 3, 2, 8, 30), datetime(2005, 3, 3, 8, 30),
    ]
    assert all(item.is_point for item in result.series)
    assert evaluate("à 8h30", frame) == result


def test_clock_scoped_to_sundays(march_2005):
    result = evaluate("à midi tous les dimanches", march_2005)
    assert [march_2005.datetime_at(item.beg) for item in result.series] == [
        datetime(2005, 3, day, 12) for day in (6, 13, 20, 27)
    ]


def test_monday_to_friday(march_2005):
    result = evaluate("de lundi à vendredi", march_2005)
    assert [(march_2005.datetime_at(i.beg).day, march_2005.datetime_at(i.end).day) for i in result.series] == [
        (7, 12), (14, 19), (21, 26),
    ]


def test_monday_to_friday_of_march_is_clipped(year_2005):
    result = evaluate("de lundi à vendredi de mars", year_2005)
    bounds = [(year_2005.datetime_at(i.beg).date(), year_2005.datetime_at(i.end).date()) for i in result.series]
    assert bounds[0] == (d("2005-03-01"), d("2005-03-05"))
    assert bounds[-1] == (d("2005-03-28"), d("2005-04-01"))
    assert len(bounds) == 5


def test_soft_restriction_keeps_clipped_weeks(year_2005):
    strict = resolve(evaluate("les semaines de mars", year_2005))
    soft = resolve(evaluate("les semaines de mars", year_2005, DenoteOptions(soft=True)))
    assert len(strict) == 3
    assert len(soft) == 5
    assert year_2005.datetime_at(soft[-1].end) == datetime(2005, 4, 1)


def test_frequentatives(march_2005):
    souvent = evaluate("souvent le lundi", march_2005)
    assert isinstance(souvent, Quantified)
    assert len(resolve(souvent)) == 3
    assert souvent.family.constraint.op == "gt"


def test_witness_rules_directly():
    base = agglo(gen(CalendarName.JOUR, Frame.from_iso("2005-03-01", "2005-03-11")), 1)
    assert witness(Family(base, Exact(base))) == base
    assert witness(Family(base, Card(3))) == base[:3]
    assert len(witness(Family(base, Threshold("lt", Fraction("0.33"), 1)))) == 3
    with pytest.raises(DegenerateFamily):
        witness(Family(base, Card(11)))
    pairs = agglo(base, 2)
    assert witness(Family(base, RatioConst(pairs, 1))) == base[::2]


SOUNDNESS_FIXTURES = [
    "tous les lundis",
    "tous les lundis de mars",
    "les mardis de juin",
    "chaque jour de mai",
    "un lundi",
    "une semaine de juin",
    "un jour de chaque semaine",
    "la plupart des lundis",
    "la plupart des jours de mars",
    "certains jours",
    "certaines semaines",
    "quelques jours de mars",
    "3 jours par semaine",
    "2 lundis par mois",
    "un jour par mois",
    "3 fois par jour",
    "2 fois par semaine",
    "une fois par mois",
    "2 mois sur 12",
    "un dimanche sur deux",
    "un jour sur 7",
    "tous les 5 jours",
    "tous les 2 mois",
    "le 2e lundi de mars",
    "le premier jour du mois",
    "à 8h",
    "tous les jours à 8h30",
    "à midi tous les dimanches",
    "de lundi à vendredi",
    "de lundi à vendredi de mars",
    "souvent le lundi",
    "parfois le soir",
    "rarement les dimanches",
    "fréquemment les matins",
    "les matins de décembre",
    "les nuits de juillet",
    "les hivers",
    "les étés",
    "toutes les semaines de l'été",
    "le 3e jour de chaque semaine",
    "tous les mois",
    "la plupart des mois",
    "2 jours sur 3",
    "les après-midis de mai",
    "tous les dimanches de décembre",
    "les lundis d'avril",
    "un samedi par mois",
    "tous les 3 jours de mars",
    "quelquefois les jeudis",
    "un mardi sur trois",
]


@pytest.mark.parametrize("text", SOUNDNESS_FIXTURES)
def test_every_witness_belongs_to_its_family(year_2005, text):
    result = evaluate(text, year_2005)
    series = resolve(result)
    if isinstance(result, Quantified):
        assert family_check(series, result.family)
    else:
        assert series == result.series
    assert denotation_to_dict(result, year_2005)["kind"] in ("concrete", "quantified")


def test_denotation_dict(march_2005):
    data = denotation_to_dict(evaluate("un lundi", march_2005), march_2005, family=True)
    assert data["kind"] == "quantified"
    assert data["series"] == [["2005-03-07T00:00", "2005-03-08T00:00"]]
    assert data["family"]["constraint"] == {"kind": "card", "k": 1}
    assert len(data["family"]["base"]) == 4


def test_compare(year_2005):
    mondays = evaluate("tous les lundis", year_2005)
    report = compare(mondays, evaluate("tous les lundis de mars", year_2005), year_2005)
    assert report.second_extracted_from_first
    assert not report.first_extracted_from_second
    assert "extracted-either-way" in report.flags()

    disjoint = compare(evaluate("les lundis", year_2005), evaluate("les mardis", year_2005), year_2005)
    assert disjoint.point_disjoint
    assert "point-disjoint" in disjoint.flags()

    every_other = compare(evaluate("un lundi sur 2", year_2005), mondays, year_2005)
    assert every_other.first_extracted_from_second
    assert every_other.first_included_in_second


def test_compare_overlap_reports_common_instants():
    frame = Frame.from_iso("2005-03-07", "2005-03-28")
    report = compare(evaluate("les lundis", frame), evaluate("les semaines", frame), frame)
    assert report.overlapping
    assert report.first_included_in_second
    assert len(report.common) == 3
    assert report.to_dict(frame)["flags"] == ["included-either-way", "overlapping"]
