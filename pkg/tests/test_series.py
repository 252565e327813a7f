import random

import pytest

from conftest import spans
from itertime.errors import (
    BadPattern,
    EmptyInput,
    IncompatibleEquivalence,
    InvalidInterval,
    NoComponent,
    NotAnElement,
    NotASeries,
    OutOfRange,
)
from itertime.series import (
    ConvexInterval,
    GeneralizedInterval,
    Series,
    agglo,
    begins,
    complement,
    compos,
    convexify,
    ext,
    extract_first,
    extract_last,
    extract_pattern,
    extracted,
    fst,
    gap,
    included,
    intdef,
    is_contiguous,
    make_series,
    nth,
    order_leq,
    ordre,
    quotient,
    ratio,
    restrict,
    restrict_nth,
    restrict_pred,
    restrict_series,
    restrict_set,
    series_from_dict,
    series_to_dict,
    succ,
)


def instants(series):
    points = set()
    for item in series:
        points.update([item.beg] if item.is_point else range(item.beg, item.end))
    return points


def random_series(rng, size=None, horizon=60, max_len=6, points=0.0):
    """Ordered disjoint items on [0, horizon); a ``points`` share of them are points."""
    size = rng.randint(0, 8) if size is None else size
    items, cursor = [], rng.randint(0, 3)
    for _ in range(size):
        if rng.random() < points:
            if items and items[-1] == ConvexInterval.point(cursor):
                cursor += 1
            if cursor >= horizon:
                break
            items.append(ConvexInterval.point(cursor))
            cursor += rng.randint(0, 2)
            continue
        length = rng.randint(1, max_len)
        if cursor + length > horizon:
            break
        items.append(ConvexInterval(cursor, cursor + length))
        cursor += length + rng.randint(0, 4)
    return Series(items)


# -- convex intervals


def test_interval_rejects_reversed_bounds():
    with pytest.raises(InvalidInterval):
        ConvexInterval(5, 3)


@pytest.mark.parametrize(
    "first, second, expected",
    [
        (ConvexInterval(0, 5), ConvexInterval(5, 9), True),
        (ConvexInterval(0, 5), ConvexInterval(3, 9), False),
        (ConvexInterval.point(4), ConvexInterval(4, 9), True),
    ],
)
def test_order_leq(first, second, expected):
    assert order_leq(first, second) is expected


def test_point_containment():
    assert ConvexInterval(0, 5).contains(ConvexInterval.point(4))
    assert not ConvexInterval(0, 5).contains(ConvexInterval.point(5))
    assert ConvexInterval.point(3).contains(ConvexInterval.point(3))
    assert not ConvexInterval.point(3).contains(ConvexInterval(3, 4))


@pytest.mark.parametrize(
    "parts, expected",
    [
        ([ConvexInterval(0, 1), ConvexInterval(3, 4)], ConvexInterval(0, 4)),
        ([ConvexInterval(2, 3)], ConvexInterval(2, 3)),
        ([ConvexInterval(5, 6), ConvexInterval(0, 1), ConvexInterval.point(9)], ConvexInterval(0, 9)),
    ],
)
def test_convexify(parts, expected):
    assert convexify(parts) == expected


def test_convexify_empty():
    with pytest.raises(EmptyInput):
        convexify([])


# -- series construction and access


def test_make_series():
    assert len(make_series([ConvexInterval(0, 1), ConvexInterval(1, 2)])) == 2
    assert len(make_series([])) == 0
    with pytest.raises(NotASeries):
        make_series([ConvexInterval(0, 3), ConvexInterval(2, 5)])


def test_duplicate_points_are_not_a_series():
    with pytest.raises(NotASeries):
        spans(3, 3)


def test_accessors():
    series = spans((0, 1), (2, 3))
    assert nth(series, 2) == ConvexInterval(2, 3)
    assert succ(series, ConvexInterval(2, 3)) is None
    assert succ(series, ConvexInterval(0, 1)) == ConvexInterval(2, 3)
    assert ordre(series, fst(series)) == 1
    with pytest.raises(OutOfRange):
        nth(series, 3)
    with pytest.raises(NotAnElement):
        ordre(series, ConvexInterval(0, 2))
    with pytest.raises(EmptyInput):
        fst(Series())


def test_ext():
    assert ext(spans((0, 1), (2, 3))) == GeneralizedInterval([ConvexInterval(0, 1), ConvexInterval(2, 3)])
    assert ext(spans((4, 8))).parts == (ConvexInterval(4, 8),)


def test_generalized_interval_merges_touching_runs():
    window = GeneralizedInterval([ConvexInterval(0, 5), ConvexInterval(5, 10)])
    assert window.runs == (ConvexInterval(0, 10),)
    assert window.contains(ConvexInterval(3, 7))


# -- inclusion, extraction, ratio


def test_mondays_are_included_in_weeks_but_not_extracted():
    weeks = spans((0, 7), (7, 14), (14, 21))
    mondays = spans((0, 1), (7, 8), (14, 15))
    assert included(mondays, weeks)
    assert not extracted(mondays, weeks)


def test_series_against_itself():
    series = spans((0, 2), (4, 6), 9)
    assert included(series, series)
    assert extracted(series, series)
    assert ratio(series, series).is_constant(1)


def test_days_per_week():
    days = Series(ConvexInterval(i, i + 1) for i in range(21))
    weeks = agglo(days, 7)
    assert ratio(days, weeks).is_constant(7)
    assert ratio(days, weeks).total() == 21


def test_compos():
    months = spans((0, 31), (31, 59))
    assert compos(ConvexInterval(35, 36), months) == ConvexInterval(31, 59)
    assert compos(ConvexInterval(0, 31), months) == ConvexInterval(0, 31)
    with pytest.raises(NoComponent):
        compos(ConvexInterval(30, 32), months)


def test_extracted_implies_included_on_random_series():
    rng = random.Random(7)
    for _ in range(500):
        base = random_series(rng)
        candidate = Series(item for item in base if rng.random() < 0.5)
        assert extracted(candidate, base)
        assert included(candidate, base)


# -- complement, gap


def test_gap():
    assert gap(spans((0, 1), (3, 4))) == spans((1, 3))


def test_complement_of_mondays_holds_no_monday():
    march = spans((0, 31))
    mondays = spans((6, 7), (13, 14), (20, 21), (27, 28))
    rest = complement(mondays, march)
    assert rest == spans((0, 6), (7, 13), (14, 20), (21, 27), (28, 31))
    assert not instants(rest) & instants(mondays)


def test_complement_against_random_oracle():
    rng = random.Random(11)
    for _ in range(1000):
        reference = random_series(rng, max_len=12)
        series = Series(
            ConvexInterval(beg, rng.randint(beg + 1, item.end))
            for item in reference
            if rng.random() < 0.6
            for beg in [rng.randint(item.beg, item.end - 1)]
        )
        result = complement(series, reference)
        assert instants(result) == instants(reference) - instants(series)
        assert included(result, reference)


# -- restriction


def test_restrict_months_to_first_quarter():
    months = spans((0, 31), (31, 59), (59, 90), (90, 120))
    quarter = ConvexInterval(0, 90)
    assert restrict(months, quarter) == spans((0, 31), (31, 59), (59, 90))
    assert restrict(months, convexify(months)) == months


def test_soft_restriction_clips():
    weeks = spans((0, 7), (7, 14), (14, 21), (21, 28), (28, 35))
    month = ConvexInterval(3, 31)
    assert restrict(weeks, month, "soft") == spans((3, 7), (7, 14), (14, 21), (21, 28), (28, 31))
    assert restrict(weeks, month, "strict") == spans((7, 14), (14, 21), (21, 28))


def test_restrict_against_random_oracle():
    rng = random.Random(3)
    for _ in range(1000):
        series, window = random_series(rng), random_series(rng, max_len=15)
        if not window:
            continue
        covered = instants(window)
        strict = restrict_series(series, window, "strict")
        assert strict == Series(item for item in series if instants([item]) <= covered)
        soft = restrict_series(series, window, "soft")
        assert instants(soft) == instants(series) & covered


def test_restrict_series_by_empty_parent():
    assert restrict_series(spans((0, 1)), Series()) == Series()


def test_restrict_nth_and_set():
    days = Series(ConvexInterval(i, i + 1) for i in range(14))
    weeks = agglo(days, 7)
    assert restrict_nth(days, weeks, 2) == spans((1, 2), (8, 9))
    assert restrict_set(days, weeks, {1, 7}) == spans((0, 1), (6, 7), (7, 8), (13, 14))
    assert restrict_nth(days, spans((0, 14)), 1) == Series([fst(days)])
    with pytest.raises(BadPattern):
        restrict_set(days, weeks, set())


def test_restrict_pred():
    series = spans((0, 1), (2, 5), (6, 7), (8, 11))
    assert restrict_pred(series, lambda _: True) == series
    assert restrict_pred(series, lambda _: False) == Series()
    assert restrict_pred(series, lambda i: i.length >= 2) == spans((2, 5), (8, 11))


# -- quotient and extraction


def test_agglo_of_unit_intervals():
    units = Series(ConvexInterval(i, i + 1) for i in range(5))
    assert agglo(units, 2) == spans((0, 2), (2, 4), (4, 5))


def test_quotient_rejects_split_classes():
    units = Series(ConvexInterval(i, i + 1) for i in range(4))
    with pytest.raises(IncompatibleEquivalence):
        quotient(units, lambda i: i % 2)


def test_extract_first_last_pattern():
    units = Series(ConvexInterval(i, i + 1) for i in range(5))
    assert extract_first(units, 2) == spans((0, 1), (1, 2))
    assert extract_last(units, 2) == spans((3, 4), (4, 5))
    assert extract_last(units, 9) == units
    assert extract_pattern(units, 1, 2) == spans((0, 1), (2, 3), (4, 5))
    with pytest.raises(BadPattern):
        extract_pattern(units, 3, 2)


PATTERNS = [(n, p) for p in range(1, 5) for n in range(1, p + 1)]
UNITS = [ConvexInterval(i, i + 1) for i in range(8)]
UNITS_AND_POINTS = [item for i in range(4) for item in (ConvexInterval.point(i), ConvexInterval(i, i + 1))]


def small_series():
    """Every series drawn from eight unit spans, or from four units and their start points."""
    for alphabet in (UNITS, UNITS_AND_POINTS):
        for mask in range(1 << len(alphabet)):
            yield Series(item for k, item in enumerate(alphabet) if mask >> k & 1)


def test_point_closing_a_packet_stays_in_it():
    series = spans((0, 1), 2, (2, 5))
    packets = agglo(series, 2)
    assert packets == spans((0, 2), (2, 5))
    assert restrict_set(series, packets, {1}) == spans((0, 1), (2, 5))
    assert extract_pattern(series, 1, 2) == spans((0, 1), (2, 5))
    assert compos(ConvexInterval.point(2), packets) == ConvexInterval(0, 2)
    assert ratio(series, packets).counts == (2, 1)


@pytest.mark.parametrize("n, p", PATTERNS)
def test_extract_pattern_is_restriction_over_packets(n, p):
    for series in small_series():
        assert restrict_set(series, agglo(series, p), range(1, n + 1)) == extract_pattern(series, n, p)


@pytest.mark.parametrize("n, p", PATTERNS)
def test_extract_pattern_identity_on_random_series(n, p):
    rng = random.Random(5 * p + n)
    for _ in range(200):
        series = random_series(rng, size=rng.randint(0, 12), horizon=200, points=0.3)
        assert restrict_set(series, agglo(series, p), range(1, n + 1)) == extract_pattern(series, n, p)


@pytest.mark.parametrize("p", [1, 2, 3, 4])
def test_packets_count_every_item(p):
    for series in small_series():
        packets = agglo(series, p)
        assert included(series, packets)
        counts = ratio(series, packets).counts
        assert sum(counts) == len(series)
        assert counts == tuple(min(p, len(series) - start) for start in range(0, len(series), p))


# -- brute-force oracles on spans


def component_of(item, parent):
    covered = instants([item])
    return next((j for j, component in enumerate(parent) if covered <= instants([component])), None)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_restrict_nth_against_random_oracle(n):
    rng = random.Random(13 + n)
    for _ in range(500):
        series = random_series(rng, size=rng.randint(0, 12), horizon=80)
        parent = random_series(rng, horizon=80, max_len=20)
        seen, expected = {}, []
        for item in series:
            j = component_of(item, parent)
            if j is None:
                continue
            seen[j] = seen.get(j, 0) + 1
            if seen[j] == n:
                expected.append(item)
        assert restrict_nth(series, parent, n) == Series(expected)


@pytest.mark.parametrize("p", [1, 2, 3, 5])
def test_agglo_against_random_oracle(p):
    rng = random.Random(17 + p)
    for _ in range(500):
        series = random_series(rng, size=rng.randint(0, 12), horizon=200)
        packets = [series.items[k:k + p] for k in range(0, len(series), p)]
        assert agglo(series, p) == Series(ConvexInterval(packet[0].beg, packet[-1].end) for packet in packets)


def test_gap_against_random_oracle():
    rng = random.Random(19)
    for _ in range(1000):
        series = random_series(rng)
        result = gap(series)
        if len(series) < 2:
            assert result == Series()
            continue
        hull = set(range(series[0].beg, series[-1].end))
        assert instants(result) == hull - instants(series)
        assert len(result) == sum(1 for a, b in zip(series, series[1:]) if a.end < b.beg)


def test_ratio_against_random_oracle():
    rng = random.Random(23)
    for _ in range(1000):
        parent = random_series(rng, max_len=12)
        child = []
        for component in parent:
            if component.length < 2:
                if rng.random() < 0.5:
                    child.append(component)
                continue
            cut = rng.randint(component.beg + 1, component.end - 1)
            child += [piece for piece in (ConvexInterval(component.beg, cut), ConvexInterval(cut, component.end))
                      if rng.random() < 0.6]
        child = Series(child)
        expected = [sum(1 for item in child if component_of(item, parent) == j) for j in range(len(parent))]
        result = ratio(child, parent)
        assert result.counts == tuple(expected)
        assert result.total() == len(child)


def test_intdef_against_random_oracle():
    rng = random.Random(29)
    for _ in range(1000):
        starts, stops = random_series(rng), random_series(rng)
        expected = []
        for start in starts:
            stop = next((s for s in stops if s.beg >= start.end and s != start), None)
            if stop is not None:
                expected.append(ConvexInterval(start.beg, max(start.end, stop.end)))
        if all(a.end <= b.beg and a != b for a, b in zip(expected, expected[1:])):
            assert intdef(starts, stops) == Series(expected)
        else:
            with pytest.raises(NotASeries):
                intdef(starts, stops)


# -- idempotence and well-formed outputs


@pytest.mark.parametrize("mode", ["strict", "soft"])
def test_restrict_is_idempotent(mode):
    rng = random.Random(31)
    for _ in range(500):
        series, window = random_series(rng, points=0.3), random_series(rng, max_len=15)
        if not window:
            continue
        once = restrict(series, ext(window), mode)
        assert restrict(once, ext(window), mode) == once


def test_agglo_by_one_is_the_identity():
    rng = random.Random(37)
    for _ in range(500):
        series = random_series(rng, points=0.3)
        assert agglo(series, 1) == series
        for n in (2, 3):
            assert agglo(agglo(series, n), 1) == agglo(series, n)


OPERATIONS = {
    "restrict-strict": lambda s, w: restrict_series(s, w, "strict"),
    "restrict-soft": lambda s, w: restrict_series(s, w, "soft"),
    "restrict-nth": lambda s, w: restrict_nth(s, agglo(s, 2), 1),
    "restrict-set": lambda s, w: restrict_set(s, w, {1, 3}),
    "agglo": lambda s, w: agglo(s, 3),
    "extract-first": lambda s, w: extract_first(s, 2),
    "extract-last": lambda s, w: extract_last(s, 2),
    "extract-pattern": lambda s, w: extract_pattern(s, 2, 3),
    "gap": lambda s, w: gap(s),
    "begins": lambda s, w: begins(s),
    "complement": lambda s, w: complement(s, agglo(s, 3)) if s else Series(),
}


@pytest.mark.parametrize("name", sorted(OPERATIONS))
def test_outputs_are_series(name):
    rng = random.Random(41)
    operation = OPERATIONS[name]
    for _ in range(300):
        series = random_series(rng, size=rng.randint(0, 10), points=0.3)
        window = random_series(rng, max_len=15)
        result = operation(series, window)
        assert isinstance(result, Series)
        assert Series(result.items) == result


# -- begins, intdef, contiguity


def test_begins():
    assert begins(spans((60, 120), (180, 240))) == spans(60, 180)
    assert begins(Series()) == Series()


def test_intdef_monday_to_friday():
    mondays = spans((0, 1), (7, 8))
    fridays = spans((4, 5), (11, 12))
    assert intdef(mondays, fridays) == spans((0, 5), (7, 12))


def test_intdef_pairs_each_item_with_its_successor():
    assert intdef(spans((0, 2), (3, 4)), spans((0, 2), (3, 4))) == spans((0, 4))


def test_intdef_refuses_overlapping_spans():
    series = spans((0, 2), (3, 4), (6, 9))
    with pytest.raises(NotASeries):
        intdef(series, series)


def test_is_contiguous():
    assert is_contiguous(Series(ConvexInterval(i, i + 1) for i in range(31)))
    assert not is_contiguous(spans((0, 1), (7, 8)))
    assert is_contiguous(spans((3, 4)))


def test_dict_form_keeps_items():
    series = spans((0, 2), 5)
    data = series_to_dict(series)
    assert data == {"items": [[0, 2], [5, 5]]}
    assert series_from_dict(data) == series
