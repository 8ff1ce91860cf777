import pytest

from trajecta.core import TimeWindow
from trajecta.errors import EmptySentence, UnparsableDate
from trajecta.nlq import (
    KIND_CONJUNCTION,
    KIND_SPATIAL,
    KIND_TEMPORAL,
    QueryDefaults,
    classify_words,
    extract_constraints,
    parse_temporal,
)

# frozen by hand: 2014-01-14 and 2014-01-25 midnights in epoch seconds
JAN14 = 1389657600
JAN25 = 1390608000
DAY = 86400


def _kinds(sentence):
    return {w.text: w.kind for w in classify_words(sentence)}


class TestClassifyWords:
    def test_student_query_sentence(self):
        kinds = _kinds("Query trajectories of students during Jan. 10 2014")
        assert kinds["students"] == KIND_SPATIAL
        assert kinds["Jan. 10 2014"] == KIND_TEMPORAL
        for conj in ("Query", "trajectories", "of", "during"):
            assert kinds[conj] == KIND_CONJUNCTION

    def test_day_part_word_is_temporal(self):
        assert _kinds("morning")["morning"] == KIND_TEMPORAL

    def test_unknown_word_defaults_spatial(self):
        assert _kinds("xyzzy")["xyzzy"] == KIND_SPATIAL

    def test_every_token_gets_exactly_one_kind(self):
        sentence = "Query trajectories passing train station before baihua park during Jan. 14 2014 morning"
        words = classify_words(sentence)
        # the three date tokens collapse into one temporal word
        assert len(words) == len(sentence.split()) - 2
        assert all(w.kind in (KIND_CONJUNCTION, KIND_TEMPORAL, KIND_SPATIAL) for w in words)

    def test_empty_sentence_raises(self):
        with pytest.raises(EmptySentence):
            classify_words("   ")

    def test_overrides_win(self):
        words = classify_words("morning", overrides={"morning": KIND_SPATIAL})
        assert words[0].kind == KIND_SPATIAL

    def test_iso_date_is_temporal(self):
        assert _kinds("pass park during 2014-01-14")["2014-01-14"] == KIND_TEMPORAL


class TestParseTemporal:
    def test_morning_of_specific_day(self):
        words = classify_words("morning Jan. 14 2014")
        windows = parse_temporal(words)
        assert windows == [TimeWindow(JAN14 + 6 * 3600, JAN14 + 9 * 3600)]

    def test_day_part_alone_is_daily_window(self):
        windows = parse_temporal(classify_words("evening"))
        assert windows == [TimeWindow(18 * 3600, 24 * 3600, daily=True)]

    def test_no_temporal_words_unbounded(self):
        windows = parse_temporal(classify_words("train station"))
        assert len(windows) == 1 and windows[0].is_unbounded

    def test_date_alone_full_day(self):
        windows = parse_temporal(classify_words("during January 25, 2014"))
        assert windows == [TimeWindow(JAN25, JAN25 + DAY)]

    def test_unparsable_date(self):
        with pytest.raises(UnparsableDate):
            parse_temporal(classify_words("during Feb. 30 2014"))

    def test_non_date_word_forced_temporal_is_unparsable(self):
        words = classify_words("pass tomorrow", overrides={"tomorrow": KIND_TEMPORAL})
        with pytest.raises(UnparsableDate):
            parse_temporal(words)

    def test_bogus_override_kind_rejected(self):
        with pytest.raises(ValueError):
            classify_words("pass park", overrides={"park": "sideways"})

    def test_windows_sorted_and_disjoint(self):
        words = classify_words("morning evening during Jan. 14 2014")
        windows = parse_temporal(words)
        assert windows == sorted(windows, key=lambda w: w.start)
        for a, b in zip(windows, windows[1:]):
            assert a.end <= b.start


class TestExtractConstraints:
    def test_ordered_island_before_building(self):
        c = extract_constraints(
            "Query trajectories passed through Jiangxin island before Wuhua Building during January 25, 2014"
        )
        assert [g.keywords for g in c.groups] == [["jiangxin", "island"], ["wuhua", "building"]]
        assert [g.order_index for g in c.groups] == [0, 1]
        assert c.windows == [TimeWindow(JAN25, JAN25 + DAY)]

    def test_before_after_swap_is_identical(self):
        a = extract_constraints("pass alpha tower before beta park")
        b = extract_constraints("pass beta park after alpha tower")
        assert a == b

    def test_and_makes_two_unordered_groups(self):
        c = extract_constraints("pass alpha and pass beta")
        assert [g.keywords for g in c.groups] == [["alpha"], ["beta"]]
        assert all(g.order_index is None for g in c.groups)
        assert c.combinator == "and"

    def test_or_sets_combinator(self):
        c = extract_constraints("pass alpha or pass beta")
        assert c.combinator == "or"

    def test_only_conjunctions_yield_zero_groups(self):
        c = extract_constraints("query trajectories that pass through")
        assert c.groups == []

    def test_defaults_flow_through(self):
        d = QueryDefaults(alpha=0.6, beta=0.4, k=3, topic_weights=[1.0, 0.0])
        c = extract_constraints("pass alpha", query_defaults=d)
        assert (c.alpha, c.beta, c.k, c.topic_weights) == (0.6, 0.4, 3, [1.0, 0.0])

    def test_multiword_group_between_conjunctions(self):
        c = extract_constraints("Query trajectories that pass train station in the morning")
        assert [g.keywords for g in c.groups] == [["train", "station"]]
        assert c.windows == [TimeWindow(6 * 3600, 9 * 3600, daily=True)]
