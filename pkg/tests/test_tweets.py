from datetime import date, datetime, timezone

import pytest

from covidex.errors import MalformedUrl
from covidex.records import DomainList, LocationList, TweetRecord
from covidex.tweets import (
    LocationMatcher,
    activity_timeline,
    extract_features,
    filter_india,
    lqms_report,
    state_distribution,
    top_items,
    url_domain,
)
from covidex.tweets.io import lqms_table_lines


def ts(y, m, d, h=0):
    return int(datetime(y, m, d, h, tzinfo=timezone.utc).timestamp())


def tweet(tid, text="", when=None, user_location=None, place_name=None, reply_to=None):
    return TweetRecord(
        tweet_id=tid,
        created_at=when if when is not None else ts(2020, 4, 1),
        text=text,
        user_location=user_location,
        place_name=place_name,
        reply_to_id=reply_to,
    )


LOCATIONS = LocationList(names=frozenset({"mumbai", "delhi", "goa", "new delhi", "kerala"}))


class TestExtractFeatures:
    def test_all_three_kinds(self):
        hashtags, mentions, urls = extract_features(
            tweet("t", "Stay safe #COVID19 @WHO https://who.int/x")
        )
        assert hashtags == ["covid19"]
        assert mentions == ["who"]
        assert urls == ["https://who.int/x"]

    def test_duplicates_preserved(self):
        hashtags, _, _ = extract_features(tweet("t", "#a #a"))
        assert hashtags == ["a", "a"]

    def test_plain_text(self):
        assert extract_features(tweet("t", "no markers at all")) == ([], [], [])


class TestUrlDomain:
    def test_strips_www_port_and_case(self):
        assert url_domain("https://www.Example.com:443/a?b=c") == "example.com"

    def test_plain(self):
        assert url_domain("http://fakenews.example/story") == "fakenews.example"

    def test_rejects_other_schemes(self):
        with pytest.raises(MalformedUrl):
            url_domain("ftp://x")

    def test_rejects_hostless(self):
        with pytest.raises(MalformedUrl):
            url_domain("https:///nope")


class TestFilterIndia:
    def test_place_name_metadata(self):
        result = filter_india([tweet("t1", "anything", place_name="Mumbai")], LOCATIONS)
        assert result.reasons == {"t1": "location_metadata"}

    def test_text_match(self):
        result = filter_india([tweet("t1", "Lockdown extended in Delhi")], LOCATIONS)
        assert result.reasons == {"t1": "text_match"}

    def test_one_hop_reply_closure(self):
        tweets = [
            tweet("base", "news from Mumbai"),
            tweet("t2", "totally unrelated", reply_to="base"),
            tweet("t3", "also unrelated", reply_to="t2"),
        ]
        result = filter_india(tweets, LOCATIONS)
        assert result.reasons["t2"] == "reply_to_india"
        assert "t3" not in result.included  # one hop only

    def test_replied_by_india(self):
        tweets = [
            tweet("parent", "no signal here"),
            tweet("base", "reply from Kerala", reply_to="parent"),
        ]
        result = filter_india(tweets, LOCATIONS)
        assert result.reasons["parent"] == "replied_by_india"

    def test_reason_priority_order(self):
        # location metadata beats text match; base reasons beat closure.
        tweets = [
            tweet("both", "tweet about Delhi", place_name="Mumbai"),
            tweet("textonly", "Delhi curfew", reply_to="both"),
        ]
        result = filter_india(tweets, LOCATIONS)
        assert result.reasons["both"] == "location_metadata"
        assert result.reasons["textonly"] == "text_match"

    def test_word_boundary_no_goa_in_goal(self):
        result = filter_india([tweet("t1", "scored a goal today")], LOCATIONS)
        assert result.included == frozenset()

    def test_multiword_location(self):
        result = filter_india([tweet("t1", "curfew in New Delhi tonight")], LOCATIONS)
        assert result.reasons["t1"] == "text_match"

    def test_monotone_in_location_list(self):
        tweets = [tweet("t1", "pune update"), tweet("t2", "mumbai update")]
        small = filter_india(tweets, LOCATIONS)
        bigger = LocationList(names=LOCATIONS.names | {"pune"})
        large = filter_india(tweets, bigger)
        assert small.included <= large.included


class TestActivityTimeline:
    def test_day_buckets_with_gap_fill(self):
        tweets = [
            tweet("a", when=ts(2020, 4, 1, 1)),
            tweet("b", when=ts(2020, 4, 1, 5)),
            tweet("c", when=ts(2020, 4, 1, 23)),
            tweet("d", when=ts(2020, 4, 3)),
        ]
        timeline = activity_timeline(tweets, "day")
        assert timeline.points == (
            (date(2020, 4, 1), 3),
            (date(2020, 4, 2), 0),
            (date(2020, 4, 3), 1),
        )

    def test_empty(self):
        assert activity_timeline([], "day").points == ()

    def test_month_buckets_jan_to_may(self):
        tweets = [tweet(f"t{m}", when=ts(2020, m, 15)) for m in (1, 2, 3, 4, 5)]
        timeline = activity_timeline(tweets, "month")
        assert len(timeline.points) == 5
        assert timeline.points[0][0] == date(2020, 1, 1)

    def test_week_buckets_start_monday(self):
        timeline = activity_timeline([tweet("a", when=ts(2020, 4, 1))], "week")
        assert timeline.points[0][0].weekday() == 0

    def test_counts_conserved(self):
        tweets = [tweet(f"t{i}", when=ts(2020, 3, 1 + i % 20)) for i in range(57)]
        for bucket in ("day", "week", "month"):
            timeline = activity_timeline(tweets, bucket)
            assert sum(n for _, n in timeline.points) == 57


class TestTopItems:
    def test_hashtags_k1(self):
        tweets = [tweet("a", "#covid19 " * 5), tweet("b", "#lockdown #lockdown")]
        top = top_items(tweets, "hashtag", 1)
        assert top.items == (("covid19", 5),)

    def test_tie_by_value(self):
        tweets = [tweet("a", "#b #a #a #b")]
        top = top_items(tweets, "hashtag", 2)
        assert top.items == (("a", 2), ("b", 2))

    def test_domains_over_fixture(self):
        tweets = [
            tweet("a", "https://x.example/1 https://x.example/2"),
            tweet("b", "http://www.y.example/ and https://z.example"),
        ]
        top = top_items(tweets, "domain", 10)
        assert top.items == (("x.example", 2), ("y.example", 1), ("z.example", 1))

    def test_locations_kind(self):
        matcher = LocationMatcher(LOCATIONS)
        tweets = [tweet("a", "Delhi and mumbai", user_location="Mumbai")]
        top = top_items(tweets, "location", 10, matcher=matcher)
        assert top.items == (("mumbai", 2), ("delhi", 1))


class TestLqmsReport:
    LQMS = DomainList(domains=frozenset({"fakenews.example"}))

    def test_quarter_share(self):
        tweets = [
            tweet("a", "https://fakenews.example/a https://ok.example/b", when=ts(2020, 1, 2)),
            tweet("b", "https://ok.example/c http://ok2.example", when=ts(2020, 1, 20)),
        ]
        report = lqms_report(tweets, self.LQMS)
        (row,) = report.rows
        assert (row.url_occurrences, row.lqms_occurrences) == (4, 1)
        assert row.lqms_percent == pytest.approx(25.0)

    def test_month_without_urls(self):
        report = lqms_report([tweet("a", "no links", when=ts(2020, 2, 1))], self.LQMS)
        (row,) = report.rows
        assert row.url_occurrences == 0 and row.lqms_percent == 0.0

    def test_subdomain_counts_as_lqms(self):
        tweets = [tweet("a", "https://cdn.fakenews.example/x", when=ts(2020, 3, 3))]
        report = lqms_report(tweets, self.LQMS)
        assert report.rows[0].lqms_occurrences == 1

    def test_contiguous_months_and_conservation(self):
        tweets = [
            tweet("a", "https://x.example", when=ts(2020, 1, 5)),
            tweet("b", "no urls", when=ts(2020, 3, 5)),
            tweet("c", "https://y.example https://fakenews.example", when=ts(2020, 5, 5)),
        ]
        report = lqms_report(tweets, self.LQMS)
        assert [r.month for r in report.rows] == [(2020, m) for m in (1, 2, 3, 4, 5)]
        assert sum(r.url_occurrences for r in report.rows) == 3
        for r in report.rows:
            assert r.lqms_occurrences <= r.url_occurrences
            assert 0.0 <= r.lqms_percent <= 100.0

    def test_table_shape(self):
        tweets = [tweet("a", "https://x.example", when=ts(2020, 1, 5))]
        lines = lqms_table_lines(lqms_report(tweets, self.LQMS))
        assert lines[0] == "Month\tNumber of URLs\tLQMS %"
        assert lines[1].split("\t") == ["2020-01", "1", "0.00%"]


class TestStateDistribution:
    STATE_MAP = {"mumbai": "Maharashtra", "delhi": "Delhi", "kerala": "Kerala"}

    def test_place_maps_to_state(self):
        matcher = LocationMatcher(LOCATIONS)
        dist = state_distribution([tweet("a", place_name="Mumbai")], matcher, self.STATE_MAP)
        assert dist.counts == {"Maharashtra": 1}

    def test_first_text_match_only(self):
        matcher = LocationMatcher(LOCATIONS)
        dist = state_distribution(
            [tweet("a", "from Delhi to Mumbai")], matcher, self.STATE_MAP
        )
        assert dist.counts == {"Delhi": 1}

    def test_closure_tweet_contributes_nothing(self):
        matcher = LocationMatcher(LOCATIONS)
        dist = state_distribution([tweet("a", "no locations at all")], matcher, self.STATE_MAP)
        assert dist.counts == {}

    def test_unmapped_location_excluded(self):
        matcher = LocationMatcher(LOCATIONS)
        dist = state_distribution([tweet("a", "hello Goa")], matcher, self.STATE_MAP)
        assert dist.counts == {}
