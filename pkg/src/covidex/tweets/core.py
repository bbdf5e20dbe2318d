"""India-specific tweet selection and activity analytics.

Selection matches location names (word-boundary, case-insensitive)
against location metadata or tweet text, then expands exactly one reply
hop in both directions.  Analytics over the selected tweets produce
timelines, top-item tables, state distributions, and the monthly LQMS
misinformation report.
"""

import re
from dataclasses import dataclass
from datetime import date, datetime, timedelta, timezone
from typing import Iterable, Optional
from urllib.parse import urlsplit

from ..errors import MalformedUrl
from ..records import DomainList, LocationList, TweetRecord

HASHTAG_RE = re.compile(r"#(\w+)")
MENTION_RE = re.compile(r"@(\w+)")
URL_RE = re.compile(r"https?://\S+")

# Inclusion reasons, in rule-priority order.
REASON_LOCATION = "location_metadata"
REASON_TEXT = "text_match"
REASON_REPLY_TO = "reply_to_india"
REASON_REPLIED_BY = "replied_by_india"

BUCKETS = ("day", "week", "month")


def extract_features(tweet: TweetRecord) -> tuple[list[str], list[str], list[str]]:
    """(hashtags, mentions, urls) in order of occurrence, duplicates kept."""
    text = tweet.text
    hashtags = [m.lower() for m in HASHTAG_RE.findall(text)]
    mentions = [m.lower() for m in MENTION_RE.findall(text)]
    urls = URL_RE.findall(text)
    return hashtags, mentions, urls


def url_domain(url: str) -> str:
    """Lowercased hostname with ``www.`` prefix and port stripped."""
    if not url.startswith(("http://", "https://")):
        raise MalformedUrl(url)
    host = urlsplit(url).hostname
    if not host:
        raise MalformedUrl(url)
    if host.startswith("www."):
        host = host[4:]
    if not host:
        raise MalformedUrl(url)
    return host


class LocationMatcher:
    """Word-boundary location-name matcher; multi-word names match as
    contiguous sequences."""

    def __init__(self, locations: LocationList):
        names = sorted(locations.names, key=lambda s: (-len(s), s))
        alternation = "|".join(re.escape(n) for n in names)
        self._pattern = re.compile(rf"(?<!\w)(?:{alternation})(?!\w)")

    def first(self, text: Optional[str]) -> Optional[tuple[int, str]]:
        """Earliest match as (position, name), or None."""
        if not text:
            return None
        m = self._pattern.search(text.casefold())
        return (m.start(), m.group(0)) if m else None

    def findall(self, text: Optional[str]) -> list[str]:
        if not text:
            return []
        return self._pattern.findall(text.casefold())


@dataclass(frozen=True)
class IndiaFilterResult:
    included: frozenset[str]
    reasons: dict[str, str]  # tweet_id -> first rule that fired


def filter_india(
    tweets: Iterable[TweetRecord],
    locations: LocationList | LocationMatcher,
) -> IndiaFilterResult:
    """Select India-specific tweets plus a one-hop reply closure.

    Base rules in priority order: a location name in user_location or
    place_name, then in the tweet text.  The closure adds replies to
    base tweets and tweets that base tweets reply to, exactly one hop.
    """
    matcher = locations if isinstance(locations, LocationMatcher) else LocationMatcher(locations)
    tweets = list(tweets)
    reasons: dict[str, str] = {}
    base_ids: set[str] = set()
    for t in tweets:
        if matcher.first(t.user_location) or matcher.first(t.place_name):
            reasons[t.tweet_id] = REASON_LOCATION
        elif matcher.first(t.text):
            reasons[t.tweet_id] = REASON_TEXT
        else:
            continue
        base_ids.add(t.tweet_id)

    replied_to_by_base = {t.reply_to_id for t in tweets if t.tweet_id in base_ids and t.reply_to_id}
    for t in tweets:
        if t.tweet_id in reasons:
            continue
        if t.reply_to_id and t.reply_to_id in base_ids:
            reasons[t.tweet_id] = REASON_REPLY_TO
        elif t.tweet_id in replied_to_by_base:
            reasons[t.tweet_id] = REASON_REPLIED_BY
    return IndiaFilterResult(included=frozenset(reasons), reasons=reasons)


def _utc_date(ts: int) -> date:
    return datetime.fromtimestamp(ts, tz=timezone.utc).date()


def _bucket_start(d: date, bucket: str) -> date:
    if bucket == "day":
        return d
    if bucket == "week":
        return d - timedelta(days=d.weekday())  # ISO week: Monday
    if bucket == "month":
        return d.replace(day=1)
    raise ValueError(f"unknown bucket: {bucket!r}")


def _next_bucket(d: date, bucket: str) -> date:
    if bucket == "day":
        return d + timedelta(days=1)
    if bucket == "week":
        return d + timedelta(days=7)
    return date(d.year + 1, 1, 1) if d.month == 12 else date(d.year, d.month + 1, 1)


@dataclass(frozen=True)
class ActivityTimeline:
    bucket: str
    points: tuple[tuple[date, int], ...]  # strictly increasing dates


def activity_timeline(tweets: Iterable[TweetRecord], bucket: str = "day") -> ActivityTimeline:
    """UTC-bucketed tweet counts; gaps between first and last emitted as 0."""
    if bucket not in BUCKETS:
        raise ValueError(f"unknown bucket: {bucket!r}")
    counts: dict[date, int] = {}
    for t in tweets:
        key = _bucket_start(_utc_date(t.created_at), bucket)
        counts[key] = counts.get(key, 0) + 1
    if not counts:
        return ActivityTimeline(bucket=bucket, points=())
    points = []
    cursor, last = min(counts), max(counts)
    while cursor <= last:
        points.append((cursor, counts.get(cursor, 0)))
        cursor = _next_bucket(cursor, bucket)
    return ActivityTimeline(bucket=bucket, points=tuple(points))


KINDS = ("hashtag", "mention", "location", "url", "domain")


@dataclass(frozen=True)
class TopItems:
    kind: str
    items: tuple[tuple[str, int], ...]  # count-descending, ties by value


def top_items(
    tweets: Iterable[TweetRecord],
    kind: str,
    k: int,
    matcher: Optional[LocationMatcher] = None,
) -> TopItems:
    """Occurrence counts over extracted features (or matched locations)."""
    if kind not in KINDS:
        raise ValueError(f"unknown kind: {kind!r}")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if kind == "location" and matcher is None:
        raise ValueError("kind=location needs a LocationMatcher")
    counts: dict[str, int] = {}

    def bump(value: str) -> None:
        counts[value] = counts.get(value, 0) + 1

    for t in tweets:
        hashtags, mentions, urls = extract_features(t)
        if kind == "hashtag":
            for h in hashtags:
                bump(h)
        elif kind == "mention":
            for m in mentions:
                bump(m)
        elif kind == "url":
            for u in urls:
                bump(u)
        elif kind == "domain":
            for u in urls:
                try:
                    bump(url_domain(u))
                except MalformedUrl:
                    continue
        else:
            for name in matcher.findall(t.user_location) + matcher.findall(t.place_name) + matcher.findall(t.text):
                bump(name)
    ranked = sorted(counts.items(), key=lambda e: (-e[1], e[0]))[:k]
    return TopItems(kind=kind, items=tuple(ranked))


@dataclass(frozen=True)
class LqmsRow:
    month: tuple[int, int]  # (year, month)
    url_occurrences: int
    lqms_occurrences: int

    @property
    def lqms_percent(self) -> float:
        if self.url_occurrences == 0:
            return 0.0
        return 100.0 * self.lqms_occurrences / self.url_occurrences


@dataclass(frozen=True)
class LqmsMonthlyReport:
    rows: tuple[LqmsRow, ...]  # contiguous months, ascending


def _month_of(ts: int) -> tuple[int, int]:
    d = _utc_date(ts)
    return (d.year, d.month)


def _next_month(m: tuple[int, int]) -> tuple[int, int]:
    return (m[0] + 1, 1) if m[1] == 12 else (m[0], m[1] + 1)


def lqms_report(tweets: Iterable[TweetRecord], lqms: DomainList) -> LqmsMonthlyReport:
    """Monthly URL-occurrence totals and the share on the LQMS list.

    Counts URL occurrences (not unique URLs); a URL counts as LQMS when
    its domain or any parent domain is listed.
    """
    urls_by_month: dict[tuple[int, int], int] = {}
    lqms_by_month: dict[tuple[int, int], int] = {}
    months: set[tuple[int, int]] = set()
    for t in tweets:
        month = _month_of(t.created_at)
        months.add(month)
        _, _, urls = extract_features(t)
        for u in urls:
            urls_by_month[month] = urls_by_month.get(month, 0) + 1
            try:
                host = url_domain(u)
            except MalformedUrl:
                continue
            if lqms.matches(host):
                lqms_by_month[month] = lqms_by_month.get(month, 0) + 1
    if not months:
        return LqmsMonthlyReport(rows=())
    rows = []
    cursor, last = min(months), max(months)
    while cursor <= last:
        rows.append(
            LqmsRow(
                month=cursor,
                url_occurrences=urls_by_month.get(cursor, 0),
                lqms_occurrences=lqms_by_month.get(cursor, 0),
            )
        )
        cursor = _next_month(cursor)
    return LqmsMonthlyReport(rows=tuple(rows))


@dataclass(frozen=True)
class StateDistribution:
    counts: dict[str, int]  # state name -> tweet count


def state_distribution(
    tweets: Iterable[TweetRecord],
    matcher: LocationMatcher,
    state_map: dict[str, str],
) -> StateDistribution:
    """Each tweet contributes to at most one state: the one mapped from
    its first matched location (metadata before text, earliest position
    first).  Tweets whose first match has no state mapping contribute
    nothing."""
    counts: dict[str, int] = {}
    for t in tweets:
        hit = matcher.first(t.user_location) or matcher.first(t.place_name) or matcher.first(t.text)
        if hit is None:
            continue
        state = state_map.get(hit[1])
        if state is not None:
            counts[state] = counts.get(state, 0) + 1
    return StateDistribution(counts=counts)
