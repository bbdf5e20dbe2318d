"""Parsers for all external inputs, plus canonical-store publish/load.

Every parser is a pure stream transformer and is total: each input data
row becomes either a canonical record or a reported RowError, never a
silent drop.  Fatal structural problems (missing header columns, empty
location lists) raise instead.
"""

import csv
import re
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Optional, TextIO

from .dates import CanonicalDate, normalize_date
from .errors import (
    EmptyLocationList,
    MissingColumn,
    RowError,
    UnparseableDate,
)
from .records import (
    DomainList,
    GazetteerEntry,
    LocationList,
    PaperRecord,
    StatsSnapshot,
    TweetRecord,
    epoch_now,
)
from . import store as storemod

# Default CORD-19-metadata column mapping (logical field -> column name).
DEFAULT_PAPER_COLUMNS = {
    "paper_id": "cord_uid",
    "title": "title",
    "abstract": "abstract",
    "publish_date": "publish_time",
    "authors": "authors",
    "venue": "journal",
    "source_url": "url",
}
# Optional plain-text body column, used only when present in the header.
PAPER_BODY_COLUMN = "body_text"

DEFAULT_TWEET_COLUMNS = {
    "tweet_id": "tweet_id",
    "created_at": "created_at",
    "text": "text",
    "user_location": "user_location",
    "place_name": "place_name",
    "reply_to_id": "reply_to_id",
}

_HOSTNAME_RE = re.compile(
    r"^(?!-)[a-z0-9-]{1,63}(?<!-)(\.(?!-)[a-z0-9-]{1,63}(?<!-))+$"
)

_TWITTER_TS_FORMAT = "%a %b %d %H:%M:%S %z %Y"


def _collapse(text: str) -> str:
    return " ".join(text.split())


def _require_columns(fieldnames, wanted: Iterable[str], source: str) -> None:
    have = set(fieldnames or ())
    missing = [c for c in wanted if c not in have]
    if missing:
        raise MissingColumn(f"{source}: header lacks column(s) {', '.join(missing)}")


def parse_papers(
    stream: TextIO | Iterable[str],
    columns: dict[str, str] | None = None,
    source: str = "papers",
) -> tuple[list[PaperRecord], list[RowError]]:
    """Parse a delimited paper-metadata stream with a header row."""
    cols = dict(DEFAULT_PAPER_COLUMNS)
    if columns:
        cols.update(columns)
    reader = csv.DictReader(stream)
    _require_columns(reader.fieldnames, cols.values(), source)
    has_body = PAPER_BODY_COLUMN in (reader.fieldnames or ())

    papers: list[PaperRecord] = []
    errors: list[RowError] = []
    seen: set[str] = set()
    for rownum, row in enumerate(reader, start=1):
        def val(field: str) -> str:
            return (row.get(cols[field]) or "").strip()

        paper_id = val("paper_id")
        try:
            if paper_id in seen:
                raise ValueError(f"duplicate paper_id {paper_id!r}")
            date = normalize_date(val("publish_date"))
            authors = tuple(a.strip() for a in val("authors").split(";") if a.strip())
            record = PaperRecord(
                paper_id=paper_id,
                title=val("title"),
                abstract=val("abstract"),
                publish_date=date,
                authors=authors,
                venue=val("venue"),
                body_text=(row.get(PAPER_BODY_COLUMN) or "").strip() or None if has_body else None,
                source_url=val("source_url") or None,
            )
        except (ValueError, UnparseableDate) as exc:
            errors.append(RowError(source, rownum, str(exc)))
            continue
        seen.add(paper_id)
        papers.append(record)
    return papers, errors


def _parse_timestamp(raw: str) -> int:
    """Normalize an epoch-seconds, ISO-8601, or classic Twitter timestamp to UTC seconds."""
    s = raw.strip()
    if not s:
        raise ValueError("empty timestamp")
    if re.fullmatch(r"-?\d+", s):
        return int(s)
    try:
        dt = datetime.strptime(s, _TWITTER_TS_FORMAT)
        return int(dt.timestamp())
    except ValueError:
        pass
    iso = s[:-1] + "+00:00" if s.endswith("Z") else s
    try:
        dt = datetime.fromisoformat(iso)
    except ValueError:
        raise ValueError(f"unparseable timestamp {raw!r}") from None
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return int(dt.timestamp())


def parse_tweets(
    stream: TextIO | Iterable[str],
    columns: dict[str, str] | None = None,
    source: str = "tweets",
    now: Optional[int] = None,
) -> tuple[list[TweetRecord], list[RowError]]:
    """Parse a delimited tweet dump; timestamps normalized to UTC seconds."""
    cols = dict(DEFAULT_TWEET_COLUMNS)
    if columns:
        cols.update(columns)
    reader = csv.DictReader(stream)
    _require_columns(reader.fieldnames, cols.values(), source)
    horizon = epoch_now() if now is None else now

    tweets: list[TweetRecord] = []
    errors: list[RowError] = []
    seen: set[str] = set()
    for rownum, row in enumerate(reader, start=1):
        def val(field: str) -> str:
            return (row.get(cols[field]) or "").strip()

        tweet_id = val("tweet_id")
        try:
            if tweet_id in seen:
                raise ValueError(f"duplicate tweet_id {tweet_id!r}")
            created = _parse_timestamp(val("created_at"))
            record = TweetRecord(
                tweet_id=tweet_id,
                created_at=created,
                text=row.get(cols["text"]) or "",
                user_location=val("user_location") or None,
                place_name=val("place_name") or None,
                reply_to_id=val("reply_to_id") or None,
            )
            if record.created_at > horizon:
                raise ValueError(f"timestamp in the future: {record.created_at}")
        except ValueError as exc:
            errors.append(RowError(source, rownum, str(exc)))
            continue
        seen.add(tweet_id)
        tweets.append(record)
    return tweets, errors


def parse_gazetteer(
    lines: Iterable[str], source: str = "gazetteer"
) -> tuple[list[GazetteerEntry], list[RowError]]:
    """Parse ``surface<TAB>type`` lines into gazetteer entries.

    Surfaces are lowercased with internal whitespace collapsed.  The
    same surface may appear under several types; exact (surface, type)
    duplicates are dropped.
    """
    from .records import EntityType

    entries: list[GazetteerEntry] = []
    errors: list[RowError] = []
    seen: set[tuple[str, EntityType]] = set()
    for lineno, line in enumerate(lines, start=1):
        line = line.rstrip("\n")
        if not line.strip():
            continue
        if "\t" not in line:
            errors.append(RowError(source, lineno, "expected surface<TAB>type"))
            continue
        surface_raw, type_raw = line.split("\t", 1)
        surface = _collapse(surface_raw.lower())
        if not surface:
            errors.append(RowError(source, lineno, "empty surface"))
            continue
        try:
            etype = EntityType.parse(type_raw)
        except ValueError as exc:
            errors.append(RowError(source, lineno, str(exc)))
            continue
        key = (surface, etype)
        if key in seen:
            continue
        seen.add(key)
        entries.append(GazetteerEntry(surface=surface, entity_type=etype))
    return entries, errors


def parse_domain_list(
    lines: Iterable[str], source: str = "domains"
) -> tuple[DomainList, list[RowError]]:
    """Parse one hostname per line; ``#`` comments and blank lines ignored."""
    domains: set[str] = set()
    errors: list[RowError] = []
    for lineno, line in enumerate(lines, start=1):
        entry = line.strip()
        if not entry or entry.startswith("#"):
            continue
        host = entry.lower()
        if host.startswith("www."):
            host = host[4:]
        if not _HOSTNAME_RE.match(host):
            errors.append(RowError(source, lineno, f"invalid hostname: {entry!r}"))
            continue
        domains.add(host)
    return DomainList(domains=frozenset(domains)), errors


def parse_locations(
    lines: Iterable[str], source: str = "locations"
) -> tuple[LocationList, list[RowError]]:
    """Parse free-text location names, lowercased; raises if none survive."""
    names: set[str] = set()
    errors: list[RowError] = []
    for line in lines:
        entry = line.strip()
        if not entry or entry.startswith("#"):
            continue
        names.add(_collapse(entry.lower()))
    if not names:
        raise EmptyLocationList(f"{source}: no location names parsed")
    return LocationList(names=frozenset(names)), errors


# Stats snapshot files: header date,scope,total_cases,active_cases,deaths,recovered.
# One national row with scope=ALL; per-state rows carry the active count.
_STATS_COLUMNS = ("date", "scope", "total_cases", "active_cases", "deaths", "recovered")
_NATIONAL_SCOPE = "all"


def parse_stats_snapshots(
    inputs: Iterable[tuple[str, TextIO | Iterable[str]]],
) -> tuple[list[StatsSnapshot], list[RowError]]:
    """Parse one delimited file per day into validated snapshots.

    Snapshots are returned sorted by date.  When two files carry the
    same date the later one wins and a warning row is reported.
    """
    errors: list[RowError] = []
    by_date: dict[tuple[int, int, int], StatsSnapshot] = {}
    for source, stream in inputs:
        reader = csv.DictReader(stream)
        try:
            _require_columns(reader.fieldnames, _STATS_COLUMNS, source)
        except MissingColumn as exc:
            errors.append(RowError(source, 0, str(exc)))
            continue

        national: Optional[dict] = None
        per_state: dict[str, int] = {}
        date: Optional[CanonicalDate] = None
        bad = False
        for rownum, row in enumerate(reader, start=1):
            try:
                row_date = normalize_date((row.get("date") or "").strip())
                if date is None:
                    date = row_date
                elif row_date != date:
                    raise ValueError(f"mixed dates in one file: {row_date.render()} vs {date.render()}")
                scope = (row.get("scope") or "").strip()
                if scope.lower() == _NATIONAL_SCOPE:
                    national = {
                        "total_cases": int(row["total_cases"]),
                        "active_cases": int(row["active_cases"]),
                        "deaths": int(row["deaths"]),
                        "recovered": int(row["recovered"]),
                    }
                else:
                    per_state[scope] = int(row["active_cases"])
            except (ValueError, UnparseableDate, TypeError, KeyError) as exc:
                errors.append(RowError(source, rownum, str(exc)))
                bad = True
        if bad:
            continue
        if date is None or national is None:
            errors.append(RowError(source, 0, "missing national totals row (scope=ALL)"))
            continue
        try:
            snapshot = StatsSnapshot(snapshot_date=date, per_state=per_state, **national)
        except ValueError as exc:
            errors.append(RowError(source, 0, f"invariant violation: {exc}"))
            continue
        key = date.key()
        if key in by_date:
            errors.append(
                RowError(source, 0, f"warning: duplicate snapshot for {date.render()}, later file wins")
            )
        by_date[key] = snapshot
    snapshots = [by_date[k] for k in sorted(by_date)]
    return snapshots, errors


# --- canonical-store publish/load -------------------------------------------

PAPERS_FILE = "papers.ndjson"
TWEETS_FILE = "tweets.ndjson"
GAZETTEER_FILE = "gazetteer.ndjson"
DOMAINS_FILE = "domains.ndjson"
LOCATIONS_FILE = "locations.ndjson"
STATS_FILE = "stats.ndjson"


def publish_papers(store: Path, papers: list[PaperRecord], errors: list[RowError]) -> int:
    count, _ = storemod.publish_ndjson(store, PAPERS_FILE, (p.to_dict() for p in papers))
    storemod.append_error_log(store, errors)
    return count


def publish_tweets(store: Path, tweets: list[TweetRecord], errors: list[RowError]) -> int:
    count, _ = storemod.publish_ndjson(store, TWEETS_FILE, (t.to_dict() for t in tweets))
    storemod.append_error_log(store, errors)
    return count


def publish_gazetteer(store: Path, entries: list[GazetteerEntry], errors: list[RowError]) -> int:
    count, _ = storemod.publish_ndjson(store, GAZETTEER_FILE, (e.to_dict() for e in entries))
    storemod.append_error_log(store, errors)
    return count


def publish_domains(store: Path, domains: DomainList, errors: list[RowError]) -> int:
    objs = [{"domain": d} for d in sorted(domains.domains)]
    count, _ = storemod.publish_ndjson(store, DOMAINS_FILE, objs)
    storemod.append_error_log(store, errors)
    return count


def publish_locations(store: Path, locations: LocationList, errors: list[RowError]) -> int:
    objs = [{"name": n} for n in sorted(locations.names)]
    count, _ = storemod.publish_ndjson(store, LOCATIONS_FILE, objs)
    storemod.append_error_log(store, errors)
    return count


def publish_stats(store: Path, snapshots: list[StatsSnapshot], errors: list[RowError]) -> int:
    count, _ = storemod.publish_ndjson(store, STATS_FILE, (s.to_dict() for s in snapshots))
    storemod.append_error_log(store, errors)
    return count


def load_papers(store: Path) -> list[PaperRecord]:
    return [PaperRecord.from_dict(d) for d in storemod.read_ndjson(Path(store) / PAPERS_FILE)]


def load_tweets(store: Path) -> list[TweetRecord]:
    return [TweetRecord.from_dict(d) for d in storemod.read_ndjson(Path(store) / TWEETS_FILE)]


def load_gazetteer(store: Path) -> list[GazetteerEntry]:
    return [GazetteerEntry.from_dict(d) for d in storemod.read_ndjson(Path(store) / GAZETTEER_FILE)]


def load_domains(store: Path) -> DomainList:
    domains = frozenset(d["domain"] for d in storemod.read_ndjson(Path(store) / DOMAINS_FILE))
    return DomainList(domains=domains)


def load_locations(store: Path) -> LocationList:
    names = frozenset(d["name"] for d in storemod.read_ndjson(Path(store) / LOCATIONS_FILE))
    return LocationList(names=names)


def load_stats(store: Path) -> list[StatsSnapshot]:
    return [StatsSnapshot.from_dict(d) for d in storemod.read_ndjson(Path(store) / STATS_FILE)]
