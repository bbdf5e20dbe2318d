"""JSON HTTP API over published snapshots.

All reads hit immutable in-memory state loaded (and checksum-verified)
at startup; every successful response carries the combined snapshot
hash so clients can detect generation changes.  Caller faults map to
4xx machine codes (EMPTY_QUERY, UNKNOWN_ENTITY, NO_DATA, INVALID_PARAM).
"""

import hashlib
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import ingest
from . import store as storemod
from .dates import CanonicalDate, normalize_date
from .entities import (
    EntityProfile,
    co_mention_flows,
    first_mention_timeline,
    load_profiles,
    top_entities_by_type,
    entity_paper_map,
)
from .errors import (
    CovidexError,
    EmptyQuery,
    NoDataBefore,
    StoreError,
    UnknownEntity,
    UnparseableDate,
)
from .index import IndexSnapshot, SearchQuery, load_index, search
from .records import DomainList, EntityType, TweetRecord
from .service_layout import ENTITIES_DIR, INDEX_DIR, TOPICS_DIR, TWEETS_DIR
from .stats import StatsSeries, national_series, snapshot_at
from .topics import BowDocument, LdaModel, Vocabulary, load_model, monthly_topic_distribution, top_keywords
from .tweets import (
    LocationMatcher,
    activity_timeline,
    load_state_map,
    lqms_report,
    state_distribution,
    top_items,
)
from .tweets.core import BUCKETS, KINDS
from .tweets.io import load_included

PAGE_SIZE = 100


class ApiError(CovidexError):
    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


@dataclass
class EngineState:
    snapshot_hash: str
    index: IndexSnapshot
    profiles: dict[str, EntityProfile]
    included_tweets: list[TweetRecord]
    matcher: LocationMatcher
    lqms_domains: DomainList
    state_map: dict[str, str]
    topics_vocab: Vocabulary
    topics_docs: list[BowDocument]
    topics_model: LdaModel
    stats: StatsSeries


def load_engine(store: Path) -> EngineState:
    """Load and verify every published snapshot; raises StoreError."""
    store = Path(store)
    storemod.verify_store(store)
    hashes = [storemod.manifest_hash(store)]
    for stage in (INDEX_DIR, ENTITIES_DIR, TWEETS_DIR, TOPICS_DIR):
        hashes.append(storemod.manifest_hash(store / stage))
    combined = hashlib.sha256("".join(hashes).encode("ascii")).hexdigest()

    profiles = load_profiles(store / ENTITIES_DIR)
    index = load_index(store / INDEX_DIR).with_entities(entity_paper_map(profiles))

    tweets = ingest.load_tweets(store)
    included = load_included(store / TWEETS_DIR)
    included_tweets = [t for t in tweets if t.tweet_id in included]
    locations = ingest.load_locations(store)
    lqms_domains = ingest.load_domains(store)
    state_map_path = store / TWEETS_DIR / "state_map.tsv"
    if not state_map_path.exists():
        raise StoreError(f"missing state map: {state_map_path}")
    with state_map_path.open("r", encoding="utf-8") as fh:
        state_map = load_state_map(fh)

    vocab, docs, model = load_model(store / TOPICS_DIR)

    stats_path = store / ingest.STATS_FILE
    snapshots = ingest.load_stats(store) if stats_path.exists() else []
    series = StatsSeries(snapshots=tuple(snapshots))

    return EngineState(
        snapshot_hash=combined,
        index=index,
        profiles=profiles,
        included_tweets=included_tweets,
        matcher=LocationMatcher(locations),
        lqms_domains=lqms_domains,
        state_map=state_map,
        topics_vocab=vocab,
        topics_docs=docs,
        topics_model=model,
        stats=series,
    )


def _int_param(raw: Optional[str], name: str) -> Optional[int]:
    if raw is None or raw == "":
        return None
    try:
        return int(raw)
    except ValueError:
        raise ApiError(400, "INVALID_PARAM", f"{name} must be an integer, got {raw!r}")


def _page_payload(page, page_num: int) -> dict:
    flat = [(g.year, item) for g in page.groups for item in g.items]
    window = flat[page_num * PAGE_SIZE : (page_num + 1) * PAGE_SIZE]
    groups: list[dict] = []
    for year, item in window:
        if not groups or groups[-1]["year"] != year:
            groups.append({"year": year, "items": []})
        groups[-1]["items"].append(
            {
                "paper_id": item.paper_id,
                "title": item.title,
                "authors": list(item.authors),
                "venue": item.venue,
                "publish_date": item.publish_date,
                "source_url": item.source_url,
                "entities": list(item.entities),
                "score": item.score,
            }
        )
    payload = {"total_hits": page.total_hits, "page": page_num, "groups": groups}
    if page.warning:
        payload["warning"] = page.warning
    return payload


def create_app(store: Path) -> FastAPI:
    state = load_engine(store)
    app = FastAPI(title="covidex", version="0.1.0")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["GET"], allow_headers=["*"]
    )

    def respond(payload: dict) -> JSONResponse:
        payload["snapshot"] = state.snapshot_hash
        return JSONResponse(payload)

    @app.exception_handler(ApiError)
    async def _api_error(_request: Request, exc: ApiError):
        return JSONResponse(
            status_code=exc.status,
            content={"error": {"code": exc.code, "message": exc.message}},
        )

    @app.get("/search")
    def search_endpoint(
        q: str = "",
        field: str = "fulltext",
        year_from: Optional[str] = None,
        year_to: Optional[str] = None,
        entity: Optional[str] = None,
        page: Optional[str] = None,
    ):
        page_num = _int_param(page, "page") or 0
        if page_num < 0:
            raise ApiError(400, "INVALID_PARAM", "page must be >= 0")
        try:
            query = SearchQuery(
                keywords=q,
                category=field,
                year_from=_int_param(year_from, "year_from"),
                year_to=_int_param(year_to, "year_to"),
                entity_filter=entity,
            )
        except ValueError as exc:
            raise ApiError(400, "INVALID_PARAM", str(exc))
        try:
            result = search(state.index, query)
        except EmptyQuery:
            raise ApiError(400, "EMPTY_QUERY", "query keywords tokenized to nothing")
        return respond(_page_payload(result, page_num))

    @app.get("/entities/{type_name}")
    def entities_endpoint(type_name: str):
        try:
            etype = EntityType.parse(type_name)
        except ValueError as exc:
            raise ApiError(400, "INVALID_PARAM", str(exc))
        top = top_entities_by_type(state.profiles, 10)[etype]
        timeline = first_mention_timeline(state.profiles, etype)
        return respond(
            {
                "entity_type": etype.value,
                "top": [{"canonical": c, "total_count": n} for c, n in top],
                "timeline": [
                    {"date": date.render(), "canonical": canonical, "paper_id": pid}
                    for date, canonical, pid in timeline.events
                ],
            }
        )

    @app.get("/entity/{canonical}")
    def entity_endpoint(canonical: str):
        try:
            flows = co_mention_flows(state.profiles, canonical)
        except UnknownEntity as exc:
            raise ApiError(404, "UNKNOWN_ENTITY", f"no such entity: {exc}")
        profile = state.profiles[flows.focus]
        return respond(
            {
                "canonical": profile.canonical,
                "resolved_type": profile.resolved_type.value,
                "first_mention": {
                    "date": profile.first_mention[0].render(),
                    "paper_id": profile.first_mention[1],
                },
                "total_count": profile.total_count,
                "paper_count": len(profile.paper_set),
                "yearly_counts": {str(y): n for y, n in sorted(profile.yearly_counts.items())},
                "co_mention_flows": {
                    etype.value: {
                        "flow_total": flows.flow_totals[etype],
                        "top": [
                            {"canonical": c, "count": n} for c, n in flows.top_by_type[etype]
                        ],
                    }
                    for etype in EntityType
                },
            }
        )

    @app.get("/tweets/timeline")
    def tweets_timeline(bucket: str = "day"):
        if bucket not in BUCKETS:
            raise ApiError(400, "INVALID_PARAM", f"bucket must be one of {BUCKETS}")
        timeline = activity_timeline(state.included_tweets, bucket)
        return respond(
            {
                "bucket": bucket,
                "points": [{"date": d.isoformat(), "count": n} for d, n in timeline.points],
            }
        )

    @app.get("/tweets/top")
    def tweets_top(kind: str = "hashtag", k: Optional[str] = None):
        if kind not in KINDS:
            raise ApiError(400, "INVALID_PARAM", f"kind must be one of {KINDS}")
        k_num = _int_param(k, "k") or 10
        if k_num < 1:
            raise ApiError(400, "INVALID_PARAM", "k must be >= 1")
        top = top_items(state.included_tweets, kind, k_num, matcher=state.matcher)
        return respond(
            {"kind": kind, "items": [{"value": v, "count": n} for v, n in top.items]}
        )

    @app.get("/tweets/lqms")
    def tweets_lqms():
        report = lqms_report(state.included_tweets, state.lqms_domains)
        return respond(
            {
                "rows": [
                    {
                        "month": f"{r.month[0]:04d}-{r.month[1]:02d}",
                        "url_occurrences": r.url_occurrences,
                        "lqms_occurrences": r.lqms_occurrences,
                        "lqms_percent": r.lqms_percent,
                    }
                    for r in report.rows
                ]
            }
        )

    @app.get("/tweets/states")
    def tweets_states():
        dist = state_distribution(state.included_tweets, state.matcher, state.state_map)
        ranked = sorted(dist.counts.items(), key=lambda e: (-e[1], e[0]))
        return respond({"states": [{"state": s, "count": n} for s, n in ranked]})

    @app.get("/topics")
    def topics_endpoint():
        keywords = top_keywords(state.topics_model, state.topics_vocab, 10)
        return respond(
            {
                "k": state.topics_model.k,
                "topics": [
                    {
                        "topic": t,
                        "keywords": [
                            {"term": term, "probability": prob} for term, prob in terms
                        ],
                    }
                    for t, terms in enumerate(keywords)
                ],
            }
        )

    @app.get("/topics/monthly")
    def topics_monthly():
        monthly = monthly_topic_distribution(state.topics_model, state.topics_docs)
        return respond(
            {
                "months": [
                    {"month": f"{m[0]:04d}-{m[1]:02d}", "distribution": vector}
                    for m, vector in monthly
                ]
            }
        )

    @app.get("/stats")
    def stats_endpoint(date: Optional[str] = None):
        if not state.stats.snapshots:
            raise ApiError(404, "NO_DATA", "no stats snapshots ingested")
        if date is None:
            query_date = state.stats.snapshots[-1].snapshot_date
        else:
            try:
                query_date = normalize_date(date)
            except UnparseableDate as exc:
                raise ApiError(400, "INVALID_PARAM", str(exc))
        try:
            snap = snapshot_at(state.stats, query_date)
        except NoDataBefore as exc:
            raise ApiError(404, "NO_DATA", f"no snapshot at or before {exc}")
        return respond(
            {
                "as_of": snap.snapshot_date.render(),
                "national": {
                    "total_cases": snap.total_cases,
                    "active_cases": snap.active_cases,
                    "deaths": snap.deaths,
                    "recovered": snap.recovered,
                },
                "states": dict(sorted(snap.per_state.items())),
                "series": [
                    {
                        "date": d.render(),
                        "total_cases": total,
                        "active_cases": active,
                        "deaths": deaths,
                        "recovered": recovered,
                    }
                    for d, total, active, deaths, recovered in national_series(state.stats)
                ],
            }
        )

    return app
