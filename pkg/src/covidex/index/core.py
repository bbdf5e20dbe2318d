"""Immutable inverted index over papers with BM25 ranking.

Three per-field indexes (authors, title, fulltext) answer disjunctive
keyword queries; hits are filtered by year range or entity, scored by
summed per-token BM25, and grouped by publication year (newest first).
"""

import math
import re
from dataclasses import dataclass, field, replace
from typing import Optional

from ..errors import DomainError, DuplicateDocId, EmptyQuery
from ..records import PaperRecord

# Unicode letter/digit runs; underscores split like punctuation.
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)

FIELDS = ("authors", "title", "fulltext")

BM25_K1 = 1.2
BM25_B = 0.75

# Year groups are truncated to this many items; total_hits stays exact.
GROUP_CAP = 100


@dataclass(frozen=True)
class Token:
    text: str
    position: int


def tokenize(text: str) -> list[Token]:
    """Lowercase and split on every non-alphanumeric character."""
    return [Token(t, i) for i, t in enumerate(_TOKEN_RE.findall(text.lower()))]


def _terms(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


@dataclass
class FieldIndex:
    # term -> posting list of (doc ordinal, term frequency), ordinal-ascending
    postings: dict[str, list[tuple[int, int]]] = field(default_factory=dict)
    lengths: list[int] = field(default_factory=list)
    total_len: int = 0

    @property
    def avg_len(self) -> float:
        return self.total_len / len(self.lengths) if self.lengths else 0.0


@dataclass(frozen=True)
class DocEntry:
    ordinal: int
    paper_id: str
    year: int
    title: str
    authors: tuple[str, ...]
    venue: str
    publish_date: str  # rendered CanonicalDate
    source_url: Optional[str]


@dataclass(frozen=True)
class IndexSnapshot:
    docs: tuple[DocEntry, ...]
    fields: dict[str, FieldIndex]
    # entity canonical -> paper_id set; attached from the entity store
    entity_filter: dict[str, frozenset[str]] = field(default_factory=dict)
    # paper_id -> sorted entity canonicals, for result display
    paper_entities: dict[str, tuple[str, ...]] = field(default_factory=dict)

    @property
    def n_docs(self) -> int:
        return len(self.docs)

    def with_entities(self, entity_to_papers: dict[str, frozenset[str]]) -> "IndexSnapshot":
        """Return a copy carrying the entity filter map and its inverse."""
        inverse: dict[str, list[str]] = {}
        for canonical, papers in entity_to_papers.items():
            for pid in papers:
                inverse.setdefault(pid, []).append(canonical)
        paper_entities = {pid: tuple(sorted(ents)) for pid, ents in inverse.items()}
        return replace(self, entity_filter=dict(entity_to_papers), paper_entities=paper_entities)


def _field_text(paper: PaperRecord, fieldname: str) -> str:
    if fieldname == "authors":
        return " ".join(paper.authors)
    if fieldname == "title":
        return paper.title
    parts = [paper.title, paper.abstract]
    if paper.body_text:
        parts.append(paper.body_text)
    return " ".join(parts)


def build_index(
    papers: list[PaperRecord],
    entity_map: dict[str, frozenset[str]] | None = None,
) -> IndexSnapshot:
    """Build the three field indexes and the doc table in input order."""
    seen: set[str] = set()
    docs: list[DocEntry] = []
    fields = {name: FieldIndex() for name in FIELDS}
    for ordinal, paper in enumerate(papers):
        if paper.paper_id in seen:
            raise DuplicateDocId(paper.paper_id)
        seen.add(paper.paper_id)
        docs.append(
            DocEntry(
                ordinal=ordinal,
                paper_id=paper.paper_id,
                year=paper.publish_date.year,
                title=paper.title,
                authors=paper.authors,
                venue=paper.venue,
                publish_date=paper.publish_date.render(),
                source_url=paper.source_url,
            )
        )
        for name, fidx in fields.items():
            terms = _terms(_field_text(paper, name))
            fidx.lengths.append(len(terms))
            fidx.total_len += len(terms)
            counts: dict[str, int] = {}
            for t in terms:
                counts[t] = counts.get(t, 0) + 1
            for term, tf in counts.items():
                fidx.postings.setdefault(term, []).append((ordinal, tf))
    snapshot = IndexSnapshot(docs=tuple(docs), fields=fields)
    if entity_map:
        snapshot = snapshot.with_entities(entity_map)
    return snapshot


def score_bm25(tf: int, df: int, n_docs: int, field_len: int, avg_len: float) -> float:
    """BM25 term score with k1=1.2, b=0.75.

    idf = ln(1 + (N - df + 0.5) / (df + 0.5)); always > 0.
    """
    if tf < 1 or not (1 <= df <= n_docs) or field_len < 1 or avg_len <= 0:
        raise DomainError(
            f"bm25 out of domain: tf={tf} df={df} N={n_docs} len={field_len} avg={avg_len}"
        )
    idf = math.log(1.0 + (n_docs - df + 0.5) / (df + 0.5))
    norm = tf + BM25_K1 * (1.0 - BM25_B + BM25_B * field_len / avg_len)
    return idf * tf * (BM25_K1 + 1.0) / norm


@dataclass(frozen=True)
class SearchQuery:
    keywords: str
    category: str = "fulltext"
    year_from: Optional[int] = None
    year_to: Optional[int] = None
    entity_filter: Optional[str] = None

    def __post_init__(self):
        if self.category not in FIELDS:
            raise ValueError(f"unknown category: {self.category!r}")
        if self.year_from is not None and self.year_to is not None and self.year_from > self.year_to:
            raise ValueError(f"year_from {self.year_from} > year_to {self.year_to}")


@dataclass(frozen=True)
class SearchResultItem:
    paper_id: str
    title: str
    authors: tuple[str, ...]
    venue: str
    publish_date: str
    source_url: Optional[str]
    entities: tuple[str, ...]
    score: float


@dataclass(frozen=True)
class YearGroup:
    year: int
    items: tuple[SearchResultItem, ...]


@dataclass(frozen=True)
class SearchResultPage:
    groups: tuple[YearGroup, ...]
    total_hits: int
    warning: Optional[str] = None


def search(
    snapshot: IndexSnapshot,
    query: SearchQuery,
    group_cap: int = GROUP_CAP,
) -> SearchResultPage:
    """Disjunctive keyword search with additive BM25 scoring.

    A document matches iff it contains at least one query token in the
    queried field.  Duplicate query tokens contribute once per
    occurrence.  Year and entity filters are applied before grouping.
    """
    tokens = _terms(query.keywords)
    if not tokens:
        raise EmptyQuery(f"query tokenized to nothing: {query.keywords!r}")

    entity_papers: Optional[frozenset[str]] = None
    if query.entity_filter is not None:
        canonical = " ".join(query.entity_filter.casefold().split())
        entity_papers = snapshot.entity_filter.get(canonical)
        if entity_papers is None:
            return SearchResultPage(
                groups=(), total_hits=0, warning=f"unknown entity: {canonical!r}"
            )

    fidx = snapshot.fields[query.category]
    n = snapshot.n_docs

    def admitted(doc: DocEntry) -> bool:
        if query.year_from is not None and doc.year < query.year_from:
            return False
        if query.year_to is not None and doc.year > query.year_to:
            return False
        if entity_papers is not None and doc.paper_id not in entity_papers:
            return False
        return True

    scores: dict[int, float] = {}
    for token in tokens:
        postings = fidx.postings.get(token)
        if not postings:
            continue
        df = len(postings)
        for ordinal, tf in postings:
            if not admitted(snapshot.docs[ordinal]):
                continue
            s = score_bm25(tf, df, n, fidx.lengths[ordinal], fidx.avg_len)
            scores[ordinal] = scores.get(ordinal, 0.0) + s

    by_year: dict[int, list[tuple[float, str, int]]] = {}
    for ordinal, score in scores.items():
        doc = snapshot.docs[ordinal]
        by_year.setdefault(doc.year, []).append((-score, doc.paper_id, ordinal))

    groups = []
    for year in sorted(by_year, reverse=True):
        ranked = sorted(by_year[year])[:group_cap]
        items = tuple(
            SearchResultItem(
                paper_id=doc.paper_id,
                title=doc.title,
                authors=doc.authors,
                venue=doc.venue,
                publish_date=doc.publish_date,
                source_url=doc.source_url,
                entities=snapshot.paper_entities.get(doc.paper_id, ()),
                score=-neg_score,
            )
            for neg_score, _, ordinal in ranked
            for doc in (snapshot.docs[ordinal],)
        )
        groups.append(YearGroup(year=year, items=items))
    return SearchResultPage(groups=tuple(groups), total_hits=len(scores))
