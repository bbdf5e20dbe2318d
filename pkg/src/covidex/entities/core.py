"""Gazetteer tagging and bio-entity statistics.

Tagging is greedy left-to-right longest-match over case-folded
abstracts at word boundaries.  Statistics aggregate mentions into
per-entity profiles: resolved display type, first-mention date, yearly
mention counts, and paper-level co-mention tables.
"""

import csv
import re
from dataclasses import dataclass, field
from typing import Iterable, Optional, TextIO

from ..dates import CanonicalDate
from ..errors import DanglingPaperId, RowError, UnknownEntity
from ..records import EntityType, GazetteerEntry, PaperRecord, TYPE_PRIORITY


def canonicalize(surface: str) -> str:
    """Case-fold and collapse internal whitespace; no lemmatization."""
    return " ".join(surface.casefold().split())


@dataclass(frozen=True)
class EntityMention:
    canonical: str
    raw_type: EntityType
    paper_id: str
    start: int
    end: int

    def __post_init__(self):
        if self.end <= self.start:
            raise ValueError(f"empty span ({self.start}, {self.end})")


class GazetteerMatcher:
    """Compiled longest-match-first scanner for a gazetteer's surfaces."""

    def __init__(self, gazetteer: Iterable[GazetteerEntry]):
        self.types_by_surface: dict[str, list[EntityType]] = {}
        for entry in gazetteer:
            types = self.types_by_surface.setdefault(entry.surface, [])
            if entry.entity_type not in types:
                types.append(entry.entity_type)
        # Longest alternative first so the regex engine takes the longest
        # match available at each position; successive finditer matches
        # never overlap, which gives greedy left-to-right semantics.
        surfaces = sorted(self.types_by_surface, key=lambda s: (-len(s), s))
        if surfaces:
            alternation = "|".join(re.escape(s) for s in surfaces)
            self._pattern = re.compile(rf"(?<!\w)(?:{alternation})(?!\w)")
        else:
            self._pattern = None

    def spans(self, text: str) -> list[tuple[int, int, str]]:
        """Non-overlapping (start, end, surface) matches over case-folded text."""
        if self._pattern is None:
            return []
        folded = text.casefold()
        return [(m.start(), m.end(), m.group(0)) for m in self._pattern.finditer(folded)]


def tag_text(
    abstract: str,
    gazetteer: Iterable[GazetteerEntry] | GazetteerMatcher,
    paper_id: str = "",
) -> list[EntityMention]:
    """Tag one abstract; a multi-typed surface yields one mention per type."""
    matcher = gazetteer if isinstance(gazetteer, GazetteerMatcher) else GazetteerMatcher(gazetteer)
    mentions = []
    for start, end, surface in matcher.spans(abstract):
        for etype in matcher.types_by_surface[surface]:
            mentions.append(
                EntityMention(canonical=surface, raw_type=etype, paper_id=paper_id, start=start, end=end)
            )
    return mentions


def tag_papers(
    papers: Iterable[PaperRecord],
    gazetteer: Iterable[GazetteerEntry],
) -> list[EntityMention]:
    matcher = GazetteerMatcher(gazetteer)
    mentions = []
    for paper in papers:
        mentions.extend(tag_text(paper.abstract, matcher, paper_id=paper.paper_id))
    return mentions


def import_annotations(
    stream: TextIO | Iterable[str],
    papers: Iterable[PaperRecord],
    source: str = "annotations",
) -> tuple[list[EntityMention], list[RowError]]:
    """Read externally produced annotations: paper_id, surface, type, start, end.

    Rows are validated against the corpus so the downstream statistics
    see the same mention stream tagging would produce.
    """
    by_id = {p.paper_id: p for p in papers}
    mentions: list[EntityMention] = []
    errors: list[RowError] = []
    reader = csv.reader(stream)
    for rownum, row in enumerate(reader, start=1):
        if not row or not any(cell.strip() for cell in row):
            continue
        try:
            if len(row) != 5:
                raise ValueError(f"expected 5 columns, got {len(row)}")
            paper_id, surface, type_raw, start_raw, end_raw = (c.strip() for c in row)
            paper = by_id.get(paper_id)
            if paper is None:
                raise ValueError(f"unknown paper: {paper_id!r}")
            etype = EntityType.parse(type_raw)
            start, end = int(start_raw), int(end_raw)
            if not (0 <= start < end <= len(paper.abstract)):
                raise ValueError(f"invalid span ({start}, {end})")
            canonical = canonicalize(surface)
            if canonicalize(paper.abstract[start:end]) != canonical:
                raise ValueError(f"span text does not match surface {surface!r}")
            mentions.append(
                EntityMention(canonical=canonical, raw_type=etype, paper_id=paper_id, start=start, end=end)
            )
        except ValueError as exc:
            errors.append(RowError(source, rownum, str(exc)))
    return mentions, errors


def resolve_types(mentions: Iterable[EntityMention]) -> dict[str, EntityType]:
    """Resolve each entity's display type as its maximally occurring type.

    Ties involving ChemicalName go to the non-chemical contender;
    remaining ties resolve by the fixed type order (TYPE_PRIORITY).
    """
    counts: dict[str, dict[EntityType, int]] = {}
    for m in mentions:
        per_type = counts.setdefault(m.canonical, {})
        per_type[m.raw_type] = per_type.get(m.raw_type, 0) + 1
    resolved = {}
    for canonical, per_type in counts.items():
        best = max(per_type.values())
        resolved[canonical] = next(t for t in TYPE_PRIORITY if per_type.get(t, 0) == best)
    return resolved


@dataclass
class EntityProfile:
    canonical: str
    resolved_type: EntityType
    first_mention: tuple[CanonicalDate, str]  # (date, paper_id)
    yearly_counts: dict[int, int] = field(default_factory=dict)
    total_count: int = 0
    paper_set: set[str] = field(default_factory=set)
    co_mentions: dict[str, int] = field(default_factory=dict)


def build_profiles(
    mentions: Iterable[EntityMention],
    papers: Iterable[PaperRecord],
) -> dict[str, EntityProfile]:
    """Aggregate mentions into per-entity profiles.

    yearly_counts counts mentions (not papers) by publication year;
    co-mentions count distinct shared papers and are symmetric.
    """
    by_id = {p.paper_id: p for p in papers}
    mentions = list(mentions)
    for m in mentions:
        if m.paper_id not in by_id:
            raise DanglingPaperId(m.paper_id)

    resolved = resolve_types(mentions)
    profiles: dict[str, EntityProfile] = {}
    paper_canonicals: dict[str, set[str]] = {}
    for m in mentions:
        paper = by_id[m.paper_id]
        profile = profiles.get(m.canonical)
        if profile is None:
            profile = EntityProfile(
                canonical=m.canonical,
                resolved_type=resolved[m.canonical],
                first_mention=(paper.publish_date, paper.paper_id),
            )
            profiles[m.canonical] = profile
        year = paper.publish_date.year
        profile.yearly_counts[year] = profile.yearly_counts.get(year, 0) + 1
        profile.total_count += 1
        profile.paper_set.add(m.paper_id)
        paper_canonicals.setdefault(m.paper_id, set()).add(m.canonical)

    for profile in profiles.values():
        profile.first_mention = min(
            ((by_id[pid].publish_date, pid) for pid in profile.paper_set),
            key=lambda pair: (pair[0].key(), pair[1]),
        )

    for canonicals in paper_canonicals.values():
        ordered = sorted(canonicals)
        for i, a in enumerate(ordered):
            for b in ordered[i + 1:]:
                profiles[a].co_mentions[b] = profiles[a].co_mentions.get(b, 0) + 1
                profiles[b].co_mentions[a] = profiles[b].co_mentions.get(a, 0) + 1
    return profiles


def top_entities_by_type(
    profiles: dict[str, EntityProfile], k: int
) -> dict[EntityType, list[tuple[str, int]]]:
    """Per type: entities ranked by total mentions, ties by name, top k."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    ranked: dict[EntityType, list[tuple[str, int]]] = {t: [] for t in EntityType}
    for profile in profiles.values():
        ranked[profile.resolved_type].append((profile.canonical, profile.total_count))
    for etype, entries in ranked.items():
        entries.sort(key=lambda e: (-e[1], e[0]))
        ranked[etype] = entries[:k]
    return ranked


@dataclass(frozen=True)
class TypeTimeline:
    entity_type: EntityType
    # (first-mention date, canonical, paper_id), date-ascending
    events: tuple[tuple[CanonicalDate, str, str], ...]


def first_mention_timeline(
    profiles: dict[str, EntityProfile], entity_type: EntityType
) -> TypeTimeline:
    events = [
        (p.first_mention[0], p.canonical, p.first_mention[1])
        for p in profiles.values()
        if p.resolved_type == entity_type
    ]
    events.sort(key=lambda e: (e[0].key(), e[1]))
    return TypeTimeline(entity_type=entity_type, events=tuple(events))


@dataclass(frozen=True)
class CoMentionFlows:
    focus: str
    # per type: ranked co-entities (up to 10) plus the flow total over ALL
    # co-mentioned entities of that type
    top_by_type: dict[EntityType, tuple[tuple[str, int], ...]]
    flow_totals: dict[EntityType, int]


def co_mention_flows(
    profiles: dict[str, EntityProfile],
    focus: str,
    top_k: int = 10,
) -> CoMentionFlows:
    canonical = canonicalize(focus)
    profile = profiles.get(canonical)
    if profile is None:
        raise UnknownEntity(canonical)
    per_type: dict[EntityType, list[tuple[str, int]]] = {t: [] for t in EntityType}
    totals: dict[EntityType, int] = {t: 0 for t in EntityType}
    for co_entity, count in profile.co_mentions.items():
        etype = profiles[co_entity].resolved_type
        per_type[etype].append((co_entity, count))
        totals[etype] += count
    top = {}
    for etype, entries in per_type.items():
        entries.sort(key=lambda e: (-e[1], e[0]))
        top[etype] = tuple(entries[:top_k])
    return CoMentionFlows(focus=canonical, top_by_type=top, flow_totals=totals)
