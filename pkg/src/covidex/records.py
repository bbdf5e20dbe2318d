"""Canonical record types produced by ingestion and shared downstream.

Record constructors enforce their own invariants by raising ValueError;
parsers catch those and turn them into per-row error reports.  Each
record serializes to a plain dict (``to_dict``/``from_dict``) for the
newline-delimited canonical store; round-tripping is lossless.
"""

import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .dates import CanonicalDate

# Lower bound for tweet timestamps: 2019-01-01T00:00:00Z.
TWEET_EPOCH_MIN = 1546300800


class EntityType(str, Enum):
    """The seven admissible bio-entity classes.

    Declaration order is the tie-break priority for type resolution;
    ChemicalName is deliberately last (lowest priority).
    """

    DNA = "DNA"
    RNA = "RNA"
    PROTEIN = "Protein"
    CELL_TYPE = "CellType"
    CELL_LINE = "CellLine"
    DISEASE = "Disease"
    CHEMICAL_NAME = "ChemicalName"

    @classmethod
    def parse(cls, name: str) -> "EntityType":
        """Case-insensitive lookup by canonical name; raises ValueError."""
        folded = name.strip().lower()
        for member in cls:
            if member.value.lower() == folded:
                return member
        raise ValueError(f"unknown entity type: {name!r}")


# Resolution tie-break order: all non-chemical types by declaration
# order, chemical names last.
TYPE_PRIORITY = list(EntityType)


@dataclass(frozen=True)
class PaperRecord:
    paper_id: str
    title: str
    abstract: str
    publish_date: CanonicalDate
    authors: tuple[str, ...] = ()
    venue: str = ""
    body_text: Optional[str] = None
    source_url: Optional[str] = None

    def __post_init__(self):
        if not self.paper_id:
            raise ValueError("empty paper_id")
        if not self.title.strip():
            raise ValueError("empty title")
        if not (1900 <= self.publish_date.year <= 2100):
            raise ValueError(f"publish year out of range: {self.publish_date.year}")

    def to_dict(self) -> dict:
        d = {
            "paper_id": self.paper_id,
            "title": self.title,
            "abstract": self.abstract,
            "publish_date": self.publish_date.render(),
            "authors": list(self.authors),
            "venue": self.venue,
        }
        if self.body_text is not None:
            d["body_text"] = self.body_text
        if self.source_url is not None:
            d["source_url"] = self.source_url
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "PaperRecord":
        from .dates import normalize_date

        return cls(
            paper_id=d["paper_id"],
            title=d["title"],
            abstract=d["abstract"],
            publish_date=normalize_date(d["publish_date"]),
            authors=tuple(d.get("authors", ())),
            venue=d.get("venue", ""),
            body_text=d.get("body_text"),
            source_url=d.get("source_url"),
        )


@dataclass(frozen=True)
class TweetRecord:
    tweet_id: str
    created_at: int  # UTC seconds
    text: str
    user_location: Optional[str] = None
    place_name: Optional[str] = None
    reply_to_id: Optional[str] = None

    def __post_init__(self):
        if not self.tweet_id:
            raise ValueError("empty tweet_id")
        if self.created_at < TWEET_EPOCH_MIN:
            raise ValueError(f"timestamp before 2019-01-01: {self.created_at}")

    def to_dict(self) -> dict:
        d = {
            "tweet_id": self.tweet_id,
            "created_at": self.created_at,
            "text": self.text,
        }
        if self.user_location is not None:
            d["user_location"] = self.user_location
        if self.place_name is not None:
            d["place_name"] = self.place_name
        if self.reply_to_id is not None:
            d["reply_to_id"] = self.reply_to_id
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "TweetRecord":
        return cls(
            tweet_id=d["tweet_id"],
            created_at=d["created_at"],
            text=d["text"],
            user_location=d.get("user_location"),
            place_name=d.get("place_name"),
            reply_to_id=d.get("reply_to_id"),
        )


@dataclass(frozen=True)
class GazetteerEntry:
    surface: str  # case-normalized, no surrounding whitespace
    entity_type: EntityType

    def __post_init__(self):
        if not self.surface or self.surface != self.surface.strip():
            raise ValueError(f"bad gazetteer surface: {self.surface!r}")

    def to_dict(self) -> dict:
        return {"surface": self.surface, "entity_type": self.entity_type.value}

    @classmethod
    def from_dict(cls, d: dict) -> "GazetteerEntry":
        return cls(surface=d["surface"], entity_type=EntityType.parse(d["entity_type"]))


@dataclass(frozen=True)
class DomainList:
    """Lowercased hostnames (no scheme, no path); LQMS blocklist."""

    domains: frozenset[str]

    def matches(self, hostname: str) -> bool:
        """True if hostname or any parent domain (dot-boundary suffix) is listed."""
        parts = hostname.split(".")
        for i in range(len(parts)):
            if ".".join(parts[i:]) in self.domains:
                return True
        return False


@dataclass(frozen=True)
class LocationList:
    """Case-normalized Indian location names (states, cities, towns, villages)."""

    names: frozenset[str]

    def __post_init__(self):
        if not self.names:
            raise ValueError("empty location list")


@dataclass(frozen=True)
class StatsSnapshot:
    snapshot_date: CanonicalDate  # full date required
    total_cases: int
    active_cases: int
    deaths: int
    recovered: int
    per_state: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.snapshot_date.month == 0 or self.snapshot_date.day == 0:
            raise ValueError("stats snapshot needs a full date")
        counts = (self.total_cases, self.active_cases, self.deaths, self.recovered)
        if any(c < 0 for c in counts) or any(v < 0 for v in self.per_state.values()):
            raise ValueError("negative count in stats snapshot")
        if self.total_cases < self.deaths + self.recovered:
            raise ValueError(
                f"total {self.total_cases} < deaths {self.deaths} + recovered {self.recovered}"
            )

    def to_dict(self) -> dict:
        return {
            "snapshot_date": self.snapshot_date.render(),
            "total_cases": self.total_cases,
            "active_cases": self.active_cases,
            "deaths": self.deaths,
            "recovered": self.recovered,
            "per_state": dict(sorted(self.per_state.items())),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "StatsSnapshot":
        from .dates import normalize_date

        return cls(
            snapshot_date=normalize_date(d["snapshot_date"]),
            total_cases=d["total_cases"],
            active_cases=d["active_cases"],
            deaths=d["deaths"],
            recovered=d["recovered"],
            per_state=dict(d.get("per_state", {})),
        )


def epoch_now() -> int:
    return int(time.time())
