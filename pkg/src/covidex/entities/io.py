"""Entity profile store: one profile per line plus manifest."""

from pathlib import Path

from .. import store as storemod
from ..dates import normalize_date
from ..records import EntityType
from .core import EntityProfile

PROFILES_FILE = "profiles.ndjson"


def _profile_to_dict(p: EntityProfile) -> dict:
    return {
        "canonical": p.canonical,
        "resolved_type": p.resolved_type.value,
        "first_mention": {"date": p.first_mention[0].render(), "paper_id": p.first_mention[1]},
        "yearly_counts": {str(year): n for year, n in sorted(p.yearly_counts.items())},
        "total_count": p.total_count,
        "papers": sorted(p.paper_set),
        "co_mentions": dict(sorted(p.co_mentions.items())),
    }


def _profile_from_dict(d: dict) -> EntityProfile:
    return EntityProfile(
        canonical=d["canonical"],
        resolved_type=EntityType.parse(d["resolved_type"]),
        first_mention=(normalize_date(d["first_mention"]["date"]), d["first_mention"]["paper_id"]),
        yearly_counts={int(y): n for y, n in d["yearly_counts"].items()},
        total_count=d["total_count"],
        paper_set=set(d["papers"]),
        co_mentions=dict(d["co_mentions"]),
    )


def save_profiles(profiles: dict[str, EntityProfile], outdir: Path) -> None:
    outdir = Path(outdir)
    rows = (_profile_to_dict(profiles[c]) for c in sorted(profiles))
    count, sha = storemod.write_ndjson(outdir / PROFILES_FILE, rows)
    by_type: dict[str, int] = {}
    total_mentions = 0
    for p in profiles.values():
        by_type[p.resolved_type.value] = by_type.get(p.resolved_type.value, 0) + 1
        total_mentions += p.total_count
    storemod.update_manifest(
        outdir,
        {PROFILES_FILE: {"records": count, "sha256": sha}},
        meta={"entities": count, "mentions": total_mentions, "entities_by_type": dict(sorted(by_type.items()))},
    )


def load_profiles(outdir: Path, verify: bool = True) -> dict[str, EntityProfile]:
    outdir = Path(outdir)
    if verify:
        storemod.verify_store(outdir, required=[PROFILES_FILE])
    profiles = {}
    for row in storemod.read_ndjson(outdir / PROFILES_FILE):
        profile = _profile_from_dict(row)
        profiles[profile.canonical] = profile
    return profiles


def entity_paper_map(profiles: dict[str, EntityProfile]) -> dict[str, frozenset[str]]:
    """The entity -> paper_id map consumed by the search index's entity filter."""
    return {c: frozenset(p.paper_set) for c, p in profiles.items()}
