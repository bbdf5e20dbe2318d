from .core import (
    CoMentionFlows,
    EntityMention,
    EntityProfile,
    TypeTimeline,
    build_profiles,
    canonicalize,
    co_mention_flows,
    first_mention_timeline,
    import_annotations,
    resolve_types,
    tag_papers,
    tag_text,
    top_entities_by_type,
)
from .io import entity_paper_map, load_profiles, save_profiles

__all__ = [
    "CoMentionFlows",
    "EntityMention",
    "EntityProfile",
    "TypeTimeline",
    "build_profiles",
    "canonicalize",
    "co_mention_flows",
    "entity_paper_map",
    "first_mention_timeline",
    "import_annotations",
    "load_profiles",
    "resolve_types",
    "save_profiles",
    "tag_papers",
    "tag_text",
    "top_entities_by_type",
]
