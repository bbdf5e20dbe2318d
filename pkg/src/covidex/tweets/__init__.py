from .core import (
    ActivityTimeline,
    IndiaFilterResult,
    LocationMatcher,
    LqmsMonthlyReport,
    LqmsRow,
    StateDistribution,
    TopItems,
    activity_timeline,
    extract_features,
    filter_india,
    lqms_report,
    state_distribution,
    top_items,
    url_domain,
)
from .io import load_analytics, load_state_map, save_analytics

__all__ = [
    "ActivityTimeline",
    "IndiaFilterResult",
    "LocationMatcher",
    "LqmsMonthlyReport",
    "LqmsRow",
    "StateDistribution",
    "TopItems",
    "activity_timeline",
    "extract_features",
    "filter_india",
    "load_analytics",
    "load_state_map",
    "lqms_report",
    "save_analytics",
    "state_distribution",
    "top_items",
    "url_domain",
]
