"""Tweet analytics snapshot: report records plus the monthly LQMS table."""

from pathlib import Path
from typing import Iterable, TextIO

from .. import store as storemod
from ..entities.core import canonicalize
from .core import (
    ActivityTimeline,
    IndiaFilterResult,
    LqmsMonthlyReport,
    StateDistribution,
    TopItems,
)

INCLUDED_FILE = "included.ndjson"
REPORTS_FILE = "reports.ndjson"
LQMS_TABLE_FILE = "lqms_monthly.tsv"


def load_state_map(lines: TextIO | Iterable[str]) -> dict[str, str]:
    """Read a location<TAB>state table; keys canonicalized like locations."""
    table: dict[str, str] = {}
    for line in lines:
        line = line.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        if "\t" not in line:
            continue
        location, state = line.split("\t", 1)
        table[canonicalize(location)] = state.strip()
    return table


def _month_label(month: tuple[int, int]) -> str:
    return f"{month[0]:04d}-{month[1]:02d}"


def lqms_table_lines(report: LqmsMonthlyReport) -> list[str]:
    """The three-column monthly summary: Month, Number of URLs, LQMS %."""
    lines = ["Month\tNumber of URLs\tLQMS %"]
    for row in report.rows:
        lines.append(f"{_month_label(row.month)}\t{row.url_occurrences}\t{row.lqms_percent:.2f}%")
    return lines


def save_analytics(
    outdir: Path,
    filter_result: IndiaFilterResult,
    timelines: dict[str, ActivityTimeline],
    tops: dict[str, TopItems],
    lqms: LqmsMonthlyReport,
    states: StateDistribution,
) -> None:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    included_rows = (
        {"tweet_id": tid, "reason": filter_result.reasons[tid]}
        for tid in sorted(filter_result.included)
    )
    n_inc, sha_inc = storemod.write_ndjson(outdir / INCLUDED_FILE, included_rows)

    report_rows = []
    for bucket, timeline in sorted(timelines.items()):
        for day, count in timeline.points:
            report_rows.append(
                {"report": "timeline", "bucket": bucket, "date": day.isoformat(), "count": count}
            )
    for kind, top in sorted(tops.items()):
        for value, count in top.items:
            report_rows.append({"report": "top", "kind": kind, "value": value, "count": count})
    for row in lqms.rows:
        report_rows.append(
            {
                "report": "lqms",
                "month": _month_label(row.month),
                "url_occurrences": row.url_occurrences,
                "lqms_occurrences": row.lqms_occurrences,
                "lqms_percent": row.lqms_percent,
            }
        )
    for state, count in sorted(states.counts.items(), key=lambda e: (-e[1], e[0])):
        report_rows.append({"report": "state", "state": state, "count": count})
    n_rep, sha_rep = storemod.write_ndjson(outdir / REPORTS_FILE, report_rows)

    table = "\n".join(lqms_table_lines(lqms)) + "\n"
    (outdir / LQMS_TABLE_FILE).write_text(table, encoding="utf-8")
    sha_tbl = storemod.sha256_file(outdir / LQMS_TABLE_FILE)

    storemod.update_manifest(
        outdir,
        {
            INCLUDED_FILE: {"records": n_inc, "sha256": sha_inc},
            REPORTS_FILE: {"records": n_rep, "sha256": sha_rep},
            LQMS_TABLE_FILE: {"records": len(lqms.rows), "sha256": sha_tbl},
        },
        meta={"included_tweets": n_inc},
    )


def load_included(outdir: Path, verify: bool = True) -> dict[str, str]:
    """tweet_id -> inclusion reason for the published selection."""
    outdir = Path(outdir)
    if verify:
        storemod.verify_store(outdir, required=[INCLUDED_FILE])
    return {
        row["tweet_id"]: row["reason"]
        for row in storemod.read_ndjson(outdir / INCLUDED_FILE)
    }


def load_analytics(outdir: Path, verify: bool = True) -> list[dict]:
    outdir = Path(outdir)
    if verify:
        storemod.verify_store(outdir, required=[REPORTS_FILE])
    return list(storemod.read_ndjson(outdir / REPORTS_FILE))
