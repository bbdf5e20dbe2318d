"""Matplotlib renderings of the analytics reports.

Each build path writes its figures into a ``figures/`` directory next
to the delimited output.  Figures are presentation artifacts only; they
are not covered by manifest checksums.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.dates as mdates
import matplotlib.pyplot as plt

from .entities.core import EntityProfile, first_mention_timeline, top_entities_by_type
from .records import EntityType
from .topics.core import BowDocument, LdaModel, Vocabulary, monthly_topic_distribution, top_keywords
from .tweets.core import ActivityTimeline, LqmsMonthlyReport, StateDistribution, TopItems


def _save(fig, outdir: Path, name: str) -> Path:
    outdir.mkdir(parents=True, exist_ok=True)
    path = outdir / name
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return path


def render_tweet_figures(
    outdir: Path,
    timeline: ActivityTimeline,
    top_hashtags: TopItems,
    lqms: LqmsMonthlyReport,
    states: StateDistribution,
) -> list[Path]:
    figdir = Path(outdir) / "figures"
    written = []

    if timeline.points:
        fig, ax = plt.subplots(figsize=(8, 3))
        days = [d for d, _ in timeline.points]
        counts = [n for _, n in timeline.points]
        ax.plot(days, counts, lw=1.2)
        ax.fill_between(days, counts, alpha=0.2)
        ax.set_ylabel("tweets")
        ax.set_title(f"Tweet activity ({timeline.bucket} buckets)")
        ax.xaxis.set_major_formatter(mdates.DateFormatter("%Y-%m-%d"))
        fig.autofmt_xdate()
        written.append(_save(fig, figdir, "activity_timeline.png"))

    if top_hashtags.items:
        fig, ax = plt.subplots(figsize=(6, 4))
        labels = [v for v, _ in top_hashtags.items][::-1]
        counts = [n for _, n in top_hashtags.items][::-1]
        ax.barh(labels, counts, color="tab:blue")
        ax.set_xlabel("occurrences")
        ax.set_title("Most common hashtags")
        written.append(_save(fig, figdir, "top_hashtags.png"))

    if lqms.rows:
        fig, ax1 = plt.subplots(figsize=(6, 3.5))
        months = [f"{r.month[0]:04d}-{r.month[1]:02d}" for r in lqms.rows]
        ax1.bar(months, [r.url_occurrences for r in lqms.rows], color="tab:gray", alpha=0.6)
        ax1.set_ylabel("URL occurrences")
        ax2 = ax1.twinx()
        ax2.plot(months, [r.lqms_percent for r in lqms.rows], color="tab:red", marker="o")
        ax2.set_ylabel("LQMS %", color="tab:red")
        ax1.set_title("Low-quality misinformation sources by month")
        written.append(_save(fig, figdir, "lqms_monthly.png"))

    if states.counts:
        ranked = sorted(states.counts.items(), key=lambda e: (-e[1], e[0]))[:20]
        fig, ax = plt.subplots(figsize=(6, 0.3 * len(ranked) + 1.5))
        ax.barh([s for s, _ in ranked][::-1], [n for _, n in ranked][::-1], color="tab:green")
        ax.set_xlabel("tweets")
        ax.set_title("State-wise tweet distribution")
        written.append(_save(fig, figdir, "state_distribution.png"))
    return written


def render_entity_figures(outdir: Path, profiles: dict[str, EntityProfile]) -> list[Path]:
    figdir = Path(outdir) / "figures"
    written = []

    top = top_entities_by_type(profiles, 10)
    present = [t for t in EntityType if top[t]]
    if present:
        fig, axes = plt.subplots(
            len(present), 1, figsize=(7, 2.2 * len(present)), squeeze=False
        )
        for ax, etype in zip(axes[:, 0], present):
            entries = top[etype][::-1]
            ax.barh([c for c, _ in entries], [n for _, n in entries], color="tab:purple")
            ax.set_title(f"Top {etype.value} mentions")
            ax.set_xlabel("mentions")
        fig.tight_layout()
        written.append(_save(fig, figdir, "top_entities.png"))

    # First-mention timeline: one row per type, points at first-mention years.
    fig, ax = plt.subplots(figsize=(8, 3))
    any_event = False
    for row, etype in enumerate(EntityType):
        events = first_mention_timeline(profiles, etype).events
        if not events:
            continue
        any_event = True
        years = [date.year for date, _, _ in events]
        ax.scatter(years, [row] * len(years), s=14, label=etype.value)
    if any_event:
        ax.set_yticks(range(len(EntityType)))
        ax.set_yticklabels([t.value for t in EntityType])
        ax.set_xlabel("first-mention year")
        ax.set_title("First mentions by entity type")
        written.append(_save(fig, figdir, "first_mentions.png"))
    else:
        plt.close(fig)
    return written


def render_topic_figures(
    outdir: Path, model: LdaModel, vocab: Vocabulary, docs: list[BowDocument]
) -> list[Path]:
    figdir = Path(outdir) / "figures"
    written = []

    keywords = top_keywords(model, vocab, 8)
    fig, axes = plt.subplots(model.k, 1, figsize=(6, 1.8 * model.k), squeeze=False)
    for t, ax in enumerate(axes[:, 0]):
        terms = keywords[t][::-1]
        ax.barh([w for w, _ in terms], [p for _, p in terms], color="tab:orange")
        ax.set_title(f"Topic {t}")
    fig.tight_layout()
    written.append(_save(fig, figdir, "topic_keywords.png"))

    monthly = monthly_topic_distribution(model, docs)
    if monthly:
        fig, ax = plt.subplots(figsize=(7, 3.5))
        months = [f"{m[0]:04d}-{m[1]:02d}" for m, _ in monthly]
        bottoms = [0.0] * len(monthly)
        for t in range(model.k):
            heights = [vector[t] for _, vector in monthly]
            ax.bar(months, heights, bottom=bottoms, label=f"topic {t}")
            bottoms = [b + h for b, h in zip(bottoms, heights)]
        ax.set_ylabel("mean topic share")
        ax.set_title("Month-wise topic distribution")
        if model.k <= 10:
            ax.legend(fontsize=7, ncol=2)
        written.append(_save(fig, figdir, "monthly_topics.png"))
    return written
