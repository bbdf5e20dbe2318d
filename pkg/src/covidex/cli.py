"""covidex command-line interface.

Pipeline stages write immutable snapshot directories; ``serve`` exposes
them over HTTP.  Exit code is 0 iff no fatal error occurred; per-row
problems are appended to ``<store>/errors.log`` and reported on stderr.
"""

import shutil
import sys
from pathlib import Path

import click

from . import ingest
from . import report as reportmod
from . import store as storemod
from .entities import (
    build_profiles,
    entity_paper_map,
    import_annotations,
    save_profiles,
    tag_papers,
)
from .errors import CovidexError
from .index import build_index, save_index
from .records import GazetteerEntry
from .service_layout import ENTITIES_DIR, INDEX_DIR, TOPICS_DIR, TWEETS_DIR
from .topics.core import (
    DEFAULT_BETA,
    DEFAULT_ITERATIONS,
    DEFAULT_K,
    default_alpha,
    fit_lda,
    preprocess,
)
from .topics.io import save_model
from .tweets import (
    LocationMatcher,
    activity_timeline,
    filter_india,
    load_state_map,
    lqms_report,
    save_analytics,
    state_distribution,
    top_items,
)
from .tweets.core import BUCKETS, KINDS


def _report_row_errors(errors, store: Path) -> None:
    storemod.append_error_log(store, errors)
    for err in errors:
        click.echo(f"  row error: {err.render()}", err=True)


@click.group()
def main():
    """Corpus search and analytics engine."""


@main.group("ingest")
def ingest_group():
    """Parse external inputs into the canonical store."""


@ingest_group.command("papers")
@click.option("--input", "input_path", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--store", type=click.Path(path_type=Path), required=True)
def ingest_papers(input_path: Path, store: Path):
    with input_path.open("r", encoding="utf-8", newline="") as fh:
        papers, errors = ingest.parse_papers(fh, source=input_path.name)
    count = ingest.publish_papers(store, papers, [])
    _report_row_errors(errors, store)
    click.echo(f"papers: {count} records, {len(errors)} row errors")


@ingest_group.command("tweets")
@click.option("--input", "input_path", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--store", type=click.Path(path_type=Path), required=True)
def ingest_tweets(input_path: Path, store: Path):
    with input_path.open("r", encoding="utf-8", newline="") as fh:
        tweets, errors = ingest.parse_tweets(fh, source=input_path.name)
    count = ingest.publish_tweets(store, tweets, [])
    _report_row_errors(errors, store)
    click.echo(f"tweets: {count} records, {len(errors)} row errors")


@ingest_group.command("gazetteer")
@click.option("--input", "input_path", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--store", type=click.Path(path_type=Path), required=True)
def ingest_gazetteer(input_path: Path, store: Path):
    with input_path.open("r", encoding="utf-8") as fh:
        entries, errors = ingest.parse_gazetteer(fh, source=input_path.name)
    count = ingest.publish_gazetteer(store, entries, [])
    _report_row_errors(errors, store)
    click.echo(f"gazetteer: {count} entries, {len(errors)} row errors")


@ingest_group.command("domains")
@click.option("--input", "input_path", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--store", type=click.Path(path_type=Path), required=True)
def ingest_domains(input_path: Path, store: Path):
    with input_path.open("r", encoding="utf-8") as fh:
        domains, errors = ingest.parse_domain_list(fh, source=input_path.name)
    count = ingest.publish_domains(store, domains, [])
    _report_row_errors(errors, store)
    click.echo(f"domains: {count} hostnames, {len(errors)} row errors")


@ingest_group.command("locations")
@click.option("--input", "input_path", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--store", type=click.Path(path_type=Path), required=True)
def ingest_locations(input_path: Path, store: Path):
    with input_path.open("r", encoding="utf-8") as fh:
        try:
            locations, errors = ingest.parse_locations(fh, source=input_path.name)
        except CovidexError as exc:
            raise click.ClickException(str(exc))
    count = ingest.publish_locations(store, locations, [])
    _report_row_errors(errors, store)
    click.echo(f"locations: {count} names, {len(errors)} row errors")


@ingest_group.command("stats")
@click.option(
    "--input",
    "input_paths",
    type=click.Path(exists=True, path_type=Path),
    required=True,
    multiple=True,
    help="Snapshot file or directory of daily files; may repeat.",
)
@click.option("--store", type=click.Path(path_type=Path), required=True)
def ingest_stats(input_paths: tuple[Path, ...], store: Path):
    files: list[Path] = []
    for p in input_paths:
        files.extend(sorted(p.glob("*.csv")) if p.is_dir() else [p])
    streams = []
    for path in files:
        streams.append((path.name, path.open("r", encoding="utf-8", newline="")))
    try:
        snapshots, errors = ingest.parse_stats_snapshots(streams)
    finally:
        for _, fh in streams:
            fh.close()
    count = ingest.publish_stats(store, snapshots, [])
    _report_row_errors(errors, store)
    click.echo(f"stats: {count} snapshots, {len(errors)} row errors")


@main.group("index")
def index_group():
    """Build the search index snapshot."""


@index_group.command("build")
@click.option("--store", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--out", "outdir", type=click.Path(path_type=Path), default=None)
def index_build(store: Path, outdir: Path | None):
    outdir = outdir or store / INDEX_DIR
    papers = ingest.load_papers(store)
    try:
        snapshot = build_index(papers)
    except CovidexError as exc:
        raise click.ClickException(str(exc))
    save_index(snapshot, outdir)
    click.echo(f"index: {snapshot.n_docs} docs -> {outdir}")


@main.group("entities")
def entities_group():
    """Tag abstracts and build entity profiles."""


@entities_group.command("build")
@click.option("--store", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--gazetteer", "gazetteer_path", type=click.Path(exists=True, path_type=Path), default=None)
@click.option("--annotations", "annotations_path", type=click.Path(exists=True, path_type=Path), default=None)
@click.option("--out", "outdir", type=click.Path(path_type=Path), default=None)
@click.option("--figures/--no-figures", default=True)
def entities_build(store, gazetteer_path, annotations_path, outdir, figures):
    outdir = outdir or store / ENTITIES_DIR
    papers = ingest.load_papers(store)
    if annotations_path is not None:
        with annotations_path.open("r", encoding="utf-8", newline="") as fh:
            mentions, errors = import_annotations(fh, papers, source=annotations_path.name)
        _report_row_errors(errors, store)
    else:
        if gazetteer_path is not None:
            with gazetteer_path.open("r", encoding="utf-8") as fh:
                gazetteer, errors = ingest.parse_gazetteer(fh, source=gazetteer_path.name)
            _report_row_errors(errors, store)
        else:
            gazetteer = ingest.load_gazetteer(store)
        if not gazetteer:
            raise click.ClickException("no gazetteer entries; pass --gazetteer or ingest one")
        mentions = tag_papers(papers, gazetteer)
    try:
        profiles = build_profiles(mentions, papers)
    except CovidexError as exc:
        raise click.ClickException(str(exc))
    save_profiles(profiles, outdir)
    if figures:
        reportmod.render_entity_figures(outdir, profiles)
    click.echo(f"entities: {len(profiles)} profiles from {len(mentions)} mentions -> {outdir}")


@main.group("tweets")
def tweets_group():
    """India-filtered tweet analytics."""


@tweets_group.command("analyze")
@click.option("--store", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--locations", "locations_path", type=click.Path(exists=True, path_type=Path), default=None)
@click.option("--lqms", "lqms_path", type=click.Path(exists=True, path_type=Path), default=None)
@click.option("--states", "states_path", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--out", "outdir", type=click.Path(path_type=Path), default=None)
@click.option("--top-k", default=10, show_default=True)
@click.option("--figures/--no-figures", default=True)
def tweets_analyze(store, locations_path, lqms_path, states_path, outdir, top_k, figures):
    outdir = outdir or store / TWEETS_DIR
    tweets = ingest.load_tweets(store)
    if locations_path is not None:
        with locations_path.open("r", encoding="utf-8") as fh:
            try:
                locations, errors = ingest.parse_locations(fh, source=locations_path.name)
            except CovidexError as exc:
                raise click.ClickException(str(exc))
        _report_row_errors(errors, store)
    else:
        locations = ingest.load_locations(store)
    if lqms_path is not None:
        with lqms_path.open("r", encoding="utf-8") as fh:
            lqms, errors = ingest.parse_domain_list(fh, source=lqms_path.name)
        _report_row_errors(errors, store)
    else:
        lqms = ingest.load_domains(store)
    with states_path.open("r", encoding="utf-8") as fh:
        state_map = load_state_map(fh)

    matcher = LocationMatcher(locations)
    result = filter_india(tweets, matcher)
    included = [t for t in tweets if t.tweet_id in result.included]

    timelines = {bucket: activity_timeline(included, bucket) for bucket in BUCKETS}
    tops = {kind: top_items(included, kind, top_k, matcher=matcher) for kind in KINDS}
    lqms_rows = lqms_report(included, lqms)
    states = state_distribution(included, matcher, state_map)
    save_analytics(outdir, result, timelines, tops, lqms_rows, states)

    state_map_copy = Path(outdir) / "state_map.tsv"
    shutil.copyfile(states_path, state_map_copy)
    storemod.update_manifest(
        outdir,
        {"state_map.tsv": {"records": len(state_map), "sha256": storemod.sha256_file(state_map_copy)}},
    )
    if figures:
        reportmod.render_tweet_figures(
            outdir, timelines["day"], tops["hashtag"], lqms_rows, states
        )
    click.echo(
        f"tweets: {len(included)}/{len(tweets)} included -> {outdir} "
        f"(lqms months: {len(lqms_rows.rows)})"
    )


@main.group("topics")
def topics_group():
    """Topic model training and reports."""


@topics_group.command("train")
@click.option("--store", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--k", default=DEFAULT_K, show_default=True)
@click.option("--alpha", default="auto", show_default=True, help="Dirichlet doc-topic prior; 'auto' = 50/k.")
@click.option("--beta", default=DEFAULT_BETA, show_default=True)
@click.option("--iters", default=DEFAULT_ITERATIONS, show_default=True)
@click.option("--seed", default=42, show_default=True)
@click.option("--min-df", default=5, show_default=True)
@click.option("--max-df", default=0.5, show_default=True)
@click.option("--out", "outdir", type=click.Path(path_type=Path), default=None)
@click.option("--figures/--no-figures", default=True)
def topics_train(store, k, alpha, beta, iters, seed, min_df, max_df, outdir, figures):
    outdir = outdir or store / TOPICS_DIR
    included_path = store / TWEETS_DIR
    try:
        from .tweets.io import load_included

        included = load_included(included_path)
    except CovidexError as exc:
        raise click.ClickException(
            f"topics train needs the tweet analytics snapshot ({exc}); run 'covidex tweets analyze' first"
        )
    tweets = [t for t in ingest.load_tweets(store) if t.tweet_id in included]
    alpha_value = default_alpha(k) if alpha == "auto" else float(alpha)
    try:
        vocab, docs = preprocess(tweets, min_df=min_df, max_df_ratio=max_df)
        model = fit_lda(docs, k=k, alpha=alpha_value, beta=beta, iterations=iters,
                        seed=seed, vocab_size=len(vocab))
    except CovidexError as exc:
        raise click.ClickException(str(exc))
    save_model(outdir, vocab, docs, model)
    if figures:
        reportmod.render_topic_figures(outdir, model, vocab, docs)
    click.echo(
        f"topics: k={k} over {len(docs)} docs, vocab={len(vocab)}, "
        f"{iters} sweeps (seed {seed}) -> {outdir}"
    )


@main.command("serve")
@click.option("--port", default=8080, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--store", type=click.Path(exists=True, path_type=Path), required=True)
def serve(port: int, host: str, store: Path):
    """Serve the JSON API over the published snapshots."""
    import uvicorn

    from .service import create_app

    try:
        app = create_app(store)
    except CovidexError as exc:
        click.echo(f"startup failed: {exc}", err=True)
        sys.exit(1)
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
