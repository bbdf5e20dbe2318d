import json
from pathlib import Path

from click.testing import CliRunner

from covidex.cli import main as cli_main

from .conftest import SAMPLE


def test_pipeline_store_layout(sample_store: Path):
    for name in (
        "papers.ndjson", "tweets.ndjson", "gazetteer.ndjson", "domains.ndjson",
        "locations.ndjson", "stats.ndjson", "manifest.json",
    ):
        assert (sample_store / name).exists(), name
    for stage, files in {
        "index": ["docs.ndjson", "terms.ndjson", "postings.ndjson", "manifest.json"],
        "entities": ["profiles.ndjson", "manifest.json"],
        "tweets_analytics": ["included.ndjson", "reports.ndjson", "lqms_monthly.tsv", "state_map.tsv", "manifest.json"],
        "topics": ["vocabulary.ndjson", "docs.ndjson", "manifest.json"],
    }.items():
        for name in files:
            assert (sample_store / stage / name).exists(), f"{stage}/{name}"


def test_figures_rendered_alongside_reports(sample_store: Path):
    tweet_figs = sample_store / "tweets_analytics" / "figures"
    assert (tweet_figs / "activity_timeline.png").exists()
    assert (tweet_figs / "top_hashtags.png").exists()
    assert (tweet_figs / "lqms_monthly.png").exists()
    assert (tweet_figs / "state_distribution.png").exists()
    assert (sample_store / "entities" / "figures" / "top_entities.png").exists()
    assert (sample_store / "entities" / "figures" / "first_mentions.png").exists()
    assert (sample_store / "topics" / "figures" / "topic_keywords.png").exists()
    assert (sample_store / "topics" / "figures" / "monthly_topics.png").exists()


def test_lqms_table_has_five_months(sample_store: Path):
    lines = (sample_store / "tweets_analytics" / "lqms_monthly.tsv").read_text().splitlines()
    assert lines[0] == "Month\tNumber of URLs\tLQMS %"
    assert len(lines) == 1 + 5
    assert [l.split("\t")[0] for l in lines[1:]] == [f"2020-0{m}" for m in range(1, 6)]


def test_row_errors_reported_with_exit_zero(tmp_path: Path):
    bad = tmp_path / "bad.csv"
    bad.write_text(
        "cord_uid,title,abstract,publish_time,authors,journal,url\n"
        "p1,Good paper,A,2020,X,V,\n"
        "p2,,missing title,2020,X,V,\n",
        encoding="utf-8",
    )
    runner = CliRunner()
    result = runner.invoke(
        cli_main, ["ingest", "papers", "--input", str(bad), "--store", str(tmp_path / "store")]
    )
    assert result.exit_code == 0
    assert "1 row errors" in result.output
    log = (tmp_path / "store" / "errors.log").read_text()
    assert "bad.csv:2" in log


def test_missing_column_is_fatal(tmp_path: Path):
    bad = tmp_path / "bad.csv"
    bad.write_text("cord_uid,title\np1,T\n", encoding="utf-8")
    runner = CliRunner()
    result = runner.invoke(
        cli_main, ["ingest", "papers", "--input", str(bad), "--store", str(tmp_path / "store")]
    )
    assert result.exit_code != 0


def test_empty_locations_fatal(tmp_path: Path):
    empty = tmp_path / "locations.txt"
    empty.write_text("# nothing here\n", encoding="utf-8")
    runner = CliRunner()
    result = runner.invoke(
        cli_main, ["ingest", "locations", "--input", str(empty), "--store", str(tmp_path / "store")]
    )
    assert result.exit_code != 0


def test_topics_requires_tweet_analytics(tmp_path: Path):
    store = tmp_path / "store"
    runner = CliRunner()
    result = runner.invoke(
        cli_main, ["ingest", "tweets", "--input", str(SAMPLE / "tweets.csv"), "--store", str(store)]
    )
    assert result.exit_code == 0
    result = runner.invoke(cli_main, ["topics", "train", "--store", str(store)])
    assert result.exit_code != 0
    assert "tweets analyze" in result.output


def test_manifest_counts_match_store(sample_store: Path):
    manifest = json.loads((sample_store / "manifest.json").read_text())
    n_lines = len((sample_store / "papers.ndjson").read_text().splitlines())
    assert manifest["files"]["papers.ndjson"]["records"] == n_lines == 14
