import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from covidex.cli import main as cli_main

SAMPLE = Path(__file__).resolve().parent.parent / "data" / "sample"
GOLDEN_DIR = Path(__file__).resolve().parent / "golden"


def pytest_addoption(parser):
    parser.addoption(
        "--update-goldens",
        action="store_true",
        default=False,
        help="Rewrite tests/golden/*.json from the current engine output.",
    )


@pytest.fixture(scope="session")
def update_goldens(request):
    return request.config.getoption("--update-goldens")


def run_pipeline(store: Path, figures: bool = False) -> None:
    """Run the full ingest -> index -> entities -> tweets -> topics pipeline."""
    runner = CliRunner()
    fig = [] if figures else ["--no-figures"]
    commands = [
        ["ingest", "papers", "--input", str(SAMPLE / "papers.csv"), "--store", str(store)],
        ["ingest", "tweets", "--input", str(SAMPLE / "tweets.csv"), "--store", str(store)],
        ["ingest", "gazetteer", "--input", str(SAMPLE / "gazetteer.tsv"), "--store", str(store)],
        ["ingest", "domains", "--input", str(SAMPLE / "lqms.txt"), "--store", str(store)],
        ["ingest", "locations", "--input", str(SAMPLE / "locations.txt"), "--store", str(store)],
        ["ingest", "stats", "--input", str(SAMPLE / "stats"), "--store", str(store)],
        ["index", "build", "--store", str(store)],
        ["entities", "build", "--store", str(store), "--gazetteer", str(SAMPLE / "gazetteer.tsv"), *fig],
        [
            "tweets", "analyze", "--store", str(store),
            "--locations", str(SAMPLE / "locations.txt"),
            "--lqms", str(SAMPLE / "lqms.txt"),
            "--states", str(SAMPLE / "states.tsv"),
            *fig,
        ],
        [
            "topics", "train", "--store", str(store),
            "--k", "5", "--alpha", "auto", "--beta", "0.01",
            "--iters", "300", "--seed", "42", "--min-df", "2",
            *fig,
        ],
    ]
    for args in commands:
        result = runner.invoke(cli_main, args, catch_exceptions=False)
        assert result.exit_code == 0, f"covidex {' '.join(args)} failed:\n{result.output}"


@pytest.fixture(scope="session")
def sample_store(tmp_path_factory) -> Path:
    store = tmp_path_factory.mktemp("store")
    run_pipeline(store, figures=True)
    return store


@pytest.fixture(scope="session")
def client(sample_store):
    from fastapi.testclient import TestClient

    from covidex.service import create_app

    app = create_app(sample_store)
    with TestClient(app) as test_client:
        yield test_client


def check_golden(name: str, payload: dict, update: bool) -> None:
    """Compare a JSON payload against its committed golden file.

    The snapshot hash depends on temp-path-independent content only, so
    it is compared too.
    """
    GOLDEN_DIR.mkdir(exist_ok=True)
    path = GOLDEN_DIR / f"{name}.json"
    if update or not path.exists():
        path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    expected = json.loads(path.read_text(encoding="utf-8"))
    assert payload == expected, f"golden mismatch for {name} (rerun with --update-goldens if intended)"
