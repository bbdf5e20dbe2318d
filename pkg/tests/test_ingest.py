import io

import pytest
from hypothesis import given, strategies as st

from covidex import ingest
from covidex.dates import CanonicalDate
from covidex.errors import EmptyLocationList, MissingColumn
from covidex.records import EntityType, PaperRecord, TweetRecord

PAPER_HEADER = "cord_uid,title,abstract,publish_time,authors,journal,url\n"


def papers_csv(*rows: str) -> io.StringIO:
    return io.StringIO(PAPER_HEADER + "".join(r + "\n" for r in rows))


class TestParsePapers:
    def test_basic_row(self):
        papers, errors = ingest.parse_papers(
            papers_csv('p1,Hydroxychloroquine trial,Abstract text,2020-03-14,"Roe; Doe",LancetX,http://x')
        )
        assert errors == []
        (p,) = papers
        assert p.paper_id == "p1"
        assert p.publish_date == CanonicalDate(2020, 3, 14)
        assert p.authors == ("Roe", "Doe")
        assert p.venue == "LancetX"
        assert p.source_url == "http://x"

    def test_partial_date(self):
        papers, _ = ingest.parse_papers(papers_csv("p1,T,A,2020,X,V,"))
        assert papers[0].publish_date == CanonicalDate(2020, 0, 0)

    def test_duplicate_id_keeps_first(self):
        papers, errors = ingest.parse_papers(
            papers_csv("p1,First,A,2020,X,V,", "p1,Second,A,2021,X,V,")
        )
        assert [p.title for p in papers] == ["First"]
        assert len(errors) == 1 and errors[0].row == 2
        assert "duplicate" in errors[0].reason

    def test_missing_column_aborts(self):
        stream = io.StringIO("cord_uid,title\np1,T\n")
        with pytest.raises(MissingColumn):
            ingest.parse_papers(stream)

    def test_bad_rows_reported_not_dropped(self):
        papers, errors = ingest.parse_papers(
            papers_csv(
                "p1,T,A,2020,X,V,",
                "p2,,A,2020,X,V,",          # empty title
                "p3,T,A,14/03/2020,X,V,",   # bad date
                "p4,T,A,1850,X,V,",         # year out of range
            )
        )
        assert len(papers) == 1
        assert [e.row for e in errors] == [2, 3, 4]
        assert len(papers) + len(errors) == 4

    def test_custom_column_mapping(self):
        stream = io.StringIO("id,name,abs,date,who,where,link\nx1,T,A,2019,A;B,V,u\n")
        papers, errors = ingest.parse_papers(
            stream,
            columns={
                "paper_id": "id", "title": "name", "abstract": "abs",
                "publish_date": "date", "authors": "who", "venue": "where",
                "source_url": "link",
            },
        )
        assert errors == [] and papers[0].paper_id == "x1"

    def test_optional_body_column(self):
        stream = io.StringIO(
            "cord_uid,title,abstract,publish_time,authors,journal,url,body_text\n"
            "p1,T,A,2020,X,V,,full body here\n"
        )
        papers, _ = ingest.parse_papers(stream)
        assert papers[0].body_text == "full body here"

    def test_roundtrip_via_store(self, tmp_path):
        papers, errors = ingest.parse_papers(
            papers_csv('p1,Tïtle,Abstract,2020-03-14,"Roe; Doe",V,http://x')
        )
        ingest.publish_papers(tmp_path, papers, errors)
        assert ingest.load_papers(tmp_path) == papers


TWEET_HEADER = "tweet_id,created_at,text,user_location,place_name,reply_to_id\n"


def tweets_csv(*rows: str) -> io.StringIO:
    return io.StringIO(TWEET_HEADER + "".join(r + "\n" for r in rows))


class TestParseTweets:
    def test_iso_timestamp_to_epoch(self):
        tweets, errors = ingest.parse_tweets(tweets_csv("t1,2020-04-01T00:00:00Z,hello,,,"))
        assert errors == []
        assert tweets[0].created_at == 1585699200

    def test_empty_reply_is_absent(self):
        tweets, _ = ingest.parse_tweets(tweets_csv("t1,2020-04-01T00:00:00Z,x,,,"))
        assert tweets[0].reply_to_id is None
        assert tweets[0].user_location is None

    def test_unparseable_timestamp_reported(self):
        tweets, errors = ingest.parse_tweets(tweets_csv("t1,yesterday,x,,,"))
        assert tweets == [] and len(errors) == 1

    def test_epoch_and_classic_formats(self):
        tweets, errors = ingest.parse_tweets(
            tweets_csv(
                "t1,1585699200,x,,,",
                '"t2","Wed Apr 01 00:00:00 +0000 2020",y,,,',
            )
        )
        assert errors == []
        assert tweets[0].created_at == tweets[1].created_at == 1585699200

    def test_pre_2019_rejected(self):
        _, errors = ingest.parse_tweets(tweets_csv("t1,2018-12-31T23:59:59Z,x,,,"))
        assert len(errors) == 1

    def test_future_rejected(self):
        _, errors = ingest.parse_tweets(
            tweets_csv("t1,2020-04-01T00:00:01Z,x,,,"), now=1585699200
        )
        assert len(errors) == 1

    def test_roundtrip_via_store(self, tmp_path):
        tweets, _ = ingest.parse_tweets(
            tweets_csv("t1,2020-04-01T00:00:00Z,Stay safe #x,Mumbai,Maharashtra,t0")
        )
        ingest.publish_tweets(tmp_path, tweets, [])
        assert ingest.load_tweets(tmp_path) == tweets


class TestParseGazetteer:
    def test_basic_and_normalized(self):
        entries, errors = ingest.parse_gazetteer(["Hydroxychloroquine\tChemicalName"])
        assert errors == []
        assert entries[0].surface == "hydroxychloroquine"
        assert entries[0].entity_type is EntityType.CHEMICAL_NAME

    def test_protein_surface(self):
        entries, _ = ingest.parse_gazetteer(["SARS-CoV-2\tProtein"])
        assert entries[0].surface == "sars-cov-2"
        assert entries[0].entity_type is EntityType.PROTEIN

    def test_unknown_type_reported(self):
        entries, errors = ingest.parse_gazetteer(["foo\tVirus"])
        assert entries == []
        assert len(errors) == 1 and "Virus" in errors[0].reason

    def test_duplicate_pair_dropped_multi_type_kept(self):
        entries, _ = ingest.parse_gazetteer(
            ["vero\tCellLine", "vero\tCellLine", "vero\tCellType"]
        )
        assert len(entries) == 2

    def test_case_insensitive_type(self):
        entries, _ = ingest.parse_gazetteer(["x y\tcelltype"])
        assert entries[0].entity_type is EntityType.CELL_TYPE


class TestParseDomains:
    def test_normalization(self):
        domains, errors = ingest.parse_domain_list(["WWW.FakeNews.example"])
        assert errors == []
        assert domains.domains == frozenset({"fakenews.example"})

    def test_blank_and_comment_ignored(self):
        domains, errors = ingest.parse_domain_list(["", "# comment", "a.example"])
        assert errors == [] and domains.domains == frozenset({"a.example"})

    def test_invalid_hostname(self):
        domains, errors = ingest.parse_domain_list(["not a host name"])
        assert domains.domains == frozenset()
        assert len(errors) == 1

    def test_suffix_matching(self):
        domains, _ = ingest.parse_domain_list(["fakenews.example"])
        assert domains.matches("fakenews.example")
        assert domains.matches("cdn.fakenews.example")
        assert not domains.matches("notfakenews.example")


class TestParseLocations:
    def test_lowercased_and_dedup(self):
        locations, _ = ingest.parse_locations(["Mumbai", "Delhi", "delhi"])
        assert locations.names == frozenset({"mumbai", "delhi"})

    def test_empty_raises(self):
        with pytest.raises(EmptyLocationList):
            ingest.parse_locations(["", "   "])


STATS_HEADER = "date,scope,total_cases,active_cases,deaths,recovered\n"


def stats_file(name, *rows):
    return (name, io.StringIO(STATS_HEADER + "".join(r + "\n" for r in rows)))


class TestParseStats:
    def test_valid_snapshot(self):
        snaps, errors = ingest.parse_stats_snapshots(
            [stats_file("d1.csv", "2020-04-01,ALL,100,70,5,25", "2020-04-01,Maharashtra,,12,,")]
        )
        assert errors == []
        assert snaps[0].total_cases == 100
        assert snaps[0].per_state == {"Maharashtra": 12}

    def test_invariant_violation_rejected(self):
        snaps, errors = ingest.parse_stats_snapshots(
            [stats_file("d1.csv", "2020-04-01,ALL,100,70,60,50")]
        )
        assert snaps == []
        assert any("invariant" in e.reason for e in errors)

    def test_same_date_later_file_wins(self):
        snaps, errors = ingest.parse_stats_snapshots(
            [
                stats_file("d1.csv", "2020-04-01,ALL,100,70,5,25"),
                stats_file("d2.csv", "2020-04-01,ALL,110,72,6,30"),
            ]
        )
        assert len(snaps) == 1 and snaps[0].total_cases == 110
        assert any("warning" in e.reason for e in errors)

    def test_sorted_by_date(self):
        snaps, _ = ingest.parse_stats_snapshots(
            [
                stats_file("b.csv", "2020-04-02,ALL,120,75,6,30"),
                stats_file("a.csv", "2020-04-01,ALL,100,70,5,25"),
            ]
        )
        assert [s.snapshot_date.day for s in snaps] == [1, 2]


@given(
    st.lists(
        st.tuples(
            st.text(alphabet="abcdefg", min_size=1, max_size=4),
            st.sampled_from(["2020", "2020-03", "2020-03-14", "bad date"]),
        ),
        max_size=20,
    )
)
def test_parsing_is_total_and_order_preserving(rows):
    csv_rows = [f"{pid},T,A,{date},X,V," for pid, date in rows]
    stream = papers_csv(*csv_rows)
    papers, errors = ingest.parse_papers(stream)
    assert len(papers) + len(errors) == len(rows)
    # records keep input order; first well-formed row wins per id
    expected = []
    seen = set()
    for pid, date in rows:
        if date == "bad date" or pid in seen:
            continue
        seen.add(pid)
        expected.append(pid)
    assert [p.paper_id for p in papers] == expected
