"""Index snapshot persistence: terms, postings, doc-table, manifest."""

from pathlib import Path

from .. import store as storemod
from ..errors import StoreError
from .core import DocEntry, FieldIndex, IndexSnapshot, FIELDS

DOCS_FILE = "docs.ndjson"
TERMS_FILE = "terms.ndjson"
POSTINGS_FILE = "postings.ndjson"


def save_index(snapshot: IndexSnapshot, outdir: Path) -> None:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    doc_rows = (
        {
            "ordinal": d.ordinal,
            "paper_id": d.paper_id,
            "year": d.year,
            "title": d.title,
            "authors": list(d.authors),
            "venue": d.venue,
            "publish_date": d.publish_date,
            "source_url": d.source_url,
            "lengths": {f: snapshot.fields[f].lengths[d.ordinal] for f in FIELDS},
        }
        for d in snapshot.docs
    )
    n_docs, docs_sha = storemod.write_ndjson(outdir / DOCS_FILE, doc_rows)

    term_rows = []
    posting_rows = []
    for fname in FIELDS:
        for term in sorted(snapshot.fields[fname].postings):
            postings = snapshot.fields[fname].postings[term]
            term_rows.append({"field": fname, "term": term, "df": len(postings)})
            posting_rows.append(
                {"field": fname, "term": term, "postings": [[o, tf] for o, tf in postings]}
            )
    n_terms, terms_sha = storemod.write_ndjson(outdir / TERMS_FILE, term_rows)
    _, postings_sha = storemod.write_ndjson(outdir / POSTINGS_FILE, posting_rows)

    meta = {
        "docs": snapshot.n_docs,
        "fields": {
            f: {
                "terms": len(snapshot.fields[f].postings),
                "total_len": snapshot.fields[f].total_len,
                "avg_len": snapshot.fields[f].avg_len,
            }
            for f in FIELDS
        },
    }
    storemod.update_manifest(
        outdir,
        {
            DOCS_FILE: {"records": n_docs, "sha256": docs_sha},
            TERMS_FILE: {"records": n_terms, "sha256": terms_sha},
            POSTINGS_FILE: {"records": n_terms, "sha256": postings_sha},
        },
        meta=meta,
    )


def load_index(indexdir: Path, verify: bool = True) -> IndexSnapshot:
    indexdir = Path(indexdir)
    if verify:
        storemod.verify_store(indexdir, required=[DOCS_FILE, TERMS_FILE, POSTINGS_FILE])

    docs = []
    lengths: dict[str, list[int]] = {f: [] for f in FIELDS}
    for row in storemod.read_ndjson(indexdir / DOCS_FILE):
        docs.append(
            DocEntry(
                ordinal=row["ordinal"],
                paper_id=row["paper_id"],
                year=row["year"],
                title=row["title"],
                authors=tuple(row["authors"]),
                venue=row["venue"],
                publish_date=row["publish_date"],
                source_url=row.get("source_url"),
            )
        )
        for f in FIELDS:
            lengths[f].append(row["lengths"][f])

    fields = {
        f: FieldIndex(postings={}, lengths=lengths[f], total_len=sum(lengths[f]))
        for f in FIELDS
    }
    for row in storemod.read_ndjson(indexdir / POSTINGS_FILE):
        fields[row["field"]].postings[row["term"]] = [tuple(p) for p in row["postings"]]

    # Cross-check the terms file against the loaded postings.
    for row in storemod.read_ndjson(indexdir / TERMS_FILE):
        plist = fields[row["field"]].postings.get(row["term"])
        if plist is None or len(plist) != row["df"]:
            raise StoreError(f"terms/postings mismatch for {row['field']}:{row['term']}")

    return IndexSnapshot(docs=tuple(docs), fields=fields)
