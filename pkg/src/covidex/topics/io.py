"""Topic model persistence: vocabulary, documents with assignments, manifest."""

from pathlib import Path

from .. import store as storemod
from .core import BowDocument, LdaModel, Vocabulary

VOCAB_FILE = "vocabulary.ndjson"
DOCS_FILE = "docs.ndjson"


def save_model(outdir: Path, vocab: Vocabulary, docs: list[BowDocument], model: LdaModel) -> None:
    outdir = Path(outdir)
    vocab_rows = (
        {"id": i, "term": term, "df": vocab.doc_freq[i]} for i, term in enumerate(vocab.terms)
    )
    n_vocab, sha_vocab = storemod.write_ndjson(outdir / VOCAB_FILE, vocab_rows)

    doc_rows = (
        {
            "doc_id": doc.doc_id,
            "month": [doc.month[0], doc.month[1]],
            "tokens": doc.token_ids,
            "assignments": model.assignments[d],
        }
        for d, doc in enumerate(docs)
    )
    n_docs, sha_docs = storemod.write_ndjson(outdir / DOCS_FILE, doc_rows)

    storemod.update_manifest(
        outdir,
        {
            VOCAB_FILE: {"records": n_vocab, "sha256": sha_vocab},
            DOCS_FILE: {"records": n_docs, "sha256": sha_docs},
        },
        meta={
            "k": model.k,
            "alpha": model.alpha,
            "beta": model.beta,
            "iterations": model.iterations_run,
            "seed": model.seed,
            "vocab_size": model.vocab_size,
            "vocab_sha256": sha_vocab,
            "docs": n_docs,
        },
    )


def load_model(outdir: Path, verify: bool = True) -> tuple[Vocabulary, list[BowDocument], LdaModel]:
    """Rebuild the model from stored assignments; counts are recounted."""
    outdir = Path(outdir)
    manifest = (
        storemod.verify_store(outdir, required=[VOCAB_FILE, DOCS_FILE])
        if verify
        else storemod.load_manifest(outdir)
    )
    meta = manifest["meta"]

    terms: list[str] = []
    doc_freq: list[int] = []
    for row in storemod.read_ndjson(outdir / VOCAB_FILE):
        assert row["id"] == len(terms)
        terms.append(row["term"])
        doc_freq.append(row["df"])
    vocab = Vocabulary(terms=terms, doc_freq=doc_freq)

    docs: list[BowDocument] = []
    assignments: list[list[int]] = []
    for row in storemod.read_ndjson(outdir / DOCS_FILE):
        docs.append(
            BowDocument(
                doc_id=row["doc_id"],
                month=(row["month"][0], row["month"][1]),
                token_ids=list(row["tokens"]),
            )
        )
        assignments.append(list(row["assignments"]))

    model = LdaModel(
        docs,
        k=meta["k"],
        alpha=meta["alpha"],
        beta=meta["beta"],
        vocab_size=meta["vocab_size"],
        seed=meta["seed"],
        assignments=assignments,
    )
    model.iterations_run = meta["iterations"]
    return vocab, docs, model
