"""Newline-delimited JSON store with a checksummed manifest.

Every pipeline stage publishes an immutable directory of ``.ndjson``
files plus a ``manifest.json`` carrying record counts and SHA-256 file
hashes (and optional stage metadata).  Writers replace files atomically;
readers verify checksums before use.  All JSON is rendered canonically
(sorted keys, tight separators) so identical inputs yield identical
bytes.
"""

import hashlib
import json
import os
from pathlib import Path
from typing import Iterable, Iterator

from .errors import StoreError

MANIFEST_NAME = "manifest.json"


def dumps_canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


def _atomic_write_bytes(path: Path, data: bytes) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(data)
    os.replace(tmp, path)


def sha256_file(path: Path) -> str:
    h = hashlib.sha256()
    with path.open("rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def write_ndjson(path: Path, objs: Iterable[dict]) -> tuple[int, str]:
    """Write one canonical JSON object per line; returns (count, sha256)."""
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = []
    count = 0
    for obj in objs:
        lines.append(dumps_canonical(obj))
        count += 1
    data = ("\n".join(lines) + "\n" if lines else "").encode("utf-8")
    _atomic_write_bytes(path, data)
    return count, hashlib.sha256(data).hexdigest()


def read_ndjson(path: Path) -> Iterator[dict]:
    with path.open("r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                yield json.loads(line)


def load_manifest(directory: Path) -> dict:
    path = Path(directory) / MANIFEST_NAME
    if not path.exists():
        raise StoreError(f"no manifest in {directory}")
    with path.open("r", encoding="utf-8") as fh:
        return json.load(fh)


def update_manifest(directory: Path, files: dict[str, dict], meta: dict | None = None) -> dict:
    """Merge file entries (name -> {records, sha256}) into the manifest.

    Existing entries for other files are preserved so ingest stages can
    publish one kind at a time into a shared store directory.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / MANIFEST_NAME
    manifest = {"files": {}, "meta": {}}
    if path.exists():
        with path.open("r", encoding="utf-8") as fh:
            manifest = json.load(fh)
    manifest.setdefault("files", {}).update(files)
    if meta:
        manifest.setdefault("meta", {}).update(meta)
    _atomic_write_bytes(path, (dumps_canonical(manifest) + "\n").encode("utf-8"))
    return manifest


def manifest_hash(directory: Path) -> str:
    """SHA-256 of the manifest bytes; identifies a published snapshot."""
    path = Path(directory) / MANIFEST_NAME
    if not path.exists():
        raise StoreError(f"no manifest in {directory}")
    return sha256_file(path)


def verify_store(directory: Path, required: Iterable[str] = ()) -> dict:
    """Check that every manifest-listed file exists with a matching hash.

    Returns the manifest.  Raises StoreError on any missing file, hash
    mismatch, or absent required entry.
    """
    directory = Path(directory)
    manifest = load_manifest(directory)
    files = manifest.get("files", {})
    for name in required:
        if name not in files:
            raise StoreError(f"store {directory} is missing required file entry {name!r}")
    for name, entry in sorted(files.items()):
        path = directory / name
        if not path.exists():
            raise StoreError(f"store file missing: {path}")
        actual = sha256_file(path)
        if actual != entry.get("sha256"):
            raise StoreError(f"checksum mismatch for {path}")
    return manifest


def publish_ndjson(directory: Path, name: str, objs: Iterable[dict], meta: dict | None = None) -> tuple[int, str]:
    """Write ``<directory>/<name>`` and record it in the manifest."""
    directory = Path(directory)
    count, digest = write_ndjson(directory / name, objs)
    update_manifest(directory, {name: {"records": count, "sha256": digest}}, meta=meta)
    return count, digest


def append_error_log(directory: Path, errors: Iterable) -> int:
    """Append row-error reports to ``<directory>/errors.log``; returns count."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    n = 0
    with (directory / "errors.log").open("a", encoding="utf-8") as fh:
        for err in errors:
            fh.write(err.render() + "\n")
            n += 1
    return n
