"""Error types shared across the engine.

Two kinds of failure exist: fatal conditions raised as exceptions
(missing columns, corrupt stores, violated operation preconditions) and
per-row problems collected as :class:`RowError` records so that parsing
stays total -- every input row is either a record or a reported error.
"""

from dataclasses import dataclass


class CovidexError(Exception):
    """Base class for all engine-raised errors."""


class MissingColumn(CovidexError):
    """A required column is absent from a delimited input's header."""


class UnparseableDate(CovidexError):
    """A date string matches none of the accepted formats."""


class EmptyLocationList(CovidexError):
    """A location list parsed to zero entries; the India filter would be vacuous."""


class DuplicateDocId(CovidexError):
    """Two documents with the same paper_id were passed to the index builder."""


class DomainError(CovidexError):
    """A numeric operation was called outside its stated domain."""


class EmptyQuery(CovidexError):
    """Query keywords tokenized to nothing."""


class UnknownEntity(CovidexError):
    """The named entity does not exist in the profile store."""


class DanglingPaperId(CovidexError):
    """An entity mention references a paper_id missing from the corpus."""


class MalformedUrl(CovidexError):
    """Not an http/https URL, or structurally hostless."""


class EmptyCorpus(CovidexError):
    """No document survived topic-model preprocessing."""


class NoDataBefore(CovidexError):
    """A stats query predates the first available snapshot."""


class StoreError(CovidexError):
    """A snapshot store is missing, incomplete, or fails checksum verification."""


@dataclass(frozen=True)
class RowError:
    """One non-fatal, per-row input problem.

    ``row`` is the 1-based data-row number (header excluded) or line
    number for line-oriented inputs.
    """

    source: str
    row: int
    reason: str

    def render(self) -> str:
        return f"{self.source}:{self.row}: {self.reason}"
