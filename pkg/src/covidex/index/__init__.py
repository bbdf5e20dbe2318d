from .core import (
    FIELDS,
    IndexSnapshot,
    SearchQuery,
    SearchResultItem,
    SearchResultPage,
    Token,
    YearGroup,
    build_index,
    score_bm25,
    search,
    tokenize,
)
from .io import load_index, save_index

__all__ = [
    "FIELDS",
    "IndexSnapshot",
    "SearchQuery",
    "SearchResultItem",
    "SearchResultPage",
    "Token",
    "YearGroup",
    "build_index",
    "load_index",
    "save_index",
    "score_bm25",
    "search",
    "tokenize",
]
