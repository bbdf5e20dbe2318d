"""LDA over the India-filtered tweet corpus via collapsed Gibbs sampling.

One global model is trained over all months; month-wise topic
distributions aggregate the per-document mixtures.  All sampling draws
flow through a single seeded ``random.Random`` (Mersenne Twister), so a
given seed reproduces assignments bit-for-bit.
"""

import random
import re
from dataclasses import dataclass, field
from datetime import datetime, timezone
from importlib import resources
from typing import Callable, Iterable, Optional

import numpy as np

from ..errors import DomainError, EmptyCorpus
from ..index.core import tokenize
from ..records import TweetRecord
from ..tweets.core import URL_RE

_AT_MENTION_RE = re.compile(r"@\w+")

DEFAULT_K = 10
DEFAULT_BETA = 0.01
DEFAULT_ITERATIONS = 1000
MIN_TOKEN_LEN = 3
MIN_DF = 5
MAX_DF_RATIO = 0.5


def default_alpha(k: int) -> float:
    return 50.0 / k


def default_stopwords() -> frozenset[str]:
    text = resources.files(__package__).joinpath("stopwords_en.txt").read_text("utf-8")
    return frozenset(
        line.strip() for line in text.splitlines() if line.strip() and not line.startswith("#")
    )


@dataclass
class Vocabulary:
    terms: list[str]  # dense id -> term
    doc_freq: list[int]
    term_ids: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if not self.term_ids:
            self.term_ids = {t: i for i, t in enumerate(self.terms)}

    def __len__(self) -> int:
        return len(self.terms)


@dataclass
class BowDocument:
    doc_id: str
    month: tuple[int, int]
    token_ids: list[int]


def _clean_tweet_text(text: str) -> str:
    text = URL_RE.sub(" ", text)
    text = _AT_MENTION_RE.sub(" ", text)
    return text.replace("#", " ")


def preprocess(
    tweets: Iterable[TweetRecord],
    stopwords: Optional[frozenset[str]] = None,
    min_df: int = MIN_DF,
    max_df_ratio: float = MAX_DF_RATIO,
) -> tuple[Vocabulary, list[BowDocument]]:
    """Tokenize, clean, and prune tweets into bag-of-words documents.

    Drops URLs, @-mentions and '#' markers (hashtag words kept), tokens
    shorter than 3 characters, stopwords, and terms outside the
    [min_df, max_df_ratio] document-frequency band.  Documents left
    with no tokens are excluded.
    """
    stop = default_stopwords() if stopwords is None else stopwords
    raw_docs: list[tuple[str, tuple[int, int], list[str]]] = []
    for t in tweets:
        terms = [
            tok.text
            for tok in tokenize(_clean_tweet_text(t.text))
            if len(tok.text) >= MIN_TOKEN_LEN and tok.text not in stop
        ]
        if not terms:
            continue
        when = datetime.fromtimestamp(t.created_at, tz=timezone.utc)
        raw_docs.append((t.tweet_id, (when.year, when.month), terms))

    df: dict[str, int] = {}
    for _, _, terms in raw_docs:
        for term in set(terms):
            df[term] = df.get(term, 0) + 1
    max_df = max_df_ratio * len(raw_docs)
    retained = sorted(t for t, n in df.items() if n >= min_df and n <= max_df)
    vocab = Vocabulary(terms=retained, doc_freq=[df[t] for t in retained])

    docs = []
    for doc_id, month, terms in raw_docs:
        ids = [vocab.term_ids[t] for t in terms if t in vocab.term_ids]
        if ids:
            docs.append(BowDocument(doc_id=doc_id, month=month, token_ids=ids))
    if not docs:
        raise EmptyCorpus("no document survived preprocessing")
    return vocab, docs


class LdaModel:
    """Collapsed-Gibbs LDA state: assignments plus exact count matrices."""

    def __init__(
        self,
        docs: list[BowDocument],
        k: int,
        alpha: float,
        beta: float,
        vocab_size: int,
        seed: int,
        assignments: Optional[list[list[int]]] = None,
    ):
        self.k = k
        self.alpha = alpha
        self.beta = beta
        self.vocab_size = vocab_size
        self.seed = seed
        self.iterations_run = 0
        self.perplexity_history: list[float] = []
        self.rng = random.Random(seed)
        self._doc_tokens = [doc.token_ids for doc in docs]
        self.doc_topic = [[0] * k for _ in docs]
        self.word_topic = [[0] * k for _ in range(vocab_size)]  # term-major layout
        self.topic_totals = [0] * k
        if assignments is None:
            self.assignments = [[self.rng.randrange(k) for _ in doc.token_ids] for doc in docs]
        else:
            self.assignments = [list(z) for z in assignments]
        for d, doc in enumerate(self._doc_tokens):
            for i, w in enumerate(doc):
                t = self.assignments[d][i]
                self.doc_topic[d][t] += 1
                self.word_topic[w][t] += 1
                self.topic_totals[t] += 1

    def topic_word_counts(self) -> list[list[int]]:
        """Topic-major view (K x V) of the term counts."""
        return [[self.word_topic[w][t] for w in range(self.vocab_size)] for t in range(self.k)]

    def sweep(self) -> None:
        """One Gibbs pass visiting every token in document order."""
        k = self.k
        alpha = self.alpha
        beta = self.beta
        vbeta = self.vocab_size * beta
        totals = self.topic_totals
        rand = self.rng.random
        cums = [0.0] * k
        for d, doc in enumerate(self._doc_tokens):
            drow = self.doc_topic[d]
            zs = self.assignments[d]
            for i, w in enumerate(doc):
                t = zs[i]
                wrow = self.word_topic[w]
                drow[t] -= 1
                wrow[t] -= 1
                totals[t] -= 1
                total = 0.0
                for j in range(k):
                    total += (drow[j] + alpha) * (wrow[j] + beta) / (totals[j] + vbeta)
                    cums[j] = total
                u = rand() * total
                t = 0
                last = k - 1
                while t < last and cums[t] < u:
                    t += 1
                zs[i] = t
                drow[t] += 1
                wrow[t] += 1
                totals[t] += 1
        self.iterations_run += 1

    def _perplexity(self, token_docs: np.ndarray, token_words: np.ndarray) -> float:
        theta = np.asarray(self.doc_topic, dtype=float) + self.alpha
        theta /= theta.sum(axis=1, keepdims=True)
        phi = np.asarray(self.word_topic, dtype=float) + self.beta
        phi /= np.asarray(self.topic_totals, dtype=float) + self.vocab_size * self.beta
        p = (theta[token_docs] * phi[token_words]).sum(axis=1)
        return float(np.exp(-np.log(p).sum() / len(token_words)))

    def perplexity(self) -> float:
        token_docs, token_words = _token_arrays(self._doc_tokens)
        return self._perplexity(token_docs, token_words)


def _token_arrays(doc_tokens: list[list[int]]) -> tuple[np.ndarray, np.ndarray]:
    token_docs = np.fromiter(
        (d for d, doc in enumerate(doc_tokens) for _ in doc), dtype=np.int64
    )
    token_words = np.fromiter((w for doc in doc_tokens for w in doc), dtype=np.int64)
    return token_docs, token_words


def fit_lda(
    docs: list[BowDocument],
    k: int,
    alpha: float,
    beta: float,
    iterations: int,
    seed: int,
    vocab_size: Optional[int] = None,
    sweep_callback: Optional[Callable[[LdaModel, int], None]] = None,
) -> LdaModel:
    """Run collapsed Gibbs sampling; identical seeds give identical models.

    ``sweep_callback(model, iteration)`` fires after each sweep
    (1-based); perplexity over the training corpus is recorded per sweep
    in ``model.perplexity_history``.
    """
    if k < 2:
        raise DomainError(f"need k >= 2, got {k}")
    if iterations < 1:
        raise DomainError(f"need iterations >= 1, got {iterations}")
    if alpha <= 0 or beta <= 0:
        raise DomainError(f"alpha and beta must be positive, got {alpha}, {beta}")
    if not docs:
        raise DomainError("empty document list")
    if vocab_size is None:
        vocab_size = max(w for doc in docs for w in doc.token_ids) + 1

    model = LdaModel(docs, k=k, alpha=alpha, beta=beta, vocab_size=vocab_size, seed=seed)
    token_docs, token_words = _token_arrays(model._doc_tokens)
    for iteration in range(1, iterations + 1):
        model.sweep()
        model.perplexity_history.append(model._perplexity(token_docs, token_words))
        if sweep_callback is not None:
            sweep_callback(model, iteration)
    return model


def top_keywords(
    model: LdaModel, vocab: Vocabulary, k: int
) -> list[list[tuple[str, float]]]:
    """Per topic, the k most probable terms with their probabilities.

    p(term|topic) = (count + beta) / (topic total + V*beta); ranked
    descending, ties by term.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    out = []
    denom_base = model.vocab_size * model.beta
    for t in range(model.k):
        denom = model.topic_totals[t] + denom_base
        scored = [
            ((model.word_topic[w][t] + model.beta) / denom, vocab.terms[w])
            for w in range(model.vocab_size)
        ]
        scored.sort(key=lambda e: (-e[0], e[1]))
        out.append([(term, prob) for prob, term in scored[: min(k, model.vocab_size)]])
    return out


def document_topic_mixture(model: LdaModel, d: int) -> list[float]:
    length = len(model._doc_tokens[d])
    denom = length + model.k * model.alpha
    return [(model.doc_topic[d][t] + model.alpha) / denom for t in range(model.k)]


def monthly_topic_distribution(
    model: LdaModel, docs: list[BowDocument]
) -> list[tuple[tuple[int, int], list[float]]]:
    """Mean per-document topic mixture grouped by month; empty months omitted."""
    sums: dict[tuple[int, int], list[float]] = {}
    counts: dict[tuple[int, int], int] = {}
    for d, doc in enumerate(docs):
        theta = document_topic_mixture(model, d)
        acc = sums.setdefault(doc.month, [0.0] * model.k)
        for t in range(model.k):
            acc[t] += theta[t]
        counts[doc.month] = counts.get(doc.month, 0) + 1
    return [
        (month, [v / counts[month] for v in sums[month]])
        for month in sorted(sums)
    ]
