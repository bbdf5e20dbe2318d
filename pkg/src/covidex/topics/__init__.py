from .core import (
    BowDocument,
    LdaModel,
    Vocabulary,
    default_stopwords,
    fit_lda,
    monthly_topic_distribution,
    preprocess,
    top_keywords,
)
from .io import load_model, save_model

__all__ = [
    "BowDocument",
    "LdaModel",
    "Vocabulary",
    "default_stopwords",
    "fit_lda",
    "load_model",
    "monthly_topic_distribution",
    "preprocess",
    "save_model",
    "top_keywords",
]
