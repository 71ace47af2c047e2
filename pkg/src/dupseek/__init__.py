"""Duplicate bug report detection for Bugzilla exports.

The pipeline has three stages: preprocess report text into clean token
streams, embed reports in a latent topic space and score each query
against the corpus by cosine similarity, then binarize the scores at a
decision threshold and read duplicate verdicts off a concept poset.
"""

from .errors import (
    DupseekError,
    DuplicateIdError,
    EmptyVocabularyError,
    ParameterError,
    RecordError,
    StoreFormatError,
    StoreIOError,
    StoreNotFoundError,
    UndefinedMetricError,
    XmlParseError,
)
from .ingest import BugReport, Corpus, load_corpus, parse_bugzilla_xml, save_corpus
from .pipeline import CheckConfig, RetrievalReport, check_report, run_check

__version__ = "0.1.0"

__all__ = [
    "BugReport",
    "CheckConfig",
    "Corpus",
    "DupseekError",
    "DuplicateIdError",
    "EmptyVocabularyError",
    "ParameterError",
    "RecordError",
    "RetrievalReport",
    "StoreFormatError",
    "StoreIOError",
    "StoreNotFoundError",
    "UndefinedMetricError",
    "XmlParseError",
    "check_report",
    "load_corpus",
    "parse_bugzilla_xml",
    "run_check",
    "save_corpus",
    "__version__",
]
