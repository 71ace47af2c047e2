"""Turn raw bug reports into clean token streams.

The pipeline is: extract the indexable text (summary plus description),
split it into lowercase alphabetic tokens, drop stop words, and stem what
remains.  Stemming can collapse an inflected word onto a stop word
("willing" becomes "will"), so the stop filter runs once more on the
stems; the output therefore never contains a stop-listed token.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .ingest import BugReport
from .stemming import stem
from .stopwords import DEFAULT_STOP_WORDS, StopWordList

_NON_ALPHABETIC = re.compile(r"[^A-Za-z]+")
_CAMEL_BOUNDARY = re.compile(r"(?<=[a-z])(?=[A-Z])")


@dataclass(frozen=True)
class ProcessedDocument:
    """A report reduced to its id and cleaned token stream."""

    id: str
    tokens: tuple[str, ...]


def extract_text(report: BugReport) -> str:
    """Concatenate summary and description with a single space."""
    if not report.description:
        return report.summary
    return f"{report.summary} {report.description}"


def tokenize(text: str) -> list[str]:
    """Split text into lowercase alphabetic tokens.

    Every non-alphabetic character is a separator, and camel-case words
    split at each lower-to-upper boundary ("fillText" -> "fill", "text").
    An all-caps run stays together ("PDFs" -> "pdfs").
    """
    tokens = []
    for fragment in _NON_ALPHABETIC.split(text):
        if not fragment:
            continue
        for piece in _CAMEL_BOUNDARY.split(fragment):
            tokens.append(piece.lower())
    return tokens


def remove_stop_words(tokens, stop_words: StopWordList = DEFAULT_STOP_WORDS) -> list[str]:
    """Drop stop-listed tokens, preserving order and repetitions."""
    return [token for token in tokens if token not in stop_words]


def preprocess_report(
    report: BugReport,
    stop_words: StopWordList = DEFAULT_STOP_WORDS,
) -> ProcessedDocument:
    """Run the full cleaning pipeline on one report."""
    tokens = tokenize(extract_text(report))
    kept = remove_stop_words(tokens, stop_words)
    stems = [stem(token) for token in kept]
    return ProcessedDocument(report.id, tuple(remove_stop_words(stems, stop_words)))
