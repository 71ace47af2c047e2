"""End-to-end duplicate check: preprocess, embed, cluster, decide.

check_report runs the full pipeline for one new report against a corpus
and produces a RetrievalReport: every corpus report ranked by similarity,
the duplicate verdict, and the diagnostics a triager needs to trust the
answer (how many query terms the vocabulary could not represent, the
topic count actually used, the threshold applied).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .fca import DuplicateEntry, binarize, build_aoc_poset, extract_duplicates
from .ingest import BugReport, Corpus
from .lsi import (
    SimilarityMatrix,
    build_query_vector,
    build_tdm,
    build_vocabulary,
    compute_csm,
    default_k,
    truncated_svd,
)
from .preprocess import preprocess_report
from .stopwords import DEFAULT_STOP_WORDS, StopWordList

DEFAULT_THRESHOLD = 0.80

REPORT_FORMAT = "dupseek-report v1"

VERDICT_DUPLICATE = "duplicate"
VERDICT_UNIQUE = "unique"


@dataclass(frozen=True)
class CheckConfig:
    """Tunables for one duplicate check."""

    threshold: float = DEFAULT_THRESHOLD
    topics: int | None = None
    stop_words: StopWordList = DEFAULT_STOP_WORDS

    def __post_init__(self):
        if not 0.0 <= self.threshold <= 1.0:
            raise ParameterError(f"threshold must lie in [0, 1], got {self.threshold}")
        if self.topics is not None and self.topics < 1:
            raise ParameterError("topics must be a positive integer")


@dataclass(frozen=True)
class Diagnostics:
    dropped_terms: int
    effective_topics: int
    threshold: float
    degenerate: bool


@dataclass(frozen=True)
class RetrievalReport:
    """The outcome of checking one report against the corpus."""

    query_id: str
    ranked: tuple[tuple[str, float], ...]
    verdict: str
    duplicates: DuplicateEntry | None
    diagnostics: Diagnostics

    def __post_init__(self):
        has_duplicates = self.duplicates is not None and len(self.duplicates.matches) > 0
        if (self.verdict == VERDICT_DUPLICATE) != has_duplicates:
            raise ParameterError("verdict must be duplicate exactly when matches exist")

    def to_dict(self) -> dict:
        return {
            "format": REPORT_FORMAT,
            "query_id": self.query_id,
            "verdict": self.verdict,
            "matches": [{"id": i, "score": s} for i, s in self.ranked],
            "duplicates": [
                {"id": i, "score": s}
                for i, s in (self.duplicates.matches if self.duplicates else ())
            ],
            "diagnostics": {
                "dropped_terms": self.diagnostics.dropped_terms,
                "effective_topics": self.diagnostics.effective_topics,
                "threshold": self.diagnostics.threshold,
                "degenerate": self.diagnostics.degenerate,
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"


def report_from_json(text: str) -> RetrievalReport:
    """Rebuild a RetrievalReport from its machine-readable form."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParameterError(f"invalid report JSON: {exc.msg}") from exc
    if not isinstance(data, dict) or data.get("format") != REPORT_FORMAT:
        raise ParameterError(f"not a {REPORT_FORMAT} document")
    try:
        ranked = tuple((m["id"], float(m["score"])) for m in data["matches"])
        duplicate_matches = tuple(
            (m["id"], float(m["score"])) for m in data["duplicates"]
        )
        diagnostics = Diagnostics(
            int(data["diagnostics"]["dropped_terms"]),
            int(data["diagnostics"]["effective_topics"]),
            float(data["diagnostics"]["threshold"]),
            bool(data["diagnostics"]["degenerate"]),
        )
        query_id = data["query_id"]
        verdict = data["verdict"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParameterError(f"malformed report JSON: {exc}") from exc
    duplicates = (
        DuplicateEntry(query_id, duplicate_matches) if duplicate_matches else None
    )
    return RetrievalReport(query_id, ranked, verdict, duplicates, diagnostics)


def rank_scores(csm: SimilarityMatrix, row: int = 0) -> tuple[tuple[str, float], ...]:
    """Order one similarity row strongest first; ties go to the lower id."""
    pairs = [(doc_id, float(s)) for doc_id, s in zip(csm.doc_ids, csm.scores[row])]
    pairs.sort(key=lambda p: (-p[1], (len(p[0]), p[0])))
    return tuple(pairs)


@dataclass(frozen=True)
class PipelineArtifacts:
    """Intermediate products of one check, for dumps and graphs."""

    vocabulary: object
    tdm: object
    model: object
    query: object
    csm: SimilarityMatrix
    poset: object


def run_check(
    corpus: Corpus,
    report: BugReport,
    config: CheckConfig = CheckConfig(),
) -> tuple[RetrievalReport, PipelineArtifacts]:
    """Check one new report against the corpus and rank every candidate.

    The corpus needs at least 2 reports to support a latent space.  When
    no topic count is configured, one less than the number of reports in
    play (corpus plus query, capped) is used.  A query with no
    in-vocabulary terms carries no signal: it is flagged degenerate and
    the verdict is forced to unique.
    """
    if len(corpus) < 2:
        raise ParameterError("corpus must hold at least 2 reports to check against")
    documents = [preprocess_report(r, config.stop_words) for r in corpus]
    query_document = preprocess_report(report, config.stop_words)

    vocabulary = build_vocabulary(documents)
    tdm = build_tdm(documents, vocabulary)
    if config.topics is not None:
        k = config.topics
    else:
        k = min(default_k(len(corpus) + 1), *tdm.counts.shape)
    model = truncated_svd(tdm, k)

    query = build_query_vector(query_document, vocabulary)
    csm = compute_csm(model, [query])

    context = binarize(csm, config.threshold)
    poset = build_aoc_poset(context)
    if query.is_degenerate:
        duplicates = None
    else:
        entry = extract_duplicates(poset, csm, config.threshold).get(report.id)
        duplicates = entry if entry is not None and entry.matches else None

    result = RetrievalReport(
        query_id=report.id,
        ranked=rank_scores(csm),
        verdict=VERDICT_DUPLICATE if duplicates else VERDICT_UNIQUE,
        duplicates=duplicates,
        diagnostics=Diagnostics(
            dropped_terms=query.dropped_terms,
            effective_topics=model.k,
            threshold=config.threshold,
            degenerate=query.is_degenerate,
        ),
    )
    return result, PipelineArtifacts(vocabulary, tdm, model, query, csm, poset)


def check_report(
    corpus: Corpus,
    report: BugReport,
    config: CheckConfig = CheckConfig(),
) -> RetrievalReport:
    """Like run_check, returning only the retrieval report."""
    return run_check(corpus, report, config)[0]


def similarity_matrix_of(report: RetrievalReport) -> SimilarityMatrix:
    """Reconstruct the one-row score matrix a report was ranked from."""
    doc_ids = tuple(doc_id for doc_id, _ in report.ranked)
    scores = np.array([[score for _, score in report.ranked]], dtype=np.float64)
    return SimilarityMatrix(scores, (report.query_id,), doc_ids)
