"""Retrieval quality metrics and the leave-one-out evaluation harness.

Ground truth is a tab-separated file of (query id, duplicate id) pairs.
For each labeled query the harness removes that report from the corpus,
rebuilds the model on the remainder, runs the retrieval pipeline with the
removed report as the query, and compares the retrieved duplicates
against the truth.  Aggregate numbers are micro-averages: sums of hits
over sums of denominators across queries.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from .errors import ParameterError, StoreFormatError, StoreIOError, StoreNotFoundError, UndefinedMetricError
from .ingest import Corpus
from .pipeline import CheckConfig, check_report


@dataclass(frozen=True)
class GroundTruth:
    """Known duplicate pairs: query id -> id it duplicates."""

    pairs: frozenset[tuple[str, str]]

    def query_ids(self) -> tuple[str, ...]:
        return tuple(sorted({q for q, _ in self.pairs}, key=lambda i: (len(i), i)))

    def duplicates_of(self, query_id: str) -> frozenset[str]:
        return frozenset(d for q, d in self.pairs if q == query_id)


def load_ground_truth(path) -> GroundTruth:
    """Read truth pairs from a file of query_id<TAB>duplicate_id lines."""
    path = os.fspath(path)
    if not os.path.exists(path):
        raise StoreNotFoundError(path)
    try:
        with open(path, encoding="utf-8") as handle:
            lines = handle.read().split("\n")
    except OSError as exc:
        raise StoreIOError(path, exc) from exc
    pairs = set()
    for number, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        fields = stripped.split("\t")
        if len(fields) != 2 or not all(f.strip() for f in fields):
            raise StoreFormatError(
                "expected two tab-separated ids per line", path, line=number
            )
        pairs.add((fields[0].strip(), fields[1].strip()))
    return GroundTruth(frozenset(pairs))


def recall(relevant: set, retrieved: set) -> float:
    """Fraction of the relevant reports that were retrieved."""
    if not relevant:
        raise UndefinedMetricError("undefined recall: no relevant reports")
    return len(set(relevant) & set(retrieved)) / len(set(relevant))


def precision(relevant: set, retrieved: set) -> float:
    """Fraction of the retrieved reports that are relevant.

    Retrieving nothing is vacuously precise when nothing was relevant,
    and completely imprecise otherwise.
    """
    retrieved = set(retrieved)
    if not retrieved:
        return 1.0 if not relevant else 0.0
    return len(set(relevant) & retrieved) / len(retrieved)


def f_measure(p: float, r: float) -> float:
    """Harmonic mean of precision and recall; 0.0 when both are 0."""
    if not 0.0 <= p <= 1.0 or not 0.0 <= r <= 1.0:
        raise ParameterError("precision and recall must lie in [0, 1]")
    if p + r == 0.0:
        return 0.0
    return 2.0 * p * r / (p + r)


@dataclass(frozen=True)
class EvalMetrics:
    recall: float
    precision: float
    f_measure: float


@dataclass(frozen=True)
class QueryOutcome:
    """What one leave-one-out run retrieved, next to what it should have."""

    relevant: frozenset[str]
    retrieved: frozenset[str]
    metrics: EvalMetrics


@dataclass(frozen=True)
class ExperimentResult:
    per_query: dict[str, QueryOutcome]
    aggregate: EvalMetrics
    unlabeled_false_positives: dict[str, frozenset[str]] | None = None


def _metrics(relevant: frozenset[str], retrieved: frozenset[str]) -> EvalMetrics:
    r = recall(relevant, retrieved)
    p = precision(relevant, retrieved)
    return EvalMetrics(r, p, f_measure(p, r))


def run_experiment(
    corpus: Corpus,
    truth: GroundTruth,
    config: CheckConfig = CheckConfig(),
    diagnose_unlabeled: bool = False,
) -> ExperimentResult:
    """Score every labeled query by leave-one-out retrieval.

    Every truth query id must exist in the corpus.  Duplicate-of ids that
    point at missing reports simply stay unretrievable (they cost recall).
    With diagnose_unlabeled, every unlabeled report is also run as a query
    and anything it retrieves is reported as a false positive; this check
    goes beyond the labeled protocol and is off by default.
    """
    if not truth.pairs:
        raise UndefinedMetricError("undefined recall: ground truth is empty")
    known = set(corpus.ids())
    missing = [q for q in truth.query_ids() if q not in known]
    if missing:
        raise ParameterError(f"truth query ids not in corpus: {', '.join(missing)}")

    per_query = {}
    total_hits = total_relevant = total_retrieved = 0
    for query_id in truth.query_ids():
        report = corpus.get(query_id)
        remainder = corpus.remove(query_id)
        result = check_report(remainder, report, config)
        retrieved = frozenset(
            doc_id for doc_id, _ in (result.duplicates.matches if result.duplicates else ())
        )
        relevant = truth.duplicates_of(query_id)
        per_query[query_id] = QueryOutcome(relevant, retrieved, _metrics(relevant, retrieved))
        total_hits += len(relevant & retrieved)
        total_relevant += len(relevant)
        total_retrieved += len(retrieved)

    micro_recall = total_hits / total_relevant
    if total_retrieved:
        micro_precision = total_hits / total_retrieved
    else:
        micro_precision = 1.0 if total_relevant == 0 else 0.0
    aggregate = EvalMetrics(
        micro_recall, micro_precision, f_measure(micro_precision, micro_recall)
    )

    false_positives = None
    if diagnose_unlabeled:
        false_positives = {}
        labeled = set(truth.query_ids())
        for report in corpus:
            if report.id in labeled:
                continue
            result = check_report(corpus.remove(report.id), report, config)
            if result.duplicates is not None:
                false_positives[report.id] = frozenset(
                    doc_id for doc_id, _ in result.duplicates.matches
                )

    return ExperimentResult(per_query, aggregate, false_positives)
