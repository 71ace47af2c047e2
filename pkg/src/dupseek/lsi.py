"""Latent semantic indexing over preprocessed bug reports.

Documents are embedded by a rank-K truncated singular value decomposition
of the term-document count matrix A ~ U_k S_k V_k^T.  Document d lives at
row d of V_k; a query with term-count vector q is folded into the same
space as

    q_hat = S_k^(-1) U_k^T q

which for a query identical to a stored document reproduces that
document's row of V_k exactly.  Similarity is the cosine between q_hat
and each document row.
"""

from __future__ import annotations

import csv
import io
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyVocabularyError, ParameterError
from .preprocess import ProcessedDocument

MAX_DEFAULT_TOPICS = 300

_ORTHONORMAL_TOL = 1e-8


@dataclass(frozen=True)
class Vocabulary:
    """Index terms in order of first appearance across the corpus."""

    terms: tuple[str, ...]
    index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "index", {t: i for i, t in enumerate(self.terms)})
        if len(self.index) != len(self.terms):
            raise ParameterError("vocabulary terms must be unique")

    def __len__(self) -> int:
        return len(self.terms)

    def __contains__(self, term: str) -> bool:
        return term in self.index


@dataclass(frozen=True)
class TermDocumentMatrix:
    """Raw term counts: one row per vocabulary term, one column per report."""

    counts: np.ndarray
    doc_ids: tuple[str, ...]

    def __post_init__(self):
        if self.counts.ndim != 2 or self.counts.shape[1] != len(self.doc_ids):
            raise ParameterError("count matrix shape does not match document ids")
        if (self.counts < 0).any():
            raise ParameterError("term counts must be non-negative")


@dataclass(frozen=True)
class QueryVector:
    """Term counts of one query over the corpus vocabulary.

    Query tokens outside the vocabulary cannot be represented; they are
    dropped and only their number is kept, for diagnostics.  A query whose
    every token was dropped is degenerate: it carries no usable signal.
    """

    query_id: str
    counts: np.ndarray
    dropped_terms: int

    @property
    def is_degenerate(self) -> bool:
        return int(self.counts.sum()) == 0


@dataclass(frozen=True)
class LsiModel:
    """A rank-k factorization A ~ u @ diag(s) @ v.T of a term-document matrix."""

    u: np.ndarray
    s: np.ndarray
    v: np.ndarray
    k: int
    doc_ids: tuple[str, ...]

    def __post_init__(self):
        r, i = self.u.shape[0], self.v.shape[0]
        if self.u.shape[1] != self.k or self.v.shape[1] != self.k or self.s.shape != (self.k,):
            raise ParameterError("factor shapes disagree with k")
        if self.k > min(r, i):
            raise ParameterError("k exceeds matrix dimensions")
        if (self.s <= 0).any() or (np.diff(self.s) > 0).any():
            raise ParameterError("singular values must be positive and non-increasing")
        for factor in (self.u, self.v):
            gram = factor.T @ factor
            if not np.allclose(gram, np.eye(self.k), atol=_ORTHONORMAL_TOL):
                raise ParameterError("factor columns must be orthonormal")


@dataclass(frozen=True)
class SimilarityMatrix:
    """Cosine scores, one row per query, one column per corpus document."""

    scores: np.ndarray
    query_ids: tuple[str, ...]
    doc_ids: tuple[str, ...]

    def __post_init__(self):
        if self.scores.shape != (len(self.query_ids), len(self.doc_ids)):
            raise ParameterError("score matrix shape does not match ids")
        if np.isnan(self.scores).any():
            raise ParameterError("similarity scores must not be NaN")
        if (np.abs(self.scores) > 1 + 1e-9).any():
            raise ParameterError("similarity scores must lie in [-1, 1]")
        # clamp float residue so downstream comparisons see exact bounds
        object.__setattr__(self, "scores", np.clip(self.scores, -1.0, 1.0))


def build_vocabulary(documents: list[ProcessedDocument]) -> Vocabulary:
    """Collect distinct terms in order of first appearance."""
    seen = {}
    for document in documents:
        for token in document.tokens:
            if token not in seen:
                seen[token] = len(seen)
    if not seen:
        raise EmptyVocabularyError()
    return Vocabulary(tuple(seen))


def build_tdm(documents: list[ProcessedDocument], vocabulary: Vocabulary) -> TermDocumentMatrix:
    """Count term occurrences per document (raw counts, no weighting)."""
    counts = np.zeros((len(vocabulary), len(documents)), dtype=np.int64)
    for column, document in enumerate(documents):
        for token in document.tokens:
            row = vocabulary.index.get(token)
            if row is not None:
                counts[row, column] += 1
    return TermDocumentMatrix(counts, tuple(d.id for d in documents))


def build_query_vector(document: ProcessedDocument, vocabulary: Vocabulary) -> QueryVector:
    """Count a query's in-vocabulary terms; tally the rest as dropped."""
    counts = np.zeros(len(vocabulary), dtype=np.int64)
    dropped = 0
    for token in document.tokens:
        row = vocabulary.index.get(token)
        if row is None:
            dropped += 1
        else:
            counts[row] += 1
    return QueryVector(document.id, counts, dropped)


def default_k(total_reports: int) -> int:
    """Topic count used when none is configured: all but one report, capped."""
    if total_reports < 2:
        raise ParameterError("need at least 2 reports to compare")
    return min(total_reports - 1, MAX_DEFAULT_TOPICS)


def truncated_svd(tdm: TermDocumentMatrix, k: int) -> LsiModel:
    """Factor the count matrix and keep the k strongest topics.

    If the matrix rank turns out to be below k, the model is built at the
    rank instead and a warning is emitted.  Column signs are normalized so
    that the largest-magnitude entry of each u column is non-negative.
    """
    r, i = tdm.counts.shape
    if not 1 <= k <= min(r, i):
        raise ParameterError(f"k={k} outside valid range 1..{min(r, i)}")
    if not tdm.counts.any():
        raise ParameterError("term-document matrix is all zeros")
    a = tdm.counts.astype(np.float64)
    u, s, vt = np.linalg.svd(a, full_matrices=False)
    tolerance = max(r, i) * np.finfo(np.float64).eps * s[0]
    rank = int((s > tolerance).sum())
    if rank < k:
        warnings.warn(
            f"matrix rank {rank} is below the requested {k} topics; using {rank}",
            stacklevel=2,
        )
        k = rank
    u, s, v = u[:, :k], s[:k], vt[:k, :].T
    for column in range(k):
        anchor = np.argmax(np.abs(u[:, column]))
        if u[anchor, column] < 0:
            u[:, column] = -u[:, column]
            v[:, column] = -v[:, column]
    return LsiModel(u, s, v, k, tdm.doc_ids)


def fold_in_query(model: LsiModel, query: QueryVector) -> np.ndarray:
    """Project a query's count vector into the model's topic space."""
    if query.counts.shape != (model.u.shape[0],):
        raise ParameterError("query vector length does not match vocabulary")
    return (model.u.T @ query.counts.astype(np.float64)) / model.s


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    """Cosine of the angle between two vectors; 0.0 if either has zero norm."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ParameterError("cosine requires two vectors of equal length")
    # dividing out the largest component keeps the squared terms away from
    # the under/overflow range, where norms lose precision
    scale_a = np.abs(a).max() if a.size else 0.0
    scale_b = np.abs(b).max() if b.size else 0.0
    if scale_a == 0.0 or scale_b == 0.0:
        return 0.0
    a = a / scale_a
    b = b / scale_b
    return float(a.dot(b) / (np.linalg.norm(a) * np.linalg.norm(b)))


def compute_csm(model: LsiModel, queries: list[QueryVector]) -> SimilarityMatrix:
    """Score every query against every corpus document in topic space."""
    scores = np.zeros((len(queries), len(model.doc_ids)))
    for row, query in enumerate(queries):
        folded = fold_in_query(model, query)
        for column in range(len(model.doc_ids)):
            scores[row, column] = cosine(folded, model.v[column])
    return SimilarityMatrix(scores, tuple(q.query_id for q in queries), model.doc_ids)


def _csv(header: list[str], rows) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return out.getvalue()


def tdm_to_csv(tdm: TermDocumentMatrix, vocabulary: Vocabulary) -> str:
    """Render the count matrix with terms as rows, report ids as columns."""
    rows = (
        [term] + [int(n) for n in tdm.counts[i]]
        for i, term in enumerate(vocabulary.terms)
    )
    return _csv(["term", *tdm.doc_ids], rows)


def tqm_to_csv(queries: list[QueryVector], vocabulary: Vocabulary) -> str:
    """Render query vectors with terms as rows, query ids as columns."""
    rows = (
        [term] + [int(q.counts[i]) for q in queries]
        for i, term in enumerate(vocabulary.terms)
    )
    return _csv(["term", *[q.query_id for q in queries]], rows)


def csm_to_csv(csm: SimilarityMatrix) -> str:
    """Render similarity scores with queries as rows, report ids as columns."""
    rows = (
        [query_id] + [repr(float(v)) for v in csm.scores[i]]
        for i, query_id in enumerate(csm.query_ids)
    )
    return _csv(["query", *csm.doc_ids], rows)
