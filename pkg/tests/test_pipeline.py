"""The end-to-end duplicate check and its report format."""

import json

import numpy as np
import pytest

from dupseek.errors import ParameterError
from dupseek.fca import DuplicateEntry
from dupseek.ingest import BugReport, Corpus
from dupseek.lsi import SimilarityMatrix
from dupseek.pipeline import (
    DEFAULT_THRESHOLD,
    REPORT_FORMAT,
    VERDICT_DUPLICATE,
    VERDICT_UNIQUE,
    CheckConfig,
    Diagnostics,
    RetrievalReport,
    check_report,
    rank_scores,
    report_from_json,
    run_check,
    similarity_matrix_of,
)
from dupseek.stopwords import StopWordList

from conftest import DSA_CORPUS_REPORTS, DSA_QUERY


class TestCheckConfig:
    def test_defaults(self):
        config = CheckConfig()
        assert config.threshold == DEFAULT_THRESHOLD == 0.80
        assert config.topics is None

    @pytest.mark.parametrize("threshold", [-0.01, 1.01, 2.0])
    def test_threshold_must_be_a_proportion(self, threshold):
        with pytest.raises(ParameterError):
            CheckConfig(threshold=threshold)

    @pytest.mark.parametrize("topics", [0, -3])
    def test_topics_must_be_positive(self, topics):
        with pytest.raises(ParameterError):
            CheckConfig(topics=topics)

    def test_boundary_thresholds_allowed(self):
        assert CheckConfig(threshold=0.0).threshold == 0.0
        assert CheckConfig(threshold=1.0).threshold == 1.0


class TestRunCheckOnBundledCorpus:
    @pytest.fixture
    def outcome(self, dsa_corpus):
        return run_check(dsa_corpus, DSA_QUERY)

    def test_verdict_and_top_match(self, outcome):
        report, _ = outcome
        assert report.verdict == VERDICT_DUPLICATE
        assert report.query_id == "000007"
        top_id, top_score = report.ranked[0]
        assert top_id == "000006"
        assert top_score >= 0.95
        assert all(abs(score) <= 0.10 for _, score in report.ranked[1:])

    def test_duplicate_entry(self, outcome):
        report, _ = outcome
        assert report.duplicates is not None
        assert [doc_id for doc_id, _ in report.duplicates.matches] == ["000006"]

    def test_diagnostics(self, outcome):
        report, _ = outcome
        assert report.diagnostics == Diagnostics(
            dropped_terms=5,
            effective_topics=6,
            threshold=0.80,
            degenerate=False,
        )

    def test_ranking_covers_whole_corpus(self, outcome):
        report, _ = outcome
        assert sorted(doc_id for doc_id, _ in report.ranked) == [
            f"00000{n}" for n in range(1, 7)
        ]

    def test_artifacts_expose_the_intermediates(self, outcome):
        report, artifacts = outcome
        assert artifacts.csm.query_ids == ("000007",)
        assert artifacts.csm.doc_ids == tuple(r.id for r in DSA_CORPUS_REPORTS)
        assert artifacts.model.k == 6
        assert artifacts.tdm.counts.shape[1] == 6
        assert len(artifacts.poset.concepts) >= 1
        assert artifacts.query.dropped_terms == report.diagnostics.dropped_terms

    def test_check_report_is_the_report_half(self, dsa_corpus, outcome):
        report, _ = outcome
        assert check_report(dsa_corpus, DSA_QUERY) == report


class TestRunCheckBehaviour:
    def test_identical_text_scores_one(self, dsa_corpus):
        twin = BugReport(
            "000099",
            DSA_CORPUS_REPORTS[2].summary,
            DSA_CORPUS_REPORTS[2].description,
        )
        report = check_report(dsa_corpus, twin)
        assert report.verdict == VERDICT_DUPLICATE
        top_id, top_score = report.ranked[0]
        assert top_id == "000003"
        assert top_score >= 1.0 - 1e-6

    def test_gibberish_query_is_degenerate_and_unique(self, dsa_corpus):
        report = check_report(dsa_corpus, BugReport("q", "zzzz qqqq"))
        assert report.verdict == VERDICT_UNIQUE
        assert report.duplicates is None
        assert report.diagnostics.degenerate
        assert report.diagnostics.dropped_terms == 2
        assert all(score == 0.0 for _, score in report.ranked)

    def test_tiny_corpus_rejected(self):
        lone = Corpus((BugReport("1", "only report"),))
        with pytest.raises(ParameterError):
            check_report(lone, BugReport("q", "query text"))
        with pytest.raises(ParameterError):
            check_report(Corpus(()), BugReport("q", "query text"))

    def test_explicit_topics_beyond_matrix_rejected(self, dsa_corpus):
        with pytest.raises(ParameterError):
            check_report(dsa_corpus, DSA_QUERY, CheckConfig(topics=999))

    def test_explicit_topics_used(self, dsa_corpus):
        report = check_report(dsa_corpus, DSA_QUERY, CheckConfig(topics=3))
        assert report.diagnostics.effective_topics == 3

    def test_rank_deficient_corpus_warns_and_shrinks_topics(self):
        corpus = Corpus((
            BugReport("a", "blue widget crashes the parser"),
            BugReport("b", "blue widget crashes the parser"),
        ))
        query = BugReport("q", "widget parser crash report")
        with pytest.warns(UserWarning, match="rank"):
            report = check_report(corpus, query)
        assert report.diagnostics.effective_topics == 1

    def test_stop_listing_every_query_term_degenerates(self, dsa_corpus):
        config = CheckConfig(stop_words=StopWordList(frozenset({"mouse", "wheel"})))
        report = check_report(
            dsa_corpus, BugReport("q", "Mouse wheel mouse!"), config
        )
        assert report.diagnostics.degenerate
        assert report.verdict == VERDICT_UNIQUE

    def test_unreachable_threshold_means_unique(self, dsa_corpus):
        report = check_report(dsa_corpus, DSA_QUERY, CheckConfig(threshold=0.999))
        assert report.verdict == VERDICT_UNIQUE
        assert report.duplicates is None
        assert report.ranked[0][0] == "000006"

    def test_permissive_threshold_still_finds_only_the_twin(self, dsa_corpus):
        report = check_report(dsa_corpus, DSA_QUERY, CheckConfig(threshold=0.5))
        assert report.verdict == VERDICT_DUPLICATE
        assert [doc_id for doc_id, _ in report.duplicates.matches] == ["000006"]


class TestRankScores:
    def test_orders_strongest_first_breaking_ties_by_id(self):
        csm = SimilarityMatrix(
            np.array([[0.5, 0.9, 0.5, 0.1]]),
            ("q",),
            ("10", "7", "2", "9"),
        )
        assert rank_scores(csm) == (
            ("7", 0.9), ("2", 0.5), ("10", 0.5), ("9", 0.1)
        )

    def test_short_ids_sort_before_long_ones_on_ties(self):
        csm = SimilarityMatrix(
            np.array([[0.3, 0.3]]), ("q",), ("100", "99")
        )
        assert rank_scores(csm) == (("99", 0.3), ("100", 0.3))


class TestRetrievalReportInvariant:
    DIAG = Diagnostics(0, 2, 0.8, False)

    def test_duplicate_verdict_requires_matches(self):
        with pytest.raises(ParameterError):
            RetrievalReport("q", (("a", 0.9),), VERDICT_DUPLICATE, None, self.DIAG)
        with pytest.raises(ParameterError):
            RetrievalReport(
                "q", (("a", 0.9),), VERDICT_DUPLICATE,
                DuplicateEntry("q", ()), self.DIAG,
            )

    def test_unique_verdict_forbids_matches(self):
        with pytest.raises(ParameterError):
            RetrievalReport(
                "q", (("a", 0.9),), VERDICT_UNIQUE,
                DuplicateEntry("q", (("a", 0.9),)), self.DIAG,
            )

    def test_consistent_reports_construct(self):
        RetrievalReport("q", (("a", 0.2),), VERDICT_UNIQUE, None, self.DIAG)
        RetrievalReport(
            "q", (("a", 0.9),), VERDICT_DUPLICATE,
            DuplicateEntry("q", (("a", 0.9),)), self.DIAG,
        )


class TestReportSerialization:
    def test_duplicate_report_round_trips(self, dsa_corpus):
        report = check_report(dsa_corpus, DSA_QUERY)
        assert report_from_json(report.to_json()) == report

    def test_unique_report_round_trips(self, dsa_corpus):
        report = check_report(dsa_corpus, BugReport("q", "zzzz qqqq"))
        assert report_from_json(report.to_json()) == report

    def test_json_shape(self, dsa_corpus):
        report = check_report(dsa_corpus, DSA_QUERY)
        data = json.loads(report.to_json())
        assert data["format"] == REPORT_FORMAT == "dupseek-report v1"
        assert data["verdict"] == "duplicate"
        assert data["query_id"] == "000007"
        assert len(data["matches"]) == 6
        assert data["duplicates"][0]["id"] == "000006"
        assert set(data["diagnostics"]) == {
            "dropped_terms", "effective_topics", "threshold", "degenerate"
        }
        assert report.to_json().endswith("\n")

    def test_invalid_json_rejected(self):
        with pytest.raises(ParameterError):
            report_from_json("{not json")

    def test_wrong_format_marker_rejected(self):
        with pytest.raises(ParameterError):
            report_from_json('{"format": "something else"}')

    def test_missing_fields_rejected(self):
        with pytest.raises(ParameterError):
            report_from_json(
                '{"format": "dupseek-report v1", "query_id": "q"}'
            )


class TestSimilarityMatrixOf:
    def test_reconstruction_matches_pipeline_scores(self, dsa_corpus):
        report, artifacts = run_check(dsa_corpus, DSA_QUERY)
        rebuilt = similarity_matrix_of(report)
        assert rebuilt.query_ids == ("000007",)
        assert set(rebuilt.doc_ids) == set(artifacts.csm.doc_ids)
        original = dict(zip(artifacts.csm.doc_ids, artifacts.csm.scores[0]))
        for doc_id, score in zip(rebuilt.doc_ids, rebuilt.scores[0]):
            assert score == pytest.approx(original[doc_id], abs=1e-12)
