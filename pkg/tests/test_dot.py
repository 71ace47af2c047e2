"""Graphviz DOT renderings of similarity stars and concept posets."""

import numpy as np
import pytest

from dupseek.dot import poset_to_dot, similarity_to_dot
from dupseek.fca import binarize, build_aoc_poset
from dupseek.ingest import BugReport
from dupseek.lsi import SimilarityMatrix
from dupseek.pipeline import check_report, run_check

from conftest import DSA_QUERY


class TestSimilarityDot:
    @pytest.fixture
    def report(self, dsa_corpus):
        return check_report(dsa_corpus, DSA_QUERY)

    def test_overall_shape(self, report):
        dot = similarity_to_dot(report)
        lines = dot.splitlines()
        assert lines[0] == "digraph similarity {"
        assert lines[1] == "  rankdir=LR;"
        assert lines[-1] == "}"
        assert dot.endswith("}\n")

    def test_query_node_is_highlighted(self, report):
        assert '  "000007" [shape=doublecircle];' in similarity_to_dot(report).splitlines()

    def test_one_scored_edge_per_corpus_report(self, report):
        edges = [
            line for line in similarity_to_dot(report).splitlines()
            if "->" in line
        ]
        assert len(edges) == 6
        for edge in edges:
            assert edge.startswith('  "000007" -> "')
            assert 'label="' in edge

    def test_duplicate_edge_is_bold_and_red(self, report):
        lines = similarity_to_dot(report).splitlines()
        marked = [line for line in lines if "style=bold" in line]
        assert len(marked) == 1
        assert '"000006"' in marked[0]
        assert "color=red" in marked[0]
        score = report.ranked[0][1]
        assert f'label="{score:.5f}"' in marked[0]

    def test_unique_report_has_no_marked_edges(self, dsa_corpus):
        report = check_report(dsa_corpus, BugReport("q", "zzzz qqqq"))
        dot = similarity_to_dot(report)
        assert "style=bold" not in dot
        assert "color=red" not in dot
        assert dot.count('label="0.00000"') == 6

    def test_scores_are_rendered_to_five_decimals(self, report):
        dot = similarity_to_dot(report)
        for doc_id, score in report.ranked:
            assert f'label="{score:.5f}"' in dot

    def test_awkward_ids_are_quoted(self, dsa_corpus):
        twin = dsa_corpus.reports[2]
        query = BugReport('a"b\\c', twin.summary, twin.description)
        dot = similarity_to_dot(check_report(dsa_corpus, query))
        assert '  "a\\"b\\\\c" [shape=doublecircle];' in dot.splitlines()


class TestPosetDot:
    @pytest.fixture
    def poset(self, dsa_corpus):
        _, artifacts = run_check(dsa_corpus, DSA_QUERY)
        return artifacts.poset

    def test_bundled_poset_renders_exactly(self, poset):
        assert poset_to_dot(poset) == (
            "digraph concepts {\n"
            "  rankdir=BT;\n"
            '  node [shape=record, fontname="Helvetica"];\n'
            '  concept_0 [label="Concept_0|000006|000007"];\n'
            '  concept_1 [label="Concept_1|000001, 000002, 000003, 000004, 000005|"];\n'
            "  concept_1 -> concept_0;\n"
            "}\n"
        )

    def test_single_concept_context_has_no_edges(self):
        csm = SimilarityMatrix(np.ones((1, 1)), ("q",), ("a",))
        poset = build_aoc_poset(binarize(csm, 0.5))
        dot = poset_to_dot(poset)
        assert "->" not in dot
        assert dot.startswith("digraph concepts {\n")
        assert '  concept_0 [label="Concept_0|a|q"];' in dot.splitlines()

    def test_empty_relation_renders_both_trivial_concepts(self):
        csm = SimilarityMatrix(np.zeros((1, 2)), ("q",), ("a", "b"))
        dot = poset_to_dot(build_aoc_poset(binarize(csm, 0.5)))
        lines = dot.splitlines()
        assert '  concept_0 [label="Concept_0||q"];' in lines
        assert '  concept_1 [label="Concept_1|a, b|"];' in lines
        assert "  concept_1 -> concept_0;" in lines

    def test_introduced_ids_sorted_shortest_then_lexicographic(self):
        csm = SimilarityMatrix(
            np.array([[0.9, 0.9], [0.9, 0.9]]),
            ("10", "9"),
            ("100", "99"),
        )
        poset = build_aoc_poset(binarize(csm, 0.8))
        dot = poset_to_dot(poset)
        assert '[label="Concept_0|99, 100|9, 10"];' in dot


class TestDeterminism:
    def test_two_runs_render_identically(self, dsa_corpus):
        first_report, first_artifacts = run_check(dsa_corpus, DSA_QUERY)
        second_report, second_artifacts = run_check(dsa_corpus, DSA_QUERY)
        assert similarity_to_dot(first_report) == similarity_to_dot(second_report)
        assert poset_to_dot(first_artifacts.poset) == poset_to_dot(second_artifacts.poset)
