"""Shared fixtures: the drawing-application corpus and an XML builder."""

from __future__ import annotations

from xml.sax.saxutils import escape

import pytest
from hypothesis import settings

from dupseek.ingest import BugReport, Corpus, save_corpus

settings.register_profile("dupseek", deadline=None)
settings.load_profile("dupseek")

# Six reports against a drawing application, plus the incoming seventh
# report that duplicates 000006.
DSA_CORPUS_REPORTS = (
    BugReport(
        "000001",
        "The PDF viewer is very slow for line drawings.",
        "PDF is very slow to load. The text parts of the PDF appear fast, "
        "but every line drawing is very slow. While the expected result is "
        "that PDFs with line drawings should show up a lot faster without "
        "any delay.",
    ),
    BugReport(
        "000002",
        "Images of the myOval() and draw() functions are not displayed.",
        "The images in the draw() and myOval() functions are not displayed "
        "well. While the expected result is that for every condition in the "
        "draw() and myOval() functions, the images must be displayed well.",
    ),
    BugReport(
        "000003",
        "In some specific cases, the fillText function doesn't draw anything.",
        "In a very complex environment with a lot of sketches, the fillText "
        "method sometimes doesn't run probably and produces nothing. Thus, "
        "nothing was printed in several situations.",
    ),
    BugReport(
        "000004",
        "Drawing text in 2D is slow.",
        "The function of the 2D text doesn't efficiently scale to support "
        "drawing a large number of 2D texts on the screen at once. The "
        "performance of the DSA should be comparable to other drawing "
        "applications.",
    ),
    BugReport(
        "000005",
        "Problem with the drawing of 1px-wide lines.",
        "The inner triangle is not 1 pixel wide and is gray rather than "
        "blue. The draw() function should draw a one-pixel-wide line.",
    ),
    BugReport(
        "000006",
        "No Scrolling of the art site contents by utilizing the mouse wheel.",
        "Sometimes you cannot use the mouse wheel to scroll through the art "
        "site's contents. The mouse wheel is not running well on some art "
        "sites.",
    ),
)

DSA_QUERY = BugReport(
    "000007",
    "Incapable of using the mouse wheel to scroll on an art site.",
    "Scrolling the contents of the art site by clicking the scroll wheel "
    "of the mouse device does not always work well.",
)


def bugzilla_export(reports, declaration: bool = True) -> bytes:
    """Render reports as a minimal Bugzilla XML export."""
    lines = ['<?xml version="1.0" encoding="UTF-8"?>'] if declaration else []
    lines.append("<bugzilla>")
    for report in reports:
        lines.append("  <bug>")
        lines.append(f"    <bug_id>{escape(report.id)}</bug_id>")
        lines.append(f"    <short_desc>{escape(report.summary)}</short_desc>")
        if report.description:
            lines.append("    <long_desc>")
            lines.append(f"      <thetext>{escape(report.description)}</thetext>")
            lines.append("    </long_desc>")
        lines.append("  </bug>")
    lines.append("</bugzilla>")
    return "\n".join(lines).encode("utf-8")


@pytest.fixture
def dsa_corpus() -> Corpus:
    return Corpus(DSA_CORPUS_REPORTS)


@pytest.fixture
def dsa_store(tmp_path):
    path = tmp_path / "dsa.store"
    save_corpus(Corpus(DSA_CORPUS_REPORTS), path)
    return path
