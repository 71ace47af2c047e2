"""Bug report records, Bugzilla XML parsing, and the on-disk corpus store.

The XML dialect is the standard Bugzilla export: a root element containing
repeated <bug> elements.  Report ids come from <bug_id> (or <id>), the
summary from <short_desc> (or <summary>), and the description from the
first <long_desc>/<thetext> comment (or a plain <description> element).
Standard XML entities are unescaped by the parser; nothing else is.

The store is a plain text file: a version header line followed by one JSON
object per report, in corpus order.  Writes are atomic (write to a
temporary file in the same directory, then rename over the target).
"""

from __future__ import annotations

import json
import os
import re
import tempfile
import xml.etree.ElementTree as ET
from dataclasses import dataclass

from .errors import (
    DuplicateIdError,
    ParameterError,
    RecordError,
    StoreFormatError,
    StoreIOError,
    StoreNotFoundError,
    XmlParseError,
)

STORE_HEADER = "dupseek-corpus v1"

_ENCODING_DECL = re.compile(rb"^\s*<\?xml[^>]*?encoding\s*=\s*[\"']([^\"']+)[\"']")


@dataclass(frozen=True)
class BugReport:
    """One tracker issue: id, one-line summary, free-text description.

    Ids are kept verbatim as strings, so leading zeros survive.  The
    summary must contain something other than whitespace; the description
    may be empty.
    """

    id: str
    summary: str
    description: str = ""

    def __post_init__(self):
        if not self.id:
            raise ParameterError("report id must be non-empty")
        if not self.summary.strip():
            raise ParameterError(f"report {self.id}: summary must be non-empty")


@dataclass(frozen=True)
class Corpus:
    """An ordered, immutable collection of reports with unique ids."""

    reports: tuple[BugReport, ...] = ()

    def __post_init__(self):
        seen = set()
        duplicates = []
        for report in self.reports:
            if report.id in seen:
                duplicates.append(report.id)
            seen.add(report.id)
        if duplicates:
            raise DuplicateIdError(duplicates)

    def __len__(self) -> int:
        return len(self.reports)

    def __iter__(self):
        return iter(self.reports)

    def ids(self) -> tuple[str, ...]:
        return tuple(report.id for report in self.reports)

    def get(self, report_id: str) -> BugReport | None:
        for report in self.reports:
            if report.id == report_id:
                return report
        return None

    def add(self, report: BugReport) -> "Corpus":
        """Return a new corpus with the report appended."""
        return Corpus(self.reports + (report,))

    def remove(self, report_id: str) -> "Corpus":
        """Return a new corpus without the named report."""
        return Corpus(tuple(r for r in self.reports if r.id != report_id))


def _first_text(element: ET.Element, *tags: str) -> str | None:
    for tag in tags:
        child = element.find(tag)
        if child is not None and child.text is not None:
            return child.text
    return None


def _description_of(bug: ET.Element) -> str:
    comment = bug.find("long_desc")
    if comment is not None:
        text = comment.findtext("thetext")
        if text is not None:
            return text.strip()
    text = bug.findtext("description")
    return text.strip() if text is not None else ""


def parse_bugzilla_xml(raw: bytes) -> list[BugReport]:
    """Parse a Bugzilla XML export into reports, in document order.

    Raises XmlParseError for malformed XML or a non-UTF-8 encoding
    declaration, RecordError when a bug element lacks an id or summary,
    and DuplicateIdError when two bug elements share an id.
    """
    declared = _ENCODING_DECL.match(raw)
    if declared is not None:
        encoding = declared.group(1).decode("ascii", "replace").lower()
        if encoding not in ("utf-8", "utf8"):
            raise XmlParseError(f"unsupported encoding {encoding!r}, expected UTF-8")
    try:
        root = ET.fromstring(raw)
    except ET.ParseError as exc:
        line, column = exc.position
        raise XmlParseError(f"malformed XML: {exc.msg}", line, column) from exc

    reports = []
    seen = set()
    duplicates = []
    for index, bug in enumerate(root.iter("bug")):
        bug_id = _first_text(bug, "bug_id", "id")
        if bug_id is None or not bug_id.strip():
            raise RecordError("missing bug id", index)
        bug_id = bug_id.strip()
        summary = _first_text(bug, "short_desc", "summary")
        if summary is None or not summary.strip():
            raise RecordError(f"bug {bug_id}: missing summary", index)
        if bug_id in seen:
            duplicates.append(bug_id)
        seen.add(bug_id)
        reports.append(BugReport(bug_id, summary.strip(), _description_of(bug)))
    if duplicates:
        raise DuplicateIdError(duplicates)
    return reports


def save_corpus(corpus: Corpus, path) -> None:
    """Write the corpus atomically: header line, then one JSON record per line."""
    path = os.fspath(path)
    directory = os.path.dirname(path) or "."
    lines = [STORE_HEADER]
    for report in corpus:
        lines.append(json.dumps(
            {"id": report.id, "summary": report.summary, "description": report.description},
            ensure_ascii=False,
        ))
    payload = "\n".join(lines) + "\n"
    try:
        fd, temp_path = tempfile.mkstemp(dir=directory, prefix=".dupseek-", suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as handle:
                handle.write(payload)
            os.replace(temp_path, path)
        except BaseException:
            os.unlink(temp_path)
            raise
    except OSError as exc:
        raise StoreIOError(path, exc) from exc


def load_corpus(path) -> Corpus:
    """Read a store file back into a corpus.

    Raises StoreNotFoundError if the file is missing, StoreFormatError on
    any format violation, and DuplicateIdError on repeated ids.
    """
    path = os.fspath(path)
    if not os.path.exists(path):
        raise StoreNotFoundError(path)
    try:
        with open(path, encoding="utf-8") as handle:
            # split on newline only: JSON escapes real newlines, but leaves
            # other unicode line separators (U+2028 etc.) raw in records
            lines = handle.read().split("\n")
    except OSError as exc:
        raise StoreIOError(path, exc) from exc
    if not lines or lines[0] != STORE_HEADER:
        raise StoreFormatError(f"missing header {STORE_HEADER!r}", path, line=1)
    reports = []
    for number, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise StoreFormatError(f"invalid JSON record: {exc.msg}", path, line=number) from exc
        if not isinstance(record, dict):
            raise StoreFormatError("record is not an object", path, line=number)
        if set(record) != {"id", "summary", "description"}:
            raise StoreFormatError(
                "record must have exactly the keys id, summary, description",
                path, line=number,
            )
        if not all(isinstance(record[key], str) for key in record):
            raise StoreFormatError("record fields must be strings", path, line=number)
        try:
            reports.append(BugReport(record["id"], record["summary"], record["description"]))
        except ParameterError as exc:
            raise StoreFormatError(str(exc), path, line=number) from exc
    return Corpus(tuple(reports))
