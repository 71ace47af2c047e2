"""Graphviz DOT renderings of check results.

Two graph kinds: the similarity star (query in the center, one edge per
corpus report, labeled with the score to five decimals, duplicate edges
drawn bold) and the concept poset (one box per concept listing what it
introduces, edges from child to parent).  Output is deterministic for a
given input, byte for byte.
"""

from __future__ import annotations

from .fca import AocPoset
from .pipeline import RetrievalReport


def _quote(name: str) -> str:
    escaped = name.replace("\\", "\\\\").replace('"', '\\"')
    return f'"{escaped}"'


def similarity_to_dot(report: RetrievalReport) -> str:
    """Star graph of one check: query node, one scored edge per report."""
    duplicate_ids = {
        doc_id for doc_id, _ in (report.duplicates.matches if report.duplicates else ())
    }
    lines = [
        "digraph similarity {",
        "  rankdir=LR;",
        '  node [shape=ellipse, fontname="Helvetica"];',
        f"  {_quote(report.query_id)} [shape=doublecircle];",
    ]
    for doc_id, score in report.ranked:
        attributes = [f'label="{score:.5f}"']
        if doc_id in duplicate_ids:
            attributes.append("style=bold")
            attributes.append("color=red")
        lines.append(
            f"  {_quote(report.query_id)} -> {_quote(doc_id)} [{', '.join(attributes)}];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def poset_to_dot(poset: AocPoset) -> str:
    """Concept poset with introduced objects and attributes per node."""
    lines = [
        "digraph concepts {",
        "  rankdir=BT;",
        '  node [shape=record, fontname="Helvetica"];',
    ]
    for index in range(len(poset.concepts)):
        objects = ", ".join(
            sorted(poset.introduced_objects[index], key=lambda i: (len(i), i))
        )
        attributes = ", ".join(
            sorted(poset.introduced_attributes[index], key=lambda i: (len(i), i))
        )
        label = f"Concept_{index}|{attributes}|{objects}"
        lines.append(f"  concept_{index} [label={_quote(label)}];")
    for child, parent in sorted(poset.covers()):
        lines.append(f"  concept_{child} -> concept_{parent};")
    lines.append("}")
    return "\n".join(lines) + "\n"
