"""Formal concept analysis over binarized similarity scores.

A formal context relates objects (queries) to attributes (corpus reports):
object o bears attribute a when their similarity reaches the decision
threshold.  The two derivation operators are

    objects'    -> the attributes shared by every object in the set
    attributes' -> the objects bearing every attribute in the set

and a concept is a pair (extent, intent) where each side is exactly the
derivation of the other.  Rather than the full concept lattice, we build
the poset of object concepts (o'', o') and attribute concepts (a', a''),
which is at most |objects| + |attributes| concepts and is where the
duplicate structure lives: a query sits in a concept with a non-empty
intent exactly when it has at least one match over the threshold.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .lsi import SimilarityMatrix


@dataclass(frozen=True)
class FormalContext:
    """A binary relation between query ids and corpus report ids."""

    objects: tuple[str, ...]
    attributes: tuple[str, ...]
    relation: np.ndarray

    def __post_init__(self):
        if self.relation.shape != (len(self.objects), len(self.attributes)):
            raise ParameterError("relation shape does not match object/attribute ids")
        if not np.isin(self.relation, (0, 1)).all():
            raise ParameterError("relation entries must be 0 or 1")
        if len(set(self.objects)) != len(self.objects):
            raise ParameterError("object ids must be unique")
        if len(set(self.attributes)) != len(self.attributes):
            raise ParameterError("attribute ids must be unique")


@dataclass(frozen=True)
class Concept:
    """A maximal rectangle of the relation: extent x intent."""

    extent: frozenset[str]
    intent: frozenset[str]


@dataclass(frozen=True)
class AocPoset:
    """Object and attribute concepts, ordered by extent inclusion.

    concepts are sorted largest extent first; order holds every pair
    (child, parent) of concept indices with extent(child) a strict subset
    of extent(parent).  introduced_objects[i] are the objects whose object
    concept is concepts[i] (and symmetrically for attributes); every
    concept introduces at least one object or attribute.
    """

    concepts: tuple[Concept, ...]
    order: tuple[tuple[int, int], ...]
    introduced_objects: tuple[frozenset[str], ...]
    introduced_attributes: tuple[frozenset[str], ...]

    def covers(self) -> list[tuple[int, int]]:
        """The transitive reduction of order: immediate child-parent pairs."""
        ancestors = {pair for pair in self.order}
        result = []
        for child, parent in self.order:
            if any(
                (child, mid) in ancestors and (mid, parent) in ancestors
                for mid in range(len(self.concepts))
            ):
                continue
            result.append((child, parent))
        return result


@dataclass(frozen=True)
class DuplicateEntry:
    """One query together with every report it matched at the threshold."""

    query_id: str
    matches: tuple[tuple[str, float], ...]


@dataclass(frozen=True)
class DuplicateList:
    """All queries that matched something, with their matches and scores."""

    entries: tuple[DuplicateEntry, ...]

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def get(self, query_id: str) -> DuplicateEntry | None:
        for entry in self.entries:
            if entry.query_id == query_id:
                return entry
        return None


def binarize(csm: SimilarityMatrix, threshold: float) -> FormalContext:
    """Relate each query to the reports whose score reaches the threshold."""
    if not 0.0 <= threshold <= 1.0:
        raise ParameterError(f"threshold must lie in [0, 1], got {threshold}")
    relation = (csm.scores >= threshold).astype(np.int8)
    return FormalContext(csm.query_ids, csm.doc_ids, relation)


def _object_indices(context: FormalContext, objects) -> list[int]:
    positions = {o: i for i, o in enumerate(context.objects)}
    try:
        return [positions[o] for o in objects]
    except KeyError as exc:
        raise ParameterError(f"unknown object id: {exc.args[0]!r}") from exc


def _attribute_indices(context: FormalContext, attributes) -> list[int]:
    positions = {a: i for i, a in enumerate(context.attributes)}
    try:
        return [positions[a] for a in attributes]
    except KeyError as exc:
        raise ParameterError(f"unknown attribute id: {exc.args[0]!r}") from exc


def derive_objects(context: FormalContext, objects) -> frozenset[str]:
    """Attributes shared by every object in the set (all, for the empty set)."""
    rows = _object_indices(context, objects)
    shared = context.relation[rows].all(axis=0) if rows else np.ones(
        len(context.attributes), dtype=bool
    )
    return frozenset(a for a, hit in zip(context.attributes, shared) if hit)


def derive_attributes(context: FormalContext, attributes) -> frozenset[str]:
    """Objects bearing every attribute in the set (all, for the empty set)."""
    columns = _attribute_indices(context, attributes)
    shared = context.relation[:, columns].all(axis=1) if columns else np.ones(
        len(context.objects), dtype=bool
    )
    return frozenset(o for o, hit in zip(context.objects, shared) if hit)


def build_aoc_poset(context: FormalContext) -> AocPoset:
    """Build the poset of object concepts and attribute concepts."""
    object_concept = {}
    for o in context.objects:
        intent = derive_objects(context, [o])
        object_concept[o] = Concept(derive_attributes(context, intent), intent)
    attribute_concept = {}
    for a in context.attributes:
        extent = derive_attributes(context, [a])
        attribute_concept[a] = Concept(extent, derive_objects(context, extent))

    distinct = set(object_concept.values()) | set(attribute_concept.values())
    concepts = tuple(sorted(
        distinct,
        key=lambda c: (-len(c.extent), sorted(c.extent), sorted(c.intent)),
    ))
    position = {concept: i for i, concept in enumerate(concepts)}

    order = tuple(
        (child, parent)
        for child, lower in enumerate(concepts)
        for parent, upper in enumerate(concepts)
        if child != parent and lower.extent < upper.extent
    )

    introduced_objects = [set() for _ in concepts]
    for o, concept in object_concept.items():
        introduced_objects[position[concept]].add(o)
    introduced_attributes = [set() for _ in concepts]
    for a, concept in attribute_concept.items():
        introduced_attributes[position[concept]].add(a)

    return AocPoset(
        concepts,
        order,
        tuple(frozenset(s) for s in introduced_objects),
        tuple(frozenset(s) for s in introduced_attributes),
    )


def extract_duplicates(
    poset: AocPoset,
    csm: SimilarityMatrix,
    threshold: float,
) -> DuplicateList:
    """Read the duplicate verdicts off the poset.

    A query is a duplicate when some concept with both a non-empty extent
    and a non-empty intent contains it; its matches are all reports scored
    at or above the threshold, strongest first.
    """
    flagged = set()
    for concept in poset.concepts:
        if concept.extent and concept.intent:
            flagged.update(concept.extent)
    entries = []
    for row, query_id in enumerate(csm.query_ids):
        if query_id not in flagged:
            continue
        matches = [
            (doc_id, float(score))
            for doc_id, score in zip(csm.doc_ids, csm.scores[row])
            if score >= threshold
        ]
        matches.sort(key=lambda m: (-m[1], (len(m[0]), m[0])))
        entries.append(DuplicateEntry(query_id, tuple(matches)))
    return DuplicateList(tuple(entries))
