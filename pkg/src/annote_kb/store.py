"""Indexed store for annotation objects plus document/annotator registries.

The store keeps three indexes in lockstep with the object map:

    index_by_attribute   attribute -> {object id}
    index_by_term        term -> {(attribute, object id)}
    index_by_target      target id -> {object id}

Pairs without an attribute are not indexed; they carry nothing a query
could address until the object is explicated.

Every stored annotation is also registered as a tertiary document, so an
annotation can itself be annotated.  Targets that name nothing yet are
registered as primary documents.  Target chains are kept acyclic, which
makes trace_chain terminate.

A KnowledgeBase instance expects a single writer; hand readers a copy()
snapshot when writes may happen concurrently.
"""

from __future__ import annotations

from .errors import (
    CyclicTargetError,
    DuplicateIdError,
    InvalidObjectError,
    UnknownIdError,
)
from .model import (
    AnnotationObject,
    AnnotatorProfile,
    AttributeName,
    DocumentRecord,
    DocumentTier,
    Explicitness,
    Value,
    classify,
    is_explicit_pair,
)


class KnowledgeBase:
    """Annotation objects, documents and annotators under one roof."""

    def __init__(self) -> None:
        self.objects: dict[str, AnnotationObject] = {}
        self.documents: dict[str, DocumentRecord] = {}
        self.annotators: dict[str, AnnotatorProfile] = {}
        self.index_by_attribute: dict[AttributeName, set[str]] = {}
        self.index_by_term: dict[str, set[tuple[AttributeName, str]]] = {}
        self.index_by_target: dict[str, set[str]] = {}

    def __len__(self) -> int:
        return len(self.objects)

    def __contains__(self, object_id: str) -> bool:
        return object_id in self.objects

    def insert(self, obj: AnnotationObject) -> None:
        """Store an annotation and index its explicit half.

        Raises DuplicateIdError for a reused id, InvalidObjectError when the
        object classifies as invalid, and CyclicTargetError when following
        obj.target through existing annotations would lead back to obj.
        """
        if obj.id in self.objects:
            raise DuplicateIdError(obj.id)
        if classify(obj) is Explicitness.INVALID:
            raise InvalidObjectError(obj.id)
        self._check_acyclic(obj)

        self.objects[obj.id] = obj
        for pair in obj.pairs:
            if pair.attribute is None:
                continue
            self.index_by_attribute.setdefault(pair.attribute, set()).add(obj.id)
            for value in pair.values:
                self.index_by_term.setdefault(value.term, set()).add((pair.attribute, obj.id))
        self.index_by_target.setdefault(obj.target, set()).add(obj.id)

        # The annotation is itself a tertiary document; an unknown target
        # becomes a primary document until something says otherwise.
        self._set_tier(obj.id, DocumentTier.TERTIARY)
        if obj.target not in self.documents and obj.target not in self.objects:
            self.documents[obj.target] = DocumentRecord(obj.target, DocumentTier.PRIMARY)

    def _check_acyclic(self, obj: AnnotationObject) -> None:
        cursor = obj.target
        while cursor in self.objects:
            if cursor == obj.id:
                raise CyclicTargetError(obj.id)
            cursor = self.objects[cursor].target
        if cursor == obj.id:
            raise CyclicTargetError(obj.id)

    def _set_tier(self, doc_id: str, tier: DocumentTier) -> None:
        old = self.documents.get(doc_id)
        ref = old.content_ref if old else None
        self.documents[doc_id] = DocumentRecord(doc_id, tier, ref)

    def add_document(self, record: DocumentRecord) -> None:
        """Register or re-tier a document.

        Ids that name an annotation are pinned to the tertiary tier, and
        only annotation ids may be tertiary; violations raise ValueError.
        """
        if record.id in self.objects and record.tier is not DocumentTier.TERTIARY:
            raise ValueError(f"{record.id} is an annotation and stays tertiary")
        if record.tier is DocumentTier.TERTIARY and record.id not in self.objects:
            raise ValueError(f"{record.id} is not an annotation and cannot be tertiary")
        self.documents[record.id] = record

    def add_annotator(self, profile: AnnotatorProfile) -> None:
        self.annotators[profile.id] = profile

    def attributes_of(self, target: str) -> list[AttributeName]:
        """Attributes used by explicit pairs of annotations on target, sorted.

        Unknown targets yield an empty list.
        """
        found: set[AttributeName] = set()
        for oid in self.index_by_target.get(target, ()):
            for pair in self.objects[oid].pairs:
                if is_explicit_pair(pair):
                    found.add(pair.attribute)
        return sorted(found)

    def value_lists_of(self, target: str) -> list[tuple[Value, ...]]:
        """Value lists of explicit pairs of annotations on target.

        Lists appear in insertion order (objects first, then their pairs),
        verbatim including ranks.  Unknown targets yield an empty list.
        """
        if target not in self.index_by_target:
            return []
        out: list[tuple[Value, ...]] = []
        for obj in self.objects.values():
            if obj.target != target:
                continue
            for pair in obj.pairs:
                if is_explicit_pair(pair):
                    out.append(pair.values)
        return out

    def trace_chain(self, start: str) -> list[str]:
        """Follow targets from start down to the underlying document.

        Returns [start, ..., final target]; a plain document is its own
        chain.  Raises UnknownIdError when start names neither an object
        nor a document.  Terminates because insert keeps chains acyclic.
        """
        if start not in self.objects and start not in self.documents:
            raise UnknownIdError(start)
        chain = [start]
        cursor = start
        while cursor in self.objects:
            cursor = self.objects[cursor].target
            chain.append(cursor)
        return chain

    def copy(self) -> "KnowledgeBase":
        """Snapshot for readers; shares the immutable objects only."""
        dup = KnowledgeBase()
        dup.objects = dict(self.objects)
        dup.documents = dict(self.documents)
        dup.annotators = dict(self.annotators)
        dup.index_by_attribute = {k: set(v) for k, v in self.index_by_attribute.items()}
        dup.index_by_term = {k: set(v) for k, v in self.index_by_term.items()}
        dup.index_by_target = {k: set(v) for k, v in self.index_by_target.items()}
        return dup
