"""Explicitation: fill in a missing attribute or missing values by matching
the known half of a pair against explicit pairs already in the base.

infer_attributes answers "which attributes carry these terms?", infer_values
answers "which value lists does this attribute carry?", and explicate
combines both to turn one implicit annotation into ranked explicit
candidates.  Only explicit pairs (attribute present, values non-empty) count
as evidence; rank annotations on values are ignored when matching terms.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace

from .errors import NoCandidatesError, NotImplicitError
from .model import (
    AnnotationObject,
    AttributeName,
    AVPair,
    Explicitness,
    Term,
    Value,
    classify,
    is_explicit_pair,
    normalize_attribute,
    normalize_term,
)
from .store import KnowledgeBase


@dataclass(frozen=True, slots=True)
class AttributeCandidate:
    """An attribute that could own the given terms, with its evidence."""

    attribute: AttributeName
    support: tuple[str, ...]  # object ids, sorted

    @property
    def support_count(self) -> int:
        return len(self.support)


@dataclass(frozen=True, slots=True)
class ValueCandidate:
    """A stored value list for an attribute, with its evidence."""

    values: tuple[Value, ...]  # verbatim, ranks included
    support: tuple[str, ...]  # object ids, sorted

    @property
    def support_count(self) -> int:
        return len(self.support)


def _covering_objects(kb: KnowledgeBase, attribute: AttributeName, terms: list[Term]) -> set[str]:
    """Objects holding one explicit pair under attribute covering all terms."""
    candidates: set[str] | None = None
    for term in terms:
        posting = {oid for attr, oid in kb.index_by_term.get(term, ()) if attr == attribute}
        candidates = posting if candidates is None else candidates & posting
        if not candidates:
            return set()
    needed = set(terms)
    covering: set[str] = set()
    for oid in candidates:
        for pair in kb.objects[oid].pairs:
            if pair.attribute == attribute and needed <= pair.terms():
                covering.add(oid)
                break
    return covering


def infer_attributes(kb: KnowledgeBase, terms: list[str]) -> list[AttributeCandidate]:
    """Attributes under which some object carries every given term.

    A candidate needs at least one object with a single explicit pair whose
    value terms include all of terms (ranks ignored), so support is never
    empty.  Candidates are ordered by support count descending, then by
    attribute name ascending.  An empty result is a legal outcome.
    """
    if not terms:
        raise ValueError("at least one term is required")
    wanted = [normalize_term(t) for t in terms]
    first = kb.index_by_term.get(wanted[0], set())
    out: list[AttributeCandidate] = []
    for attribute in {attr for attr, _ in first}:
        covering = _covering_objects(kb, attribute, wanted)
        if covering:
            out.append(AttributeCandidate(attribute, tuple(sorted(covering))))
    out.sort(key=lambda c: (-c.support_count, c.attribute))
    return out


def _values_sort_key(values: tuple[Value, ...]) -> tuple:
    return tuple((v.term, v.rank is not None, v.rank or 0) for v in values)


def infer_values(kb: KnowledgeBase, attribute: str) -> list[ValueCandidate]:
    """Distinct value lists stored under attribute, with their evidence.

    Lists are compared verbatim (terms, ranks, order); candidates are
    ordered by support count descending, then by first term ascending,
    with the full list as a final deterministic tie-break.
    """
    attr = normalize_attribute(attribute)
    groups: dict[tuple[Value, ...], set[str]] = {}
    for oid in kb.index_by_attribute.get(attr, ()):
        for pair in kb.objects[oid].pairs:
            if pair.attribute == attr and pair.values:
                groups.setdefault(pair.values, set()).add(oid)
    out = [ValueCandidate(values, tuple(sorted(ids))) for values, ids in groups.items()]
    out.sort(key=lambda c: (-c.support_count, c.values[0].term, _values_sort_key(c.values)))
    return out


@dataclass(frozen=True, slots=True)
class Explication:
    """One explicit candidate for an implicit annotation.

    support holds, for each pair of the original object (same order), the
    object ids that justified the substitution; pairs that were already
    explicit get an empty tuple.
    """

    object: AnnotationObject
    support: tuple[tuple[str, ...], ...]


def explicate(kb: KnowledgeBase, obj: AnnotationObject, cap: int = 16) -> list[Explication]:
    """Turn an implicit annotation into ranked explicit candidates.

    Each deficient pair is substituted independently: a missing attribute
    draws from infer_attributes over the pair's terms, missing values draw
    from infer_values on the pair's attribute (stored lists verbatim,
    ranks included).  Candidates combine per-pair choices in rank order,
    cartesian across pairs, truncated to cap.  Every returned object
    classifies as explicit; id, target and meta are kept.

    Raises NotImplicitError unless classify(obj) is implicit, and
    NoCandidatesError (with the offending pair index) when some deficient
    pair finds no evidence at all.
    """
    if cap < 1:
        raise ValueError("cap must be at least 1")
    state = classify(obj)
    if state is not Explicitness.IMPLICIT:
        raise NotImplicitError(f"object {obj.id} is {state.value}, not implicit")

    choices: list[list[tuple[AVPair, tuple[str, ...]]]] = []
    for index, pair in enumerate(obj.pairs):
        if is_explicit_pair(pair):
            choices.append([(pair, ())])
        elif pair.attribute is None:
            found = infer_attributes(kb, [v.term for v in pair.values])
            if not found:
                raise NoCandidatesError(index)
            choices.append([(AVPair(c.attribute, pair.values), c.support) for c in found])
        else:
            found = infer_values(kb, pair.attribute)
            if not found:
                raise NoCandidatesError(index)
            choices.append([(AVPair(pair.attribute, c.values), c.support) for c in found])

    out: list[Explication] = []
    for combo in itertools.islice(itertools.product(*choices), cap):
        pairs = tuple(pair for pair, _ in combo)
        support = tuple(ids for _, ids in combo)
        out.append(Explication(replace(obj, pairs=pairs), support))
    return out
