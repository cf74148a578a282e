"""Core domain model: annotation objects and their classification.

An annotation attaches one or more attribute/value pairs to a target, where
the target is a document or another annotation.  A pair may lack its
attribute or lack its values; an annotation holding such a pair is
*implicit* and must be explicated against the knowledge base before it can
answer attribute-based queries.  A pair missing both sides carries no
information at all, which makes the whole annotation *invalid*.

All attribute names and value terms are stored in a canonical spelling
produced by normalize_attribute / normalize_term, so that "Mots-Clés",
"mots clés" and "mots-clés" denote the same attribute.
"""

from __future__ import annotations

import re
import unicodedata
import uuid
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from enum import Enum
from typing import Iterable, Union

from .errors import (
    EmptyAttributeError,
    EmptyTargetError,
    EmptyTermError,
    InvalidPairError,
)

# Canonical spellings.  Terms keep their internal spacing; attribute names
# additionally collapse whitespace/hyphen runs into a single hyphen.
Term = str
AttributeName = str

_SEPARATOR_RUN = re.compile(r"[\s-]+")


def _fold(raw: str) -> str:
    # Case folding may denormalize composed characters, hence the second NFC.
    text = unicodedata.normalize("NFC", raw)
    return unicodedata.normalize("NFC", text.casefold()).strip()


def normalize_term(raw: str) -> Term:
    """Canonicalize a value term: NFC, case-folded, trimmed, accents kept.

    Raises EmptyTermError when nothing remains after trimming.
    """
    text = _fold(raw)
    if not text:
        raise EmptyTermError(f"blank term: {raw!r}")
    return text


def normalize_attribute(raw: str) -> AttributeName:
    """Canonicalize an attribute name.

    Same folding as normalize_term, then every run of whitespace and
    hyphens becomes one hyphen, so "mots clés" and "Mots-Clés" both map to
    "mots-clés".  Raises EmptyAttributeError when nothing usable remains.
    """
    text = _SEPARATOR_RUN.sub("-", _fold(raw)).strip("-")
    if not text:
        raise EmptyAttributeError(f"blank attribute: {raw!r}")
    return text


@dataclass(frozen=True, slots=True)
class Value:
    """One value term, optionally weighted by an integer rank.

    The rank is storage only: matching and inference compare terms and
    ignore ranks, but the rank survives save/load round trips.
    """

    term: Term
    rank: int | None = None


RawValue = Union[str, tuple[str, int], Value]


def as_value(raw: RawValue) -> Value:
    """Coerce "term" / ("term", rank) / Value into a normalized Value."""
    if isinstance(raw, Value):
        return Value(normalize_term(raw.term), raw.rank)
    if isinstance(raw, tuple):
        term, rank = raw
        return Value(normalize_term(term), int(rank))
    return Value(normalize_term(raw))


@dataclass(frozen=True, slots=True)
class AVPair:
    """An attribute/value pair; either side may be missing.

    attribute None means "attribute unknown"; an empty values tuple means
    "values unknown".  A pair missing both sides is never meaningful and
    makes the owning annotation invalid (see classify).
    """

    attribute: AttributeName | None
    values: tuple[Value, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.values, tuple):
            object.__setattr__(self, "values", tuple(self.values))

    def terms(self) -> set[Term]:
        return {v.term for v in self.values}


def make_pair(attribute: str | None, values: Iterable[RawValue]) -> AVPair:
    """Build a pair from raw spellings, normalizing both sides."""
    attr = None if attribute is None else normalize_attribute(attribute)
    return AVPair(attr, tuple(as_value(v) for v in values))


def is_explicit_pair(pair: AVPair) -> bool:
    """True when the pair has an attribute and at least one value."""
    return pair.attribute is not None and bool(pair.values)


class Explicitness(Enum):
    EXPLICIT = "explicit"
    IMPLICIT = "implicit"
    INVALID = "invalid"


class ActionKind(str, Enum):
    """What the annotator was doing when the annotation was made."""

    PARTAGER = "partager"
    INCLURE = "inclure"
    FILTRER = "filtrer"
    INDEXER = "indexer"
    FACILITER = "faciliter"
    ATTACHER = "attacher"
    AUTRE = "autre"


class AnnotationContext(str, Enum):
    """Work situation the annotation belongs to."""

    REQUETE = "requete"
    RECHERCHE_INFO = "recherche-info"
    INTERPRETATION = "interpretation"
    PROPOSITION = "proposition"
    AUTRE = "autre"


class DocumentTier(str, Enum):
    """Primary sources, secondary notices about them, tertiary annotations."""

    PRIMARY = "primary"
    SECONDARY = "secondary"
    TERTIARY = "tertiary"


class AnnotatorRole(str, Enum):
    VEILLEUR = "veilleur"
    ANALYSTE = "analyste"
    DECIDEUR = "decideur"
    AUTRE = "autre"


def _now_iso() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


@dataclass(frozen=True, slots=True)
class AnnotationMeta:
    """Provenance of an annotation: who made it, doing what, in what context.

    action_detail / context_detail carry the free text behind the AUTRE
    escape hatches; action_detail is mandatory when action is AUTRE.
    """

    annotator_id: str
    action: ActionKind
    context: AnnotationContext = AnnotationContext.AUTRE
    timestamp: str = field(default_factory=_now_iso)  # ISO-8601
    objective: str | None = None
    action_detail: str = ""
    context_detail: str = ""

    def __post_init__(self) -> None:
        if not self.annotator_id:
            raise ValueError("annotator_id must be non-empty")
        if self.action is ActionKind.AUTRE and not self.action_detail:
            raise ValueError("action AUTRE requires action_detail text")


@dataclass(frozen=True, slots=True)
class AnnotationObject:
    """A stored annotation: id, annotated target, pairs, provenance."""

    id: str
    target: str
    pairs: tuple[AVPair, ...]
    meta: AnnotationMeta

    def __post_init__(self) -> None:
        if not isinstance(self.pairs, tuple):
            object.__setattr__(self, "pairs", tuple(self.pairs))
        if self.id == self.target:
            raise ValueError(f"annotation {self.id} cannot annotate itself")


@dataclass(frozen=True, slots=True)
class DocumentRecord:
    """A document known to the base.  Annotations are tertiary documents."""

    id: str
    tier: DocumentTier
    content_ref: str | None = None


@dataclass(frozen=True, slots=True)
class AnnotatorProfile:
    id: str
    name: str
    role: AnnotatorRole
    role_detail: str = ""


def classify(obj: AnnotationObject) -> Explicitness:
    """Classify an annotation as explicit, implicit, or invalid.

    Explicit: every pair has an attribute and at least one value.
    Invalid: the pair list is empty, or some pair has neither side.
    Implicit: everything else (each pair has at least one side, some pair
    is missing one).  The result is total: every object lands in exactly
    one of the three states and nothing raises.
    """
    if not obj.pairs:
        return Explicitness.INVALID
    if any(p.attribute is None and not p.values for p in obj.pairs):
        return Explicitness.INVALID
    if all(is_explicit_pair(p) for p in obj.pairs):
        return Explicitness.EXPLICIT
    return Explicitness.IMPLICIT


RawPair = Union[AVPair, tuple]


def build_object(
    action: ActionKind,
    target: str,
    pairs: Iterable[RawPair],
    meta: AnnotationMeta,
    *,
    object_id: str | None = None,
) -> AnnotationObject:
    """Build a storable annotation from an annotator action on a target.

    Accepts pairs as AVPair or raw (attribute, values) tuples; attributes
    and terms are normalized either way.  The returned object carries a
    fresh id unless object_id is given, and meta.action is set to action.

    Raises EmptyTargetError for a blank target and InvalidPairError when
    the pair list is empty or some pair has neither attribute nor values:
    build_object never returns an object that classifies as invalid.
    """
    if not target or not target.strip():
        raise EmptyTargetError("annotation target must be non-empty")
    built: list[AVPair] = []
    for raw in pairs:
        if isinstance(raw, AVPair):
            pair = make_pair(raw.attribute, raw.values)
        else:
            attribute, values = raw
            pair = make_pair(attribute, values)
        if pair.attribute is None and not pair.values:
            raise InvalidPairError(f"pair {len(built)} has neither attribute nor values")
        built.append(pair)
    if not built:
        raise InvalidPairError("an annotation needs at least one pair")
    oid = object_id if object_id is not None else "ann_" + uuid.uuid4().hex[:12]
    return AnnotationObject(oid, target, tuple(built), replace(meta, action=action))
