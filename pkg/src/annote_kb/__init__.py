"""annote-kb: a knowledge base for document annotations.

Annotations attach attribute/value pairs to documents (or to other
annotations).  The base classifies them as explicit or implicit, infers
missing attributes or values from the explicit facts, and answers boolean
queries, including constrained searches over bare terms that are rewritten
against the inferred attributes.
"""

from .errors import (
    AllUnresolvedError,
    AnnoteKBError,
    CyclicTargetError,
    DuplicateIdError,
    EmptyAttributeError,
    EmptyTargetError,
    EmptyTermError,
    InvalidObjectError,
    InvalidPairError,
    NoCandidatesError,
    NotImplicitError,
    QuerySyntaxError,
    UnknownIdError,
    UnresolvedCriterionError,
)
from .factfile import (
    Diagnostic,
    IMPORT_META,
    LoadResult,
    load_facts,
    load_facts_into,
    save_facts,
)
from .inference import (
    AttributeCandidate,
    Explication,
    ValueCandidate,
    explicate,
    infer_attributes,
    infer_values,
)
from .model import (
    ActionKind,
    AnnotationContext,
    AnnotationMeta,
    AnnotationObject,
    AnnotatorProfile,
    AnnotatorRole,
    AttributeName,
    AVPair,
    DocumentRecord,
    DocumentTier,
    Explicitness,
    Term,
    Value,
    as_value,
    build_object,
    classify,
    is_explicit_pair,
    make_pair,
    normalize_attribute,
    normalize_term,
)
from .query import (
    And,
    Criterion,
    Leaf,
    Not,
    Or,
    QueryExpr,
    RewriteReport,
    evaluate,
    format_query,
    matches,
    parse_query,
    rewrite_constrained,
    search_constrained,
    stored_list_rewrite,
)
from .store import KnowledgeBase

__all__ = [
    "ActionKind",
    "AllUnresolvedError",
    "And",
    "AnnotationContext",
    "AnnotationMeta",
    "AnnotationObject",
    "AnnotatorProfile",
    "AnnotatorRole",
    "AnnoteKBError",
    "AttributeCandidate",
    "AttributeName",
    "AVPair",
    "Criterion",
    "CyclicTargetError",
    "Diagnostic",
    "DocumentRecord",
    "DocumentTier",
    "DuplicateIdError",
    "EmptyAttributeError",
    "EmptyTargetError",
    "EmptyTermError",
    "Explication",
    "Explicitness",
    "IMPORT_META",
    "InvalidObjectError",
    "InvalidPairError",
    "KnowledgeBase",
    "Leaf",
    "LoadResult",
    "NoCandidatesError",
    "Not",
    "NotImplicitError",
    "Or",
    "QueryExpr",
    "QuerySyntaxError",
    "RewriteReport",
    "Term",
    "UnknownIdError",
    "UnresolvedCriterionError",
    "Value",
    "ValueCandidate",
    "as_value",
    "build_object",
    "classify",
    "evaluate",
    "explicate",
    "format_query",
    "infer_attributes",
    "infer_values",
    "is_explicit_pair",
    "load_facts",
    "load_facts_into",
    "make_pair",
    "matches",
    "normalize_attribute",
    "normalize_term",
    "parse_query",
    "rewrite_constrained",
    "save_facts",
    "search_constrained",
    "stored_list_rewrite",
]
