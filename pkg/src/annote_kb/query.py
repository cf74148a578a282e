"""Boolean query language over attribute/value criteria.

Grammar (keywords case-insensitive, French or English):

    expr      := or_expr
    or_expr   := and_expr { OR and_expr }
    and_expr  := unary { AND unary }
    unary     := NOT unary | "(" expr ")" | criterion
    criterion := "(" [ STRING "," ] "[" STRING { "," STRING } "]" ")"
    AND := ET | AND      OR := OU | OR      NOT := NON | NOT

STRING is double-quoted with \\" and \\\\ escapes.  A criterion without the
leading attribute string is *constrained*: it names terms whose attribute
must be inferred (rewrite_constrained) before evaluation.

A criterion matches an object when one of the object's pairs has the same
attribute and its value terms (ranks ignored) form a superset of the
criterion's terms.  NOT complements within the set of stored objects.
format_query prints the canonical form, which parses back to the same
tree: parse_query(format_query(e)) == e.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .errors import (
    AllUnresolvedError,
    EmptyAttributeError,
    EmptyTermError,
    QuerySyntaxError,
    UnresolvedCriterionError,
)
from .inference import AttributeCandidate, infer_attributes
from .model import (
    AnnotationObject,
    AttributeName,
    Term,
    normalize_attribute,
    normalize_term,
)
from .quoting import quote, scan_quoted
from .store import KnowledgeBase


@dataclass(frozen=True, slots=True)
class Criterion:
    """attribute is None for a constrained criterion (attribute unknown)."""

    attribute: AttributeName | None
    values: tuple[Term, ...]

    def __post_init__(self) -> None:
        if not self.values:
            raise ValueError("a criterion needs at least one term")


@dataclass(frozen=True, slots=True)
class Leaf:
    criterion: Criterion


@dataclass(frozen=True, slots=True)
class And:
    children: tuple["QueryExpr", ...]

    def __post_init__(self) -> None:
        if len(self.children) < 2:
            raise ValueError("ET needs at least two operands")


@dataclass(frozen=True, slots=True)
class Or:
    children: tuple["QueryExpr", ...]

    def __post_init__(self) -> None:
        if len(self.children) < 2:
            raise ValueError("OU needs at least two operands")


@dataclass(frozen=True, slots=True)
class Not:
    child: "QueryExpr"


QueryExpr = Union[Leaf, And, Or, Not]


_KEYWORDS = {"et": "AND", "and": "AND", "ou": "OR", "or": "OR", "non": "NOT", "not": "NOT"}
_PUNCT = {"(": "LPAREN", ")": "RPAREN", "[": "LBRACKET", "]": "RBRACKET", ",": "COMMA"}


@dataclass(frozen=True, slots=True)
class _Token:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _PUNCT:
            tokens.append(_Token(_PUNCT[ch], ch, i))
            i += 1
            continue
        if ch == '"':
            try:
                value, end = scan_quoted(text, i)
            except ValueError as exc:
                offset, reason = exc.args
                raise QuerySyntaxError(offset, reason)
            tokens.append(_Token("STRING", value, i))
            i = end
            continue
        start = i
        while i < len(text) and not text[i].isspace() and text[i] not in _PUNCT and text[i] != '"':
            i += 1
        word = text[start:i]
        kind = _KEYWORDS.get(word.casefold())
        if kind is None:
            raise QuerySyntaxError(start, f"ET/OU/NON keyword, got {word!r}")
        tokens.append(_Token(kind, word, start))
    tokens.append(_Token("EOF", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.index = 0

    def peek(self, ahead: int = 0) -> _Token:
        return self.tokens[min(self.index + ahead, len(self.tokens) - 1)]

    def take(self, kind: str, expected: str) -> _Token:
        token = self.peek()
        if token.kind != kind:
            raise QuerySyntaxError(token.pos, expected)
        self.index += 1
        return token

    def parse_expr(self) -> QueryExpr:
        children = [self.parse_and()]
        while self.peek().kind == "OR":
            self.index += 1
            children.append(self.parse_and())
        return children[0] if len(children) == 1 else Or(tuple(children))

    def parse_and(self) -> QueryExpr:
        children = [self.parse_unary()]
        while self.peek().kind == "AND":
            self.index += 1
            children.append(self.parse_unary())
        return children[0] if len(children) == 1 else And(tuple(children))

    def parse_unary(self) -> QueryExpr:
        token = self.peek()
        if token.kind == "NOT":
            self.index += 1
            return Not(self.parse_unary())
        if token.kind != "LPAREN":
            raise QuerySyntaxError(token.pos, "'(' or NON")
        self.index += 1
        # A criterion continues with a string or a bracket; anything else
        # is a parenthesized sub-expression.
        if self.peek().kind in ("STRING", "LBRACKET"):
            expr = Leaf(self.parse_criterion_tail())
        else:
            expr = self.parse_expr()
        self.take("RPAREN", "')'")
        return expr

    def parse_criterion_tail(self) -> Criterion:
        attribute = None
        token = self.peek()
        if token.kind == "STRING":
            self.index += 1
            try:
                attribute = normalize_attribute(token.text)
            except EmptyAttributeError:
                raise QuerySyntaxError(token.pos, "a non-blank attribute")
            self.take("COMMA", "','")
        self.take("LBRACKET", "'['")
        terms: list[Term] = []
        while True:
            token = self.take("STRING", "a quoted term")
            try:
                terms.append(normalize_term(token.text))
            except EmptyTermError:
                raise QuerySyntaxError(token.pos, "a non-blank term")
            if self.peek().kind != "COMMA":
                break
            self.index += 1
        self.take("RBRACKET", "']'")
        return Criterion(attribute, tuple(terms))


def parse_query(text: str) -> QueryExpr:
    """Parse query text, normalizing attributes and terms.

    Raises QuerySyntaxError carrying the 0-based offset of the problem and
    a description of what was expected there.
    """
    parser = _Parser(_tokenize(text))
    expr = parser.parse_expr()
    parser.take("EOF", "end of query")
    return expr


def _criterion_text(criterion: Criterion) -> str:
    inner = "[" + ", ".join(quote(t) for t in criterion.values) + "]"
    if criterion.attribute is None:
        return f"({inner})"
    return f"({quote(criterion.attribute)}, {inner})"


def _wrapped(expr: QueryExpr) -> str:
    # NON binds tighter than ET/OU, so only ET/OU operands need parens.
    text = format_query(expr)
    return text if isinstance(expr, (Leaf, Not)) else f"({text})"


def format_query(expr: QueryExpr) -> str:
    """Canonical text for a query tree; parse_query inverts it exactly."""
    if isinstance(expr, Leaf):
        return _criterion_text(expr.criterion)
    if isinstance(expr, And):
        return " ET ".join(_wrapped(c) for c in expr.children)
    if isinstance(expr, Or):
        return " OU ".join(_wrapped(c) for c in expr.children)
    if isinstance(expr, Not):
        return "NON " + _wrapped(expr.child)
    raise TypeError(f"not a query expression: {expr!r}")


def matches(obj: AnnotationObject, criterion: Criterion) -> bool:
    """True when one pair of obj covers the criterion.

    The pair must carry the criterion's attribute and its value terms
    (ranks ignored) must include every criterion term.  Constrained
    criteria cannot be matched directly: UnresolvedCriterionError.
    """
    if criterion.attribute is None:
        raise UnresolvedCriterionError(
            "criterion has no attribute; rewrite it with rewrite_constrained first"
        )
    needed = set(criterion.values)
    for pair in obj.pairs:
        if pair.attribute == criterion.attribute and needed <= pair.terms():
            return True
    return False


def _eval_set(kb: KnowledgeBase, expr: QueryExpr) -> set[str]:
    if isinstance(expr, Leaf):
        criterion = expr.criterion
        if criterion.attribute is None:
            raise UnresolvedCriterionError(
                "criterion has no attribute; rewrite it with rewrite_constrained first"
            )
        candidates: set[str] | None = None
        for term in criterion.values:
            posting = {
                oid
                for attr, oid in kb.index_by_term.get(term, ())
                if attr == criterion.attribute
            }
            candidates = posting if candidates is None else candidates & posting
            if not candidates:
                return set()
        return {oid for oid in candidates if matches(kb.objects[oid], criterion)}
    if isinstance(expr, And):
        result = _eval_set(kb, expr.children[0])
        for child in expr.children[1:]:
            result &= _eval_set(kb, child)
        return result
    if isinstance(expr, Or):
        result = _eval_set(kb, expr.children[0])
        for child in expr.children[1:]:
            result |= _eval_set(kb, child)
        return result
    if isinstance(expr, Not):
        return set(kb.objects) - _eval_set(kb, expr.child)
    raise TypeError(f"not a query expression: {expr!r}")


def evaluate(kb: KnowledgeBase, expr: QueryExpr) -> list[str]:
    """Ids of objects satisfying expr, sorted ascending.

    NOT is the complement within the stored objects (closed world).
    Raises UnresolvedCriterionError if a constrained criterion remains.
    """
    return sorted(_eval_set(kb, expr))


@dataclass(frozen=True, slots=True)
class RewriteReport:
    """Outcome of rewriting constrained terms into an evaluable query."""

    rewritten: QueryExpr
    unresolved_terms: tuple[Term, ...]
    per_term_candidates: dict[Term, tuple[AttributeCandidate, ...]]


def rewrite_constrained(kb: KnowledgeBase, terms: list[str]) -> RewriteReport:
    """Rewrite bare terms into an attribute-resolved conjunction.

    Each term becomes a disjunction of (attribute, [term]) criteria over
    its inferred attribute candidates in rank order (a lone candidate
    stays a bare criterion); the rewritten query is the conjunction of
    the resolved terms in input order (a lone term stays bare).  Terms
    with no candidates are left out and listed in unresolved_terms.
    Duplicate input terms are processed once.

    Raises AllUnresolvedError when not a single term resolves.
    """
    if not terms:
        raise ValueError("at least one term is required")
    wanted: list[Term] = []
    for raw in terms:
        term = normalize_term(raw)
        if term not in wanted:
            wanted.append(term)
    per_term: dict[Term, tuple[AttributeCandidate, ...]] = {}
    parts: list[QueryExpr] = []
    unresolved: list[Term] = []
    for term in wanted:
        found = tuple(infer_attributes(kb, [term]))
        per_term[term] = found
        if not found:
            unresolved.append(term)
            continue
        leaves = [Leaf(Criterion(c.attribute, (term,))) for c in found]
        parts.append(leaves[0] if len(leaves) == 1 else Or(tuple(leaves)))
    if not parts:
        raise AllUnresolvedError(tuple(unresolved))
    rewritten = parts[0] if len(parts) == 1 else And(tuple(parts))
    return RewriteReport(rewritten, tuple(unresolved), per_term)


def search_constrained(kb: KnowledgeBase, terms: list[str], strict: bool = True) -> list[str]:
    """Evaluate a constrained search over bare terms.

    In strict mode any unresolved term empties the result; in lenient
    mode unresolved terms are simply dropped (the report from
    rewrite_constrained says which).  Raises AllUnresolvedError when no
    term resolves at all.
    """
    report = rewrite_constrained(kb, terms)
    if strict and report.unresolved_terms:
        return []
    return evaluate(kb, report.rewritten)


def stored_list_rewrite(kb: KnowledgeBase, report: RewriteReport) -> str:
    """Render a rewrite with each candidate's full stored value list.

    Display form only: where the canonical rewrite shows (attribute,
    [term]), this shows the complete value list (ranks included) of the
    first supporting object's covering pair, the way the evidence is
    stored in the base.
    """
    from .factfile import format_values  # local import avoids a cycle

    def leaf_text(term: Term, candidate: AttributeCandidate) -> str:
        for oid in candidate.support:
            for pair in kb.objects[oid].pairs:
                if pair.attribute == candidate.attribute and term in pair.terms():
                    return f"({quote(candidate.attribute)}, {format_values(pair.values)})"
        return f"({quote(candidate.attribute)}, {format_values(tuple())})"

    parts: list[str] = []
    for term, found in report.per_term_candidates.items():
        if not found:
            continue
        pieces = [leaf_text(term, c) for c in found]
        parts.append(pieces[0] if len(pieces) == 1 else "(" + " OU ".join(pieces) + ")")
    return " ET ".join(parts)
