"""A small pattern language over annotated tokens, compiled to a matcher.

Rules map token sequences straight to ontology predicates::

    rule nationality -> fkgo:nationality : (SUBJ: class:fkgo:Person) "is" "a" "citizen" "of" (OBJ: class:fkgo:Country)

One rule per line, ``#`` starts a comment.  Grammar::

    rule  := "rule" NAME "->" IRI ":" seq
    seq   := item+
    item  := atom quant? | "(" ("SUBJ"|"OBJ") ":" seq ")"
    atom  := '"'word'"' | "pos:"TAG | "class:"IRI | "."
    quant := "?" | "*" | "+" | "{"m(","n)?"}"

Atom semantics: a quoted word matches the token text (case-insensitive,
NFC), ``pos:`` matches the POS tag exactly, ``class:`` matches tokens lying
inside an entity link of that ontology class, ``.`` matches any token.
Capture groups take no quantifier and do not nest; a rule must declare
exactly one SUBJ and one OBJ group.

Matching is deterministic: leftmost match wins, quantifiers are greedy with
backtracking, scanning resumes after each match so matches of one rule
never overlap.  A match whose SUBJ/OBJ spans do not coincide with entity
links is discarded.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Sequence

from ..model import AnnotatedSentence, CandidateTriple, KbSnapshot, Predicate, normalize_phrase
from . import links_on_span

EXTRACTOR_ID = "tokpat"
BASE_CONFIDENCE = 0.9

_WORD_TERMINATORS = set(' \t"(){}?*+#')


class PatternSyntaxError(ValueError):
    """Rule text violates the grammar; message carries line and column."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col


# ---------------------------------------------------------------------------
# atoms and compiled form


@dataclass(frozen=True)
class WordAtom:
    word: str  # stored normalized

    def matches(self, ctx: "MatchContext", i: int) -> bool:
        return ctx.norm_tokens[i] == self.word


@dataclass(frozen=True)
class PosAtom:
    tag: str

    def matches(self, ctx: "MatchContext", i: int) -> bool:
        return ctx.sentence.pos[i] == self.tag


@dataclass(frozen=True)
class ClassAtom:
    iri: str

    def matches(self, ctx: "MatchContext", i: int) -> bool:
        return self.iri in ctx.classes_at[i]


@dataclass(frozen=True)
class AnyAtom:
    def matches(self, ctx: "MatchContext", i: int) -> bool:
        return True


@dataclass(frozen=True)
class QuantifiedAtom:
    atom: WordAtom | PosAtom | ClassAtom | AnyAtom
    min: int = 1
    max: int | None = 1  # None = unbounded


@dataclass(frozen=True)
class CaptureGroup:
    role: str  # "SUBJ" | "OBJ"
    items: tuple[QuantifiedAtom, ...]


Item = QuantifiedAtom | CaptureGroup


@dataclass(frozen=True)
class TokenPatternRule:
    name: str
    predicate: str  # ontology IRI
    pattern: tuple[Item, ...]
    source: str


@dataclass(frozen=True)
class MatchContext:
    sentence: AnnotatedSentence
    norm_tokens: tuple[str, ...]
    classes_at: tuple[frozenset[str], ...]

    @classmethod
    def of(cls, s: AnnotatedSentence) -> "MatchContext":
        covers: list[set[str]] = [set() for _ in s.tokens]
        for link in s.links:
            if link.entity_class:
                for i in range(link.start, link.end):
                    covers[i].add(link.entity_class)
        return cls(
            sentence=s,
            norm_tokens=tuple(normalize_phrase(t) for t in s.tokens),
            classes_at=tuple(frozenset(c) for c in covers),
        )


# ---------------------------------------------------------------------------
# lexer


@dataclass(frozen=True)
class _Token:
    kind: str  # WORD | STRING | LPAREN | RPAREN | QUANT
    text: str
    line: int
    col: int
    bounds: tuple[int, int | None] | None = None  # QUANT only


def _lex(text: str, line: int) -> list[_Token]:
    tokens: list[_Token] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        col = i + 1
        if ch in " \t":
            i += 1
        elif ch == "#":
            break
        elif ch == "(":
            tokens.append(_Token("LPAREN", ch, line, col))
            i += 1
        elif ch == ")":
            tokens.append(_Token("RPAREN", ch, line, col))
            i += 1
        elif ch == '"':
            end = text.find('"', i + 1)
            if end < 0:
                raise PatternSyntaxError("unterminated string", line, col)
            tokens.append(_Token("STRING", text[i + 1 : end], line, col))
            i = end + 1
        elif ch in "?*+":
            bounds = {"?": (0, 1), "*": (0, None), "+": (1, None)}[ch]
            tokens.append(_Token("QUANT", ch, line, col, bounds=bounds))
            i += 1
        elif ch == "{":
            end = text.find("}", i + 1)
            if end < 0:
                raise PatternSyntaxError("unterminated quantifier", line, col)
            body = text[i + 1 : end]
            parts = body.split(",")
            try:
                if len(parts) == 1:
                    m = int(parts[0])
                    bounds = (m, m)
                elif len(parts) == 2:
                    bounds = (int(parts[0]), int(parts[1]))
                else:
                    raise ValueError
            except ValueError:
                raise PatternSyntaxError(
                    f"bad quantifier {{{body}}}", line, col
                ) from None
            if bounds[0] < 0 or (bounds[1] is not None and bounds[1] < bounds[0]):
                raise PatternSyntaxError(f"bad quantifier bounds {{{body}}}", line, col)
            tokens.append(_Token("QUANT", text[i : end + 1], line, col, bounds=bounds))
            i = end + 1
        elif ch == "}":
            raise PatternSyntaxError("unexpected '}'", line, col)
        else:
            j = i
            while j < n and text[j] not in _WORD_TERMINATORS:
                j += 1
            tokens.append(_Token("WORD", text[i:j], line, col))
            i = j
    return tokens


# ---------------------------------------------------------------------------
# parser


class _Parser:
    def __init__(self, tokens: list[_Token], line: int):
        self.tokens = tokens
        self.pos = 0
        self.line = line

    def peek(self) -> _Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self, expected: str | None = None) -> _Token:
        tok = self.peek()
        if tok is None:
            last_col = self.tokens[-1].col + len(self.tokens[-1].text) if self.tokens else 1
            raise PatternSyntaxError(
                f"unexpected end of rule{f', expected {expected}' if expected else ''}",
                self.line,
                last_col,
            )
        self.pos += 1
        return tok

    def push(self, tok: _Token) -> None:
        self.tokens.insert(self.pos, tok)

    def expect_word(self, what: str) -> _Token:
        tok = self.next(expected=what)
        if tok.kind != "WORD":
            raise PatternSyntaxError(f"expected {what}", tok.line, tok.col)
        return tok

    def parse_rule(self) -> tuple[str, str, tuple[Item, ...]]:
        kw = self.expect_word("'rule'")
        if kw.text != "rule":
            raise PatternSyntaxError("expected keyword 'rule'", kw.line, kw.col)
        name = self.expect_word("rule name").text
        arrow = self.expect_word("'->'")
        if arrow.text != "->":
            raise PatternSyntaxError("expected '->'", arrow.line, arrow.col)
        iri_tok = self.expect_word("predicate IRI")
        iri = iri_tok.text
        # the body separator may be written adjacent to the IRI
        if iri.endswith(":") and len(iri) > 1:
            iri = iri[:-1]
        else:
            sep = self.expect_word("':'")
            if sep.text != ":":
                raise PatternSyntaxError("expected ':' before pattern body", sep.line, sep.col)
        items = self.parse_seq(in_group=False)
        if (tok := self.peek()) is not None:
            raise PatternSyntaxError(f"unexpected {tok.text!r}", tok.line, tok.col)
        return name, iri, items

    def parse_seq(self, in_group: bool) -> tuple[Item, ...]:
        items: list[Item] = []
        while True:
            tok = self.peek()
            if tok is None or tok.kind == "RPAREN":
                break
            items.append(self.parse_item(in_group))
        if not items:
            where = self.peek()
            line, col = (where.line, where.col) if where else (self.line, 1)
            raise PatternSyntaxError("empty pattern sequence", line, col)
        return tuple(items)

    def parse_item(self, in_group: bool) -> Item:
        tok = self.next(expected="atom or '('")
        if tok.kind == "LPAREN":
            if in_group:
                raise PatternSyntaxError(
                    "nested capture groups are not supported", tok.line, tok.col
                )
            group = self.parse_group(tok)
            if (q := self.peek()) is not None and q.kind == "QUANT":
                raise PatternSyntaxError(
                    "quantifier not allowed on a capture group", q.line, q.col
                )
            return group
        atom = self.parse_atom(tok)
        lo, hi = 1, 1
        if (q := self.peek()) is not None and q.kind == "QUANT":
            self.next()
            lo, hi = q.bounds  # type: ignore[misc]
        return QuantifiedAtom(atom=atom, min=lo, max=hi)

    def parse_group(self, lparen: _Token) -> CaptureGroup:
        head = self.next(expected="SUBJ or OBJ")
        if head.kind != "WORD":
            raise PatternSyntaxError("expected SUBJ or OBJ", head.line, head.col)
        role = None
        for candidate in ("SUBJ", "OBJ"):
            prefix = candidate + ":"
            if head.text == candidate:
                sep = self.expect_word("':'")
                if not sep.text.startswith(":"):
                    raise PatternSyntaxError("expected ':' after capture role", sep.line, sep.col)
                if sep.text != ":":  # atom glued to the colon
                    self.push(_Token("WORD", sep.text[1:], sep.line, sep.col + 1))
                role = candidate
                break
            if head.text.startswith(prefix):
                rest = head.text[len(prefix):]
                if rest:
                    self.push(_Token("WORD", rest, head.line, head.col + len(prefix)))
                role = candidate
                break
        if role is None:
            raise PatternSyntaxError(
                f"expected SUBJ or OBJ capture, got {head.text!r}", head.line, head.col
            )
        body = []
        while (tok := self.peek()) is not None and tok.kind != "RPAREN":
            item = self.parse_item(in_group=True)
            body.append(item)
        if not body:
            raise PatternSyntaxError("empty capture group", lparen.line, lparen.col)
        closing = self.next(expected="')'")
        if closing.kind != "RPAREN":  # pragma: no cover - loop exits only on RPAREN/None
            raise PatternSyntaxError("expected ')'", closing.line, closing.col)
        return CaptureGroup(role=role, items=tuple(body))

    def parse_atom(self, tok: _Token) -> WordAtom | PosAtom | ClassAtom | AnyAtom:
        if tok.kind == "STRING":
            return WordAtom(word=normalize_phrase(tok.text))
        if tok.kind != "WORD":
            raise PatternSyntaxError(f"expected atom, got {tok.text!r}", tok.line, tok.col)
        if tok.text == ".":
            return AnyAtom()
        if tok.text.startswith("pos:"):
            tag = tok.text[4:]
            if not tag:
                raise PatternSyntaxError("empty POS tag", tok.line, tok.col)
            return PosAtom(tag=tag)
        if tok.text.startswith("class:"):
            iri = tok.text[6:]
            if not iri:
                raise PatternSyntaxError("empty class IRI", tok.line, tok.col)
            return ClassAtom(iri=iri)
        raise PatternSyntaxError(
            f"expected atom, got {tok.text!r} (bare words must be quoted)",
            tok.line,
            tok.col,
        )


def compile_token_pattern(dsl: str, kb: KbSnapshot, lineno: int = 1) -> TokenPatternRule:
    """Compile a single rule line; validates the predicate against the KB
    catalog and the presence of exactly one SUBJ and one OBJ capture."""
    tokens = _lex(dsl, lineno)
    if not tokens:
        raise PatternSyntaxError("empty rule", lineno, 1)
    parser = _Parser(tokens, lineno)
    name, iri, items = parser.parse_rule()
    if iri not in kb.predicates:
        raise ValueError(f"line {lineno}: unknown predicate {iri!r}")
    roles = [it.role for it in items if isinstance(it, CaptureGroup)]
    for role in ("SUBJ", "OBJ"):
        count = roles.count(role)
        if count == 0:
            raise ValueError(f"line {lineno}: rule {name!r} has no {role} capture")
        if count > 1:
            raise ValueError(f"line {lineno}: rule {name!r} declares {role} more than once")
    return TokenPatternRule(name=name, predicate=iri, pattern=items, source=dsl.strip())


def load_token_rules(path: str | Path, kb: KbSnapshot) -> list[TokenPatternRule]:
    rules = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            rules.append(compile_token_pattern(line.rstrip("\n"), kb, lineno=lineno))
    return rules


# ---------------------------------------------------------------------------
# matching


def _alternatives(
    items: Sequence[Item],
    idx: int,
    i: int,
    ctx: MatchContext,
    caps: dict[str, tuple[int, int]],
) -> Iterator[tuple[int, dict[str, tuple[int, int]]]]:
    """All completions of ``items[idx:]`` starting at token ``i``, greediest
    first; the first yielded alternative is the deterministic match."""
    if idx == len(items):
        yield i, caps
        return
    item = items[idx]
    n = len(ctx.sentence.tokens)
    if isinstance(item, CaptureGroup):
        for group_end, _ in _alternatives(item.items, 0, i, ctx, caps):
            yield from _alternatives(
                items, idx + 1, group_end, ctx, caps | {item.role: (i, group_end)}
            )
        return
    count = 0
    limit = item.max if item.max is not None else n - i
    while count < limit and i + count < n and item.atom.matches(ctx, i + count):
        count += 1
    for take in range(count, item.min - 1, -1):
        yield from _alternatives(items, idx + 1, i + take, ctx, caps)


def match_rule_at(
    rule: TokenPatternRule, ctx: MatchContext, start: int
) -> tuple[int, dict[str, tuple[int, int]]] | None:
    """First (greedy) match of ``rule`` anchored at ``start``, or None.
    Zero-width matches count as no match so scanning always advances."""
    for end, caps in _alternatives(rule.pattern, 0, start, ctx, {}):
        if end > start:
            return end, caps
        return None
    return None


def extract_token_patterns(
    s: AnnotatedSentence,
    rules: Sequence[TokenPatternRule],
    extractor_id: str = EXTRACTOR_ID,
    base_confidence: float = BASE_CONFIDENCE,
) -> list[CandidateTriple]:
    """Scan each rule left to right with non-overlapping matches; captures
    must coincide with entity-link spans or the match is discarded."""
    ctx = MatchContext.of(s)
    n = len(s.tokens)
    triples: list[CandidateTriple] = []
    for rule in rules:
        i = 0
        while i < n:
            hit = match_rule_at(rule, ctx, i)
            if hit is None:
                i += 1
                continue
            end, caps = hit
            for subj in links_on_span(s, caps["SUBJ"]):
                for obj in links_on_span(s, caps["OBJ"]):
                    triples.append(
                        CandidateTriple(
                            subject=subj.entity,
                            predicate=Predicate.iri(rule.predicate),
                            object=obj.entity,
                            extractor=extractor_id,
                            confidence=base_confidence * subj.confidence * obj.confidence,
                            sentence_id=s.id,
                        )
                    )
            i = end
    return triples
