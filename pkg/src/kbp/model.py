"""Shared domain types for the extraction pipeline.

Everything downstream (extractors, canonicalizer, fusion, review) passes
these value objects around.  All types are frozen dataclasses: once built
they are immutable and safe to share across worker processes.

Conventions:

* dependency heads are 1-based token indices, ``head == 0`` marks the root;
* entity-link spans are 0-based half-open ``[start, end)`` token ranges;
* predicates are either raw text phrases or ontology IRIs, never both.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field
from typing import Iterable, Mapping

RAW = "raw"
IRI = "iri"

# (subject IRI, (predicate kind, predicate value), object IRI)
TripleKey = tuple[str, tuple[str, str], str]


def normalize_phrase(text: str) -> str:
    """Normalize a raw phrase for identity comparison.

    NFC, trim, collapse internal whitespace, case-fold.  Deliberately no
    stemming: aggressive normalization would silently merge distinct
    relations.
    """
    folded = unicodedata.normalize("NFC", text).casefold()
    return " ".join(folded.split())


@dataclass(frozen=True)
class Predicate:
    """Either a raw text phrase (``kind == "raw"``) or an ontology IRI."""

    kind: str
    value: str

    def __post_init__(self) -> None:
        if self.kind not in (RAW, IRI):
            raise ValueError(f"predicate kind must be 'raw' or 'iri', got {self.kind!r}")
        if not self.value:
            raise ValueError("predicate value must be non-empty")

    @classmethod
    def raw(cls, value: str) -> "Predicate":
        return cls(RAW, value)

    @classmethod
    def iri(cls, value: str) -> "Predicate":
        return cls(IRI, value)

    @property
    def is_canonical(self) -> bool:
        return self.kind == IRI

    def identity(self) -> tuple[str, str]:
        """Identity component: raw phrases are normalized, IRIs compared verbatim."""
        if self.kind == RAW:
            return (RAW, normalize_phrase(self.value))
        return (IRI, self.value)


@dataclass(frozen=True)
class DependencyArc:
    head: int  # 1-based index of the governing token, 0 for the root
    relation: str

    def __post_init__(self) -> None:
        if self.head < 0:
            raise ValueError(f"dependency head must be >= 0, got {self.head}")


@dataclass(frozen=True)
class EntityLink:
    start: int
    end: int
    entity: str
    confidence: float
    entity_class: str = ""

    def __post_init__(self) -> None:
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"link confidence must be in [0, 1], got {self.confidence}")

    @property
    def span(self) -> tuple[int, int]:
        return (self.start, self.end)


@dataclass(frozen=True)
class AnnotatedSentence:
    """One preprocessed sentence: tokens with POS/NER tags, a dependency
    tree, and entity links.  The universal input record of the pipeline."""

    id: str
    text: str
    tokens: tuple[str, ...]
    pos: tuple[str, ...]
    ner: tuple[str, ...]
    deps: tuple[DependencyArc, ...]
    links: tuple[EntityLink, ...] = ()

    def __post_init__(self) -> None:
        n = len(self.tokens)
        if n == 0:
            raise ValueError("tokens must be non-empty")
        for name, seq in (("pos", self.pos), ("ner", self.ner), ("deps", self.deps)):
            if len(seq) != n:
                raise ValueError(f"{name} length {len(seq)} != tokens length {n}")
        roots = 0
        for i, arc in enumerate(self.deps, start=1):
            if arc.head > n:
                raise ValueError(f"deps[{i - 1}].head {arc.head} out of range 0..{n}")
            if arc.head == i:
                raise ValueError(f"deps[{i - 1}] is its own head")
            if arc.head == 0:
                roots += 1
        if roots != 1:
            raise ValueError(f"expected exactly one root arc, found {roots}")
        for j, link in enumerate(self.links):
            if not 0 <= link.start < link.end <= n:
                raise ValueError(
                    f"links[{j}] span ({link.start}, {link.end}) outside 0..{n}"
                )

    def children(self) -> dict[int, list[int]]:
        """Map from 1-based head index (0 = root) to its 1-based dependents."""
        out: dict[int, list[int]] = {}
        for i, arc in enumerate(self.deps, start=1):
            out.setdefault(arc.head, []).append(i)
        return out

    def links_at(self, span: tuple[int, int]) -> tuple[EntityLink, ...]:
        """All candidate links whose span equals ``span`` exactly."""
        return tuple(l for l in self.links if l.span == span)


@dataclass(frozen=True)
class CandidateTriple:
    subject: str
    predicate: Predicate
    object: str
    extractor: str
    confidence: float
    sentence_id: str

    def __post_init__(self) -> None:
        if not self.subject:
            raise ValueError("subject must be non-empty")
        if not self.object:
            raise ValueError("object must be non-empty")
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"confidence must be in [0, 1], got {self.confidence}")


def triple_identity(t: CandidateTriple) -> TripleKey:
    """Identity key of a triple: provenance (extractor, confidence, sentence)
    is excluded so the same fact from different sources compares equal."""
    return (t.subject, t.predicate.identity(), t.object)


@dataclass(frozen=True)
class KbEntity:
    iri: str
    surface_forms: tuple[str, ...]
    entity_class: str = ""


@dataclass(frozen=True)
class KbSnapshot:
    """Local snapshot of the knowledge base: entity catalog, predicate
    catalog, existing facts, and the raw-phrase-to-predicate mapping table.

    ``mapping_table`` keys are stored as given; lookups go through
    :meth:`lookup_mapping`, which applies phrase normalization.
    """

    entities: tuple[KbEntity, ...] = ()
    predicates: frozenset[str] = frozenset()
    facts: frozenset[tuple[str, str, str]] = frozenset()
    mapping_table: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for s, p, o in self.facts:
            if p not in self.predicates:
                raise ValueError(f"fact predicate {p!r} not in predicate catalog")
        for phrase, iri in self.mapping_table.items():
            if iri not in self.predicates:
                raise ValueError(f"mapping target {iri!r} not in predicate catalog")

    def normalized_mapping(self) -> dict[str, str]:
        return {normalize_phrase(k): v for k, v in self.mapping_table.items()}

    def lookup_mapping(self, phrase: str) -> str | None:
        return self.normalized_mapping().get(normalize_phrase(phrase))


@dataclass(frozen=True)
class GoldRecord:
    """A gold-corpus sentence plus its expert-verified triple."""

    sentence: AnnotatedSentence
    subject: str
    object: str
    predicate: str
    subject_class: str = ""
    object_class: str = ""


def validate_gold_predicates(records: Iterable[GoldRecord], kb: KbSnapshot) -> None:
    """Check every gold predicate against the snapshot's predicate catalog."""
    for rec in records:
        if rec.predicate not in kb.predicates:
            raise ValueError(
                f"gold record {rec.sentence.id!r}: predicate {rec.predicate!r}"
                " not in predicate catalog"
            )
