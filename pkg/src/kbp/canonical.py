"""Mapping raw relation phrases onto ontology predicates.

Two-step canonicalization: a direct hit in the expert-curated mapping table
wins outright (confidence untouched); otherwise every KB predicate is
scored against the sentence, one point per shared frequent token and one
per shared compound verb from the distant-supervision statistics, and the
best scorer above zero takes the triple with its confidence scaled by
score/(score+1).  Triples that survive neither step are dropped, not
guessed: precision outranks recall throughout this pipeline.

The module also carries the clustering baseline: mine implication rules
between predicates that fire on the same (subject, object) pairs, keep the
bidirectional ones, and read mapping-table rows off the resulting clusters.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from .corpus_io import CorpusFormatError, dumps, iter_jsonl
from .distant import PredicateStats, compound_verb_phrases
from .model import (
    IRI,
    RAW,
    CandidateTriple,
    AnnotatedSentence,
    KbSnapshot,
    Predicate,
    normalize_phrase,
    triple_identity,
)

PredicateId = tuple[str, str]  # (kind, value), see Predicate.identity()


@dataclass(frozen=True)
class ImplicationRule:
    """P1 => P2 with support |pairs(P1) ∩ pairs(P2)| and confidence
    support / |pairs(P1)|."""

    antecedent: PredicateId
    consequent: PredicateId
    support: int
    confidence: float

    def __post_init__(self) -> None:
        if self.support < 1:
            raise ValueError("support must be >= 1")
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"confidence must be in [0, 1], got {self.confidence}")


@dataclass(frozen=True)
class MappingRow:
    phrase: str
    iri: str | None  # None when the cluster had no ontology member
    needs_expert: bool


@dataclass(frozen=True)
class ClusterResult:
    clusters: tuple[tuple[PredicateId, ...], ...]
    rows: tuple[MappingRow, ...]


def _step2_scores(
    sentence: AnnotatedSentence, kb: KbSnapshot, stats: PredicateStats
) -> dict[str, int]:
    token_set = {normalize_phrase(t) for t in sentence.tokens}
    compound_set = {phrase for _, phrase in compound_verb_phrases(sentence)}
    scores = {}
    for predicate in kb.predicates:
        profile = stats.per_predicate.get(predicate)
        if profile is None:
            scores[predicate] = 0
            continue
        scores[predicate] = len(token_set & set(profile.frequent_tokens)) + len(
            compound_set & set(profile.compound_verbs)
        )
    return scores


def canonicalize(
    t: CandidateTriple,
    kb: KbSnapshot,
    stats: PredicateStats,
    sentence: AnnotatedSentence,
    mapping: Mapping[str, str] | None = None,
) -> CandidateTriple | None:
    """Map a raw-predicate triple to an ontology predicate, or drop it.

    ``mapping`` may carry a precomputed ``kb.normalized_mapping()`` for
    batch callers; the mapping-table step always runs before scoring.
    """
    if t.predicate.kind != RAW:
        raise ValueError("canonicalize expects a raw-predicate triple")
    if mapping is None:
        mapping = kb.normalized_mapping()
    mapped = mapping.get(normalize_phrase(t.predicate.value))
    if mapped is not None:
        return CandidateTriple(
            subject=t.subject,
            predicate=Predicate.iri(mapped),
            object=t.object,
            extractor=t.extractor,
            confidence=t.confidence,
            sentence_id=t.sentence_id,
        )
    scores = _step2_scores(sentence, kb, stats)
    winner = None
    for predicate in sorted(scores):
        score = scores[predicate]
        if score >= 1 and (winner is None or score > winner[1]):
            winner = (predicate, score)
    if winner is None:
        return None
    predicate, score = winner
    return CandidateTriple(
        subject=t.subject,
        predicate=Predicate.iri(predicate),
        object=t.object,
        extractor=t.extractor,
        confidence=t.confidence * (score / (score + 1.0)),
        sentence_id=t.sentence_id,
    )


def canonicalize_all(
    triples: Sequence[CandidateTriple],
    kb: KbSnapshot,
    stats: PredicateStats,
    sentences: Mapping[str, AnnotatedSentence],
) -> tuple[list[CandidateTriple], int]:
    """Canonicalize a batch; returns (surviving triples, dropped count)."""
    mapping = kb.normalized_mapping()
    kept: list[CandidateTriple] = []
    dropped = 0
    for t in triples:
        sentence = sentences.get(t.sentence_id)
        if sentence is None:
            raise ValueError(f"triple references unknown sentence {t.sentence_id!r}")
        out = canonicalize(t, kb, stats, sentence, mapping=mapping)
        if out is None:
            dropped += 1
        else:
            kept.append(out)
    return kept, dropped


# ---------------------------------------------------------------------------
# implication-rule mining and clustering


def mine_implication_rules(
    triples: Sequence[CandidateTriple],
    min_support: int,
    min_confidence: float,
) -> list[ImplicationRule]:
    """P1 => P2 for every predicate pair co-occurring on enough
    (subject, object) pairs.  Triples are deduplicated by identity first, so
    repeated extractions of one fact count once."""
    if min_support < 1:
        raise ValueError("min_support must be >= 1")
    pairs: dict[PredicateId, set[tuple[str, str]]] = {}
    for t in triples:
        subject, predicate, obj = triple_identity(t)
        pairs.setdefault(predicate, set()).add((subject, obj))

    rules = []
    for p1 in sorted(pairs):
        for p2 in sorted(pairs):
            if p1 == p2:
                continue
            support = len(pairs[p1] & pairs[p2])
            if support < min_support:
                continue
            confidence = support / len(pairs[p1])
            if confidence >= min_confidence:
                rules.append(
                    ImplicationRule(
                        antecedent=p1, consequent=p2,
                        support=support, confidence=confidence,
                    )
                )
    return rules


def cluster_predicates(rules: Sequence[ImplicationRule]) -> ClusterResult:
    """Cluster predicates connected by bidirectional implications and read
    mapping rows off the clusters.

    A cluster with ontology members maps every raw member to the IRI with
    the highest rule support (ties to the lexicographically smaller IRI);
    IRI-only clusters carry no new information and emit nothing; raw-only
    clusters are emitted unmapped for expert assignment.
    """
    directed = {(r.antecedent, r.consequent) for r in rules}
    edges = {
        (a, b) for (a, b) in directed if (b, a) in directed
    }
    adjacency: dict[PredicateId, set[PredicateId]] = {}
    for a, b in edges:
        adjacency.setdefault(a, set()).add(b)
        adjacency.setdefault(b, set()).add(a)

    # connected components, deterministic by smallest member
    clusters: list[tuple[PredicateId, ...]] = []
    visited: set[PredicateId] = set()
    for start in sorted(adjacency):
        if start in visited:
            continue
        component = []
        stack = [start]
        while stack:
            node = stack.pop()
            if node in visited:
                continue
            visited.add(node)
            component.append(node)
            stack.extend(adjacency[node] - visited)
        clusters.append(tuple(sorted(component)))
    clusters.sort()

    support_of: dict[PredicateId, int] = {}
    for r in rules:
        for member in (r.antecedent, r.consequent):
            support_of[member] = max(support_of.get(member, 0), r.support)

    rows: list[MappingRow] = []
    for cluster in clusters:
        iris = [m for m in cluster if m[0] == IRI]
        raws = [m for m in cluster if m[0] == RAW]
        if iris and raws:
            representative = sorted(
                iris, key=lambda m: (-support_of.get(m, 0), m[1])
            )[0]
            rows.extend(
                MappingRow(phrase=m[1], iri=representative[1], needs_expert=False)
                for m in raws
            )
        elif raws:
            rows.extend(MappingRow(phrase=m[1], iri=None, needs_expert=True) for m in raws)
        # IRI-only clusters: no new information
    return ClusterResult(clusters=tuple(clusters), rows=tuple(rows))


# ---------------------------------------------------------------------------
# on-disk formats


def save_implication_rules(path: str | Path, rules: Sequence[ImplicationRule]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for r in rules:
            fh.write(
                dumps(
                    {
                        "antecedent": {"kind": r.antecedent[0], "value": r.antecedent[1]},
                        "consequent": {"kind": r.consequent[0], "value": r.consequent[1]},
                        "support": r.support,
                        "confidence": r.confidence,
                    }
                )
            )
            fh.write("\n")


def load_implication_rules(path: str | Path) -> list[ImplicationRule]:
    path = Path(path)
    out = []
    for lineno, obj in iter_jsonl(path):
        try:
            out.append(
                ImplicationRule(
                    antecedent=(str(obj["antecedent"]["kind"]), str(obj["antecedent"]["value"])),
                    consequent=(str(obj["consequent"]["kind"]), str(obj["consequent"]["value"])),
                    support=int(obj["support"]),
                    confidence=float(obj["confidence"]),
                )
            )
        except (ValueError, KeyError, TypeError) as exc:
            raise CorpusFormatError(f"{path}:{lineno}: {exc}") from exc
    return out


def save_clusters(path: str | Path, result: ClusterResult) -> None:
    payload = {
        "clusters": [
            [{"kind": kind, "value": value} for kind, value in cluster]
            for cluster in result.clusters
        ],
        "rows": [
            {"phrase": row.phrase, "iri": row.iri, "needs_expert": row.needs_expert}
            for row in result.rows
        ],
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, ensure_ascii=False, sort_keys=True, indent=1)
        fh.write("\n")
