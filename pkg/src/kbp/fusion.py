"""The ensemble gate over canonical candidate triples.

A triple grouped by identity is accepted when it was extracted by at least
two distinct extractors (any confidence), or when any single supporting
extraction reaches the confidence threshold.  Either condition suffices;
multi-extractor triples therefore pass at every threshold.  The fused
confidence is the maximum over supports, which preserves the gate's
semantics without inventing an aggregation the decision never uses.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .evaluation import compute_metrics, count_classifications
from .model import CandidateTriple, GoldRecord, Predicate, TripleKey, triple_identity


@dataclass(frozen=True)
class Support:
    extractor: str
    confidence: float
    sentence_id: str


@dataclass(frozen=True)
class FusedTriple:
    key: TripleKey
    supports: tuple[Support, ...]
    fused_confidence: float
    accepted: bool

    def __post_init__(self) -> None:
        if not self.supports:
            raise ValueError("fused triple needs at least one support")

    @property
    def subject(self) -> str:
        return self.key[0]

    @property
    def predicate(self) -> Predicate:
        kind, value = self.key[1]
        return Predicate(kind, value)

    @property
    def object(self) -> str:
        return self.key[2]

    @property
    def extractors(self) -> frozenset[str]:
        return frozenset(s.extractor for s in self.supports)


def fuse(triples: Sequence[CandidateTriple], threshold: float) -> list[FusedTriple]:
    """Group by identity and apply the two-condition gate; accepted and
    rejected groups are both returned, flagged, sorted by identity key."""
    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"threshold must be in [0, 1], got {threshold}")
    groups: dict[TripleKey, list[Support]] = {}
    for t in triples:
        if not t.predicate.is_canonical:
            raise ValueError(
                f"fusion requires canonical predicates, got raw {t.predicate.value!r}"
            )
        groups.setdefault(triple_identity(t), []).append(
            Support(extractor=t.extractor, confidence=t.confidence, sentence_id=t.sentence_id)
        )
    fused = []
    for key in sorted(groups):
        supports = tuple(
            sorted(groups[key], key=lambda s: (s.extractor, s.sentence_id, -s.confidence))
        )
        best = max(s.confidence for s in supports)
        accepted = len({s.extractor for s in supports}) >= 2 or best >= threshold
        fused.append(
            FusedTriple(
                key=key, supports=supports, fused_confidence=best, accepted=accepted
            )
        )
    return fused


def accepted_candidates(fused: Sequence[FusedTriple]) -> list[CandidateTriple]:
    """Flatten accepted groups back to per-sentence candidates for scoring."""
    out = []
    for f in fused:
        if not f.accepted:
            continue
        for sentence_id in sorted({s.sentence_id for s in f.supports}):
            out.append(
                CandidateTriple(
                    subject=f.subject,
                    predicate=f.predicate,
                    object=f.object,
                    extractor="fusion",
                    confidence=f.fused_confidence,
                    sentence_id=sentence_id,
                )
            )
    return out


@dataclass(frozen=True)
class SweepRow:
    threshold: float
    precision: float
    recall: float
    f1: float


def sweep_thresholds(
    triples: Sequence[CandidateTriple],
    gold: Sequence[GoldRecord],
    thresholds: Sequence[float],
) -> list[SweepRow]:
    """Evaluate the accepted set at each threshold; thresholds ascending."""
    if list(thresholds) != sorted(thresholds):
        raise ValueError("thresholds must be sorted ascending")
    gold_by_id = {g.sentence.id: g for g in gold}
    rows = []
    for threshold in thresholds:
        counts = count_classifications(
            accepted_candidates(fuse(triples, threshold)), gold_by_id
        )
        precision, recall, f1 = compute_metrics(counts.correct, counts.wrong, len(gold))
        rows.append(SweepRow(threshold=threshold, precision=precision, recall=recall, f1=f1))
    return rows
