"""Scoring extractor output against the gold corpus.

Each extraction is classified against the gold triple of its sentence:

* Correct - subject, predicate, and object all equal the gold triple;
* Wrong   - subject and object match but the predicate differs;
* OSO     - anything else ("other subject/object"): not present in gold,
            possibly true but unverifiable, so excluded from precision.

Counting happens over distinct (subject, predicate, object, sentence)
extractions.  Since every gold sentence carries exactly one triple, this
also enforces at most one Correct per gold sentence, which is the recall
convention used throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .model import CandidateTriple, GoldRecord, triple_identity

CORRECT = "Correct"
WRONG = "Wrong"
OSO = "OSO"


@dataclass(frozen=True)
class ClassCounts:
    total: int
    correct: int
    wrong: int
    oso: int


def classify_candidate(t: CandidateTriple, gold: GoldRecord) -> str:
    """Classify one canonical extraction against its sentence's gold triple."""
    if not t.predicate.is_canonical:
        raise ValueError("classification requires a canonical predicate")
    if t.subject == gold.subject and t.object == gold.object:
        return CORRECT if t.predicate.value == gold.predicate else WRONG
    return OSO


def count_classifications(
    triples: Sequence[CandidateTriple], gold_by_id: Mapping[str, GoldRecord]
) -> ClassCounts:
    """Classify distinct extractions; unknown sentence ids are an error."""
    seen = set()
    correct = wrong = oso = 0
    for t in triples:
        gold = gold_by_id.get(t.sentence_id)
        if gold is None:
            raise ValueError(f"sentence {t.sentence_id!r} not in gold corpus")
        key = (triple_identity(t), t.sentence_id)
        if key in seen:
            continue
        seen.add(key)
        label = classify_candidate(t, gold)
        if label == CORRECT:
            correct += 1
        elif label == WRONG:
            wrong += 1
        else:
            oso += 1
    return ClassCounts(total=len(seen), correct=correct, wrong=wrong, oso=oso)


def compute_metrics(corrects: int, wrongs: int, gold_size: int) -> tuple[float, float, float]:
    """(precision, recall, F1); OSO extractions never enter precision."""
    if gold_size <= 0:
        raise ValueError("gold_size must be positive")
    if corrects < 0 or wrongs < 0:
        raise ValueError("counts must be non-negative")
    denominator = corrects + wrongs
    precision = corrects / denominator if denominator else 0.0
    recall = corrects / gold_size
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return precision, recall, f1


def triples_per_sentence(total_triples: int, sentence_count: int) -> float:
    if sentence_count <= 0:
        raise ValueError("sentence_count must be positive")
    return round(total_triples / sentence_count, 4)


def common_triples_matrix(
    outputs: Mapping[str, Sequence[CandidateTriple]]
) -> tuple[list[str], list[list[int]]]:
    """Pairwise counts of shared identity keys over ALL extracted triples,
    gold membership notwithstanding.  Symmetric, zero diagonal."""
    if len(outputs) < 2:
        raise ValueError("need at least two extractors")
    ids = sorted(outputs)
    key_sets = {e: {triple_identity(t) for t in outputs[e]} for e in ids}
    matrix = [
        [
            0 if i == j else len(key_sets[ids[i]] & key_sets[ids[j]])
            for j in range(len(ids))
        ]
        for i in range(len(ids))
    ]
    return ids, matrix


def evaluation_report(
    outputs: Mapping[str, Sequence[CandidateTriple]],
    gold: Sequence[GoldRecord],
) -> dict:
    """Per-extractor counts and metrics plus the common-triples matrix."""
    gold_by_id = {g.sentence.id: g for g in gold}
    modules = {}
    for extractor in sorted(outputs):
        counts = count_classifications(outputs[extractor], gold_by_id)
        precision, recall, f1 = compute_metrics(counts.correct, counts.wrong, len(gold))
        modules[extractor] = {
            "triples": counts.total,
            "corrects": counts.correct,
            "wrongs": counts.wrong,
            "oso": counts.oso,
            "triples_per_sentence": triples_per_sentence(counts.total, len(gold)),
            "precision": precision,
            "recall": recall,
            "f1": f1,
        }
    report: dict = {"gold_size": len(gold), "modules": modules}
    if len(outputs) >= 2:
        ids, matrix = common_triples_matrix(outputs)
        report["common_triples"] = {"extractors": ids, "matrix": matrix}
    return report
