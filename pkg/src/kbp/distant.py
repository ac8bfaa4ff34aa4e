"""Distant supervision: dataset construction, per-predicate statistics, and
an overlap-scoring extractor.

A sentence mentioning a pair of entities already related in the KB becomes
a training instance for that relation.  From the instances, each predicate
accumulates its frequent context tokens and compound-verb phrases; scoring
a new sentence against those profiles yields canonical-predicate triples
directly.  Token comparison uses the same normalization as phrase identity,
so the statistics stay language-agnostic.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .corpus_io import CorpusFormatError, iter_jsonl, dumps
from .model import AnnotatedSentence, CandidateTriple, KbSnapshot, Predicate, normalize_phrase
from .extractors import base_relation

EXTRACTOR_ID = "distant"

# one point per shared token, two per shared compound verb; emit at >= 2
COMPOUND_WEIGHT = 2
MIN_SCORE = 2

NON_VERBAL_COMPOUND_POS = frozenset({"VERB", "AUX"})


@dataclass(frozen=True)
class DsInstance:
    sentence_id: str
    subject: str
    object: str
    predicate: str
    subject_span: tuple[int, int]
    object_span: tuple[int, int]


@dataclass(frozen=True)
class PredicateProfile:
    frequent_tokens: Mapping[str, int]
    compound_verbs: Mapping[str, int]
    instance_count: int


@dataclass(frozen=True)
class PredicateStats:
    per_predicate: Mapping[str, PredicateProfile]

    def __len__(self) -> int:
        return len(self.per_predicate)

    def __bool__(self) -> bool:
        return bool(self.per_predicate)


def _disjoint(a: tuple[int, int], b: tuple[int, int]) -> bool:
    return a[1] <= b[0] or b[1] <= a[0]


def build_ds_dataset(
    corpus: Sequence[AnnotatedSentence], kb: KbSnapshot
) -> list[DsInstance]:
    """Label every ordered pair of linked mentions with each KB fact that
    relates the pair (single-instance labeling, no aggregation).

    Pairs on overlapping spans are skipped: the same mention cannot serve
    as both arguments.
    """
    by_pair: dict[tuple[str, str], list[str]] = {}
    for s, p, o in kb.facts:
        by_pair.setdefault((s, o), []).append(p)
    for preds in by_pair.values():
        preds.sort()

    instances: list[DsInstance] = []
    seen: set[tuple] = set()
    for sentence in corpus:
        links = sorted(sentence.links, key=lambda l: (l.start, l.end, l.entity))
        for a in links:
            for b in links:
                if a is b or not _disjoint(a.span, b.span):
                    continue
                for predicate in by_pair.get((a.entity, b.entity), ()):
                    inst = DsInstance(
                        sentence_id=sentence.id,
                        subject=a.entity,
                        object=b.entity,
                        predicate=predicate,
                        subject_span=a.span,
                        object_span=b.span,
                    )
                    if inst not in seen:
                        seen.add(inst)
                        instances.append(inst)
    return instances


def compound_verb_phrases(s: AnnotatedSentence) -> list[tuple[int, str]]:
    """Compound-verb phrases of a sentence as (1-based verb index, phrase):
    each verb joined with its non-verbal compound-relation dependents in
    surface order, normalized."""
    children = s.children()
    phrases = []
    for verb in range(1, len(s.tokens) + 1):
        if s.pos[verb - 1] != "VERB":
            continue
        parts = [verb] + [
            d
            for d in children.get(verb, [])
            if base_relation(s.deps[d - 1].relation) == "compound"
            and s.pos[d - 1] not in NON_VERBAL_COMPOUND_POS
        ]
        phrase = " ".join(s.tokens[i - 1] for i in sorted(parts))
        phrases.append((verb, normalize_phrase(phrase)))
    return phrases


def compute_predicate_statistics(
    instances: Sequence[DsInstance],
    corpus: Sequence[AnnotatedSentence],
    stopwords: Iterable[str] = (),
) -> PredicateStats:
    """Count, per predicate, the non-stopword tokens outside the two
    argument spans and the compound verbs anchored outside them.  Context
    tokens seen fewer than twice are pruned as noise."""
    by_id = {s.id: s for s in corpus}
    stop = {normalize_phrase(w) for w in stopwords}
    token_counts: dict[str, Counter[str]] = {}
    compound_counts: dict[str, Counter[str]] = {}
    instance_counts: Counter[str] = Counter()

    for inst in instances:
        sentence = by_id.get(inst.sentence_id)
        if sentence is None:
            raise ValueError(f"instance references unknown sentence {inst.sentence_id!r}")
        spans = (inst.subject_span, inst.object_span)
        outside = [
            i for i in range(len(sentence.tokens))
            if not any(lo <= i < hi for lo, hi in spans)
        ]
        tokens = token_counts.setdefault(inst.predicate, Counter())
        for i in outside:
            word = normalize_phrase(sentence.tokens[i])
            if word and word not in stop:
                tokens[word] += 1
        compounds = compound_counts.setdefault(inst.predicate, Counter())
        for verb, phrase in compound_verb_phrases(sentence):
            if verb - 1 in outside:
                compounds[phrase] += 1
        instance_counts[inst.predicate] += 1

    profiles = {}
    for predicate, count in instance_counts.items():
        profiles[predicate] = PredicateProfile(
            frequent_tokens={
                w: c for w, c in sorted(token_counts[predicate].items()) if c >= 2
            },
            compound_verbs=dict(sorted(compound_counts[predicate].items())),
            instance_count=count,
        )
    return PredicateStats(per_predicate=profiles)


def score_predicates(s: AnnotatedSentence, stats: PredicateStats) -> dict[str, int]:
    """Overlap score of every profiled predicate against the sentence."""
    token_set = {normalize_phrase(t) for t in s.tokens}
    compound_set = {phrase for _, phrase in compound_verb_phrases(s)}
    scores = {}
    for predicate, profile in stats.per_predicate.items():
        scores[predicate] = len(token_set & set(profile.frequent_tokens)) + (
            COMPOUND_WEIGHT * len(compound_set & set(profile.compound_verbs))
        )
    return scores


def best_predicate(scores: Mapping[str, int], min_score: int = MIN_SCORE) -> tuple[str, int] | None:
    """Argmax with deterministic tie-break on the lexicographically smaller IRI."""
    winner = None
    for predicate in sorted(scores):
        score = scores[predicate]
        if score >= min_score and (winner is None or score > winner[1]):
            winner = (predicate, score)
    return winner


def extract_distant(
    s: AnnotatedSentence,
    stats: PredicateStats,
    extractor_id: str = EXTRACTOR_ID,
    min_score: int = MIN_SCORE,
) -> list[CandidateTriple]:
    """Emit the best-scoring predicate for every ordered pair of linked
    mentions; confidence grows with the score as score/(score+2)."""
    if not stats:
        return []
    hit = best_predicate(score_predicates(s, stats), min_score=min_score)
    if hit is None:
        return []
    predicate, score = hit
    confidence = score / (score + 2.0)
    links = sorted(s.links, key=lambda l: (l.start, l.end, l.entity))
    triples = []
    for a in links:
        for b in links:
            if a is b or not _disjoint(a.span, b.span):
                continue
            triples.append(
                CandidateTriple(
                    subject=a.entity,
                    predicate=Predicate.iri(predicate),
                    object=b.entity,
                    extractor=extractor_id,
                    confidence=confidence,
                    sentence_id=s.id,
                )
            )
    return triples


# ---------------------------------------------------------------------------
# on-disk formats


def save_ds_instances(path: str | Path, instances: Iterable[DsInstance]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for inst in instances:
            fh.write(
                dumps(
                    {
                        "sentence_id": inst.sentence_id,
                        "subject": inst.subject,
                        "predicate": inst.predicate,
                        "object": inst.object,
                        "subject_span": list(inst.subject_span),
                        "object_span": list(inst.object_span),
                    }
                )
            )
            fh.write("\n")


def load_ds_instances(path: str | Path) -> list[DsInstance]:
    path = Path(path)
    out = []
    for lineno, obj in iter_jsonl(path):
        try:
            out.append(
                DsInstance(
                    sentence_id=str(obj["sentence_id"]),
                    subject=str(obj["subject"]),
                    object=str(obj["object"]),
                    predicate=str(obj["predicate"]),
                    subject_span=tuple(int(x) for x in obj["subject_span"]),  # type: ignore[arg-type]
                    object_span=tuple(int(x) for x in obj["object_span"]),  # type: ignore[arg-type]
                )
            )
        except (ValueError, KeyError, TypeError) as exc:
            raise CorpusFormatError(f"{path}:{lineno}: {exc}") from exc
    return out


def save_predicate_stats(path: str | Path, stats: PredicateStats) -> None:
    payload = {
        predicate: {
            "frequent_tokens": dict(profile.frequent_tokens),
            "compound_verbs": dict(profile.compound_verbs),
            "instance_count": profile.instance_count,
        }
        for predicate, profile in stats.per_predicate.items()
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, ensure_ascii=False, sort_keys=True, indent=1)
        fh.write("\n")


def load_predicate_stats(path: str | Path) -> PredicateStats:
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    profiles = {
        predicate: PredicateProfile(
            frequent_tokens={str(k): int(v) for k, v in entry["frequent_tokens"].items()},
            compound_verbs={str(k): int(v) for k, v in entry["compound_verbs"].items()},
            instance_count=int(entry["instance_count"]),
        )
        for predicate, entry in payload.items()
    }
    return PredicateStats(per_predicate=profiles)
