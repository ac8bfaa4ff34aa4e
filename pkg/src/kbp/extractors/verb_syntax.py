"""Verb-centered syntactic extraction.

One triple per (subject, object) dependent pair of a verb: the subject is
the subtree of the verb's subject dependent, objects are the subtrees of
its object/complement dependents.  Light-verb constructions keep their
non-verbal element: the raw predicate is the verb plus the non-verbal
tokens attached by compound-like relations, in surface order.
"""

from __future__ import annotations

from ..model import AnnotatedSentence, CandidateTriple, Predicate
from . import base_relation, links_on_span, subtree_span

EXTRACTOR_ID = "psie"
BASE_CONFIDENCE = 0.8

SUBJECT_RELATIONS = frozenset({"nsubj"})
OBJECT_RELATIONS = frozenset({"obj", "iobj", "ccomp", "xcomp"})
COMPOUND_RELATIONS = frozenset({"compound"})

VERBAL_POS = frozenset({"VERB", "AUX"})


def _compound_predicate(
    s: AnnotatedSentence, verb: int, children: dict[int, list[int]]
) -> str:
    parts = [verb] + [
        d
        for d in children.get(verb, [])
        if base_relation(s.deps[d - 1].relation) in COMPOUND_RELATIONS
        and s.pos[d - 1] not in VERBAL_POS
    ]
    return " ".join(s.tokens[i - 1] for i in sorted(parts))


def extract_psie(
    s: AnnotatedSentence,
    extractor_id: str = EXTRACTOR_ID,
    base_confidence: float = BASE_CONFIDENCE,
) -> list[CandidateTriple]:
    children = s.children()
    triples: list[CandidateTriple] = []
    for verb in range(1, len(s.tokens) + 1):
        if s.pos[verb - 1] != "VERB":
            continue
        dependents = children.get(verb, [])
        subjects = sorted(
            d for d in dependents
            if base_relation(s.deps[d - 1].relation) in SUBJECT_RELATIONS
        )
        if not subjects:
            continue
        subject_links = links_on_span(s, subtree_span(s, subjects[0]))
        if not subject_links:
            continue
        objects = sorted(
            d for d in dependents
            if base_relation(s.deps[d - 1].relation) in OBJECT_RELATIONS
        )
        if not objects:
            continue
        phrase = Predicate.raw(_compound_predicate(s, verb, children))
        for obj_dep in objects:
            for subj in subject_links:
                for obj in links_on_span(s, subtree_span(s, obj_dep)):
                    triples.append(
                        CandidateTriple(
                            subject=subj.entity,
                            predicate=phrase,
                            object=obj.entity,
                            extractor=extractor_id,
                            confidence=base_confidence * subj.confidence * obj.confidence,
                            sentence_id=s.id,
                        )
                    )
    return triples
