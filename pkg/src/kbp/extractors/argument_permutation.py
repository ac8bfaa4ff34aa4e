"""Verb-argument permutation extraction.

For every verb the arguments are the maximal subtrees hanging off it via
core argument relations (subject-like, object-like, oblique).  With n >= 2
arguments, every ordered pair (arg_i, arg_j), i != j, becomes a candidate
triple, n*(n-1) in total, each carrying confidence 1/(n*(n-1)): the
permutations are mutually exclusive readings, so mass is split evenly.
"""

from __future__ import annotations

from ..model import AnnotatedSentence, CandidateTriple, Predicate
from . import base_relation, links_on_span, subtree_span

EXTRACTOR_ID = "predpatt"

SUBJECT_RELATIONS = frozenset({"nsubj", "csubj"})
OBJECT_RELATIONS = frozenset({"obj", "iobj", "dobj"})
OBLIQUE_RELATIONS = frozenset({"obl"})
ARGUMENT_RELATIONS = SUBJECT_RELATIONS | OBJECT_RELATIONS | OBLIQUE_RELATIONS

# dependents folded into the predicate phrase alongside the verb
PREDICATE_RELATIONS = frozenset({"aux", "neg"})

VERB_POS = "VERB"


def _predicate_phrase(s: AnnotatedSentence, verb: int, children: dict[int, list[int]]) -> str:
    parts = [verb] + [
        d for d in children.get(verb, [])
        if base_relation(s.deps[d - 1].relation) in PREDICATE_RELATIONS
    ]
    return " ".join(s.tokens[i - 1] for i in sorted(parts))


def extract_predpatt(s: AnnotatedSentence, extractor_id: str = EXTRACTOR_ID) -> list[CandidateTriple]:
    """Emit all ordered argument permutations around each verb.

    Both ends of a pair must coincide with entity-link spans; pairs with an
    unlinked end are dropped.  A span with k candidate links expands into k
    alternatives weighted by the link confidences.
    """
    children = s.children()
    triples: list[CandidateTriple] = []
    for verb in range(1, len(s.tokens) + 1):
        if s.pos[verb - 1] != VERB_POS:
            continue
        args = sorted(
            d for d in children.get(verb, [])
            if base_relation(s.deps[d - 1].relation) in ARGUMENT_RELATIONS
        )
        n = len(args)
        if n < 2:
            continue
        base_confidence = 1.0 / (n * (n - 1))
        phrase = Predicate.raw(_predicate_phrase(s, verb, children))
        arg_links = [links_on_span(s, subtree_span(s, a)) for a in args]
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                for subj in arg_links[i]:
                    for obj in arg_links[j]:
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
