"""Knowledge-base population from annotated text.

A library plus ``kbp`` CLI that links entity mentions, runs several
independent relation/information extractors, canonicalizes raw relation
phrases onto a fixed ontology, fuses candidate triples under a two-condition
ensemble gate, and routes survivors through a human review queue into the
knowledge-base store.
"""

__version__ = "0.1.0"

from .model import (
    AnnotatedSentence,
    CandidateTriple,
    DependencyArc,
    EntityLink,
    GoldRecord,
    KbEntity,
    KbSnapshot,
    Predicate,
    triple_identity,
)

__all__ = [
    "AnnotatedSentence",
    "CandidateTriple",
    "DependencyArc",
    "EntityLink",
    "GoldRecord",
    "KbEntity",
    "KbSnapshot",
    "Predicate",
    "triple_identity",
    "__version__",
]
