"""Dictionary-based entity linking over token n-grams.

Every surface form of every KB entity goes into an index; linking scans a
sentence left to right, preferring the longest matching n-gram (capped at
``max_ngram`` tokens).  A surface form shared by k entities yields k
candidate links on the same span with uniform priors 1/k, so downstream
extractors can expand the ambiguity and let fusion sort it out.  No
context-dependent disambiguation happens here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .model import AnnotatedSentence, EntityLink, KbSnapshot, normalize_phrase

DEFAULT_MAX_NGRAM = 6


@dataclass(frozen=True)
class SurfaceIndex:
    """Normalized surface form → candidates as (entity IRI, prior), sorted by
    descending prior with ties broken by IRI; IRI → ontology class."""

    forms: Mapping[str, tuple[tuple[str, float], ...]] = field(default_factory=dict)
    classes: Mapping[str, str] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.forms)


def build_surface_index(kb: KbSnapshot) -> SurfaceIndex:
    """Index every surface form; the prior of each candidate is the uniform
    1/(number of entities sharing the form)."""
    by_form: dict[str, set[str]] = {}
    classes: dict[str, str] = {}
    for entity in kb.entities:
        classes[entity.iri] = entity.entity_class
        for form in entity.surface_forms:
            key = normalize_phrase(form)
            if key:
                by_form.setdefault(key, set()).add(entity.iri)
    forms = {
        key: tuple((iri, 1.0 / len(iris)) for iri in sorted(iris))
        for key, iris in by_form.items()
    }
    return SurfaceIndex(forms=forms, classes=classes)


def link_entities(
    s: AnnotatedSentence, idx: SurfaceIndex, max_ngram: int = DEFAULT_MAX_NGRAM
) -> AnnotatedSentence:
    """Return a copy of ``s`` with dictionary matches added to its links.

    Greedy longest-match-first, left to right; matched spans never overlap
    each other or any pre-existing link.  Each match emits one link per
    candidate entity with confidence equal to its prior.
    """
    n = len(s.tokens)
    occupied = [False] * n
    for link in s.links:
        for i in range(link.start, link.end):
            occupied[i] = True

    new_links: list[EntityLink] = []
    pos = 0
    while pos < n:
        if occupied[pos]:
            pos += 1
            continue
        matched = 0
        for length in range(min(max_ngram, n - pos), 0, -1):
            if any(occupied[i] for i in range(pos, pos + length)):
                continue
            key = normalize_phrase(" ".join(s.tokens[pos : pos + length]))
            candidates = idx.forms.get(key)
            if candidates:
                for iri, prior in candidates:
                    new_links.append(
                        EntityLink(
                            start=pos,
                            end=pos + length,
                            entity=iri,
                            confidence=prior,
                            entity_class=idx.classes.get(iri, ""),
                        )
                    )
                matched = length
                break
        pos += matched if matched else 1

    links = tuple(
        sorted(
            list(s.links) + new_links,
            key=lambda l: (l.start, l.end, l.entity),
        )
    )
    return AnnotatedSentence(
        id=s.id, text=s.text, tokens=s.tokens, pos=s.pos, ner=s.ner,
        deps=s.deps, links=links,
    )
