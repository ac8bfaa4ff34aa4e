from __future__ import annotations

import pytest

from kbp.model import (
    AnnotatedSentence,
    CandidateTriple,
    DependencyArc,
    EntityLink,
    KbEntity,
    KbSnapshot,
    Predicate,
)


def make_sentence(
    sid="s1",
    tokens=("Alice", "visited", "Berlin", "."),
    pos=None,
    heads=None,
    rels=None,
    ner=None,
    links=(),
    text=None,
):
    """Compact sentence builder: defaults to a flat tree rooted at token 2.

    ``links`` entries are (start, end, entity[, confidence[, class]]).
    """
    n = len(tokens)
    if pos is None:
        pos = ["PROPN"] * n
    if heads is None:
        root = min(2, n)
        heads = [root if i + 1 != root else 0 for i in range(n)]
    if rels is None:
        rels = ["root" if h == 0 else "dep" for h in heads]
    if ner is None:
        ner = ["O"] * n
    entity_links = []
    for entry in links:
        start, end, entity = entry[0], entry[1], entry[2]
        confidence = entry[3] if len(entry) > 3 else 1.0
        entity_class = entry[4] if len(entry) > 4 else ""
        entity_links.append(
            EntityLink(start=start, end=end, entity=entity,
                       confidence=confidence, entity_class=entity_class)
        )
    return AnnotatedSentence(
        id=sid,
        text=text if text is not None else " ".join(tokens),
        tokens=tuple(tokens),
        pos=tuple(pos),
        ner=tuple(ner),
        deps=tuple(DependencyArc(head=h, relation=r) for h, r in zip(heads, rels)),
        links=tuple(entity_links),
    )


def make_triple(
    subject="e:1",
    predicate=Predicate.iri("fkgo:leaderName"),
    obj="e:2",
    extractor="tokpat",
    confidence=0.9,
    sentence_id="s1",
):
    if isinstance(predicate, str):
        predicate = Predicate.iri(predicate)
    return CandidateTriple(
        subject=subject,
        predicate=predicate,
        object=obj,
        extractor=extractor,
        confidence=confidence,
        sentence_id=sentence_id,
    )


@pytest.fixture
def small_kb():
    return KbSnapshot(
        entities=(
            KbEntity("e:belarus", ("Belarus",), "fkgo:Country"),
            KbEntity("e:lukashenko", ("Alexander Lukashenko", "Lukashenko"), "fkgo:Person"),
            KbEntity("e:minsk", ("Minsk",), "fkgo:City"),
        ),
        predicates=frozenset({"fkgo:leaderName", "fkgo:capital", "fkgo:nationality"}),
        facts=frozenset({("e:belarus", "fkgo:leaderName", "e:lukashenko")}),
        mapping_table={"پایتخت": "fkgo:capital"},
    )
