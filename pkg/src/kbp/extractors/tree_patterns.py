"""Dependency-pattern mining and matching.

Two sentences share a pattern when replacing every word with its POS tag
yields the same tree: the per-token sequence of (POS, head index, relation)
is identical.  Frequent patterns are mined from a corpus, annotated by hand
with subject/object/predicate token positions, and then applied verbatim:
a sentence whose key equals an annotated pattern's key yields a triple read
off the role positions.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from ..corpus_io import CorpusFormatError, iter_jsonl, dumps
from ..model import AnnotatedSentence, CandidateTriple, EntityLink, Predicate

EXTRACTOR_ID = "deppat"
BASE_CONFIDENCE = 1.0

PatternKey = tuple[tuple[str, int, str], ...]


@dataclass(frozen=True)
class DepPattern:
    """A structural sentence pattern plus optional role annotations.

    ``key`` holds one (POS, head, relation) element per token; role fields
    are 1-based token positions within the key, empty until an expert
    annotates the pattern.
    """

    key: PatternKey
    subject: tuple[int, ...] = ()
    object: tuple[int, ...] = ()
    predicate: tuple[int, ...] = ()
    support: int = 0

    def __post_init__(self) -> None:
        n = len(self.key)
        for name, positions in (
            ("subject", self.subject),
            ("object", self.object),
            ("predicate", self.predicate),
        ):
            for p in positions:
                if not 1 <= p <= n:
                    raise ValueError(f"{name} position {p} outside 1..{n}")
        if set(self.subject) & set(self.object):
            raise ValueError("subject and object positions overlap")

    @property
    def annotated(self) -> bool:
        return bool(self.subject and self.object and self.predicate)


def pattern_key(s: AnnotatedSentence) -> PatternKey:
    return tuple(
        (s.pos[i], s.deps[i].head, s.deps[i].relation) for i in range(len(s.tokens))
    )


def mine_dependency_patterns(
    corpus: Sequence[AnnotatedSentence], min_support: int
) -> list[DepPattern]:
    """Group the corpus by pattern key and keep keys with enough support,
    sorted by descending support, then key."""
    if min_support < 1:
        raise ValueError("min_support must be >= 1")
    counts = Counter(pattern_key(s) for s in corpus)
    kept = [
        DepPattern(key=key, support=support)
        for key, support in counts.items()
        if support >= min_support
    ]
    kept.sort(key=lambda p: (-p.support, p.key))
    return kept


def _covering_links(
    s: AnnotatedSentence, positions: tuple[int, ...]
) -> tuple[EntityLink, ...]:
    """Links that cover every role position (positions are 1-based)."""
    zero_based = [p - 1 for p in positions]
    return tuple(
        l
        for l in sorted(s.links, key=lambda l: (l.start, l.end, l.entity))
        if l.confidence > 0.0 and all(l.start <= p < l.end for p in zero_based)
    )


def extract_dep_pattern(
    s: AnnotatedSentence,
    bank: Iterable[DepPattern],
    extractor_id: str = EXTRACTOR_ID,
    base_confidence: float = BASE_CONFIDENCE,
) -> list[CandidateTriple]:
    """Apply annotated bank patterns whose key equals the sentence's key.

    Role positions transfer verbatim: subject/object come from the entity
    links covering those positions (the triple is dropped when they are
    unlinked), the raw predicate is the concatenation of the predicate-role
    tokens in surface order.
    """
    key = pattern_key(s)
    triples: list[CandidateTriple] = []
    for pat in bank:
        if not pat.annotated or pat.key != key:
            continue
        phrase = Predicate.raw(
            " ".join(s.tokens[p - 1] for p in sorted(pat.predicate))
        )
        for subj in _covering_links(s, pat.subject):
            for obj in _covering_links(s, pat.object):
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


# ---------------------------------------------------------------------------
# pattern bank file (JSONL, one pattern per line)


def pattern_to_json(p: DepPattern) -> dict:
    return {
        "key": [{"pos": pos, "head": head, "rel": rel} for pos, head, rel in p.key],
        "subject": list(p.subject),
        "object": list(p.object),
        "predicate": list(p.predicate),
        "support": p.support,
    }


def pattern_from_json(obj: dict) -> DepPattern:
    return DepPattern(
        key=tuple(
            (str(e["pos"]), int(e["head"]), str(e["rel"])) for e in obj["key"]
        ),
        subject=tuple(int(x) for x in obj.get("subject", [])),
        object=tuple(int(x) for x in obj.get("object", [])),
        predicate=tuple(int(x) for x in obj.get("predicate", [])),
        support=int(obj.get("support", 0)),
    )


def save_pattern_bank(path: str | Path, bank: Iterable[DepPattern]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for p in bank:
            fh.write(dumps(pattern_to_json(p)))
            fh.write("\n")


def load_pattern_bank(path: str | Path) -> list[DepPattern]:
    path = Path(path)
    bank = []
    for lineno, obj in iter_jsonl(path):
        try:
            bank.append(pattern_from_json(obj))
        except (ValueError, KeyError, TypeError) as exc:
            raise CorpusFormatError(f"{path}:{lineno}: {exc}") from exc
    return bank
