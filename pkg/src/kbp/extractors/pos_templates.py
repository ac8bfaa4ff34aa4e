"""Relation phrases matched by POS templates between entity mentions.

The region between two adjacent linked spans is reduced to a string of POS
classes (V = verb, P = adposition, W = anything else) and scanned against a
small set of templates, by default ``V``, ``V P``, and ``V W* P``.  Each
verb in the region anchors at most one relation phrase: the longest
template match starting at that verb.  Templates are data, loadable from a
JSON list, so a mined set can replace the defaults without code changes.
"""

from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Sequence

from ..model import AnnotatedSentence, CandidateTriple, Predicate
from . import links_on_span

EXTRACTOR_ID = "repersian"
BASE_CONFIDENCE = 0.7

DEFAULT_TEMPLATES = ("V", "V P", "V W* P")

# template symbol -> regex over the POS-class alphabet {V, P, W}
_SYMBOL_PATTERNS = {"V": "V", "P": "P", "W": "[PW]"}
_QUANTIFIERS = ("?", "*", "+")


def compile_templates(templates: Sequence[str]) -> list[re.Pattern[str]]:
    compiled = []
    for template in templates:
        parts = []
        for symbol in template.split():
            quant = ""
            if symbol and symbol[-1] in _QUANTIFIERS:
                symbol, quant = symbol[:-1], symbol[-1]
            if symbol not in _SYMBOL_PATTERNS:
                raise ValueError(
                    f"template {template!r}: unknown symbol {symbol!r}"
                    " (expected V, P, or W)"
                )
            parts.append(_SYMBOL_PATTERNS[symbol] + quant)
        if not parts:
            raise ValueError("empty template")
        compiled.append(re.compile("".join(parts)))
    return compiled


def load_pos_templates(path: str | Path) -> tuple[str, ...]:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, list) or not all(isinstance(t, str) for t in data):
        raise ValueError(f"{path}: expected a JSON list of template strings")
    return tuple(data)


def _pos_class(pos: str) -> str:
    if pos == "VERB":
        return "V"
    if pos == "ADP":
        return "P"
    return "W"


def extract_repersian(
    s: AnnotatedSentence,
    templates: Sequence[str] = DEFAULT_TEMPLATES,
    extractor_id: str = EXTRACTOR_ID,
    base_confidence: float = BASE_CONFIDENCE,
) -> list[CandidateTriple]:
    """Extract (left entity, relation phrase, right entity) triples.

    Only adjacent pairs of linked spans are considered (no third linked span
    inside the gap), so a relation phrase never swallows another mention.
    """
    patterns = compile_templates(templates)
    spans = sorted({l.span for l in s.links if l.confidence > 0.0})
    triples: list[CandidateTriple] = []
    for left in spans:
        for right in spans:
            if left[1] > right[0] or left == right:
                continue
            if any(left[1] <= mid[0] and mid[1] <= right[0] for mid in spans if mid not in (left, right)):
                continue
            gap_start = left[1]
            classes = "".join(_pos_class(s.pos[i]) for i in range(gap_start, right[0]))
            for offset in range(len(classes)):
                if classes[offset] != "V":
                    continue
                end = max(
                    (m.end() for p in patterns for m in [p.match(classes, offset)] if m),
                    default=0,
                )
                if end <= offset:
                    continue
                phrase = Predicate.raw(
                    " ".join(s.tokens[gap_start + k] for k in range(offset, end))
                )
                for subj in links_on_span(s, left):
                    for obj in links_on_span(s, right):
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
