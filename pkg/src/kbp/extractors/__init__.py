"""Five extractor back-ends behind one calling convention.

Each extractor consumes an entity-linked :class:`~kbp.model.AnnotatedSentence`
and emits :class:`~kbp.model.CandidateTriple` objects.  Subject and object of
every emitted triple are entity IRIs: an argument whose span does not
coincide with an entity link is dropped rather than emitted as raw text.
When a span carries k candidate entities, extractors emit the cross product
of candidates with confidences scaled by each link confidence.

Extractor ids (also the CLI module names):

========== ============================================ ===============
id         method                                       base confidence
========== ============================================ ===============
predpatt   verb-argument permutation                    1/(n*(n-1))
deppat     mined dependency-pattern matching            1.0
psie       verb-centered syntactic extraction           0.8
repersian  POS-template relation phrases                0.7
tokpat     token-pattern rules (canonical predicates)   0.9
distant    statistics overlap (canonical predicates)    score/(score+2)
========== ============================================ ===============

Base confidences are constants of each module, overridable per call; the
method itself never changes.
"""

from __future__ import annotations

from ..model import AnnotatedSentence, EntityLink

RAW_EXTRACTORS = ("predpatt", "deppat", "psie", "repersian")
CANONICAL_EXTRACTORS = ("tokpat", "distant")
ALL_EXTRACTORS = RAW_EXTRACTORS + CANONICAL_EXTRACTORS


def base_relation(relation: str) -> str:
    """Universal relation without its subtype, e.g. ``nsubj:pass`` → ``nsubj``."""
    return relation.split(":", 1)[0]


def subtree_span(s: AnnotatedSentence, root: int) -> tuple[int, int]:
    """0-based half-open hull of the subtree rooted at 1-based token ``root``."""
    children = s.children()
    members = []
    stack = [root]
    while stack:
        node = stack.pop()
        members.append(node)
        stack.extend(children.get(node, []))
    return (min(members) - 1, max(members))


def links_on_span(s: AnnotatedSentence, span: tuple[int, int]) -> tuple[EntityLink, ...]:
    """Candidate links exactly on ``span``; zero-confidence links are unusable
    as triple arguments and are skipped."""
    return tuple(
        l for l in sorted(s.links_at(span), key=lambda l: l.entity) if l.confidence > 0.0
    )


from .argument_permutation import extract_predpatt  # noqa: E402
from .pos_templates import extract_repersian, load_pos_templates  # noqa: E402
from .token_patterns import (  # noqa: E402
    PatternSyntaxError,
    TokenPatternRule,
    compile_token_pattern,
    extract_token_patterns,
    load_token_rules,
)
from .tree_patterns import (  # noqa: E402
    DepPattern,
    extract_dep_pattern,
    load_pattern_bank,
    mine_dependency_patterns,
    pattern_key,
    save_pattern_bank,
)
from .verb_syntax import extract_psie  # noqa: E402

__all__ = [
    "ALL_EXTRACTORS",
    "CANONICAL_EXTRACTORS",
    "DepPattern",
    "PatternSyntaxError",
    "RAW_EXTRACTORS",
    "TokenPatternRule",
    "base_relation",
    "compile_token_pattern",
    "extract_dep_pattern",
    "extract_predpatt",
    "extract_psie",
    "extract_repersian",
    "extract_token_patterns",
    "links_on_span",
    "load_pattern_bank",
    "load_pos_templates",
    "load_token_rules",
    "mine_dependency_patterns",
    "pattern_key",
    "save_pattern_bank",
    "subtree_span",
]
