"""Recompute the synthetic-corpus summary counts by brute force.

Walks the corpus sentence by sentence calling the extraction functions
directly, with none of the pipeline's staging, file plumbing, or config
handling, then applies the two-condition acceptance rule literally to
hand-grouped triples.  The result is frozen into
data/synthetic/oracle_summary.json; the end-to-end acceptance test checks
that a real `kbp run` reproduces these counts exactly.
"""

from __future__ import annotations

import json
import sys
from collections import defaultdict
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from kbp import canonical, distant, linking  # noqa: E402
from kbp.corpus_io import load_gold_corpus, load_kb_snapshot, load_stopwords  # noqa: E402
from kbp.extractors import (  # noqa: E402
    extract_dep_pattern,
    extract_predpatt,
    extract_psie,
    extract_repersian,
    extract_token_patterns,
    load_pattern_bank,
    load_pos_templates,
    load_token_rules,
)
from kbp.model import triple_identity  # noqa: E402

BASE = Path(__file__).resolve().parents[1] / "data" / "synthetic"
THRESHOLD = 0.9


def main():
    kb = load_kb_snapshot(BASE / "kb")
    gold = load_gold_corpus(BASE / "corpus.jsonl")
    index = linking.build_surface_index(kb)
    linked = [linking.link_entities(g.sentence, index) for g in gold]

    instances = distant.build_ds_dataset(linked, kb)
    stats = distant.compute_predicate_statistics(
        instances, linked, load_stopwords(BASE / "stopwords.txt")
    )

    bank = load_pattern_bank(BASE / "patterns.jsonl")
    rules = load_token_rules(BASE / "rules.tokpat", kb)
    templates = load_pos_templates(BASE / "templates.json")

    extracted = []
    counts = defaultdict(int)
    for s in linked:
        per_sentence = (
            extract_predpatt(s)
            + extract_dep_pattern(s, bank)
            + extract_psie(s)
            + extract_repersian(s, templates=templates)
            + extract_token_patterns(s, rules)
            + distant.extract_distant(s, stats)
        )
        for t in per_sentence:
            counts[t.extractor] += 1
        extracted.extend(per_sentence)

    by_id = {s.id: s for s in linked}
    mapping = kb.normalized_mapping()
    kept, dropped = [], 0
    for t in extracted:
        if t.predicate.is_canonical:
            kept.append(t)
            continue
        out = canonical.canonicalize(t, kb, stats, by_id[t.sentence_id], mapping=mapping)
        if out is None:
            dropped += 1
        else:
            kept.append(out)

    groups = defaultdict(list)
    for t in kept:
        groups[triple_identity(t)].append(t)
    accepted = sum(
        1
        for members in groups.values()
        if len({m.extractor for m in members}) >= 2
        or any(m.confidence >= THRESHOLD for m in members)
    )

    oracle = {
        "sentences": len(gold),
        "linked_mentions": sum(len(s.links) for s in linked),
        "ds_instances": len(instances),
        "predicates_profiled": len(stats),
        "extracted": dict(sorted(counts.items())),
        "canonicalized": {"kept": len(kept), "dropped": dropped},
        "fused": {
            "groups": len(groups),
            "accepted": accepted,
            "rejected": len(groups) - accepted,
        },
        "threshold": THRESHOLD,
    }
    out_path = BASE / "oracle_summary.json"
    with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(oracle, fh, sort_keys=True, indent=1)
        fh.write("\n")
    print(json.dumps(oracle, sort_keys=True, indent=1))


if __name__ == "__main__":
    main()
