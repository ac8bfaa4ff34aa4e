"""Walk one sentence through entity linking and every extractor.

Run from the repository root:  python demos/01_linking_and_extraction.py
"""

from pathlib import Path

from kbp.corpus_io import load_gold_corpus, load_kb_snapshot, load_stopwords
from kbp.distant import build_ds_dataset, compute_predicate_statistics, extract_distant
from kbp.extractors import (
    extract_dep_pattern,
    extract_predpatt,
    extract_psie,
    extract_repersian,
    extract_token_patterns,
    load_pattern_bank,
    load_token_rules,
)
from kbp.linking import build_surface_index, link_entities

DATA = Path(__file__).resolve().parents[1] / "data" / "synthetic"

kb = load_kb_snapshot(DATA / "kb")
gold = load_gold_corpus(DATA / "corpus.jsonl")
print(f"KB: {len(kb.entities)} entities, {len(kb.predicates)} predicates, "
      f"{len(kb.facts)} facts; corpus: {len(gold)} gold sentences")

# -- entity linking ---------------------------------------------------------
index = build_surface_index(kb)
sentence = gold[0].sentence
linked = link_entities(sentence, index)
print(f"\nsentence: {linked.text}")
for link in linked.links:
    mention = " ".join(linked.tokens[link.start:link.end])
    print(f"  linked {mention!r} -> {link.entity} (confidence {link.confidence:.2f})")

# -- the five extractors ----------------------------------------------------
linked_corpus = [link_entities(g.sentence, index) for g in gold]
instances = build_ds_dataset(linked_corpus, kb)
stats = compute_predicate_statistics(
    instances, linked_corpus, load_stopwords(DATA / "stopwords.txt")
)
bank = load_pattern_bank(DATA / "patterns.jsonl")
rules = load_token_rules(DATA / "rules.tokpat", kb)

extractors = [
    ("verb-argument permutation", extract_predpatt(linked)),
    ("dependency patterns", extract_dep_pattern(linked, bank)),
    ("verb syntax", extract_psie(linked)),
    ("POS templates", extract_repersian(linked)),
    ("token patterns", extract_token_patterns(linked, rules)),
    ("distant supervision", extract_distant(linked, stats)),
]
print("\nextractor output for that sentence:")
for name, triples in extractors:
    print(f"  {name}: {len(triples)} triple(s)")
    for t in triples:
        kind = "iri" if t.predicate.is_canonical else "raw"
        print(f"    ({t.subject}, {kind}:{t.predicate.value}, {t.object})"
              f"  confidence {t.confidence:.3f}")
