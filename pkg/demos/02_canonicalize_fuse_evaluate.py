"""From raw phrases to fused, scored facts on the bundled corpus.

Runs extraction over all 50 sentences, canonicalizes the raw predicates
(mapping table first, statistics second), applies the two-condition fusion
gate at several thresholds, and scores each cut against gold.

Run from the repository root:  python demos/02_canonicalize_fuse_evaluate.py
"""

from pathlib import Path

from kbp.canonical import canonicalize_all
from kbp.corpus_io import load_gold_corpus, load_kb_snapshot, load_stopwords
from kbp.distant import build_ds_dataset, compute_predicate_statistics
from kbp.evaluation import compute_metrics, count_classifications
from kbp.fusion import accepted_candidates, fuse, sweep_thresholds
from kbp.linking import build_surface_index, link_entities
from kbp.pipeline import ExtractorResources, extract_corpus, DEFAULT_CONFIDENCES
from kbp.extractors import load_pattern_bank, load_pos_templates, load_token_rules

DATA = Path(__file__).resolve().parents[1] / "data" / "synthetic"

kb = load_kb_snapshot(DATA / "kb")
gold = load_gold_corpus(DATA / "corpus.jsonl")
index = build_surface_index(kb)
linked = [link_entities(g.sentence, index) for g in gold]

stats = compute_predicate_statistics(
    build_ds_dataset(linked, kb), linked, load_stopwords(DATA / "stopwords.txt")
)
resources = ExtractorResources(
    enabled=("predpatt", "deppat", "psie", "repersian", "tokpat", "distant"),
    confidences=dict(DEFAULT_CONFIDENCES),
    bank=tuple(load_pattern_bank(DATA / "patterns.jsonl")),
    rules=tuple(load_token_rules(DATA / "rules.tokpat", kb)),
    templates=load_pos_templates(DATA / "templates.json"),
    stats=stats,
)
extracted = extract_corpus(linked, resources)
raw = [t for t in extracted if not t.predicate.is_canonical]
already_canonical = [t for t in extracted if t.predicate.is_canonical]
print(f"extracted {len(extracted)} triples "
      f"({len(raw)} raw-phrase, {len(already_canonical)} already canonical)")

mapped, dropped = canonicalize_all(raw, kb, stats, {s.id: s for s in linked})
canonical_triples = already_canonical + mapped
print(f"canonicalized: kept {len(mapped)} of {len(raw)} raw triples, dropped {dropped}")

fused = fuse(canonical_triples, threshold=0.9)
accepted = [f for f in fused if f.accepted]
multi = sum(1 for f in accepted if len(f.extractors) >= 2)
print(f"\nfusion at threshold 0.9: {len(accepted)} of {len(fused)} groups accepted "
      f"({multi} by multi-extractor agreement)")

gold_by_id = {g.sentence.id: g for g in gold}
counts = count_classifications(accepted_candidates(accepted), gold_by_id)
precision, recall, f1 = compute_metrics(counts.correct, counts.wrong, len(gold))
print(f"against gold: correct={counts.correct} wrong={counts.wrong} "
      f"other={counts.oso}  P={precision:.4f} R={recall:.4f} F1={f1:.4f}")

print("\nthreshold sweep (recall falls as the gate tightens):")
print("  theta   precision  recall   F1")
for row in sweep_thresholds(canonical_triples, gold, [0.0, 0.5, 0.7, 0.9, 1.0]):
    print(f"  {row.threshold:<7.1f} {row.precision:<10.4f} {row.recall:<8.4f} {row.f1:.4f}")
