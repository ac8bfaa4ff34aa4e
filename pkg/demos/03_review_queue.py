"""The human gate: queue fused triples, approve and reject, watch the KB.

Uses a scratch copy of the KB so reruns start clean.  The same store backs
the HTTP service (`kbp serve`); here we drive it directly.

Run from the repository root:  python demos/03_review_queue.py
"""

import shutil
import tempfile
from pathlib import Path

from kbp.corpus_io import cftr_scan, load_sentences
from kbp.fusion import fuse
from kbp.pipeline import load_config, run_pipeline
from kbp.review import ReviewStore

DATA = Path(__file__).resolve().parents[1] / "data" / "synthetic"

workdir = Path(tempfile.mkdtemp(prefix="kbp-review-demo-"))
shutil.copytree(DATA / "kb", workdir / "kb")

summary = run_pipeline(load_config(DATA / "pipeline.json"))
print(f"pipeline produced {summary['fused']['accepted']} accepted triple groups")

records = cftr_scan(DATA / "out" / "canonicalized.cftr")
fused = fuse([r.triple for r in records], threshold=0.9)
store = ReviewStore(
    workdir / "queue.cftr",
    workdir / "kb",
    corpus=load_sentences(DATA / "out" / "linked.jsonl"),
)
enqueued = store.enqueue_candidates(fused)
print(f"enqueued {enqueued} items "
      f"(already-known KB facts are skipped); stats: {store.stats()}")

queue = store.queue()
print("\ntop of the queue (confidence-descending):")
for item in queue[:3]:
    subject, (_, predicate), obj = item.key
    print(f"  [{item.fused_confidence:.3f}] {subject} --{predicate}--> {obj}")

first, second = queue[0], queue[1]
store.decide_triple(first.id, "approve", reviewer="demo-expert")
print(f"\napproved {first.key[0]} -> kb_facts is now {store.stats()['kb_facts']}")
store.decide_triple(second.id, "reject", reviewer="demo-expert")
print(f"rejected {second.key[0]} -> kb_facts stays {store.stats()['kb_facts']}")

try:
    store.decide_triple(first.id, "reject", reviewer="someone-else")
except Exception as exc:
    print(f"second decision on the same item refused: {type(exc).__name__}")

reloaded = ReviewStore(workdir / "queue.cftr", workdir / "kb")
print(f"\nafter a restart the decisions survive: {reloaded.stats()}")
print(f"\nscratch dir: {workdir} (safe to delete)")
print("to review in the browser:  kbp serve --cftr", workdir / "queue.cftr",
      "--kb", workdir / "kb", "--port 8080")
