"""Human verification queue over fused triples, exposed as an HTTP API.

Nothing reaches the KB fact store without an explicit approve decision.
All state lives in the CFTR file and the KB snapshot directory: the queue
is rebuilt by replaying the CFTR log (fused records open items, approved/
rejected records close them), so a service restart loses no decisions.
Decision timestamps are display metadata only and reset on replay.
"""

from __future__ import annotations

import hashlib
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Sequence

from fastapi import FastAPI, HTTPException
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .corpus_io import CftrRecord, cftr_append, cftr_scan, load_kb_snapshot, append_kb_fact
from .fusion import FusedTriple, Support
from .model import AnnotatedSentence, CandidateTriple, Predicate, TripleKey

PENDING = "pending"
APPROVED = "approved"
REJECTED = "rejected"

DECISION_STAGE = {"approve": "approved", "reject": "rejected"}


class UnknownItemError(KeyError):
    pass


class AlreadyDecidedError(RuntimeError):
    pass


def item_id_for(key: TripleKey) -> str:
    subject, (kind, value), obj = key
    digest = hashlib.sha256(
        "\x1f".join((subject, kind, value, obj)).encode("utf-8")
    ).hexdigest()
    return digest[:16]


@dataclass
class ReviewItem:
    key: TripleKey
    supports: list[Support] = field(default_factory=list)
    status: str = PENDING
    reviewer: str = ""
    decided_at: str = ""

    @property
    def id(self) -> str:
        return item_id_for(self.key)

    @property
    def fused_confidence(self) -> float:
        return max((s.confidence for s in self.supports), default=0.0)


class ReviewStore:
    """File-backed queue: CFTR log for items and decisions, KB snapshot for
    promotion.  Decisions are serialized under one lock (compare-and-set on
    item status)."""

    def __init__(
        self,
        cftr_path: str | Path,
        kb_dir: str | Path,
        corpus: Sequence[AnnotatedSentence] = (),
    ):
        self.cftr_path = Path(cftr_path)
        self.kb_dir = Path(kb_dir)
        self._lock = threading.Lock()
        self._sentences = {s.id: s for s in corpus}
        kb = load_kb_snapshot(kb_dir)
        self.facts: set[tuple[str, str, str]] = set(kb.facts)
        self.items: dict[str, ReviewItem] = {}
        if self.cftr_path.exists():
            self._replay(cftr_scan(self.cftr_path))
        # queued-but-undecided triples already present as KB facts are not
        # review work; decided items stay for the audit trail
        self.items = {
            item_id: item
            for item_id, item in self.items.items()
            if item.status != PENDING
            or (item.key[0], item.key[1][1], item.key[2]) not in self.facts
        }

    def _replay(self, records: Sequence[CftrRecord]) -> None:
        from .model import triple_identity

        for rec in records:
            key = triple_identity(rec.triple)
            if rec.stage == "fused":
                item = self.items.setdefault(item_id_for(key), ReviewItem(key=key))
                item.supports.append(
                    Support(
                        extractor=rec.triple.extractor,
                        confidence=rec.triple.confidence,
                        sentence_id=rec.triple.sentence_id,
                    )
                )
            elif rec.stage in (APPROVED, REJECTED):
                item = self.items.setdefault(item_id_for(key), ReviewItem(key=key))
                item.status = rec.stage
                item.reviewer = rec.decided_by

    # -- queue operations ---------------------------------------------------

    def enqueue_candidates(self, fused: Sequence[FusedTriple]) -> int:
        """Queue accepted triples not already queued, decided, or in the KB.
        Idempotent: re-enqueueing an identical batch adds nothing."""
        with self._lock:
            new_records = []
            new_items = []
            for f in fused:
                if not f.accepted:
                    continue
                if item_id_for(f.key) in self.items:
                    continue
                if (f.subject, f.predicate.value, f.object) in self.facts:
                    continue
                item = ReviewItem(key=f.key, supports=list(f.supports))
                new_items.append(item)
                new_records.extend(
                    CftrRecord(
                        triple=CandidateTriple(
                            subject=f.subject,
                            predicate=f.predicate,
                            object=f.object,
                            extractor=s.extractor,
                            confidence=s.confidence,
                            sentence_id=s.sentence_id,
                        ),
                        stage="fused",
                    )
                    for s in item.supports
                )
            cftr_append(self.cftr_path, new_records)
            for item in new_items:
                self.items[item.id] = item
            return len(new_items)

    def decide_triple(self, item_id: str, decision: str, reviewer: str) -> ReviewItem:
        """Apply approve/reject; approving also promotes the fact to the KB."""
        if decision not in DECISION_STAGE:
            raise ValueError(f"decision must be approve or reject, got {decision!r}")
        with self._lock:
            item = self.items.get(item_id)
            if item is None:
                raise UnknownItemError(item_id)
            if item.status != PENDING:
                raise AlreadyDecidedError(item_id)
            stage = DECISION_STAGE[decision]
            subject, (kind, value), obj = item.key
            cftr_append(
                self.cftr_path,
                [
                    CftrRecord(
                        triple=CandidateTriple(
                            subject=subject,
                            predicate=Predicate(kind, value),
                            object=obj,
                            extractor="review",
                            confidence=item.fused_confidence,
                            sentence_id="",
                        ),
                        stage=stage,
                        decided_by=reviewer,
                    )
                ],
            )
            if stage == APPROVED:
                fact = (subject, value, obj)
                if fact not in self.facts:
                    append_kb_fact(self.kb_dir, fact)
                    self.facts.add(fact)
            item.status = stage
            item.reviewer = reviewer
            item.decided_at = datetime.now(timezone.utc).isoformat()
            return item

    def queue(self, status: str = PENDING, limit: int | None = None) -> list[ReviewItem]:
        """Stable order: fused confidence descending, then identity key."""
        items = [
            item for item in self.items.values() if status in ("all", item.status)
        ]
        items.sort(key=lambda i: (-i.fused_confidence, i.key))
        return items[:limit] if limit is not None else items

    def get(self, item_id: str) -> ReviewItem:
        item = self.items.get(item_id)
        if item is None:
            raise UnknownItemError(item_id)
        return item

    def stats(self) -> dict[str, int]:
        counts = {PENDING: 0, APPROVED: 0, REJECTED: 0}
        for item in self.items.values():
            counts[item.status] += 1
        return {
            "pending": counts[PENDING],
            "approved": counts[APPROVED],
            "rejected": counts[REJECTED],
            "kb_facts": len(self.facts),
        }

    # -- presentation ---------------------------------------------------------

    def item_to_json(self, item: ReviewItem) -> dict[str, Any]:
        subject, (kind, value), obj = item.key
        sentences = []
        for sentence_id in sorted({s.sentence_id for s in item.supports}):
            sentence = self._sentences.get(sentence_id)
            if sentence is None:
                sentences.append({"sentence_id": sentence_id, "text": "", "tokens": []})
                continue
            sentences.append(
                {
                    "sentence_id": sentence_id,
                    "text": sentence.text,
                    "tokens": list(sentence.tokens),
                    "subject_spans": [
                        [l.start, l.end] for l in sentence.links if l.entity == subject
                    ],
                    "object_spans": [
                        [l.start, l.end] for l in sentence.links if l.entity == obj
                    ],
                }
            )
        return {
            "id": item.id,
            "subject": subject,
            "predicate": {"kind": kind, "value": value},
            "object": obj,
            "fused_confidence": item.fused_confidence,
            "extractors": sorted({s.extractor for s in item.supports}),
            "supports": [
                {
                    "extractor": s.extractor,
                    "confidence": s.confidence,
                    "sentence_id": s.sentence_id,
                }
                for s in item.supports
            ],
            "sentences": sentences,
            "status": item.status,
            "reviewer": item.reviewer,
            "decided_at": item.decided_at,
        }


class DecisionBody(BaseModel):
    decision: str = Field(pattern="^(approve|reject)$")
    reviewer: str = Field(min_length=1)


def create_app(store: ReviewStore, static_dir: str | Path | None = None):
    """FastAPI app wired to a store; optionally serves the frontend build."""
    app = FastAPI(title="kbp review service")

    @app.get("/api/queue")
    def get_queue(status: str = PENDING, limit: int | None = None) -> dict:
        if status not in (PENDING, APPROVED, REJECTED, "all"):
            raise HTTPException(status_code=422, detail=f"unknown status {status!r}")
        return {"items": [store.item_to_json(i) for i in store.queue(status, limit)]}

    @app.get("/api/items/{item_id}")
    def get_item(item_id: str) -> dict:
        try:
            return store.item_to_json(store.get(item_id))
        except UnknownItemError:
            raise HTTPException(status_code=404, detail="unknown item") from None

    @app.post("/api/items/{item_id}/decision")
    def post_decision(item_id: str, body: DecisionBody) -> dict:
        try:
            item = store.decide_triple(item_id, body.decision, body.reviewer)
        except UnknownItemError:
            raise HTTPException(status_code=404, detail="unknown item") from None
        except AlreadyDecidedError:
            raise HTTPException(status_code=409, detail="already decided") from None
        return store.item_to_json(item)

    @app.get("/api/stats")
    def get_stats() -> dict:
        return store.stats()

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")
    return app
