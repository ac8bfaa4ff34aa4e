"""Readers and writers for every on-disk format the pipeline touches.

All corpora are line-delimited JSON (one record per line): streamable and
diff-friendly.  The KB snapshot is a directory of four small files, the
mapping table is tab-separated text so human experts can edit it.  Text is
treated as opaque Unicode; normalization happens only at comparison points
(see :func:`kbp.model.normalize_phrase`), never on load, so write-then-read
is the identity on valid data.

Sentence / gold JSONL schema::

    {"id", "text", "tokens", "pos", "ner",
     "dep": [{"head", "rel"}, ...],
     "links": [{"start", "end", "entity", "confidence", "class"}, ...],
     "subject", "object", "predicate", "subject_class", "object_class"}

The last five keys are present only in gold records.

CFTR (candidate-fact-triple repository) JSONL schema::

    {"subject", "predicate": {"kind": "raw"|"iri", "value"}, "object",
     "extractor", "confidence", "sentence_id", "stage", "decided_by"}
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Sequence

from .model import (
    AnnotatedSentence,
    CandidateTriple,
    DependencyArc,
    EntityLink,
    GoldRecord,
    KbEntity,
    KbSnapshot,
    Predicate,
    normalize_phrase,
)

STAGES = ("extracted", "canonicalized", "fused", "approved", "rejected")

GOLD_KEYS = ("subject", "object", "predicate", "subject_class", "object_class")


class CorpusFormatError(ValueError):
    """A file violates its schema; the message names file and line."""


@dataclass(frozen=True)
class CftrRecord:
    triple: CandidateTriple
    stage: str
    decided_by: str = ""

    def __post_init__(self) -> None:
        if self.stage not in STAGES:
            raise ValueError(f"unknown stage {self.stage!r}")


def stage_index(stage: str) -> int:
    return STAGES.index(stage)


def dumps(obj: Any) -> str:
    """Canonical single-line JSON: sorted keys, no spaces, raw Unicode."""
    return json.dumps(obj, ensure_ascii=False, sort_keys=True, separators=(",", ":"))


# ---------------------------------------------------------------------------
# sentences and gold corpus


def sentence_to_json(s: AnnotatedSentence) -> dict[str, Any]:
    return {
        "id": s.id,
        "text": s.text,
        "tokens": list(s.tokens),
        "pos": list(s.pos),
        "ner": list(s.ner),
        "dep": [{"head": a.head, "rel": a.relation} for a in s.deps],
        "links": [
            {
                "start": l.start,
                "end": l.end,
                "entity": l.entity,
                "confidence": l.confidence,
                "class": l.entity_class,
            }
            for l in s.links
        ],
    }


def gold_to_json(rec: GoldRecord) -> dict[str, Any]:
    obj = sentence_to_json(rec.sentence)
    obj.update(
        subject=rec.subject,
        object=rec.object,
        predicate=rec.predicate,
        subject_class=rec.subject_class,
        object_class=rec.object_class,
    )
    return obj


def sentence_from_json(obj: dict[str, Any], default_id: str) -> AnnotatedSentence:
    deps = tuple(
        DependencyArc(head=int(a["head"]), relation=str(a["rel"]))
        for a in obj.get("dep", [])
    )
    links = tuple(
        EntityLink(
            start=int(l["start"]),
            end=int(l["end"]),
            entity=str(l["entity"]),
            confidence=float(l["confidence"]),
            entity_class=str(l.get("class", "")),
        )
        for l in obj.get("links", [])
    )
    return AnnotatedSentence(
        id=str(obj.get("id", default_id)),
        text=str(obj.get("text", "")),
        tokens=tuple(str(t) for t in obj.get("tokens", [])),
        pos=tuple(str(t) for t in obj.get("pos", [])),
        ner=tuple(str(t) for t in obj.get("ner", [])),
        deps=deps,
        links=links,
    )


def iter_jsonl(path: Path) -> Iterable[tuple[int, dict[str, Any]]]:
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusFormatError(f"{path}:{lineno}: malformed JSON: {exc}") from exc
            if not isinstance(obj, dict):
                raise CorpusFormatError(f"{path}:{lineno}: expected a JSON object")
            yield lineno, obj


def load_sentences(path: str | Path) -> list[AnnotatedSentence]:
    """Load sentence records; gold keys, if present, are ignored."""
    path = Path(path)
    out = []
    for lineno, obj in iter_jsonl(path):
        try:
            out.append(sentence_from_json(obj, default_id=str(lineno)))
        except (ValueError, KeyError, TypeError) as exc:
            raise CorpusFormatError(f"{path}:{lineno}: {exc}") from exc
    return out


def load_gold_corpus(path: str | Path) -> list[GoldRecord]:
    """Load gold records; line numbers stand in for missing ids."""
    path = Path(path)
    out = []
    for lineno, obj in iter_jsonl(path):
        try:
            sentence = sentence_from_json(obj, default_id=str(lineno))
            missing = [k for k in ("subject", "object", "predicate") if not obj.get(k)]
            if missing:
                raise ValueError(f"missing gold field {missing[0]!r}")
            out.append(
                GoldRecord(
                    sentence=sentence,
                    subject=str(obj["subject"]),
                    object=str(obj["object"]),
                    predicate=str(obj["predicate"]),
                    subject_class=str(obj.get("subject_class", "")),
                    object_class=str(obj.get("object_class", "")),
                )
            )
        except (ValueError, KeyError, TypeError) as exc:
            raise CorpusFormatError(f"{path}:{lineno}: {exc}") from exc
    return out


def save_sentences(path: str | Path, sentences: Iterable[AnnotatedSentence]) -> None:
    _write_lines(path, (dumps(sentence_to_json(s)) for s in sentences))


def save_gold_corpus(path: str | Path, records: Iterable[GoldRecord]) -> None:
    _write_lines(path, (dumps(gold_to_json(r)) for r in records))


def _write_lines(path: str | Path, lines: Iterable[str]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for line in lines:
            fh.write(line)
            fh.write("\n")


# ---------------------------------------------------------------------------
# KB snapshot directory


def load_kb_snapshot(directory: str | Path) -> KbSnapshot:
    """Load entities.jsonl, predicates.txt, facts.tsv, and mapping.tsv.

    Cross-references are validated: fact predicates and mapping targets must
    appear in the predicate catalog; duplicate (normalized) mapping keys are
    an error naming both offending lines.
    """
    directory = Path(directory)

    entities = []
    for lineno, obj in iter_jsonl(directory / "entities.jsonl"):
        try:
            entities.append(
                KbEntity(
                    iri=str(obj["iri"]),
                    surface_forms=tuple(str(f) for f in obj["surface_forms"]),
                    entity_class=str(obj.get("class", "")),
                )
            )
        except (KeyError, TypeError) as exc:
            raise CorpusFormatError(
                f"{directory / 'entities.jsonl'}:{lineno}: {exc}"
            ) from exc

    pred_path = directory / "predicates.txt"
    with open(pred_path, encoding="utf-8") as fh:
        predicates = frozenset(line.strip() for line in fh if line.strip())

    facts_path = directory / "facts.tsv"
    facts = set()
    with open(facts_path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            cols = line.rstrip("\n").split("\t")
            if len(cols) != 3:
                raise CorpusFormatError(
                    f"{facts_path}:{lineno}: expected 3 tab-separated columns"
                )
            s, p, o = cols
            if p not in predicates:
                raise CorpusFormatError(
                    f"{facts_path}:{lineno}: unknown predicate {p!r}"
                )
            facts.add((s, p, o))

    mapping_path = directory / "mapping.tsv"
    mapping: dict[str, str] = {}
    seen_lines: dict[str, int] = {}
    with open(mapping_path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            cols = line.rstrip("\n").split("\t")
            # a trailing "# ..." column marks machine-appended rows
            if len(cols) == 3 and cols[2].startswith("#"):
                cols = cols[:2]
            if len(cols) != 2:
                raise CorpusFormatError(
                    f"{mapping_path}:{lineno}: expected 2 tab-separated columns"
                )
            phrase, iri = cols
            key = normalize_phrase(phrase)
            if key in seen_lines:
                raise CorpusFormatError(
                    f"{mapping_path}:{lineno}: duplicate mapping key {phrase!r}"
                    f" (first defined on line {seen_lines[key]})"
                )
            if iri not in predicates:
                raise CorpusFormatError(
                    f"{mapping_path}:{lineno}: unknown predicate {iri!r}"
                )
            seen_lines[key] = lineno
            mapping[phrase] = iri

    return KbSnapshot(
        entities=tuple(entities),
        predicates=predicates,
        facts=frozenset(facts),
        mapping_table=mapping,
    )


def save_kb_snapshot(directory: str | Path, kb: KbSnapshot) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    _write_lines(
        directory / "entities.jsonl",
        (
            dumps(
                {"iri": e.iri, "surface_forms": list(e.surface_forms)}
                | ({"class": e.entity_class} if e.entity_class else {})
            )
            for e in sorted(kb.entities, key=lambda e: e.iri)
        ),
    )
    _write_lines(directory / "predicates.txt", sorted(kb.predicates))
    _write_lines(
        directory / "facts.tsv", ("\t".join(f) for f in sorted(kb.facts))
    )
    _write_lines(
        directory / "mapping.tsv",
        (f"{k}\t{v}" for k, v in sorted(kb.mapping_table.items())),
    )


def append_kb_fact(directory: str | Path, fact: tuple[str, str, str]) -> None:
    _append_payload(Path(directory) / "facts.tsv", "\t".join(fact) + "\n")


def append_mapping_rows(
    directory: str | Path, rows: Iterable[tuple[str, str]], marker: str = "# mined"
) -> int:
    """Append phrase→IRI rows to mapping.tsv, tagging each with ``marker``."""
    lines = [f"{phrase}\t{iri}\t{marker}\n" for phrase, iri in rows]
    if lines:
        _append_payload(Path(directory) / "mapping.tsv", "".join(lines))
    return len(lines)


# ---------------------------------------------------------------------------
# CFTR


def cftr_record_to_json(rec: CftrRecord) -> dict[str, Any]:
    t = rec.triple
    return {
        "subject": t.subject,
        "predicate": {"kind": t.predicate.kind, "value": t.predicate.value},
        "object": t.object,
        "extractor": t.extractor,
        "confidence": t.confidence,
        "sentence_id": t.sentence_id,
        "stage": rec.stage,
        "decided_by": rec.decided_by,
    }


def cftr_record_from_json(obj: dict[str, Any]) -> CftrRecord:
    pred = obj["predicate"]
    triple = CandidateTriple(
        subject=str(obj["subject"]),
        predicate=Predicate(kind=str(pred["kind"]), value=str(pred["value"])),
        object=str(obj["object"]),
        extractor=str(obj["extractor"]),
        confidence=float(obj["confidence"]),
        sentence_id=str(obj["sentence_id"]),
    )
    return CftrRecord(triple=triple, stage=str(obj["stage"]), decided_by=str(obj.get("decided_by", "")))


def cftr_append(path: str | Path, records: Sequence[CftrRecord]) -> int:
    """Append records to a CFTR file; existing lines are never rewritten.

    The whole batch is encoded first and written with a single O_APPEND
    write, so a failure cannot leave a partial line behind.
    """
    if not records:
        return 0
    payload = "".join(dumps(cftr_record_to_json(r)) + "\n" for r in records)
    _append_payload(Path(path), payload)
    return len(records)


def _append_payload(path: Path, payload: str) -> None:
    data = payload.encode("utf-8")
    fd = os.open(path, os.O_WRONLY | os.O_CREAT | os.O_APPEND, 0o644)
    try:
        written = os.write(fd, data)
        if written != len(data):
            raise OSError(f"short write to {path}: {written} of {len(data)} bytes")
    finally:
        os.close(fd)


def cftr_scan(path: str | Path, stage: str | None = None) -> list[CftrRecord]:
    """Read records in file order, optionally filtered to one stage."""
    if stage is not None and stage not in STAGES:
        raise ValueError(f"unknown stage {stage!r}")
    path = Path(path)
    out = []
    for lineno, obj in iter_jsonl(path):
        try:
            rec = cftr_record_from_json(obj)
        except (ValueError, KeyError, TypeError) as exc:
            raise CorpusFormatError(f"{path}:{lineno}: {exc}") from exc
        if stage is None or rec.stage == stage:
            out.append(rec)
    return out


# ---------------------------------------------------------------------------
# small shared resources
#
# Sidecar formats travel with their owning modules: pattern banks in
# extractors.tree_patterns, POS templates in extractors.pos_templates,
# predicate statistics and DS instances in distant, implication rules and
# clusters in canonical.


def load_stopwords(path: str | Path) -> frozenset[str]:
    with open(path, encoding="utf-8") as fh:
        return frozenset(line.strip() for line in fh if line.strip())
