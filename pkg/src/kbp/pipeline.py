"""End-to-end pipeline: link, extract, canonicalize, fuse, evaluate.

Driven by a single JSON config so every constant the method leaves open
(extractor confidences, fusion threshold, n-gram cap, score floors) is
pinned and visible in one place.  Stage outputs land in ``out_dir`` and are
byte-identical across reruns on identical inputs; a finished run is a no-op
until forced.  Failures leave partial outputs behind plus a FAILED.json
naming the broken stage.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from . import canonical, corpus_io, distant, evaluation, fusion, linking
from .extractors import (
    ALL_EXTRACTORS,
    DepPattern,
    TokenPatternRule,
    extract_dep_pattern,
    extract_predpatt,
    extract_psie,
    extract_repersian,
    extract_token_patterns,
    load_pattern_bank,
    load_pos_templates,
    load_token_rules,
    pos_templates,
    tree_patterns,
    verb_syntax,
    token_patterns,
)
from .model import (
    AnnotatedSentence,
    CandidateTriple,
    GoldRecord,
    validate_gold_predicates,
)


class PipelineError(RuntimeError):
    pass


DEFAULT_CONFIDENCES = {
    "deppat": tree_patterns.BASE_CONFIDENCE,
    "psie": verb_syntax.BASE_CONFIDENCE,
    "repersian": pos_templates.BASE_CONFIDENCE,
    "tokpat": token_patterns.BASE_CONFIDENCE,
}


@dataclass(frozen=True)
class PipelineConfig:
    corpus: Path
    kb: Path
    out_dir: Path
    extractors: tuple[str, ...]
    threshold: float = 0.9
    max_ngram: int = linking.DEFAULT_MAX_NGRAM
    min_score: int = distant.MIN_SCORE
    rules: Path | None = None
    patterns: Path | None = None
    templates: Path | None = None
    stopwords: Path | None = None
    sweep: tuple[float, ...] = ()
    confidences: dict[str, float] = field(default_factory=dict)
    jobs: int = 1

    def confidence(self, extractor: str) -> float:
        return self.confidences.get(extractor, DEFAULT_CONFIDENCES[extractor])


def load_config(path: str | Path) -> PipelineConfig:
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    base = path.parent

    def resolve(key: str) -> Path | None:
        value = raw.get(key)
        return (base / value) if value else None

    extractors = tuple(raw.get("extractors", []))
    unknown = [e for e in extractors if e not in ALL_EXTRACTORS]
    if unknown:
        raise PipelineError(f"unknown extractors in config: {unknown}")
    if not extractors:
        raise PipelineError("no extractors enabled")
    if "tokpat" in extractors and not raw.get("rules"):
        raise PipelineError("extractor 'tokpat' enabled but no rules file configured")
    if "deppat" in extractors and not raw.get("patterns"):
        raise PipelineError("extractor 'deppat' enabled but no pattern bank configured")
    for key in ("corpus", "kb"):
        if not raw.get(key):
            raise PipelineError(f"config is missing required key {key!r}")
    return PipelineConfig(
        corpus=base / raw["corpus"],
        kb=base / raw["kb"],
        out_dir=base / raw.get("out_dir", "out"),
        extractors=extractors,
        threshold=float(raw.get("threshold", 0.9)),
        max_ngram=int(raw.get("max_ngram", linking.DEFAULT_MAX_NGRAM)),
        min_score=int(raw.get("min_score", distant.MIN_SCORE)),
        rules=resolve("rules"),
        patterns=resolve("patterns"),
        templates=resolve("templates"),
        stopwords=resolve("stopwords"),
        sweep=tuple(float(t) for t in raw.get("sweep", [])),
        confidences={k: float(v) for k, v in raw.get("confidences", {}).items()},
        jobs=int(raw.get("jobs", 1)),
    )


# ---------------------------------------------------------------------------
# per-sentence extraction, parallelizable


@dataclass(frozen=True)
class ExtractorResources:
    enabled: tuple[str, ...]
    confidences: dict[str, float]
    bank: tuple[DepPattern, ...] = ()
    rules: tuple[TokenPatternRule, ...] = ()
    templates: tuple[str, ...] = pos_templates.DEFAULT_TEMPLATES
    stats: distant.PredicateStats = field(
        default_factory=lambda: distant.PredicateStats(per_predicate={})
    )
    min_score: int = distant.MIN_SCORE


def extract_sentence(s: AnnotatedSentence, res: ExtractorResources) -> list[CandidateTriple]:
    triples: list[CandidateTriple] = []
    for extractor in res.enabled:
        if extractor == "predpatt":
            triples.extend(extract_predpatt(s))
        elif extractor == "deppat":
            triples.extend(
                extract_dep_pattern(s, res.bank, base_confidence=res.confidences["deppat"])
            )
        elif extractor == "psie":
            triples.extend(extract_psie(s, base_confidence=res.confidences["psie"]))
        elif extractor == "repersian":
            triples.extend(
                extract_repersian(
                    s, templates=res.templates, base_confidence=res.confidences["repersian"]
                )
            )
        elif extractor == "tokpat":
            triples.extend(
                extract_token_patterns(s, res.rules, base_confidence=res.confidences["tokpat"])
            )
        elif extractor == "distant":
            triples.extend(distant.extract_distant(s, res.stats, min_score=res.min_score))
        else:  # pragma: no cover - validated at config load
            raise PipelineError(f"unknown extractor {extractor!r}")
    return triples


_WORKER_RESOURCES: ExtractorResources | None = None


def _init_worker(res: ExtractorResources) -> None:
    global _WORKER_RESOURCES
    _WORKER_RESOURCES = res


def _worker(s: AnnotatedSentence) -> list[CandidateTriple]:
    assert _WORKER_RESOURCES is not None
    return extract_sentence(s, _WORKER_RESOURCES)


def extract_corpus(
    sentences: Sequence[AnnotatedSentence], res: ExtractorResources, jobs: int = 1
) -> list[CandidateTriple]:
    """Sentence-parallel extraction; output order is corpus order regardless
    of the worker count."""
    if jobs <= 1 or len(sentences) < 2:
        per_sentence: Iterable[list[CandidateTriple]] = (
            extract_sentence(s, res) for s in sentences
        )
    else:
        with ProcessPoolExecutor(
            max_workers=jobs, initializer=_init_worker, initargs=(res,)
        ) as pool:
            per_sentence = list(pool.map(_worker, sentences, chunksize=8))
    out: list[CandidateTriple] = []
    for batch in per_sentence:
        out.extend(batch)
    return out


# ---------------------------------------------------------------------------
# the run


def _corpus_is_gold(path: Path) -> bool:
    for _, obj in corpus_io.iter_jsonl(path):
        return all(k in obj for k in ("subject", "object", "predicate"))
    return False


def run_pipeline(config: PipelineConfig, force: bool = False, jobs: int | None = None) -> dict:
    """Execute all stages; returns the summary written to summary.json."""
    out_dir = config.out_dir
    summary_path = out_dir / "summary.json"
    if summary_path.exists() and not force:
        with open(summary_path, encoding="utf-8") as fh:
            return json.load(fh)

    out_dir.mkdir(parents=True, exist_ok=True)
    failed_marker = out_dir / "FAILED.json"
    failed_marker.unlink(missing_ok=True)
    stage = "load"
    try:
        kb = corpus_io.load_kb_snapshot(config.kb)
        gold: list[GoldRecord] | None = None
        if _corpus_is_gold(config.corpus):
            gold = corpus_io.load_gold_corpus(config.corpus)
            validate_gold_predicates(gold, kb)
            sentences = [g.sentence for g in gold]
        else:
            sentences = corpus_io.load_sentences(config.corpus)

        stage = "link"
        index = linking.build_surface_index(kb)
        linked = [linking.link_entities(s, index, max_ngram=config.max_ngram) for s in sentences]
        _fresh(out_dir / "linked.jsonl")
        corpus_io.save_sentences(out_dir / "linked.jsonl", linked)

        stage = "ds-stats"
        raw_enabled = [e for e in config.extractors if e in ("predpatt", "deppat", "psie", "repersian")]
        need_stats = bool(raw_enabled) or "distant" in config.extractors
        stats = distant.PredicateStats(per_predicate={})
        instances: list[distant.DsInstance] = []
        if need_stats:
            stopwords = (
                corpus_io.load_stopwords(config.stopwords) if config.stopwords else frozenset()
            )
            instances = distant.build_ds_dataset(linked, kb)
            stats = distant.compute_predicate_statistics(instances, linked, stopwords)
            distant.save_ds_instances(out_dir / "ds_instances.jsonl", instances)
            distant.save_predicate_stats(out_dir / "predicate_stats.json", stats)

        stage = "extract"
        resources = ExtractorResources(
            enabled=config.extractors,
            confidences={e: config.confidence(e) for e in DEFAULT_CONFIDENCES},
            bank=tuple(load_pattern_bank(config.patterns)) if config.patterns else (),
            rules=tuple(load_token_rules(config.rules, kb)) if config.rules else (),
            templates=(
                load_pos_templates(config.templates)
                if config.templates
                else pos_templates.DEFAULT_TEMPLATES
            ),
            stats=stats,
            min_score=config.min_score,
        )
        extracted = extract_corpus(linked, resources, jobs=jobs if jobs is not None else config.jobs)
        _fresh(out_dir / "extracted.cftr")
        corpus_io.cftr_append(
            out_dir / "extracted.cftr",
            [corpus_io.CftrRecord(triple=t, stage="extracted") for t in extracted],
        )
        extracted_counts = {e: 0 for e in config.extractors}
        for t in extracted:
            extracted_counts[t.extractor] += 1

        stage = "canonicalize"
        by_id = {s.id: s for s in linked}
        raw_triples = [t for t in extracted if not t.predicate.is_canonical]
        canonical_triples = [t for t in extracted if t.predicate.is_canonical]
        mapped, dropped = canonical.canonicalize_all(raw_triples, kb, stats, by_id)
        canonicalized = canonical_triples + mapped
        _fresh(out_dir / "canonicalized.cftr")
        corpus_io.cftr_append(
            out_dir / "canonicalized.cftr",
            [corpus_io.CftrRecord(triple=t, stage="canonicalized") for t in canonicalized],
        )

        stage = "fuse"
        fused = fusion.fuse(canonicalized, config.threshold)
        accepted = [f for f in fused if f.accepted]
        _fresh(out_dir / "fused.cftr")
        corpus_io.cftr_append(
            out_dir / "fused.cftr",
            [
                corpus_io.CftrRecord(
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
                for f in accepted
                for s in f.supports
            ],
        )

        stage = "evaluate"
        fused_metrics = None
        if gold is not None:
            outputs: dict[str, list[CandidateTriple]] = {e: [] for e in config.extractors}
            for t in canonicalized:
                outputs.setdefault(t.extractor, []).append(t)
            report = evaluation.evaluation_report(outputs, gold)
            gold_by_id = {g.sentence.id: g for g in gold}
            counts = evaluation.count_classifications(
                fusion.accepted_candidates(accepted), gold_by_id
            )
            precision, recall, f1 = evaluation.compute_metrics(
                counts.correct, counts.wrong, len(gold)
            )
            report["fusion"] = {
                "triples": counts.total,
                "corrects": counts.correct,
                "wrongs": counts.wrong,
                "oso": counts.oso,
                "triples_per_sentence": evaluation.triples_per_sentence(counts.total, len(gold)),
                "precision": precision,
                "recall": recall,
                "f1": f1,
            }
            fused_metrics = {"precision": precision, "recall": recall, "f1": f1}
            with open(out_dir / "report.json", "w", encoding="utf-8", newline="\n") as fh:
                json.dump(report, fh, ensure_ascii=False, sort_keys=True, indent=1)
                fh.write("\n")
            if config.sweep:
                rows = fusion.sweep_thresholds(canonicalized, gold, sorted(config.sweep))
                with open(out_dir / "sweep.csv", "w", encoding="utf-8", newline="\n") as fh:
                    fh.write("threshold,precision,recall,f1\n")
                    for row in rows:
                        fh.write(f"{row.threshold!r},{row.precision!r},{row.recall!r},{row.f1!r}\n")

        stage = "summary"
        summary = {
            "sentences": len(sentences),
            "linked_mentions": sum(len(s.links) for s in linked),
            "ds_instances": len(instances),
            "predicates_profiled": len(stats),
            "extracted": extracted_counts,
            "canonicalized": {"kept": len(canonicalized), "dropped": dropped},
            "fused": {
                "groups": len(fused),
                "accepted": len(accepted),
                "rejected": len(fused) - len(accepted),
            },
            "threshold": config.threshold,
            "extractors": list(config.extractors),
        }
        if fused_metrics is not None:
            summary["fusion_metrics"] = fused_metrics
        with open(summary_path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(summary, fh, ensure_ascii=False, sort_keys=True, indent=1)
            fh.write("\n")
        return summary
    except Exception as exc:
        with open(failed_marker, "w", encoding="utf-8", newline="\n") as fh:
            json.dump({"stage": stage, "error": str(exc)}, fh, sort_keys=True, indent=1)
            fh.write("\n")
        raise


def _fresh(path: Path) -> None:
    path.unlink(missing_ok=True)
