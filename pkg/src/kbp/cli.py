"""Command-line entry point wiring all pipeline stages.

Subcommands: link, extract, ds-build, ds-stats, canonicalize,
mine-patterns, mine-rules, fuse, sweep, eval, serve, run.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import canonical, corpus_io, distant, evaluation, fusion, linking, pipeline
from .extractors import (
    ALL_EXTRACTORS,
    load_pattern_bank,
    load_pos_templates,
    load_token_rules,
    mine_dependency_patterns,
    save_pattern_bank,
)

log = logging.getLogger("kbp")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kbp", description=__doc__)
    parser.add_argument("--config", help="pipeline config file (used by 'run')")
    parser.add_argument("--jobs", type=int, default=None, help="worker processes for extraction")
    parser.add_argument("--force", action="store_true", help="recompute existing outputs")
    parser.add_argument("--log-level", default="warning",
                        choices=["debug", "info", "warning", "error"])
    # the same global flags are accepted after the subcommand; SUPPRESS keeps
    # unset subcommand flags from clobbering values parsed before it
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--jobs", type=int, default=argparse.SUPPRESS)
    common.add_argument("--force", action="store_true", default=argparse.SUPPRESS)
    common.add_argument("--log-level", default=argparse.SUPPRESS,
                        choices=["debug", "info", "warning", "error"])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("link", parents=[common], help="add dictionary entity links to sentences")
    p.add_argument("--kb", required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--max-ngram", type=int, default=linking.DEFAULT_MAX_NGRAM)

    p = sub.add_parser("extract", parents=[common], help="run extractor modules over linked sentences")
    p.add_argument("--module", required=True, choices=ALL_EXTRACTORS + ("all",))
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--rules", help="token-pattern rules (tokpat)")
    p.add_argument("--patterns", help="annotated dependency-pattern bank (deppat)")
    p.add_argument("--templates", help="POS templates JSON (repersian)")
    p.add_argument("--stats", help="predicate statistics (distant)")
    p.add_argument("--kb", help="KB snapshot dir (needed to compile tokpat rules)")

    p = sub.add_parser("ds-build", parents=[common], help="build the distantly supervised dataset")
    p.add_argument("--kb", required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("ds-stats", parents=[common], help="per-predicate statistics from DS instances")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--stopwords")

    p = sub.add_parser("canonicalize", parents=[common], help="map raw predicates to ontology IRIs")
    p.add_argument("--kb", required=True)
    p.add_argument("--stats", required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--corpus", required=True, help="sentences referenced by the triples")

    p = sub.add_parser("mine-patterns", parents=[common], help="mine frequent dependency patterns")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--min-support", type=int, default=2)
    p.add_argument("--out", required=True)

    p = sub.add_parser("mine-rules", parents=[common], help="mine implication rules and clusters")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--min-support", type=int, default=2)
    p.add_argument("--min-confidence", type=float, default=0.5)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--kb", help="append mined mapping rows to this snapshot's mapping.tsv")

    p = sub.add_parser("fuse", parents=[common], help="apply the ensemble gate")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--threshold", type=float, default=0.9)
    p.add_argument("--out", required=True)

    p = sub.add_parser("sweep", parents=[common], help="precision/recall/F1 across thresholds")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--gold", required=True)
    p.add_argument("--thresholds", required=True, help="comma-separated, ascending")
    p.add_argument("--out", required=True)

    p = sub.add_parser("eval", parents=[common], help="score a CFTR against the gold corpus")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--gold", required=True)
    p.add_argument("--report", required=True)

    p = sub.add_parser("serve", parents=[common], help="run the review service")
    p.add_argument("--cftr", required=True)
    p.add_argument("--kb", required=True)
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--corpus", help="sentences for span highlighting")
    p.add_argument("--static", help="frontend asset directory")

    p = sub.add_parser("run", parents=[common], help="execute the full pipeline from a config")
    p.add_argument("--config", dest="run_config")

    return parser


def _load_linked(path: str):
    return corpus_io.load_sentences(path)


def cmd_link(args) -> int:
    kb = corpus_io.load_kb_snapshot(args.kb)
    index = linking.build_surface_index(kb)
    sentences = corpus_io.load_sentences(args.infile)
    corpus_io.save_sentences(
        args.out, (linking.link_entities(s, index, args.max_ngram) for s in sentences)
    )
    return 0


def cmd_extract(args) -> int:
    modules = list(ALL_EXTRACTORS) if args.module == "all" else [args.module]
    if args.module == "all":
        if not args.stats:
            modules.remove("distant")
        if not args.rules:
            modules.remove("tokpat")
        if not args.patterns:
            modules.remove("deppat")
    if "tokpat" in modules and not (args.rules and args.kb):
        raise SystemExit("extract tokpat requires --rules and --kb")
    if "deppat" in modules and not args.patterns:
        raise SystemExit("extract deppat requires --patterns")
    if "distant" in modules and not args.stats:
        raise SystemExit("extract distant requires --stats")

    resources = pipeline.ExtractorResources(
        enabled=tuple(modules),
        confidences=dict(pipeline.DEFAULT_CONFIDENCES),
        bank=tuple(load_pattern_bank(args.patterns)) if args.patterns else (),
        rules=(
            tuple(load_token_rules(args.rules, corpus_io.load_kb_snapshot(args.kb)))
            if args.rules and args.kb
            else ()
        ),
        templates=(
            load_pos_templates(args.templates)
            if args.templates
            else pipeline.pos_templates.DEFAULT_TEMPLATES
        ),
        stats=(
            distant.load_predicate_stats(args.stats)
            if args.stats
            else distant.PredicateStats(per_predicate={})
        ),
    )
    sentences = _load_linked(args.infile)
    triples = pipeline.extract_corpus(sentences, resources, jobs=args.jobs or 1)
    n = corpus_io.cftr_append(
        args.out, [corpus_io.CftrRecord(triple=t, stage="extracted") for t in triples]
    )
    log.info("extracted %d triples", n)
    return 0


def cmd_ds_build(args) -> int:
    kb = corpus_io.load_kb_snapshot(args.kb)
    sentences = _load_linked(args.infile)
    distant.save_ds_instances(args.out, distant.build_ds_dataset(sentences, kb))
    return 0


def cmd_ds_stats(args) -> int:
    instances = distant.load_ds_instances(args.infile)
    sentences = _load_linked(args.corpus)
    stopwords = corpus_io.load_stopwords(args.stopwords) if args.stopwords else frozenset()
    stats = distant.compute_predicate_statistics(instances, sentences, stopwords)
    distant.save_predicate_stats(args.out, stats)
    return 0


def cmd_canonicalize(args) -> int:
    kb = corpus_io.load_kb_snapshot(args.kb)
    stats = distant.load_predicate_stats(args.stats)
    sentences = {s.id: s for s in _load_linked(args.corpus)}
    records = corpus_io.cftr_scan(args.infile)
    raw = [r.triple for r in records if not r.triple.predicate.is_canonical]
    passthrough = [r.triple for r in records if r.triple.predicate.is_canonical]
    mapped, dropped = canonical.canonicalize_all(raw, kb, stats, sentences)
    corpus_io.cftr_append(
        args.out,
        [
            corpus_io.CftrRecord(triple=t, stage="canonicalized")
            for t in passthrough + mapped
        ],
    )
    log.info("canonicalized %d triples, dropped %d", len(mapped), dropped)
    return 0


def cmd_mine_patterns(args) -> int:
    sentences = _load_linked(args.infile)
    bank = mine_dependency_patterns(sentences, args.min_support)
    save_pattern_bank(args.out, bank)
    log.info("mined %d patterns", len(bank))
    return 0


def cmd_mine_rules(args) -> int:
    records = corpus_io.cftr_scan(args.infile)
    rules = canonical.mine_implication_rules(
        [r.triple for r in records], args.min_support, args.min_confidence
    )
    result = canonical.cluster_predicates(rules)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    canonical.save_implication_rules(out_dir / "rules.jsonl", rules)
    canonical.save_clusters(out_dir / "clusters.json", result)
    if args.kb:
        kb = corpus_io.load_kb_snapshot(args.kb)
        existing = set(kb.normalized_mapping())
        from .model import normalize_phrase

        new_rows = [
            (row.phrase, row.iri)
            for row in result.rows
            if row.iri and normalize_phrase(row.phrase) not in existing
        ]
        appended = corpus_io.append_mapping_rows(args.kb, new_rows)
        log.info("appended %d mined mapping rows", appended)
    return 0


def cmd_fuse(args) -> int:
    records = corpus_io.cftr_scan(args.infile)
    fused = fusion.fuse([r.triple for r in records], args.threshold)
    from .model import CandidateTriple

    corpus_io.cftr_append(
        args.out,
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
            for f in fused
            if f.accepted
            for s in f.supports
        ],
    )
    return 0


def cmd_sweep(args) -> int:
    records = corpus_io.cftr_scan(args.infile)
    gold = corpus_io.load_gold_corpus(args.gold)
    thresholds = [float(t) for t in args.thresholds.split(",") if t != ""]
    rows = fusion.sweep_thresholds([r.triple for r in records], gold, thresholds)
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("threshold,precision,recall,f1\n")
        for row in rows:
            fh.write(f"{row.threshold!r},{row.precision!r},{row.recall!r},{row.f1!r}\n")
    return 0


def cmd_eval(args) -> int:
    records = corpus_io.cftr_scan(args.infile)
    gold = corpus_io.load_gold_corpus(args.gold)
    outputs: dict[str, list] = {}
    for r in records:
        if r.triple.predicate.is_canonical:
            outputs.setdefault(r.triple.extractor, []).append(r.triple)
    report = evaluation.evaluation_report(outputs, gold)
    with open(args.report, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(report, fh, ensure_ascii=False, sort_keys=True, indent=1)
        fh.write("\n")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .review import ReviewStore, create_app

    corpus = _load_linked(args.corpus) if args.corpus else ()
    store = ReviewStore(args.cftr, args.kb, corpus=corpus)
    static = args.static or _default_static()
    app = create_app(store, static_dir=static)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def _default_static() -> str | None:
    candidate = Path(__file__).resolve().parents[2] / "frontend" / "dist"
    return str(candidate) if candidate.is_dir() else None


def cmd_run(args) -> int:
    config_path = args.run_config or args.config
    if not config_path:
        raise SystemExit("run requires --config")
    config = pipeline.load_config(config_path)
    summary = pipeline.run_pipeline(config, force=args.force, jobs=args.jobs)
    print(json.dumps(summary, ensure_ascii=False, sort_keys=True, indent=1))
    return 0


COMMANDS = {
    "link": cmd_link,
    "extract": cmd_extract,
    "ds-build": cmd_ds_build,
    "ds-stats": cmd_ds_stats,
    "canonicalize": cmd_canonicalize,
    "mine-patterns": cmd_mine_patterns,
    "mine-rules": cmd_mine_rules,
    "fuse": cmd_fuse,
    "sweep": cmd_sweep,
    "eval": cmd_eval,
    "serve": cmd_serve,
    "run": cmd_run,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=args.log_level.upper())
    try:
        return COMMANDS[args.command](args)
    except (corpus_io.CorpusFormatError, pipeline.PipelineError, ValueError, OSError) as exc:
        print(f"kbp: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
