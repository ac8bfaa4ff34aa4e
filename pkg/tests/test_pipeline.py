from __future__ import annotations

import json
from pathlib import Path

import pytest

from kbp import cli
from kbp.corpus_io import cftr_scan, load_sentences
from kbp.pipeline import PipelineError, load_config, run_pipeline

DATA = Path(__file__).resolve().parents[1] / "data" / "synthetic"


def write_config(tmp_path, **overrides):
    config = {
        "corpus": str(DATA / "corpus.jsonl"),
        "kb": str(DATA / "kb"),
        "out_dir": str(tmp_path / "out"),
        "extractors": ["predpatt", "deppat", "psie", "repersian", "tokpat", "distant"],
        "threshold": 0.9,
        "rules": str(DATA / "rules.tokpat"),
        "patterns": str(DATA / "patterns.jsonl"),
        "templates": str(DATA / "templates.json"),
        "stopwords": str(DATA / "stopwords.txt"),
    }
    config.update(overrides)
    path = tmp_path / "config.json"
    path.write_text(json.dumps(config), encoding="utf-8")
    return path


class TestConfig:
    def test_zero_extractors_rejected_before_work(self, tmp_path):
        path = write_config(tmp_path, extractors=[])
        with pytest.raises(PipelineError, match="no extractors"):
            load_config(path)

    def test_unknown_extractor_rejected(self, tmp_path):
        path = write_config(tmp_path, extractors=["psie", "nope"])
        with pytest.raises(PipelineError, match="nope"):
            load_config(path)

    def test_tokpat_requires_rules(self, tmp_path):
        path = write_config(tmp_path, extractors=["tokpat"], rules=None)
        with pytest.raises(PipelineError, match="rules"):
            load_config(path)

    def test_relative_paths_resolve_against_config(self, tmp_path):
        config = load_config(DATA / "pipeline.json")
        assert config.corpus == DATA / "corpus.jsonl"
        assert config.kb == DATA / "kb"


class TestRun:
    def test_run_produces_stage_artifacts(self, tmp_path):
        config = load_config(write_config(tmp_path))
        summary = run_pipeline(config)
        out = tmp_path / "out"
        for name in (
            "linked.jsonl", "ds_instances.jsonl", "predicate_stats.json",
            "extracted.cftr", "canonicalized.cftr", "fused.cftr",
            "report.json", "summary.json",
        ):
            assert (out / name).exists(), name
        assert summary["sentences"] == 50
        assert set(summary["extracted"]) == set(config.extractors)

    def test_rerun_is_noop_without_force(self, tmp_path):
        config = load_config(write_config(tmp_path))
        first = run_pipeline(config)
        marker = tmp_path / "out" / "extracted.cftr"
        mtime = marker.stat().st_mtime_ns
        second = run_pipeline(config)
        assert second == first
        assert marker.stat().st_mtime_ns == mtime

    def test_force_recomputes(self, tmp_path):
        config = load_config(write_config(tmp_path))
        run_pipeline(config)
        marker = tmp_path / "out" / "extracted.cftr"
        before = marker.read_bytes()
        run_pipeline(config, force=True)
        assert marker.read_bytes() == before

    def test_failure_leaves_labeled_marker(self, tmp_path):
        bad_corpus = tmp_path / "bad.jsonl"
        bad_corpus.write_text("{not json\n", encoding="utf-8")
        config = load_config(write_config(tmp_path, corpus=str(bad_corpus)))
        with pytest.raises(Exception):
            run_pipeline(config)
        marker = json.loads((tmp_path / "out" / "FAILED.json").read_text())
        assert marker["stage"] == "load"

    def test_stage_files_carry_expected_stages(self, tmp_path):
        config = load_config(write_config(tmp_path))
        run_pipeline(config)
        out = tmp_path / "out"
        assert {r.stage for r in cftr_scan(out / "extracted.cftr")} == {"extracted"}
        assert {r.stage for r in cftr_scan(out / "canonicalized.cftr")} == {"canonicalized"}
        assert {r.stage for r in cftr_scan(out / "fused.cftr")} == {"fused"}


class TestCliCommands:
    def test_link_command(self, tmp_path):
        out = tmp_path / "linked.jsonl"
        rc = cli.main([
            "link", "--kb", str(DATA / "kb"),
            "--in", str(DATA / "corpus.jsonl"), "--out", str(out),
        ])
        assert rc == 0
        sentences = load_sentences(out)
        assert sum(len(s.links) for s in sentences) > 0

    def test_extract_single_module(self, tmp_path):
        linked = tmp_path / "linked.jsonl"
        cli.main(["link", "--kb", str(DATA / "kb"),
                  "--in", str(DATA / "corpus.jsonl"), "--out", str(linked)])
        out = tmp_path / "x.cftr"
        rc = cli.main(["extract", "--module", "psie", "--in", str(linked), "--out", str(out)])
        assert rc == 0
        records = cftr_scan(out)
        assert records and all(r.triple.extractor == "psie" for r in records)

    def test_mine_patterns_command(self, tmp_path):
        out = tmp_path / "mined.jsonl"
        rc = cli.main(["mine-patterns", "--in", str(DATA / "corpus.jsonl"),
                       "--min-support", "4", "--out", str(out)])
        assert rc == 0
        assert out.read_text().strip()

    def test_run_command_exit_codes(self, tmp_path):
        config = write_config(tmp_path)
        assert cli.main(["run", "--config", str(config)]) == 0
        # busted config: error surfaces as nonzero exit, not a traceback
        bad = write_config(tmp_path, extractors=[])
        assert cli.main(["run", "--config", str(bad)]) == 1

    def test_eval_command(self, tmp_path):
        config = write_config(tmp_path)
        cli.main(["run", "--config", str(config)])
        report_path = tmp_path / "report.json"
        rc = cli.main([
            "eval", "--in", str(tmp_path / "out" / "canonicalized.cftr"),
            "--gold", str(DATA / "corpus.jsonl"), "--report", str(report_path),
        ])
        assert rc == 0
        report = json.loads(report_path.read_text())
        assert "modules" in report and "common_triples" in report
        for row in report["modules"].values():
            assert row["corrects"] + row["wrongs"] + row["oso"] == row["triples"]

    def test_sweep_command(self, tmp_path):
        config = write_config(tmp_path)
        cli.main(["run", "--config", str(config)])
        out = tmp_path / "sweep.csv"
        rc = cli.main([
            "sweep", "--in", str(tmp_path / "out" / "canonicalized.cftr"),
            "--gold", str(DATA / "corpus.jsonl"),
            "--thresholds", "0,0.5,1.0", "--out", str(out),
        ])
        assert rc == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "threshold,precision,recall,f1"
        assert len(lines) == 4

    def test_fuse_command(self, tmp_path):
        config = write_config(tmp_path)
        cli.main(["run", "--config", str(config)])
        out = tmp_path / "fused.cftr"
        rc = cli.main([
            "fuse", "--in", str(tmp_path / "out" / "canonicalized.cftr"),
            "--threshold", "0.9", "--out", str(out),
        ])
        assert rc == 0
        assert cftr_scan(out, stage="fused")

    def test_mine_rules_command(self, tmp_path):
        config = write_config(tmp_path)
        cli.main(["run", "--config", str(config)])
        out_dir = tmp_path / "rules"
        rc = cli.main([
            "mine-rules", "--in", str(tmp_path / "out" / "extracted.cftr"),
            "--min-support", "2", "--min-confidence", "0.5", "--out", str(out_dir),
        ])
        assert rc == 0
        assert (out_dir / "rules.jsonl").exists()
        assert (out_dir / "clusters.json").exists()

    def test_mine_rules_appends_marked_mapping_rows(self, tmp_path):
        import shutil

        config = write_config(tmp_path)
        cli.main(["run", "--config", str(config)])
        kb_copy = tmp_path / "kb"
        shutil.copytree(DATA / "kb", kb_copy)
        # drop the "leads" mapping so mining has something new to add
        mapping = kb_copy / "mapping.tsv"
        mapping.write_text(
            "".join(l for l in mapping.read_text().splitlines(keepends=True)
                    if not l.startswith("leads\t")),
            encoding="utf-8",
        )
        rc = cli.main([
            "mine-rules", "--in", str(tmp_path / "out" / "extracted.cftr"),
            "--min-support", "2", "--min-confidence", "0.5",
            "--out", str(tmp_path / "rules2"), "--kb", str(kb_copy),
        ])
        assert rc == 0
        mined = [l for l in mapping.read_text().splitlines() if l.endswith("# mined")]
        assert any(l.startswith("leads\t") for l in mined)

    def test_parallel_jobs_byte_identical(self, tmp_path):
        serial = write_config(tmp_path, out_dir=str(tmp_path / "serial"))
        run_pipeline(load_config(serial))
        parallel = write_config(tmp_path, out_dir=str(tmp_path / "parallel"), jobs=2)
        run_pipeline(load_config(parallel))
        for name in ("extracted.cftr", "canonicalized.cftr", "fused.cftr", "summary.json"):
            assert (tmp_path / "serial" / name).read_bytes() == (
                tmp_path / "parallel" / name
            ).read_bytes(), name

    def test_bundled_corpus_committed_record_count(self):
        from kbp.corpus_io import load_gold_corpus

        oracle = json.loads((DATA / "oracle_summary.json").read_text())
        assert len(load_gold_corpus(DATA / "corpus.jsonl")) == oracle["sentences"] == 50
