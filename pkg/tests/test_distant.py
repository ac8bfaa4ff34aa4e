from __future__ import annotations

import random
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kbp.distant import (
    DsInstance,
    PredicateProfile,
    PredicateStats,
    build_ds_dataset,
    compute_predicate_statistics,
    extract_distant,
    load_ds_instances,
    load_predicate_stats,
    save_ds_instances,
    save_predicate_stats,
)
from kbp.model import KbSnapshot

from conftest import make_sentence


def kb_with_facts(*facts):
    predicates = frozenset(p for _, p, _ in facts)
    return KbSnapshot(predicates=predicates, facts=frozenset(facts))


def pair_sentence(sid="s1", extra_tokens=("visited",)):
    tokens = ("E1",) + tuple(extra_tokens) + ("E2",)
    return make_sentence(
        sid=sid,
        tokens=tokens,
        links=[(0, 1, "e:1"), (len(tokens) - 1, len(tokens), "e:2")],
    )


class TestBuildDataset:
    def test_single_fact_single_instance(self):
        kb = kb_with_facts(("e:1", "fkgo:p", "e:2"))
        instances = build_ds_dataset([pair_sentence()], kb)
        assert len(instances) == 1
        inst = instances[0]
        assert (inst.subject, inst.predicate, inst.object) == ("e:1", "fkgo:p", "e:2")
        assert inst.subject_span == (0, 1) and inst.object_span == (2, 3)

    def test_two_facts_two_instances(self):
        kb = kb_with_facts(("e:1", "fkgo:p", "e:2"), ("e:1", "fkgo:q", "e:2"))
        assert len(build_ds_dataset([pair_sentence()], kb)) == 2

    def test_no_fact_no_instance(self):
        kb = kb_with_facts(("e:9", "fkgo:p", "e:8"))
        assert build_ds_dataset([pair_sentence()], kb) == []

    def test_reverse_direction_found(self):
        kb = kb_with_facts(("e:2", "fkgo:p", "e:1"))
        instances = build_ds_dataset([pair_sentence()], kb)
        assert [(i.subject, i.object) for i in instances] == [("e:2", "e:1")]

    def test_every_instance_is_a_kb_fact(self):
        kb = kb_with_facts(("e:1", "fkgo:p", "e:2"), ("e:2", "fkgo:q", "e:1"))
        for inst in build_ds_dataset([pair_sentence()], kb):
            assert (inst.subject, inst.predicate, inst.object) in kb.facts

    def test_round_trip(self, tmp_path):
        kb = kb_with_facts(("e:1", "fkgo:p", "e:2"))
        instances = build_ds_dataset([pair_sentence()], kb)
        path = tmp_path / "ds.jsonl"
        save_ds_instances(path, instances)
        assert load_ds_instances(path) == instances


class TestStatistics:
    def test_shared_token_counted(self):
        sentences = [
            pair_sentence("s1", ("capital", "city")),
            pair_sentence("s2", ("capital", "town")),
        ]
        instances = [
            DsInstance(s.id, "e:1", "e:2", "fkgo:p", (0, 1), (3, 4)) for s in sentences
        ]
        stats = compute_predicate_statistics(instances, sentences)
        assert stats.per_predicate["fkgo:p"].frequent_tokens["capital"] == 2

    def test_singleton_token_pruned(self):
        sentences = [
            pair_sentence("s1", ("capital", "city")),
            pair_sentence("s2", ("capital", "town")),
        ]
        instances = [
            DsInstance(s.id, "e:1", "e:2", "fkgo:p", (0, 1), (3, 4)) for s in sentences
        ]
        stats = compute_predicate_statistics(instances, sentences)
        assert "city" not in stats.per_predicate["fkgo:p"].frequent_tokens
        assert "town" not in stats.per_predicate["fkgo:p"].frequent_tokens

    def test_argument_tokens_excluded(self):
        sentences = [pair_sentence("s1"), pair_sentence("s2")]
        instances = [
            DsInstance(s.id, "e:1", "e:2", "fkgo:p", (0, 1), (2, 3)) for s in sentences
        ]
        stats = compute_predicate_statistics(instances, sentences)
        assert "e1" not in stats.per_predicate["fkgo:p"].frequent_tokens

    def test_stopwords_excluded(self):
        sentences = [
            pair_sentence("s1", ("the", "capital")),
            pair_sentence("s2", ("the", "capital")),
        ]
        instances = [
            DsInstance(s.id, "e:1", "e:2", "fkgo:p", (0, 1), (3, 4)) for s in sentences
        ]
        stats = compute_predicate_statistics(instances, sentences, stopwords=["the"])
        assert "the" not in stats.per_predicate["fkgo:p"].frequent_tokens
        assert stats.per_predicate["fkgo:p"].frequent_tokens["capital"] == 2

    def test_compound_verbs_collected(self):
        s = make_sentence(
            sid="s1",
            tokens=("E1", "speech", "gave", "E2"),
            pos=("PROPN", "NOUN", "VERB", "PROPN"),
            heads=[3, 3, 0, 3],
            rels=["nsubj", "compound:lvc", "root", "obj"],
            links=[(0, 1, "e:1"), (3, 4, "e:2")],
        )
        instances = [DsInstance("s1", "e:1", "e:2", "fkgo:p", (0, 1), (3, 4))]
        stats = compute_predicate_statistics(instances, [s])
        assert stats.per_predicate["fkgo:p"].compound_verbs == {"speech gave": 1}

    def test_twenty_instance_recount_oracle(self):
        # brute-force recount, written independently of the implementation
        rng = random.Random(7)
        vocabulary = ["alpha", "beta", "gamma", "delta"]
        sentences, instances = [], []
        for i in range(20):
            middle = tuple(rng.choice(vocabulary) for _ in range(3))
            s = pair_sentence(f"s{i}", middle)
            sentences.append(s)
            predicate = "fkgo:p" if i % 2 == 0 else "fkgo:q"
            instances.append(
                DsInstance(s.id, "e:1", "e:2", predicate, (0, 1), (4, 5))
            )
        stats = compute_predicate_statistics(instances, sentences)

        oracle: dict[str, Counter] = {"fkgo:p": Counter(), "fkgo:q": Counter()}
        by_id = {s.id: s for s in sentences}
        for inst in instances:
            s = by_id[inst.sentence_id]
            for idx, token in enumerate(s.tokens):
                if idx not in (0, 4):
                    oracle[inst.predicate][token.casefold()] += 1
        for predicate in oracle:
            expected = {w: c for w, c in oracle[predicate].items() if c >= 2}
            assert dict(stats.per_predicate[predicate].frequent_tokens) == expected
            assert stats.per_predicate[predicate].instance_count == 10

    def test_order_independence(self):
        rng = random.Random(3)
        sentences = [pair_sentence(f"s{i}", ("alpha", "beta")) for i in range(8)]
        instances = [
            DsInstance(s.id, "e:1", "e:2", "fkgo:p", (0, 1), (3, 4)) for s in sentences
        ]
        shuffled = instances[:]
        rng.shuffle(shuffled)
        assert compute_predicate_statistics(instances, sentences) == (
            compute_predicate_statistics(shuffled, sentences)
        )

    def test_unknown_sentence_raises(self):
        with pytest.raises(ValueError, match="unknown sentence"):
            compute_predicate_statistics(
                [DsInstance("nope", "e:1", "e:2", "fkgo:p", (0, 1), (1, 2))], []
            )

    def test_stats_round_trip(self, tmp_path):
        sentences = [pair_sentence("s1", ("capital",)), pair_sentence("s2", ("capital",))]
        instances = [
            DsInstance(s.id, "e:1", "e:2", "fkgo:p", (0, 1), (2, 3)) for s in sentences
        ]
        stats = compute_predicate_statistics(instances, sentences)
        path = tmp_path / "stats.json"
        save_predicate_stats(path, stats)
        assert load_predicate_stats(path) == stats


def stats_of(**profiles):
    return PredicateStats(
        per_predicate={
            iri: PredicateProfile(
                frequent_tokens=spec.get("tokens", {}),
                compound_verbs=spec.get("compounds", {}),
                instance_count=spec.get("n", 1),
            )
            for iri, spec in profiles.items()
        }
    )


class TestExtract:
    def test_three_token_hits_confidence(self):
        stats = stats_of(**{"fkgo:p": {"tokens": {"visited": 2, "e1": 2, "e2": 2}}})
        triples = extract_distant(pair_sentence(), stats)
        assert len(triples) == 2  # both ordered pairs
        assert all(t.confidence == pytest.approx(0.6) for t in triples)
        assert all(t.predicate.value == "fkgo:p" for t in triples)

    def test_below_floor_empty(self):
        stats = stats_of(**{"fkgo:p": {"tokens": {"visited": 2}}})
        assert extract_distant(pair_sentence(), stats) == []

    def test_tie_breaks_to_smaller_iri(self):
        spec = {"tokens": {"visited": 2, "e1": 2}}
        stats = stats_of(**{"fkgo:q": dict(spec), "fkgo:p": dict(spec)})
        triples = extract_distant(pair_sentence(), stats)
        assert triples and all(t.predicate.value == "fkgo:p" for t in triples)

    def test_compound_hit_counts_double(self):
        s = make_sentence(
            sid="s1",
            tokens=("E1", "speech", "gave", "E2"),
            pos=("PROPN", "NOUN", "VERB", "PROPN"),
            heads=[3, 3, 0, 3],
            rels=["nsubj", "compound:lvc", "root", "obj"],
            links=[(0, 1, "e:1"), (3, 4, "e:2")],
        )
        stats = stats_of(**{"fkgo:p": {"compounds": {"speech gave": 1}}})
        triples = extract_distant(s, stats)
        assert triples and all(t.confidence == pytest.approx(0.5) for t in triples)

    def test_empty_stats_empty(self):
        assert extract_distant(pair_sentence(), PredicateStats(per_predicate={})) == []

    @settings(max_examples=30, deadline=None)
    @given(hits=st.integers(min_value=2, max_value=12))
    def test_confidence_bounds_and_monotonicity(self, hits):
        tokens = {f"w{i}": 2 for i in range(hits)}
        stats = stats_of(**{"fkgo:p": {"tokens": tokens}})
        s = pair_sentence("s1", tuple(f"w{i}" for i in range(hits)))
        triples = extract_distant(s, stats)
        assert triples
        confidence = triples[0].confidence
        assert 0.5 <= confidence < 1.0
        assert confidence == pytest.approx(hits / (hits + 2))
