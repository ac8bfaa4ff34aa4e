from __future__ import annotations

from collections import Counter

import pytest

from kbp.extractors import (
    extract_dep_pattern,
    extract_predpatt,
    extract_psie,
    extract_repersian,
    load_pattern_bank,
    mine_dependency_patterns,
    pattern_key,
    save_pattern_bank,
)
from kbp.extractors.tree_patterns import DepPattern

from conftest import make_sentence


def verb_sentence(num_args, link_all=True):
    """One verb with ``num_args`` argument dependents, each a single linked token."""
    arg_rels = ["nsubj", "obj", "iobj", "obl"]
    tokens = ["arg0", "gave"] + [f"arg{i}" for i in range(1, num_args)]
    pos = ["PROPN", "VERB"] + ["PROPN"] * (num_args - 1)
    heads = [2, 0] + [2] * (num_args - 1)
    rels = [arg_rels[0], "root"] + [arg_rels[i % 4] if i < 4 else "obl" for i in range(1, num_args)]
    links = []
    if link_all:
        links = [(0, 1, "e:0")] + [(i, i + 1, f"e:{i - 1}") for i in range(2, num_args + 1)]
    return make_sentence(tokens=tokens, pos=pos, heads=heads, rels=rels, links=links)


class TestPredpatt:
    @pytest.mark.parametrize("n,expected", [(2, 2), (3, 6), (4, 12)])
    def test_permutation_counts(self, n, expected):
        triples = extract_predpatt(verb_sentence(n))
        assert len(triples) == expected
        assert all(t.confidence == pytest.approx(1.0 / expected) for t in triples)

    def test_single_argument_empty(self):
        s = make_sentence(
            tokens=("he", "slept"), pos=("PRON", "VERB"),
            heads=[2, 0], rels=["nsubj", "root"], links=[(0, 1, "e:he")],
        )
        assert extract_predpatt(s) == []

    def test_no_verb_empty(self):
        assert extract_predpatt(make_sentence()) == []

    def test_two_linked_arguments(self):
        triples = extract_predpatt(verb_sentence(2))
        assert {(t.subject, t.object) for t in triples} == {("e:0", "e:1"), ("e:1", "e:0")}
        assert all(t.confidence == pytest.approx(0.5) for t in triples)
        assert all(t.predicate.value == "gave" for t in triples)

    def test_unlinked_argument_dropped_but_counts_toward_n(self):
        s = verb_sentence(3, link_all=False)
        s = make_sentence(
            tokens=s.tokens, pos=s.pos,
            heads=[a.head for a in s.deps], rels=[a.relation for a in s.deps],
            links=[(0, 1, "e:0"), (2, 3, "e:1")],  # third argument unlinked
        )
        triples = extract_predpatt(s)
        # pairs among the two linked arguments only, confidence still 1/(3*2)
        assert len(triples) == 2
        assert all(t.confidence == pytest.approx(1 / 6) for t in triples)

    def test_predicate_phrase_includes_aux_and_neg(self):
        s = make_sentence(
            tokens=("A", "did", "not", "visit", "B"),
            pos=("PROPN", "AUX", "PART", "VERB", "PROPN"),
            heads=[4, 4, 4, 0, 4],
            rels=["nsubj", "aux", "neg", "root", "obj"],
            links=[(0, 1, "e:a"), (4, 5, "e:b")],
        )
        triples = extract_predpatt(s)
        assert triples and all(t.predicate.value == "did not visit" for t in triples)

    def test_ambiguous_span_expands_with_scaled_confidence(self):
        s = make_sentence(
            tokens=("A", "met", "B"),
            pos=("PROPN", "VERB", "PROPN"),
            heads=[2, 0, 2],
            rels=["nsubj", "root", "obj"],
            links=[(0, 1, "e:a1", 0.5), (0, 1, "e:a2", 0.5), (2, 3, "e:b")],
        )
        triples = extract_predpatt(s)
        assert len(triples) == 4
        forward = [t for t in triples if t.object == "e:b"]
        assert {t.subject for t in forward} == {"e:a1", "e:a2"}
        assert all(t.confidence == pytest.approx(0.5 * 0.5 * 1.0) for t in forward)


def patterned_sentence(words, sid="p"):
    """Fixed 4-token shape: PROPN VERB ADP PROPN, links on tokens 1 and 4."""
    return make_sentence(
        sid=sid,
        tokens=tuple(words),
        pos=("PROPN", "VERB", "ADP", "PROPN"),
        heads=[2, 0, 4, 2],
        rels=["nsubj", "root", "case", "obl"],
        links=[(0, 1, f"e:{words[0].lower()}"), (3, 4, f"e:{words[3].lower()}")],
    )


class TestDependencyPatterns:
    def test_same_structure_different_words_one_pattern(self):
        corpus = [
            patterned_sentence(["Anna", "lives", "in", "Oslo"], "a"),
            patterned_sentence(["Boris", "works", "near", "Riga"], "b"),
        ]
        mined = mine_dependency_patterns(corpus, min_support=1)
        assert len(mined) == 1
        assert mined[0].support == 2

    def test_min_support_filters(self):
        corpus = [patterned_sentence(["Anna", "lives", "in", "Oslo"])]
        assert mine_dependency_patterns(corpus, min_support=2) == []

    def test_mining_matches_bruteforce_grouping(self):
        corpus = []
        for i in range(5):
            corpus.append(patterned_sentence(["A", "x", "y", "B"], f"k1-{i}"))
        for i in range(3):
            corpus.append(
                make_sentence(
                    sid=f"k2-{i}", tokens=("A", "saw", "B"),
                    pos=("PROPN", "VERB", "PROPN"),
                    heads=[2, 0, 2], rels=["nsubj", "root", "obj"],
                )
            )
        for i in range(2):
            corpus.append(make_sentence(sid=f"k3-{i}", tokens=("A", "B")))
        oracle = Counter(pattern_key(s) for s in corpus)
        mined = mine_dependency_patterns(corpus, min_support=3)
        assert {p.key: p.support for p in mined} == {
            k: c for k, c in oracle.items() if c >= 3
        }
        assert [p.support for p in mined] == [5, 3]

    def test_extract_with_annotated_roles(self):
        s = patterned_sentence(["Anna", "lives", "in", "Oslo"])
        pattern = DepPattern(
            key=pattern_key(s), subject=(1,), predicate=(2, 3), object=(4,), support=2
        )
        triples = extract_dep_pattern(s, [pattern])
        assert len(triples) == 1
        t = triples[0]
        assert (t.subject, t.predicate.value, t.object) == ("e:anna", "lives in", "e:oslo")
        assert t.confidence == pytest.approx(1.0)

    def test_no_key_match_empty(self):
        s = patterned_sentence(["Anna", "lives", "in", "Oslo"])
        other = make_sentence(tokens=("A", "saw", "B"), pos=("PROPN", "VERB", "PROPN"),
                              heads=[2, 0, 2], rels=["nsubj", "root", "obj"])
        pattern = DepPattern(
            key=pattern_key(other), subject=(1,), predicate=(2,), object=(3,)
        )
        assert extract_dep_pattern(s, [pattern]) == []

    def test_word_substitution_extracts_same_positions(self):
        a = patterned_sentence(["Anna", "lives", "in", "Oslo"], "a")
        b = patterned_sentence(["Boris", "works", "near", "Riga"], "b")
        pattern = DepPattern(key=pattern_key(a), subject=(1,), predicate=(2, 3), object=(4,))
        ta = extract_dep_pattern(a, [pattern])[0]
        tb = extract_dep_pattern(b, [pattern])[0]
        assert (ta.subject, ta.predicate.value, ta.object) == ("e:anna", "lives in", "e:oslo")
        assert (tb.subject, tb.predicate.value, tb.object) == ("e:boris", "works near", "e:riga")

    def test_unlinked_role_drops_triple(self):
        s = make_sentence(
            tokens=("Anna", "lives", "in", "Oslo"),
            pos=("PROPN", "VERB", "ADP", "PROPN"),
            heads=[2, 0, 4, 2],
            rels=["nsubj", "root", "case", "obl"],
            links=[(0, 1, "e:anna")],  # object unlinked
        )
        pattern = DepPattern(key=pattern_key(s), subject=(1,), predicate=(2, 3), object=(4,))
        assert extract_dep_pattern(s, [pattern]) == []

    def test_bank_round_trip(self, tmp_path):
        s = patterned_sentence(["Anna", "lives", "in", "Oslo"])
        bank = [
            DepPattern(key=pattern_key(s), subject=(1,), predicate=(2, 3), object=(4,), support=7)
        ]
        path = tmp_path / "bank.jsonl"
        save_pattern_bank(path, bank)
        assert load_pattern_bank(path) == bank

    def test_role_position_validation(self):
        s = patterned_sentence(["Anna", "lives", "in", "Oslo"])
        with pytest.raises(ValueError, match="outside"):
            DepPattern(key=pattern_key(s), subject=(9,))
        with pytest.raises(ValueError, match="overlap"):
            DepPattern(key=pattern_key(s), subject=(1,), object=(1,))


class TestPsie:
    def test_subject_object_pair(self):
        s = make_sentence(
            tokens=("A", "defeated", "B"),
            pos=("PROPN", "VERB", "PROPN"),
            heads=[2, 0, 2],
            rels=["nsubj", "root", "obj"],
            links=[(0, 1, "e:a"), (2, 3, "e:b")],
        )
        triples = extract_psie(s)
        assert len(triples) == 1
        t = triples[0]
        assert (t.subject, t.predicate.value, t.object) == ("e:a", "defeated", "e:b")
        assert t.confidence == pytest.approx(0.8)

    def test_subject_without_object_empty(self):
        s = make_sentence(
            tokens=("A", "slept"), pos=("PROPN", "VERB"),
            heads=[2, 0], rels=["nsubj", "root"], links=[(0, 1, "e:a")],
        )
        assert extract_psie(s) == []

    def test_compound_verb_predicate_contains_both_tokens(self):
        # light-verb construction: non-verbal element + verb
        s = make_sentence(
            tokens=("A", "speech", "gave", "B"),
            pos=("PROPN", "NOUN", "VERB", "PROPN"),
            heads=[3, 3, 0, 3],
            rels=["nsubj", "compound:lvc", "root", "obj"],
            links=[(0, 1, "e:a"), (3, 4, "e:b")],
        )
        triples = extract_psie(s)
        assert len(triples) == 1
        assert triples[0].predicate.value == "speech gave"

    def test_unlinked_subject_drops_all(self):
        s = make_sentence(
            tokens=("A", "defeated", "B"),
            pos=("PROPN", "VERB", "PROPN"),
            heads=[2, 0, 2],
            rels=["nsubj", "root", "obj"],
            links=[(2, 3, "e:b")],
        )
        assert extract_psie(s) == []


class TestRepersian:
    def test_verb_adposition_template(self):
        s = make_sentence(
            tokens=("A", "flew", "to", "B"),
            pos=("PROPN", "VERB", "ADP", "PROPN"),
            heads=[2, 0, 4, 2],
            rels=["nsubj", "root", "case", "obl"],
            links=[(0, 1, "e:a"), (3, 4, "e:b")],
        )
        triples = extract_repersian(s)
        assert len(triples) == 1
        t = triples[0]
        assert (t.subject, t.predicate.value, t.object) == ("e:a", "flew to", "e:b")
        assert t.confidence == pytest.approx(0.7)

    def test_no_verb_between_links_empty(self):
        s = make_sentence(
            tokens=("A", "and", "B"),
            pos=("PROPN", "CCONJ", "PROPN"),
            links=[(0, 1, "e:a"), (2, 3, "e:b")],
        )
        assert extract_repersian(s) == []

    def test_two_template_regions_two_triples(self):
        # [ENT] V W P [ENT] ... [ENT] V [ENT], enumerated by hand: the first
        # region matches the longest template V W* P, the second the bare V.
        s = make_sentence(
            tokens=("A", "went", "straight", "to", "B", "and", "C", "beat", "D"),
            pos=("PROPN", "VERB", "ADV", "ADP", "PROPN", "CCONJ", "PROPN", "VERB", "PROPN"),
            heads=[2, 0, 2, 5, 2, 8, 8, 2, 8],
            rels=["nsubj", "root", "advmod", "case", "obl", "cc", "nsubj", "conj", "obj"],
            links=[(0, 1, "e:a"), (4, 5, "e:b"), (6, 7, "e:c"), (8, 9, "e:d")],
        )
        triples = extract_repersian(s)
        assert [(t.subject, t.predicate.value, t.object) for t in triples] == [
            ("e:a", "went straight to", "e:b"),
            ("e:c", "beat", "e:d"),
        ]

    def test_longest_phrase_wins_per_verb(self):
        # both V and V P could anchor at the verb; only the longer survives
        s = make_sentence(
            tokens=("A", "flew", "to", "B"),
            pos=("PROPN", "VERB", "ADP", "PROPN"),
            heads=[2, 0, 4, 2],
            rels=["nsubj", "root", "case", "obl"],
            links=[(0, 1, "e:a"), (3, 4, "e:b")],
        )
        assert [t.predicate.value for t in extract_repersian(s)] == ["flew to"]
