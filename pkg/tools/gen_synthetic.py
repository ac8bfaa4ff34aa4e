"""Generate the bundled synthetic corpus, KB snapshot, and resource files.

Writes data/synthetic/: a 50-sentence gold corpus over an invented world of
countries, cities, people, teams, and research fields, plus the KB snapshot,
token-pattern rules, annotated dependency-pattern bank, POS templates,
stopword list, and pipeline config.  Everything is enumerated explicitly, so
reruns are byte-identical.

Sentence families and which extractor they feed:

* "<P> firmly leads <C>"            - every extractor (fact-backed rows fuel
                                      the distant-supervision statistics)
* "Under <P> , <C> leads the region" - distant-supervision only
* "<P> plays for <T>"                - tree patterns + POS templates + distant
* "<P1> and <P2> play for <T>"       - POS templates only
* "<P> plays for Mercury"            - ambiguous mention (city vs team)
* "<P> holds citizenship of <C>"     - token patterns + distant
* "<P> acquired citizenship of <C>"  - token patterns only
* "The capital of <C> is <CITY>"     - tree patterns only
* "<CITY> , capital of <C> , shines" - token patterns only
* "<P> studies <F>"                  - psie/predpatt, canonicalized by scoring
* "<P> admires <C>"                  - extracted but uncanonicalizable
* assorted noise                     - nothing extractable
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from kbp.corpus_io import dumps, save_kb_snapshot  # noqa: E402
from kbp.extractors import pattern_key  # noqa: E402
from kbp.extractors.tree_patterns import DepPattern, save_pattern_bank  # noqa: E402
from kbp.model import KbEntity, KbSnapshot  # noqa: E402
from kbp.corpus_io import sentence_from_json  # noqa: E402

OUT = Path(__file__).resolve().parents[1] / "data" / "synthetic"

PERSON, COUNTRY, CITY, TEAM, FIELD = (
    "fkgo:Person", "fkgo:Country", "fkgo:City", "fkgo:Team", "fkgo:Field",
)

ENTITIES = [
    ("fke:avaria", ["Avaria"], COUNTRY),
    ("fke:borona", ["Borona"], COUNTRY),
    ("fke:cestia", ["Cestia"], COUNTRY),
    ("fke:dorvia", ["Dorvia"], COUNTRY),
    ("fke:elmora", ["Elmora"], COUNTRY),
    ("fke:quellan", ["Quellan"], CITY),
    ("fke:rivermoor", ["Rivermoor"], CITY),
    ("fke:soltere", ["Soltere"], CITY),
    ("fke:tarnville", ["Tarnville"], CITY),
    ("fke:mercury_city", ["Mercury"], CITY),
    ("fke:mercury_team", ["Mercury"], TEAM),
    ("fke:falcons", ["Falcons"], TEAM),
    ("fke:thunder", ["Thunder"], TEAM),
    ("fke:marez", ["Marez"], PERSON),
    ("fke:kovan", ["Kovan"], PERSON),
    ("fke:lirra", ["Lirra"], PERSON),
    ("fke:tessin", ["Tessin"], PERSON),
    ("fke:oruma", ["Oruma"], PERSON),
    ("fke:veylan", ["Veylan"], PERSON),
    ("fke:darno", ["Darno"], PERSON),
    ("fke:silva", ["Silva"], PERSON),
    ("fke:nila_voss", ["Nila Voss"], PERSON),
    ("fke:ralt", ["Ralt"], PERSON),
    ("fke:ibben", ["Ibben"], PERSON),
    ("fke:wraya", ["Wraya"], PERSON),
]

PREDICATES = [
    "fkgo:capitalOf",
    "fkgo:field",
    "fkgo:leaderOf",
    "fkgo:nationality",
    "fkgo:rival",
    "fkgo:team",
]

FACTS = [
    ("fke:marez", "fkgo:leaderOf", "fke:avaria"),
    ("fke:kovan", "fkgo:leaderOf", "fke:borona"),
    ("fke:silva", "fkgo:team", "fke:falcons"),
    ("fke:darno", "fkgo:team", "fke:thunder"),
    ("fke:lirra", "fkgo:nationality", "fke:cestia"),
    ("fke:tessin", "fkgo:nationality", "fke:dorvia"),
    ("fke:quellan", "fkgo:capitalOf", "fke:avaria"),
    ("fke:rivermoor", "fkgo:capitalOf", "fke:borona"),
    ("fke:oruma", "fkgo:field", "fke:botany"),
    ("fke:veylan", "fkgo:field", "fke:chemistry"),
]

MAPPING = {
    "leads": "fkgo:leaderOf",
    "plays for": "fkgo:team",
    "play for": "fkgo:team",
    "capital of": "fkgo:capitalOf",
}

STOPWORDS = ["the", "a", "an", "of", "for", "and", "is", "was", "to",
             "in", "under", "who", ",", "."]

TOKEN_RULES = """\
# token-pattern rules for the synthetic corpus
rule citizenship-holds -> fkgo:nationality : (SUBJ: class:fkgo:Person+) "holds" "citizenship" "of" (OBJ: class:fkgo:Country+)
rule citizenship-acquired -> fkgo:nationality : (SUBJ: class:fkgo:Person+) "acquired" "citizenship" "of" (OBJ: class:fkgo:Country+)
rule capital-apposition -> fkgo:capitalOf : (SUBJ: class:fkgo:City+) "," "capital" "of" (OBJ: class:fkgo:Country+)
"""

FIELD_ENTITIES = [
    ("fke:botany", ["Botany"], FIELD),
    ("fke:chemistry", ["Chemistry"], FIELD),
    ("fke:geology", ["Geology"], FIELD),
]


def record(sid, tokens, pos, heads, rels, gold, ner=None):
    subject, predicate, obj = gold
    obj_json = {
        "id": sid,
        "text": " ".join(tokens),
        "tokens": list(tokens),
        "pos": list(pos),
        "ner": list(ner) if ner else ["O"] * len(tokens),
        "dep": [{"head": h, "rel": r} for h, r in zip(heads, rels)],
        "links": [],
        "subject": subject,
        "object": obj,
        "predicate": predicate,
        "subject_class": "",
        "object_class": "",
    }
    return obj_json


def leads(sid, person, p_iri, country, c_iri):
    return record(
        sid,
        [person, "firmly", "leads", country, "."],
        ["PROPN", "ADV", "VERB", "PROPN", "PUNCT"],
        [3, 3, 0, 3, 3],
        ["nsubj", "advmod", "root", "obj", "punct"],
        (p_iri, "fkgo:leaderOf", c_iri),
    )


def leads_distant(sid, person, p_iri, country, c_iri):
    return record(
        sid,
        ["Under", person, ",", country, "leads", "the", "region", "."],
        ["ADP", "PROPN", "PUNCT", "PROPN", "VERB", "DET", "NOUN", "PUNCT"],
        [2, 5, 5, 5, 0, 7, 5, 5],
        ["case", "obl", "punct", "nsubj", "root", "det", "obj", "punct"],
        (p_iri, "fkgo:leaderOf", c_iri),
    )


def plays_for(sid, person, p_iri, team, t_iri):
    return record(
        sid,
        [person, "plays", "for", team, "."],
        ["PROPN", "VERB", "ADP", "PROPN", "PUNCT"],
        [2, 0, 4, 2, 2],
        ["nsubj", "root", "case", "obl", "punct"],
        (p_iri, "fkgo:team", t_iri),
    )


def play_for_conj(sid, p1, p2, p2_iri, team, t_iri):
    return record(
        sid,
        [p1, "and", p2, "play", "for", team, "."],
        ["PROPN", "CCONJ", "PROPN", "VERB", "ADP", "PROPN", "PUNCT"],
        [4, 3, 1, 0, 6, 4, 4],
        ["nsubj", "cc", "conj", "root", "case", "obl", "punct"],
        (p2_iri, "fkgo:team", t_iri),
    )


def citizenship(sid, person_tokens, p_iri, country, c_iri, verb="holds"):
    n = len(person_tokens)
    tokens = list(person_tokens) + [verb, "citizenship", "of", country, "."]
    pos = ["PROPN"] * n + ["VERB", "NOUN", "ADP", "PROPN", "PUNCT"]
    heads = [n + 1] + [1] * (n - 1) + [0, n + 1, n + 4, n + 2, n + 1]
    rels = ["nsubj"] + ["flat"] * (n - 1) + ["root", "obj", "case", "nmod", "punct"]
    return record(sid, tokens, pos, heads, rels, (p_iri, "fkgo:nationality", c_iri))


def capital_is(sid, country, c_iri, city, city_iri):
    return record(
        sid,
        ["The", "capital", "of", country, "is", city, "."],
        ["DET", "NOUN", "ADP", "PROPN", "AUX", "PROPN", "PUNCT"],
        [2, 6, 4, 2, 6, 0, 6],
        ["det", "nsubj", "case", "nmod", "cop", "root", "punct"],
        (city_iri, "fkgo:capitalOf", c_iri),
    )


def capital_appos(sid, city, city_iri, country, c_iri):
    return record(
        sid,
        [city, ",", "capital", "of", country, ",", "shines", "."],
        ["PROPN", "PUNCT", "NOUN", "ADP", "PROPN", "PUNCT", "VERB", "PUNCT"],
        [7, 3, 1, 5, 3, 3, 0, 7],
        ["nsubj", "punct", "appos", "case", "nmod", "punct", "root", "punct"],
        (city_iri, "fkgo:capitalOf", c_iri),
    )


def studies(sid, person, p_iri, field, f_iri):
    return record(
        sid,
        [person, "studies", field, "."],
        ["PROPN", "VERB", "PROPN", "PUNCT"],
        [2, 0, 2, 2],
        ["nsubj", "root", "obj", "punct"],
        (p_iri, "fkgo:field", f_iri),
    )


def admires(sid, person, p_iri, country, c_iri):
    return record(
        sid,
        [person, "admires", country, "."],
        ["PROPN", "VERB", "PROPN", "PUNCT"],
        [2, 0, 2, 2],
        ["nsubj", "root", "obj", "punct"],
        (p_iri, "fkgo:rival", c_iri),
    )


def noise(sid, tokens, pos, heads, rels, gold):
    return record(sid, tokens, pos, heads, rels, gold)


def build_records():
    records = []
    n = [0]

    def add(builder, *args):
        n[0] += 1
        records.append(builder(f"syn-{n[0]:03d}", *args))

    # leader sentences; the first four pairs exist in the KB (DS fuel)
    add(leads, "Marez", "fke:marez", "Avaria", "fke:avaria")
    add(leads, "Marez", "fke:marez", "Avaria", "fke:avaria")
    add(leads, "Kovan", "fke:kovan", "Borona", "fke:borona")
    add(leads, "Kovan", "fke:kovan", "Borona", "fke:borona")
    add(leads, "Ralt", "fke:ralt", "Elmora", "fke:elmora")
    add(leads, "Ibben", "fke:ibben", "Dorvia", "fke:dorvia")
    add(leads, "Wraya", "fke:wraya", "Cestia", "fke:cestia")
    add(leads, "Silva", "fke:silva", "Elmora", "fke:elmora")
    add(leads, "Oruma", "fke:oruma", "Borona", "fke:borona")
    add(leads, "Tessin", "fke:tessin", "Avaria", "fke:avaria")
    # pairs unique to these sentences so the keys stay single-extractor;
    # the Oruma/Cestia gold is deliberately a different predicate (a planted
    # "entities right, relation wrong" case)
    add(leads_distant, "Wraya", "fke:wraya", "Avaria", "fke:avaria")
    add(leads_distant, "Ibben", "fke:ibben", "Elmora", "fke:elmora")
    add(lambda sid, *a: {**leads_distant(sid, *a), "predicate": "fkgo:rival"},
        "Oruma", "fke:oruma", "Cestia", "fke:cestia")

    # team sentences; Silva/Darno pairs are KB facts
    add(plays_for, "Silva", "fke:silva", "Falcons", "fke:falcons")
    add(plays_for, "Silva", "fke:silva", "Falcons", "fke:falcons")
    add(plays_for, "Darno", "fke:darno", "Thunder", "fke:thunder")
    add(plays_for, "Darno", "fke:darno", "Thunder", "fke:thunder")
    add(plays_for, "Ralt", "fke:ralt", "Falcons", "fke:falcons")
    add(plays_for, "Ibben", "fke:ibben", "Thunder", "fke:thunder")
    # conjunct subjects avoid KB-fact pairs, keeping these POS-template-only
    add(play_for_conj, "Ralt", "Wraya", "fke:wraya", "Falcons", "fke:falcons")
    add(play_for_conj, "Ibben", "Tessin", "fke:tessin", "Thunder", "fke:thunder")
    add(plays_for, "Kovan", "fke:kovan", "Mercury", "fke:mercury_team")
    add(plays_for, "Marez", "fke:marez", "Mercury", "fke:mercury_team")

    # nationality; Lirra/Tessin pairs are KB facts
    add(citizenship, ["Lirra"], "fke:lirra", "Cestia", "fke:cestia")
    add(citizenship, ["Lirra"], "fke:lirra", "Cestia", "fke:cestia")
    add(citizenship, ["Tessin"], "fke:tessin", "Dorvia", "fke:dorvia")
    add(citizenship, ["Tessin"], "fke:tessin", "Dorvia", "fke:dorvia")
    add(lambda sid, *a: citizenship(sid, *a, verb="acquired"),
        ["Nila", "Voss"], "fke:nila_voss", "Elmora", "fke:elmora")
    add(lambda sid, *a: citizenship(sid, *a, verb="acquired"),
        ["Ralt"], "fke:ralt", "Avaria", "fke:avaria")
    add(lambda sid, *a: citizenship(sid, *a, verb="acquired"),
        ["Wraya"], "fke:wraya", "Borona", "fke:borona")

    # capitals; Quellan/Rivermoor pairs are KB facts
    add(capital_is, "Avaria", "fke:avaria", "Quellan", "fke:quellan")
    add(capital_is, "Avaria", "fke:avaria", "Quellan", "fke:quellan")
    add(capital_is, "Borona", "fke:borona", "Rivermoor", "fke:rivermoor")
    add(capital_is, "Borona", "fke:borona", "Rivermoor", "fke:rivermoor")
    # all apposition pairs kept out of the KB facts so distant supervision
    # never profiles "shines" and these stay token-pattern-only
    add(capital_appos, "Soltere", "fke:soltere", "Cestia", "fke:cestia")
    add(capital_appos, "Tarnville", "fke:tarnville", "Dorvia", "fke:dorvia")
    add(capital_appos, "Tarnville", "fke:tarnville", "Elmora", "fke:elmora")

    # research fields; Oruma/Veylan pairs are KB facts
    add(studies, "Oruma", "fke:oruma", "Botany", "fke:botany")
    add(studies, "Oruma", "fke:oruma", "Botany", "fke:botany")
    add(studies, "Veylan", "fke:veylan", "Chemistry", "fke:chemistry")
    add(studies, "Veylan", "fke:veylan", "Chemistry", "fke:chemistry")
    add(studies, "Lirra", "fke:lirra", "Geology", "fke:geology")
    add(studies, "Nila", "fke:nila_voss", "Botany", "fke:botany")

    # extracted but uncanonicalizable
    add(admires, "Marez", "fke:marez", "Cestia", "fke:cestia")
    add(admires, "Kovan", "fke:kovan", "Dorvia", "fke:dorvia")
    add(admires, "Lirra", "fke:lirra", "Avaria", "fke:avaria")
    add(admires, "Darno", "fke:darno", "Elmora", "fke:elmora")

    # noise: nothing linkable or no extractable structure
    add(noise, ["The", "weather", "stayed", "mild", "."],
        ["DET", "NOUN", "VERB", "ADJ", "PUNCT"],
        [2, 3, 0, 3, 3], ["det", "nsubj", "root", "xcomp", "punct"],
        ("fke:wraya", "fkgo:rival", "fke:avaria"))
    add(noise, ["Nobody", "expected", "rain", "."],
        ["PRON", "VERB", "NOUN", "PUNCT"],
        [2, 0, 2, 2], ["nsubj", "root", "obj", "punct"],
        ("fke:ralt", "fkgo:rival", "fke:borona"))
    add(noise, ["Veylan", "resigned", "."],
        ["PROPN", "VERB", "PUNCT"],
        [2, 0, 2], ["nsubj", "root", "punct"],
        ("fke:veylan", "fkgo:rival", "fke:cestia"))

    assert len(records) == 50, f"expected 50 sentences, built {len(records)}"
    return records


def build_pattern_bank(records):
    """Annotated bank entries for the three pattern families, with supports
    counted over the actual corpus."""
    sentences = [sentence_from_json(r, r["id"]) for r in records]
    keys = [pattern_key(s) for s in sentences]

    def entry(representative_id, subject, predicate, obj):
        rep = next(s for s in sentences if s.id == representative_id)
        key = pattern_key(rep)
        return DepPattern(
            key=key,
            subject=subject,
            object=obj,
            predicate=predicate,
            support=sum(1 for k in keys if k == key),
        )

    return [
        entry("syn-001", (1,), (3,), (4,)),          # "<P> firmly leads <C>"
        entry("syn-014", (1,), (2, 3), (4,)),        # "<P> plays for <T>"
        entry("syn-031", (6,), (2, 3), (4,)),        # "The capital of <C> is <CITY>"
    ]


def main():
    OUT.mkdir(parents=True, exist_ok=True)

    records = build_records()
    with open(OUT / "corpus.jsonl", "w", encoding="utf-8", newline="\n") as fh:
        for r in records:
            fh.write(dumps(r))
            fh.write("\n")

    kb = KbSnapshot(
        entities=tuple(
            KbEntity(iri, tuple(forms), cls) for iri, forms, cls in ENTITIES + FIELD_ENTITIES
        ),
        predicates=frozenset(PREDICATES),
        facts=frozenset(FACTS),
        mapping_table=dict(MAPPING),
    )
    save_kb_snapshot(OUT / "kb", kb)

    (OUT / "rules.tokpat").write_text(TOKEN_RULES, encoding="utf-8")
    save_pattern_bank(OUT / "patterns.jsonl", build_pattern_bank(records))
    with open(OUT / "templates.json", "w", encoding="utf-8", newline="\n") as fh:
        json.dump(["V", "V P", "V W* P"], fh)
        fh.write("\n")
    (OUT / "stopwords.txt").write_text("\n".join(STOPWORDS) + "\n", encoding="utf-8")

    config = {
        "corpus": "corpus.jsonl",
        "kb": "kb",
        "out_dir": "out",
        "extractors": ["predpatt", "deppat", "psie", "repersian", "tokpat", "distant"],
        "threshold": 0.9,
        "rules": "rules.tokpat",
        "patterns": "patterns.jsonl",
        "templates": "templates.json",
        "stopwords": "stopwords.txt",
        "sweep": [round(0.1 * i, 1) for i in range(11)],
    }
    with open(OUT / "pipeline.json", "w", encoding="utf-8", newline="\n") as fh:
        json.dump(config, fh, indent=1, sort_keys=True)
        fh.write("\n")

    print(f"wrote {len(records)} sentences and resources to {OUT}")


if __name__ == "__main__":
    main()
