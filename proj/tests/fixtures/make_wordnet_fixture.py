#!/usr/bin/env python3
"""Writes the miniature WordNet lexicon used by the unit tests.

The output follows the WordNet database layout (data.*, index.*, *.exc) so
that synset offsets are true byte offsets into each data file. Re-run after
editing the tables below:

    python3 tests/fixtures/make_wordnet_fixture.py tests/fixtures/wordnet
"""

import os
import sys

LICENSE = [
    "  1 Miniature lexicon for unit tests. Record layout follows the",
    "  2 WordNet database format; the content is hand written and only",
    "  3 loosely modelled on real WordNet entries.",
]

# name, lemmas, hypernyms, gloss, extra pointers [(symbol, target name, pos)]
# Instance hypernyms are marked with a leading '!' on the target name.
NOUNS = [
    ("entity", ["entity"], [], "that which is perceived or known to exist", []),
    ("physical_entity", ["physical_entity"], ["entity"],
     "an entity that has physical existence", []),
    ("abstraction", ["abstraction"], ["entity"],
     "a general concept formed by extracting common features", []),
    ("fruit", ["fruit"], [], "the ripened reproductive body of a seed plant", []),
    ("apple_fruit", ["apple"], ["fruit"],
     "fruit with red or yellow or green skin and crisp flesh", [("+", "pick", "v")]),
    ("gala", ["gala"], ["apple_fruit"], "a sweet crisp apple variety", []),
    ("apple_tree", ["apple_tree", "apple", "Malus_pumila"], ["tree"],
     "native eurasian tree widely cultivated for its firm rounded fruit", []),
    ("apple_red", ["apple"], [], "a red fruit", []),
    ("tree", ["tree"], ["plant"], "a tall perennial woody plant having a main trunk",
     [("%p", "fruit", "n")]),
    ("plant", ["plant", "flora"], ["organism"],
     "a living organism lacking the power of locomotion", []),
    ("organism", ["organism", "being"], ["physical_entity"],
     "a living thing that has the ability to act or function independently", []),
    ("person", ["person", "individual"], ["organism"], "a human being", []),
    ("johnny_appleseed", ["Johnny_Appleseed", "Chapman"], ["!person"],
     "American pioneer who planted apple trees", []),
    ("mouse", ["mouse"], ["organism"], "any of numerous small rodents", []),
    ("malus_fruit", ["malus"], [], "fruit", []),
    ("malus_tree", ["malus"], [], "tree", []),
    ("furniture", ["furniture"], ["physical_entity"],
     "furnishings that make a room ready for occupancy", []),
    ("couch", ["couch", "sofa"], ["furniture"],
     "an upholstered seat for more than one person", []),
    ("bed", ["bed"], ["furniture"],
     "a piece of furniture that provides a place to sleep", []),
    ("futon", ["futon"], ["couch", "bed"], "a pad used as a bed or couch", []),
    ("daybed", ["daybed", "divan_bed"], ["couch", "bed"],
     "an armless couch that can be used as a bed", []),
    ("phenomenon", ["phenomenon"], ["physical_entity"],
     "any state or process known through the senses", []),
    ("weather", ["weather", "weather_condition"], ["phenomenon"],
     "the atmospheric conditions that comprise the state of the atmosphere", []),
    ("precipitation", ["precipitation", "downfall"], ["weather"],
     "the falling to earth of any form of water", []),
    ("rain_1", ["rain", "rainfall"], ["precipitation"],
     "water falling in drops from vapor condensed in the atmosphere", []),
    ("water", ["water", "H2O"], ["physical_entity"],
     "a clear colorless odorless liquid", []),
    ("rain_2", ["rain", "rainwater"], ["water"],
     "drops of fresh water that fall as precipitation from clouds", []),
    ("series", ["series"], ["abstraction"],
     "similar things placed in order or happening one after another", []),
    ("rain_3", ["rain", "pelting"], ["series"],
     "anything happening rapidly or in quick successive; \"a rain of bullets\"", []),
    ("projectile", ["projectile", "missile"], ["physical_entity"],
     "a weapon that is forcibly thrown or projected at a target", []),
    ("bullet", ["bullet", "slug"], ["projectile"],
     "a projectile that is fired from a gun", []),
    ("event", ["event"], ["abstraction"],
     "something that happens at a given place and time", []),
    ("act", ["act", "deed"], ["event"], "something that people do or cause to happen", []),
    ("change", ["change"], ["act"], "the action of changing something", []),
    ("happening", ["happening", "occurrence"], ["event"], "an event that happens", []),
    ("group", ["group", "grouping"], ["abstraction"],
     "any number of entities considered as a unit", []),
    ("movement_1", ["motion", "movement", "move"], ["change"],
     "a change of position that does not entail a change of location", []),
    ("movement_2", ["movement"], ["change"],
     "the act of changing the location of something", []),
    ("movement_3", ["movement", "motion"], ["happening"],
     "a natural event that involves a change in the position or location of something", []),
    ("movement_4", ["movement", "social_movement"], ["group"],
     "a group of people with a common ideology", []),
]

VERBS = [
    ("ripen", ["ripen", "mature"], [], "cause to ripen or develop fully", []),
    ("remove", ["remove", "take_away"], [], "remove something concrete", []),
    ("pick", ["pick", "pluck"], ["remove"], "remove a fruit from a tree", []),
    ("gather", ["gather", "garner"], [], "assemble or get together", []),
    ("harvest", ["harvest", "reap"], ["gather"], "gather as a harvest", []),
    ("travel", ["travel", "go", "move"], [], "change location; move or travel", []),
    ("run", ["run"], ["travel"], "move fast by using one's feet", []),
]

ADJS = [
    ("red", ["red", "reddish"], [], "having any of numerous bright or strong colors", [], "a"),
    ("crimson", ["crimson", "deep_red"], [], "of a brilliant red color", [("&", "red", "a")], "s"),
    ("galore", ["galore(ip)"], [], "in great numbers", [], "a"),
]

ADVS = [
    ("gently", ["gently"], [], "in a gentle manner", []),
]

EXCEPTIONS = {
    "noun": ["mice mouse"],
    "verb": ["ran run"],
    "adj": ["redder red"],
    "adv": ["hardest hard"],
}

POS_FILE = {"n": "noun", "v": "verb", "a": "adj", "r": "adv"}
LEX_FILENUM = {"n": 3, "v": 29, "a": 0, "r": 2}


def strip_marker(lemma):
    return lemma.split("(")[0]


def build(entries, pos, offsets_out, names_pos):
    """Returns ordered records; fills offsets_out once the layout is fixed."""
    records = []
    for entry in entries:
        if pos == "a":
            name, lemmas, hypers, gloss, extra, ss_type = entry
        else:
            name, lemmas, hypers, gloss, extra = entry
            ss_type = pos
        records.append(dict(name=name, lemmas=lemmas, hypers=hypers, gloss=gloss,
                            extra=extra, ss_type=ss_type))
    return records


def render(rec, pos, offsets, hyponyms):
    ptrs = []
    for h in rec["hypers"]:
        sym = "@i" if h.startswith("!") else "@"
        target = h.lstrip("!")
        ptrs.append((sym, offsets[(target, pos)], pos))
    for child, instance in hyponyms.get(rec["name"], []):
        ptrs.append(("~i" if instance else "~", offsets[(child, pos)], pos))
    for sym, target, tpos in rec["extra"]:
        ptrs.append((sym, offsets[(target, tpos)], tpos))
    words = " ".join(f"{w} 0" for w in rec["lemmas"])
    ptr_text = " ".join(f"{s} {o:08d} {p} 0000" for s, o, p in ptrs)
    parts = [f"{offsets[(rec['name'], pos)]:08d}", f"{LEX_FILENUM[pos]:02d}",
             rec["ss_type"], f"{len(rec['lemmas']):02x}", words, f"{len(ptrs):03d}"]
    if ptr_text:
        parts.append(ptr_text)
    if pos == "v":
        parts.append("01 + 02 00")
    return " ".join(parts) + " | " + rec["gloss"] + "  \n"


def layout(all_records):
    """Fixed point over offsets: record length depends on offset digits only
    through zero padding, so one pass with placeholder offsets suffices."""
    offsets = {}
    for pos, recs in all_records.items():
        for rec in recs:
            offsets[(rec["name"], pos)] = 0
    hyponyms = {}
    for pos, recs in all_records.items():
        hyponyms[pos] = {}
        for rec in recs:
            for h in rec["hypers"]:
                hyponyms[pos].setdefault(h.lstrip("!"), []).append(
                    (rec["name"], h.startswith("!")))
    for pos, recs in all_records.items():
        cursor = sum(len(line) + 1 for line in LICENSE)
        for rec in recs:
            offsets[(rec["name"], pos)] = cursor
            cursor += len(render(rec, pos, offsets, hyponyms[pos]))
    return offsets, hyponyms


def main(out_dir):
    os.makedirs(out_dir, exist_ok=True)
    all_records = {
        "n": build(NOUNS, "n", None, None),
        "v": build(VERBS, "v", None, None),
        "a": build(ADJS, "a", None, None),
        "r": build(ADVS, "r", None, None),
    }
    offsets, hyponyms = layout(all_records)
    total = 0
    manifest = []
    for pos, recs in all_records.items():
        with open(os.path.join(out_dir, "data." + POS_FILE[pos]), "w") as f:
            for line in LICENSE:
                f.write(line + "\n")
            for rec in recs:
                line = render(rec, pos, offsets, hyponyms[pos])
                assert f.tell() == offsets[(rec["name"], pos)]
                f.write(line)
        index = {}
        for rec in recs:
            for lemma in rec["lemmas"]:
                key = strip_marker(lemma).lower()
                index.setdefault(key, []).append(rec)
        with open(os.path.join(out_dir, "index." + POS_FILE[pos]), "w") as f:
            for line in LICENSE:
                f.write(line + "\n")
            for lemma in sorted(index):
                senses = index[lemma]
                symbols = []
                for rec in senses:
                    if rec["hypers"] and "@" not in symbols:
                        symbols.append("@")
                    if rec["name"] in hyponyms[pos] and "~" not in symbols:
                        symbols.append("~")
                offs = " ".join(f"{offsets[(r['name'], pos)]:08d}" for r in senses)
                ptrs = (" ".join(symbols) + " ") if symbols else ""
                f.write(f"{lemma} {pos} {len(senses)} {len(symbols)} {ptrs}"
                        f"{len(senses)} 0 {offs}  \n")
        with open(os.path.join(out_dir, POS_FILE[pos] + ".exc"), "w") as f:
            for line in EXCEPTIONS[POS_FILE[pos]]:
                f.write(line + "\n")
        manifest.append(f"{POS_FILE[pos]} {len(recs)}")
        total += len(recs)
    with open(os.path.join(out_dir, "MANIFEST"), "w") as f:
        f.write("\n".join(manifest) + f"\ntotal {total}\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else os.path.join(
        os.path.dirname(os.path.abspath(__file__)), "wordnet"))
