#!/usr/bin/env python3
"""Freeze reference stems for the Porter stemmer tests.

Words come from the single-word lemmas of a WordNet dict directory plus
suffixed variants that exercise every rule group. Stems are produced by
NLTK's PorterStemmer in ORIGINAL_ALGORITHM mode.

usage: make_porter_vocab.py <wordnet dict dir> <output file>
"""
import random
import re
import sys

from nltk.stem.porter import PorterStemmer

SUFFIXES = ["s", "es", "ed", "ing", "ly", "ness", "ful", "ation", "ational", "ization",
            "iveness", "fulness", "ousness", "alism", "ement", "ment", "ent", "ism",
            "ate", "iti", "ous", "ive", "ize", "ance", "ence", "er", "ic", "able", "ible",
            "ant", "al", "ion", "ou", "e", "y", "ies", "eed", "ated", "izing", "bli", "logi"]


def main(dict_dir, out_path):
    words = set()
    for pos in ("noun", "verb", "adj", "adv"):
        with open(f"{dict_dir}/index.{pos}", encoding="latin-1") as f:
            for line in f:
                if line.startswith("  "):
                    continue
                lemma = line.split(" ", 1)[0]
                if re.fullmatch(r"[a-z]{1,20}", lemma):
                    words.add(lemma)
    rng = random.Random(20080101)
    base = sorted(words)
    sample = set(rng.sample(base, 6000))
    for w in rng.sample(base, 2000):
        sample.add(w + rng.choice(SUFFIXES))
    sample.update(["caresses", "ponies", "ties", "caress", "cats", "feed", "agreed", "plastered",
                   "bled", "motoring", "sing", "conflated", "troubled", "sized", "hopping",
                   "tanned", "falling", "hissing", "fizzed", "failing", "filing", "happy", "sky",
                   "relational", "conditional", "rational", "valenci", "hesitanci", "digitizer",
                   "conformabli", "radicalli", "differentli", "vileli", "analogousli",
                   "vietnamization", "predication", "operator", "feudalism", "decisiveness",
                   "hopefulness", "callousness", "formaliti", "sensitiviti", "sensibiliti",
                   "triplicate", "formative", "formalize", "electriciti", "electrical",
                   "hopeful", "goodness", "revival", "allowance", "inference", "airliner",
                   "gyroscopic", "adjustable", "defensible", "irritant", "replacement",
                   "adjustment", "dependent", "adoption", "homologou", "communism",
                   "activate", "angulariti", "homologous", "effective", "bowdlerize",
                   "probate", "rate", "cease", "controll", "roll", "generalizations",
                   "oscillators", "a", "is", "as", "by", "rainfall", "apple", "apples",
                   "harvest", "harvesting", "movement", "movements", "rain", "bullets"])
    stemmer = PorterStemmer(mode=PorterStemmer.ORIGINAL_ALGORITHM)
    with open(out_path, "w", encoding="ascii") as out:
        for w in sorted(sample):
            out.write(f"{w}\t{stemmer.stem(w, to_lowercase=False)}\n")


if __name__ == "__main__":
    main(sys.argv[1], sys.argv[2])
