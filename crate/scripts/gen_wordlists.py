#!/usr/bin/env python3
"""Regenerates data/dictionary.txt and data/lexicon.tsv.

Requires `pip install wordfreq lemminflect`. The output is checked in; this
script only documents how it was produced.
"""
import json
import re
from pathlib import Path

import lemminflect
import wordfreq

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "data"

PRONOUNS = """i me my mine myself you your yours yourself yourselves he him his himself
she her hers herself it its itself we us our ours ourselves they them their theirs
themselves someone somebody something anyone anybody anything everyone everybody
everything nobody nothing noone""".split()
# possessive determiners are not pronouns for the noun requirement
POSSESSIVE_DETERMINERS = {"my", "your", "his", "her", "its", "our", "their"}
AUXILIARIES = """am is are was were be been being do does did done have has had having
can could may might must shall should will would ought need dare""".split()
CLOSED_OTHER = """a an the this that these those some any each every either neither
no not nor and or but if then than because since while although though unless until
so as of to in on at by for from with without within into onto upon about above
below over under after before between among through during against across along
around behind beyond near off out up down per via toward towards
how what when where which who whom whose why whether whatever whenever wherever
yes yeah ok okay hi hello hey thanks thank please sorry
very too also just only even still already yet again never always often sometimes
here there now soon later ever perhaps maybe really quite rather almost
all both few many much more most other another such same own several
one two three four five six seven eight nine ten first second third
""".split()
INTERJECTIONS = {"yes", "yeah", "ok", "okay", "hi", "hello", "hey", "thanks", "thank", "please", "sorry", "no"}

WORD = re.compile(r"[a-z][a-z']*")


def open_class_tags(word):
    lemmas = lemminflect.getAllLemmas(word)
    tags = []
    if "NOUN" in lemmas or "PROPN" in lemmas:
        tags.append("noun")
    if "VERB" in lemmas or "AUX" in lemmas:
        tags.append("verb")
    return tags, bool(lemmas)


def lexicon_entries(size):
    entries = {}
    for w in PRONOUNS:
        entries[w] = ["other"] if w in POSSESSIVE_DETERMINERS else ["pronoun"]
    for w in AUXILIARIES:
        entries[w] = ["verb"]
    for w in CLOSED_OTHER:
        entries.setdefault(w, ["other"])
    for w in wordfreq.top_n_list("en", size):
        if not WORD.fullmatch(w) or w in entries or w in INTERJECTIONS:
            continue
        tags, known = open_class_tags(w)
        if tags:
            entries[w] = tags
        elif known:
            entries[w] = ["other"]
    # admissions vocabulary from the shipped data; unknown words there are
    # acronyms such as msc, cas or ielts
    for w in sorted(domain_words()):
        if w in entries or w in INTERJECTIONS:
            continue
        tags, known = open_class_tags(w)
        entries[w] = tags or (["other"] if known else ["noun"])
    return entries


def domain_words():
    words = set()
    for name in ("info.seed.jsonl", "links.jsonl"):
        for line in (DATA / name).read_text().splitlines():
            if not line.strip():
                continue
            rec = json.loads(line)
            text = " ".join(str(v) for k, v in rec.items() if k in ("question", "answer", "title", "body"))
            text += " " + " ".join(rec.get("keywords", []))
            words.update(t for t in re.split(r"[^a-z0-9']+", text.lower()) if t and WORD.fullmatch(t))
    return words


def dictionary_words(size, lexicon):
    words = set(lexicon)
    for w in wordfreq.top_n_list("en", size):
        if WORD.fullmatch(w) and open_class_tags(w)[1]:
            words.add(w)
    words |= domain_words()
    words |= {w for w in INTERJECTIONS}
    return sorted(words)


def main():
    lexicon = lexicon_entries(4000)
    with open(DATA / "lexicon.tsv", "w") as f:
        for w in sorted(lexicon):
            f.write(f"{w}\t{','.join(lexicon[w])}\n")
    with open(DATA / "dictionary.txt", "w") as f:
        for w in dictionary_words(30000, lexicon):
            f.write(w + "\n")


if __name__ == "__main__":
    main()
