"""Write the small themed reference corpus bundled for the mini fixture.

Each document draws most of its words from one theme (word frequency falls
off with list position) plus a few function words and off-theme words.

    python tools/make_reference_corpus.py src/timeline_coref/data/mini/reference.txt
"""

import sys

import numpy as np

THEMES = {
    "technology": "phone users device screen software app battery tablet camera update smartphone "
    "apps display chip feature version design store customers iphone android gadget laptop browser",
    "finance": "profit revenue shares investors earnings quarter stock market analysts dividend growth "
    "percent billion forecast price trading bank fund results income loss investment index economy",
    "law": "court lawsuit patent judge jury ruling appeal damages trial infringement lawyers case "
    "verdict settlement claims evidence attorney rights complaint injunction decision hearing statute",
    "politics": "government minister election parliament party vote president policy opposition campaign "
    "leader reform cabinet coalition voters senate bill budget official congress candidate debate",
    "sports": "team match season league goal coach players game cup championship win score club stadium "
    "fans tournament final victory player referee points title squad injury",
    "weather": "storm rain flood earthquake damage residents wind hurricane weather snow temperatures "
    "evacuation rescue victims emergency coast fire warning disaster roads water relief aid",
    "health": "patients hospital disease virus doctors health treatment vaccine drug outbreak cases "
    "infection study medical cancer symptoms care clinic nurses deaths medicine risk",
    "space": "space mission scientists planet nasa rocket satellite orbit telescope earth mars astronauts "
    "moon data discovery universe stars galaxy energy experiment spacecraft",
    "culture": "film music album festival actor movie band award director show audience song artist "
    "concert tour book theatre premiere singer stage series television novel",
    "transport": "airline flight airport passengers train plane route railway pilots crash travel bus "
    "traffic aircraft service tickets delays cars fleet ship port transport",
}
FILLER = "the of and a to in on for with was is by that it from at as".split()


def generate(n_docs=400, length=40, seed=2015):
    rng = np.random.default_rng(seed)
    names = sorted(THEMES)
    lists = {k: THEMES[k].split() for k in names}
    docs = []
    for d in range(n_docs):
        theme = names[d % len(names)]
        words = lists[theme]
        weights = 1.0 / np.arange(1, len(words) + 1) ** 0.7
        weights /= weights.sum()
        doc = []
        for _ in range(length):
            r = rng.random()
            if r < 0.2:
                doc.append(FILLER[rng.integers(len(FILLER))])
            elif r < 0.25:
                other = lists[names[rng.integers(len(names))]]
                doc.append(other[rng.integers(len(other))])
            else:
                doc.append(words[rng.choice(len(words), p=weights)])
        docs.append(" ".join(doc))
    return docs


if __name__ == "__main__":
    out = sys.argv[1] if len(sys.argv) > 1 else "reference.txt"
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        for line in generate():
            fh.write(line + "\n")
