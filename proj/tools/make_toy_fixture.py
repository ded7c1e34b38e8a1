#!/usr/bin/env python3
"""Regenerates the bundled fixtures under data/.

    python3 tools/make_toy_fixture.py [--out data]

Writes the small food hypernym tree, a small organic-food corpus with synthetic
word vectors and a matching toy taxonomy, a run config, and the sentiment
lexicon files. Output is deterministic.
"""

import argparse
import json
import math
import random
from pathlib import Path

FOOD_TREE = {
    "entity": [],
    "physical_entity": ["entity"],
    "matter": ["physical_entity"],
    "substance": ["matter"],
    "food": ["substance"],
    "food_product": ["food"],
    "dairy_product": ["food_product"],
    "yoghurt": ["dairy_product"],
    "butter": ["dairy_product"],
    "baked_goods": ["food"],
    "bread": ["baked_goods"],
    "cake": ["baked_goods"],
    "abstraction": ["entity"],
    "psychological_feature": ["abstraction"],
    "event": ["psychological_feature"],
    "act": ["event"],
    "group_action": ["act"],
    "transaction": ["group_action"],
    "commerce": ["transaction"],
    "selling": ["commerce"],
    "wholesale": ["selling"],
    "retail": ["selling"],
}

# Extra synsets for the toy corpus, hung below the food tree.
TOY_EXTRA = {
    "cheese": ["dairy_product"],
    "milk": ["dairy_product"],
    "cream": ["dairy_product"],
    "cookie": ["baked_goods"],
    "produce": ["food"],
    "vegetable": ["produce"],
    "fruit": ["produce"],
    "apple": ["fruit"],
    "berry": ["fruit"],
    "tomato": ["vegetable"],
    "carrot": ["vegetable"],
    "lettuce": ["vegetable"],
    "chemical": ["substance"],
    "pesticide": ["chemical"],
    "fungicide": ["pesticide"],
    "insecticide": ["pesticide"],
    "herbicide": ["pesticide"],
    "glyphosate": ["herbicide"],
    "fertilizer": ["chemical"],
    "residue": ["chemical"],
    "object": ["physical_entity"],
    "location": ["object"],
    "region": ["location"],
    "tract": ["region"],
    "farm": ["tract"],
    "field": ["tract"],
    "orchard": ["tract"],
    "pasture": ["tract"],
    "garden": ["tract"],
    "purchase": ["commerce"],
    "sale": ["selling"],
    "discount": ["sale"],
    "attribute": ["abstraction"],
    "condition": ["attribute"],
    "health": ["condition"],
    "illness": ["condition"],
    "disease": ["illness"],
    "cancer": ["disease"],
    "allergy": ["illness"],
    "diabetes": ["disease"],
    "obesity": ["condition"],
}

TOPICS = {
    "dairy": ["yoghurt", "butter", "cheese", "milk", "cream", "bread", "cake", "cookie"],
    "produce": ["vegetable", "fruit", "apple", "berry", "tomato", "carrot", "lettuce", "salad"],
    "pesticides": ["pesticide", "fungicide", "insecticide", "herbicide", "glyphosate", "fertilizer",
                   "residue", "spray"],
    "farming": ["farm", "field", "orchard", "pasture", "garden", "farmer", "soil", "harvest"],
    "shopping": ["wholesale", "retail", "purchase", "sale", "discount", "price", "store", "market"],
    "health": ["health", "illness", "disease", "cancer", "allergy", "diabetes", "obesity", "doctor"],
}

FUNCTION_WORDS = ["the", "a", "i", "we", "it", "is", "are", "and", "of", "to", "in", "with", "for",
                  "this", "my", "our", "on", "from", "about", "there"]
VERBS = ["buy", "eat", "grow", "find", "like", "choose", "avoid", "trust", "compare", "check"]
MODIFIERS = ["organic", "local", "fresh", "conventional", "cheap", "natural", "seasonal"]

SENTIMENT_BY_TOPIC = {
    "dairy": ["delicious", "tasty", "good", "great", "fresh"],
    "produce": ["healthy", "good", "nice", "sweet", "wonderful"],
    "pesticides": ["toxic", "dangerous", "harmful", "bad", "awful"],
    "farming": ["sustainable", "good", "honest", "hard", "fair"],
    "shopping": ["expensive", "overpriced", "cheap", "fair", "ridiculous"],
    "health": ["worried", "afraid", "safe", "healthy", "sick"],
}

LEXICON = {
    # positive
    "good": 1.9, "great": 3.1, "excellent": 2.7, "amazing": 2.8, "awesome": 3.1, "wonderful": 2.7,
    "fantastic": 2.6, "love": 3.2, "loved": 2.9, "like": 2.0, "liked": 1.8, "enjoy": 2.2,
    "enjoyed": 2.3, "happy": 2.7, "glad": 2.0, "nice": 1.8, "delicious": 2.7, "tasty": 2.0,
    "fresh": 1.3, "healthy": 1.7, "safe": 1.9, "clean": 1.7, "pure": 1.6, "natural": 1.1,
    "best": 3.2, "better": 1.9, "perfect": 2.7, "beautiful": 2.9, "sweet": 2.0, "fine": 0.8,
    "fair": 1.3, "honest": 2.3, "trust": 2.3, "trusted": 2.1, "sustainable": 1.5, "benefit": 2.0,
    "benefits": 1.6, "recommend": 1.5, "worth": 0.9, "pleasant": 2.3, "fun": 2.3, "win": 2.8,
    "helpful": 1.8, "support": 1.7, "improve": 1.9, "improved": 2.1, "satisfied": 1.8,
    "thankful": 2.7, "thanks": 1.9, "grateful": 2.0, "smart": 1.7, "wise": 1.8, "success": 2.7,
    "successful": 2.8, "strong": 2.3, "favorite": 2.0, "yummy": 2.4, "impressive": 2.3,
    "positive": 2.6, "reliable": 1.9, "superb": 3.1, "brilliant": 2.8, "calm": 1.3, "cool": 1.3,
    "comfortable": 1.5, "convenient": 1.3, "affordable": 1.2, "quality": 1.4, "proud": 2.1,
    "hope": 1.9, "hopeful": 2.1, "relief": 2.1, "relieved": 1.9, "care": 2.2, "caring": 2.2,
    "friendly": 2.2, "generous": 2.3, "gorgeous": 3.0, "nutritious": 1.8, "wholesome": 1.9,
    "rich": 1.6, "lucky": 2.0, "free": 2.3, "ethical": 1.5, "kind": 2.4, "interesting": 1.7,
    "exciting": 2.2, "excited": 1.4, "super": 2.9, "ok": 0.9, "okay": 0.9, "yes": 1.7, "agree": 1.5,
    "valuable": 2.1, "effective": 2.1, "delightful": 2.9, "joy": 2.8, "peaceful": 2.2,
    "fantastically": 2.6, "well": 1.1, "worthy": 1.9, "appreciate": 1.7, "wow": 2.8,
    # negative
    "bad": -2.5, "terrible": -2.1, "awful": -2.0, "horrible": -2.5, "worst": -3.1, "worse": -2.1,
    "hate": -2.7, "hated": -3.2, "dislike": -1.6, "poor": -2.1, "sad": -2.1, "angry": -2.3,
    "toxic": -2.4, "poison": -2.5, "poisonous": -2.7, "dangerous": -2.1, "harmful": -2.2,
    "harm": -2.5, "sick": -2.3, "ill": -1.8, "disease": -1.8, "cancer": -3.4, "illness": -1.8,
    "pain": -2.3, "painful": -2.4, "afraid": -2.2, "fear": -2.2, "scared": -1.9, "worried": -1.2,
    "worry": -1.9, "risk": -1.1, "risky": -1.4, "problem": -1.7, "problems": -1.7, "fail": -2.5,
    "failed": -2.3, "failure": -2.3, "expensive": -0.9, "overpriced": -1.7, "ridiculous": -1.5,
    "scam": -2.9, "fraud": -2.8, "fake": -2.1, "lie": -1.6, "lies": -1.8, "cheat": -2.0,
    "greedy": -1.3, "wrong": -2.1, "waste": -1.8, "wasted": -2.2, "dirty": -1.9, "disgusting": -2.4,
    "nasty": -2.6, "gross": -2.1, "rotten": -2.3, "stale": -1.2, "bland": -0.9, "boring": -1.3,
    "annoying": -1.7, "annoyed": -1.6, "disappointed": -1.9, "disappointing": -2.2, "upset": -1.6,
    "stupid": -2.4, "useless": -1.8, "hard": -0.4, "difficult": -1.5, "unfair": -2.1,
    "unhealthy": -2.4, "unsafe": -2.4, "contaminated": -1.8, "polluted": -1.9, "pollution": -1.9,
    "damage": -2.2, "damaged": -1.9, "destroy": -2.5, "destroyed": -2.9, "kill": -3.7,
    "killed": -3.5, "death": -2.9, "die": -2.9, "dead": -3.3, "crisis": -3.1, "threat": -2.4,
    "suffer": -2.5, "suffering": -2.1, "weak": -1.9, "negative": -2.7, "no": -1.2, "doubt": -1.5,
    "suspicious": -1.5, "concerned": -0.4, "concern": -1.0, "struggle": -1.5, "ugly": -2.3,
    "cruel": -2.8, "cruelty": -2.9, "abuse": -3.2, "sucks": -1.5, "lousy": -2.5, "mess": -1.5,
}

BOOSTERS = {
    "very": 0.293, "really": 0.293, "extremely": 0.293, "absolutely": 0.293, "incredibly": 0.293,
    "so": 0.293, "totally": 0.293, "completely": 0.293, "highly": 0.293, "truly": 0.293,
    "especially": 0.293, "quite": 0.293, "barely": -0.293, "hardly": -0.293, "slightly": -0.293,
    "somewhat": -0.293, "marginally": -0.293, "kinda": -0.293,
}

NEGATIONS = ["not", "no", "never", "none", "nobody", "nothing", "neither", "nor", "nowhere",
             "without", "cannot", "isnt", "dont", "doesnt", "didnt", "wont", "cant", "aint"]


def write_taxonomy(path, parents):
    doc = {name: {"hypernyms": hyper} for name, hyper in parents.items()}
    path.write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n")


def unit(v):
    n = math.sqrt(sum(x * x for x in v))
    return [x / n for x in v]


def make_sentence(rng, topic):
    words = rng.sample(TOPICS[topic], 3)
    pieces = [rng.choice(["I", "We", "My family", "Our neighbours"]), rng.choice(VERBS),
              rng.choice(MODIFIERS), words[0], "and", words[1], "with", rng.choice(FUNCTION_WORDS),
              words[2]]
    roll = rng.random()
    if roll < 0.45:
        booster = rng.choice(["", "very ", "really ", "", "so "])
        neg = "not " if rng.random() < 0.15 else ""
        pieces += ["because", "it", "is", neg + booster + rng.choice(SENTIMENT_BY_TOPIC[topic])]
    text = " ".join(pieces)
    end = "!" if rng.random() < 0.1 else "."
    return text[0].upper() + text[1:] + end


def make_corpus(rng, documents):
    names = list(TOPICS)
    lines = []
    sentences = 0
    for _ in range(documents):
        main = rng.choice(names)
        count = rng.randint(1, 4)
        parts = []
        for _ in range(count):
            topic = main if rng.random() < 0.7 else rng.choice(names)
            parts.append(make_sentence(rng, topic))
        sentences += count
        lines.append(" ".join(parts))
    return lines, sentences


def make_vectors(rng, dim):
    centers = {}
    for topic in TOPICS:
        centers[topic] = unit([rng.gauss(0, 1) for _ in range(dim)])
    vocab = {}
    for topic, words in TOPICS.items():
        for w in words:
            vocab[w] = [c * 2.0 + rng.gauss(0, 0.25) for c in centers[topic]]
    shared = set(FUNCTION_WORDS) | set(VERBS) | set(MODIFIERS) | {
        "my", "family", "our", "neighbours", "because", "not", "very", "really", "so"}
    for words in SENTIMENT_BY_TOPIC.values():
        shared |= set(words)
    for w in sorted(shared):
        if w not in vocab:
            vocab[w] = [rng.gauss(0, 0.35) for _ in range(dim)]
    return vocab


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "data"))
    ap.add_argument("--seed", type=int, default=20211)
    ap.add_argument("--documents", type=int, default=320)
    ap.add_argument("--dim", type=int, default=24)
    args = ap.parse_args()

    out = Path(args.out)
    (out / "toy").mkdir(parents=True, exist_ok=True)
    (out / "lexicon").mkdir(parents=True, exist_ok=True)
    rng = random.Random(args.seed)

    write_taxonomy(out / "food_taxonomy.json", FOOD_TREE)
    write_taxonomy(out / "toy" / "taxonomy.json", {**FOOD_TREE, **TOY_EXTRA})

    lines, sentences = make_corpus(rng, args.documents)
    assert sentences <= 1000, sentences
    (out / "toy" / "corpus.txt").write_text("\n".join(lines) + "\n")

    vectors = make_vectors(rng, args.dim)
    with open(out / "toy" / "vectors.txt", "w") as f:
        f.write(f"{len(vectors)} {args.dim}\n")
        for w in sorted(vectors):
            f.write(w + " " + " ".join(f"{x:.6f}" for x in vectors[w]) + "\n")

    config = {
        "corpus": ["corpus.txt"],
        "corpus_format": "lines",
        "vocab_size": 2000,
        "min_count": 2,
        "embeddings": "vectors.txt",
        "topics": 6,
        "epochs": 10,
        "batch_size": 32,
        "lr": 0.01,
        "negatives": 10,
        "seed": 7,
        "top_words": 10,
        "top_sentences": 5,
        "taxonomy": "taxonomy.json",
        "lexicon": "../lexicon/lexicon.tsv",
        "boosters": "../lexicon/boosters.txt",
        "negations": "../lexicon/negations.txt",
        "output": "out/bundle.json",
        "sweep_topics": [3, 6, 9],
        "sweep_vocab_sizes": [20, 2000],
        "sweep_seeds": [1, 2],
        "sweep_report": "out/anh_report.json",
    }
    (out / "toy" / "config.json").write_text(json.dumps(config, indent=2) + "\n")

    assert len(LEXICON) >= 200, len(LEXICON)
    with open(out / "lexicon" / "lexicon.tsv", "w") as f:
        f.write("# token<TAB>valence, VADER-style scale [-4, 4]\n")
        for w in sorted(LEXICON):
            f.write(f"{w}\t{LEXICON[w]}\n")
    with open(out / "lexicon" / "boosters.txt", "w") as f:
        for w in sorted(BOOSTERS):
            f.write(f"{w}\t{BOOSTERS[w]}\n")
    (out / "lexicon" / "negations.txt").write_text("\n".join(sorted(NEGATIONS)) + "\n")
    print(f"{len(lines)} documents, {sentences} sentences, {len(vectors)} vectors, "
          f"{len(LEXICON)} lexicon entries")


if __name__ == "__main__":
    main()
