#!/usr/bin/env python3
"""Writes data/emotion_vectors.txt: a ~200-word GloVe-format embedding slice.

The vectors are synthetic. Dimensions 0-4 carry anger, fear, joy, sadness and
neutral directions; the remaining dimensions are seeded noise. Emotion words
point along their emotion axis in proportion to lexicon intensity, so
averaged-phrase cosines behave like the real embeddings on this vocabulary."""
import sys
import numpy as np

sys.path.insert(0, __file__.rsplit("/", 1)[0])
from make_lexicon import ROWS, EXTRA  # noqa: E402

DIM = 16
AXES = {"anger": 0, "fear": 1, "joy": 2, "sadness": 3, "neutral": 4}
OPPOSITE = {"joy": ["sadness", "anger", "fear"], "sadness": ["joy"], "anger": ["joy"], "fear": ["joy"]}

NEUTRAL_WORDS = """neutral calm okay fine normal ordinary indifferent steady
went walked store park school office home house car dog cat trip party game test job gift cake storm visit
table chair window door kitchen garden street city town morning evening afternoon night day week
weather cloudy warm cold windy sunny rain snow lunch dinner breakfast coffee tea book phone letter
burger place friends ordered noticed waiter raw went bought called waited talked visited cooked
cleaned drove read watched opened closed found brought asked answered said walked sat stood
help to the a he she they it was is really""".split()


def main(path):
    rng = np.random.default_rng(20201)
    vecs = {}

    def noise(scale):
        v = np.zeros(DIM)
        v[5:] = rng.normal(0.0, scale, DIM - 5)
        v[:5] = rng.normal(0.0, scale * 0.3, 5)
        return v

    for name, axis in AXES.items():
        v = noise(0.2)
        v[axis] += 3.0
        vecs[name] = v
    for emotion, words in ROWS.items():
        for word, score in words.items():
            v = vecs.get(word)
            if v is None:
                v = noise(0.45)
            v[AXES[emotion]] += 3.0 * score
            for opp in OPPOSITE.get(emotion, []):
                v[AXES[opp]] -= 0.6 * score
            vecs[word] = v
    for word, score, emotion in EXTRA:
        if emotion in AXES and word in vecs:
            vecs[word][AXES[emotion]] += 3.0 * score
    for word in NEUTRAL_WORDS:
        if word in vecs:
            continue
        v = noise(0.6)
        if word in ("neutral", "calm", "okay", "fine", "normal", "ordinary", "indifferent", "steady"):
            v[4] += 2.5
        else:
            v[4] += 0.4
        vecs[word] = v
    with open(path, "w", encoding="utf-8") as f:
        for word in sorted(vecs):
            f.write(word + " " + " ".join(f"{x:.6f}" for x in vecs[word]) + "\n")
    print(len(vecs), "vectors")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/emotion_vectors.txt")
