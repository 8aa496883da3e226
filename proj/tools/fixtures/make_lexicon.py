#!/usr/bin/env python3
"""Writes data/affect_lexicon.tsv, the hand-made affect-intensity slice used by
tests, the synthetic corpus and the CLI defaults. Same column layout as the
NRC Affect Intensity Lexicon (term, score, affect dimension)."""
import sys

ROWS = {
    "anger": {
        "furious": 0.92, "fury": 0.90, "rage": 0.91, "enraged": 0.89, "infuriated": 0.90, "livid": 0.88,
        "outraged": 0.86, "anger": 0.85, "hatred": 0.83, "angry": 0.82, "hate": 0.80, "hostile": 0.70,
        "mad": 0.69, "yelled": 0.66, "resentful": 0.62, "bitter": 0.60, "scream": 0.58, "annoyed": 0.45,
        "frustrated": 0.48, "irritated": 0.47, "grumpy": 0.40, "cranky": 0.38, "impatient": 0.35,
        "bothered": 0.30, "huffy": 0.33,
    },
    "fear": {
        "terror": 0.93, "terrified": 0.92, "petrified": 0.88, "horrified": 0.86, "panic": 0.85, "fear": 0.83,
        "frightened": 0.80, "dread": 0.79, "afraid": 0.76, "scared": 0.74, "alarmed": 0.62, "spooked": 0.57,
        "anxious": 0.48, "nervous": 0.47, "worried": 0.44, "uneasy": 0.41, "jittery": 0.39, "tense": 0.36,
        "wary": 0.33, "timid": 0.30, "worry": 0.45,
    },
    "joy": {
        "ecstatic": 0.90, "joy": 0.87, "elated": 0.86, "joyful": 0.85, "thrilled": 0.83, "delighted": 0.82,
        "love": 0.77, "happy": 0.74, "celebrate": 0.73, "excited": 0.71, "cheerful": 0.69, "wonderful": 0.66,
        "laughed": 0.64, "glad": 0.61, "grateful": 0.49, "pleased": 0.48, "smiled": 0.46, "satisfied": 0.44,
        "content": 0.40, "relaxed": 0.34, "amused": 0.42, "nice": 0.30,
    },
    "sadness": {
        "heartbroken": 0.91, "devastated": 0.90, "grief": 0.88, "sorrow": 0.85, "sadness": 0.84,
        "miserable": 0.83, "depressed": 0.82, "sad": 0.74, "cry": 0.70, "cried": 0.68, "lonely": 0.67,
        "gloomy": 0.63, "disappointed": 0.61, "hurt": 0.49, "regret": 0.48, "homesick": 0.46, "sorry": 0.45,
        "wistful": 0.38, "blue": 0.30, "tired": 0.31, "mopey": 0.36,
    },
}

# Cross-listed words: smaller secondary intensities, as in the real lexicon.
EXTRA = [
    ("hurt", 0.40, "anger"),
    ("upset", 0.42, "anger"),
    ("upset", 0.45, "sadness"),
    ("bitter", 0.35, "sadness"),
    ("scream", 0.41, "fear"),
    ("panic", 0.20, "anger"),
    # Non-basic affects the loader skips in lenient mode.
    ("eager", 0.62, "anticipation"),
    ("trusty", 0.55, "trust"),
]


def main(path):
    lines = ["term\tscore\tAffectDimension"]
    for emotion, words in ROWS.items():
        for word, score in sorted(words.items()):
            lines.append(f"{word}\t{score:.3f}\t{emotion}")
    for word, score, emotion in EXTRA:
        lines.append(f"{word}\t{score:.3f}\t{emotion}")
    with open(path, "w", encoding="utf-8") as f:
        f.write("\n".join(lines) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/affect_lexicon.tsv")
