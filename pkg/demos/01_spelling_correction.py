"""Repair OCR-garbled tokens against a pair of lexicons.

A general lexicon covers ordinary vocabulary; a name lexicon covers person
names and wins ties at equal edit distance.  Tokens already in a lexicon,
short tokens, and digits pass through untouched.

Run: python3 demos/01_spelling_correction.py
"""

from peoplerank.spellcorrect import (
    GENERAL,
    NAMES,
    Lexicon,
    SpellCorrector,
    edit_distance,
)

GENERAL_WORDS = """
banking house dying home west street became forced
bead bed the and was his of at on to lake take head
""".split()

NAME_WORDS = "eugene kelly martin oakes creeten".split()

# the kind of damage worn metal type produces: substituted strokes,
# dropped letters, split words
GARBLED = "Mr Eugene Kelli bead of the bankmg hou- se of Eugene Kelly ls dying".split()


def main() -> None:
    corrector = SpellCorrector(
        lexicons=[
            Lexicon(words=frozenset(GENERAL_WORDS), kind=GENERAL),
            Lexicon(words=frozenset(NAME_WORDS), kind=NAMES),
        ]
    )

    joined = corrector.join_hyphenated(GARBLED)
    print("hyphen repair: %r -> %r" % (" ".join(GARBLED), " ".join(joined)))
    print()

    print("%-10s %-10s %s" % ("token", "corrected", "distance"))
    for token in joined:
        fixed = corrector.correct_token(token)
        d = edit_distance(token.lower(), fixed.lower())
        mark = "" if token == fixed else "  <- changed"
        print("%-10s %-10s %d%s" % (token, fixed, d, mark))

    # "bead" stays: it is a real word here, and correction never second-
    # guesses tokens the lexicon already knows
    assert corrector.correct_token("bead") == "bead"
    # "Kelli" lands on the name lexicon, cap restored
    assert corrector.correct_token("Kelli") == "Kelly"


if __name__ == "__main__":
    main()
