"""Dictionary-based spelling correction for noisy OCR tokens.

Tokens already found in a lexicon pass through unchanged.  Everything else
is matched against the lexicons by Levenshtein distance, with ties broken
in favour of the person-name lexicon, then corpus frequency, then
lexicographic order, so a given corpus always corrects the same way.
"""

from collections import Counter, defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

from .corpus import Article, Corpus

GENERAL = "general"
NAMES = "names"


@dataclass(frozen=True)
class Lexicon:
    words: frozenset
    kind: str = GENERAL


def load_lexicon(path: str | Path, kind: str = GENERAL) -> Lexicon:
    """Read a lexicon file: one word per line, UTF-8, blank lines ignored."""
    words = frozenset(
        line.strip().lower()
        for line in Path(path).read_text(encoding="utf-8").splitlines()
        if line.strip()
    )
    return Lexicon(words=words, kind=kind)


@dataclass(frozen=True)
class CorrectionPolicy:
    max_edit_distance: int = 2
    prefer_person_lexicon: bool = True
    min_token_length: int = 3


def edit_distance(a: str, b: str) -> int:
    """Levenshtein distance with unit insert/delete/substitute costs."""
    if a == b:
        return 0
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


class SpellCorrector:
    """Corrects tokens against a set of lexicons under one policy."""

    def __init__(
        self,
        lexicons: Iterable[Lexicon],
        policy: CorrectionPolicy | None = None,
        frequencies: Mapping[str, int] | None = None,
    ):
        self.lexicons = list(lexicons)
        self.policy = policy or CorrectionPolicy()
        self.frequencies = frequencies or {}
        self._all_words = set()
        self._name_words = set()
        for lex in self.lexicons:
            self._all_words |= lex.words
            if lex.kind == NAMES:
                self._name_words |= lex.words
        # bucket by length so candidate scans skip hopeless lengths
        self._by_length: dict[int, list[str]] = defaultdict(list)
        for w in sorted(self._all_words):
            self._by_length[len(w)].append(w)

    def in_lexicon(self, token: str) -> bool:
        return token.lower() in self._all_words

    def correct_token(self, token: str) -> str:
        pol = self.policy
        if len(token) < pol.min_token_length:
            return token
        if any(ch.isdigit() for ch in token):
            return token
        low = token.lower()
        if low in self._all_words:
            return token

        best = None
        best_key = None
        for length in range(
            max(1, len(low) - pol.max_edit_distance),
            len(low) + pol.max_edit_distance + 1,
        ):
            for word in self._by_length.get(length, ()):
                d = edit_distance(low, word)
                if d > pol.max_edit_distance:
                    continue
                name_rank = 0 if (pol.prefer_person_lexicon and word in self._name_words) else 1
                key = (d, name_rank, -self.frequencies.get(word, 0), word)
                if best_key is None or key < best_key:
                    best, best_key = word, key
        if best is None:
            return token
        if token[0].isupper():
            return best[0].upper() + best[1:]
        return best

    def join_hyphenated(self, tokens: list[str]) -> list[str]:
        """Fuse line-break hyphenations when the fused word is known.

        A token ending in "-" joins its successor only if the fused form is
        in some lexicon; a trailing hyphen with no successor is stripped.
        """
        out = []
        i = 0
        while i < len(tokens):
            tok = tokens[i]
            if tok.endswith("-"):
                if i + 1 < len(tokens):
                    fused = tok[:-1] + tokens[i + 1]
                    if fused.lower() in self._all_words:
                        out.append(fused)
                        i += 2
                        continue
                else:
                    stripped = tok[:-1]
                    if stripped:
                        out.append(stripped)
                    i += 1
                    continue
            out.append(tok)
            i += 1
        return out

    def correct_tokens(self, tokens: list[str]) -> list[str]:
        return [self.correct_token(t) for t in self.join_hyphenated(tokens)]


def correct_token(
    token: str,
    lexicons: Iterable[Lexicon],
    policy: CorrectionPolicy | None = None,
    frequencies: Mapping[str, int] | None = None,
) -> str:
    return SpellCorrector(lexicons, policy, frequencies).correct_token(token)


def join_hyphenated(tokens: list[str], lexicons: Iterable[Lexicon]) -> list[str]:
    return SpellCorrector(lexicons).join_hyphenated(tokens)


def corpus_frequencies(corpus: Corpus) -> Counter:
    """Lowercased token frequencies, used to break correction ties."""
    counts: Counter = Counter()
    for article in corpus:
        counts.update(t.lower() for t in article.tokens)
    return counts


def correct_corpus(
    corpus: Corpus,
    lexicons: Iterable[Lexicon],
    policy: CorrectionPolicy | None = None,
) -> Corpus:
    """Return a new corpus with every article joined and corrected."""
    corrector = SpellCorrector(lexicons, policy, corpus_frequencies(corpus))
    articles = []
    for article in corpus:
        tokens = corrector.correct_tokens(article.tokens)
        articles.append(Article(id=article.id, raw_text=" ".join(tokens), tokens=tokens))
    return Corpus(articles=articles)
