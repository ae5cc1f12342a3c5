"""Person named-entity recognition over tokenized articles.

Taggers are pluggable: the built-in heuristic tagger needs no training
data, and ExternalTagger replays spans produced by any third-party tagger
from a TSV file.  Downstream code only sees PersonMention spans.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Protocol

from .corpus import Article, Corpus

# Honorifics both anchor person-hood and resolve pronoun gender later on.
HONORIFICS = {
    "mr", "mrs", "miss", "dr", "capt", "sir", "dame",
    "gen", "col", "rev", "judge",
}

# Capitalized function words end a capitalized run: they are sentence-start
# or OCR artifacts far more often than name parts.  Single-letter initials
# other than A and I survive because they are not on this list.
RUN_BREAKERS = {
    "the", "a", "an", "and", "of", "in", "on", "at", "by", "for", "to",
    "is", "are", "was", "were", "be", "been", "he", "she", "it", "they",
    "we", "you", "i", "his", "her", "their", "our", "my", "its", "this",
    "that", "but", "or", "as", "if", "so", "no", "not", "with", "from",
}

NOT_INFLUENTIAL = "Not Influential"
POPULAR = "Popular"
ELITE = "Elite"


@dataclass(frozen=True)
class PersonMention:
    article_id: str
    start: int
    end: int  # token span, end exclusive
    surface: str

    @property
    def tokens(self) -> tuple:
        return tuple(self.surface.split())

    @property
    def token_set(self) -> frozenset:
        return frozenset(t.lower() for t in self.surface.split())


class Tagger(Protocol):
    def tag(self, article: Article) -> list[PersonMention]: ...


def _strip_period(token: str) -> str:
    return token[:-1] if token.endswith(".") else token


def is_honorific(token: str) -> bool:
    return _strip_period(token).lower() in HONORIFICS


def _capitalized(token: str) -> bool:
    return bool(token) and token[0].isupper()


class HeuristicTagger:
    """Capitalization-run tagger gated by a person-name lexicon.

    A mention is a maximal run of two or more capitalized tokens where at
    least one token is a known person name or the run starts with an
    honorific.  A leading honorific is dropped from the surface when at
    least two tokens remain, so "Mr Eugene Kelly" yields "Eugene Kelly"
    while "Capt Creeten" is kept whole.
    """

    def __init__(self, name_words: Iterable[str] = ()):
        self.name_words = {w.lower() for w in name_words}

    def tag(self, article: Article) -> list[PersonMention]:
        mentions = []
        tokens = article.tokens
        i = 0
        while i < len(tokens):
            if not _capitalized(tokens[i]) or tokens[i].lower() in RUN_BREAKERS:
                i += 1
                continue
            j = i
            while (
                j < len(tokens)
                and _capitalized(tokens[j])
                and tokens[j].lower() not in RUN_BREAKERS
            ):
                j += 1
            run = tokens[i:j]
            mention = self._mention_from_run(article.id, i, run)
            if mention is not None:
                mentions.append(mention)
            i = j
        return mentions

    def _mention_from_run(self, article_id, start, run):
        if len(run) < 2:
            return None
        has_honorific = is_honorific(run[0])
        has_name = any(t.lower() in self.name_words for t in run)
        if not (has_honorific or has_name):
            return None
        if has_honorific and len(run) > 2:
            return PersonMention(
                article_id=article_id,
                start=start + 1,
                end=start + len(run),
                surface=" ".join(run[1:]),
            )
        return PersonMention(
            article_id=article_id,
            start=start,
            end=start + len(run),
            surface=" ".join(run),
        )


def read_mention_file(path: str | Path) -> dict:
    """Parse external tagger output: article_id<TAB>start<TAB>end<TAB>surface."""
    by_article: dict[str, list[PersonMention]] = {}
    for lineno, line in enumerate(
        Path(path).read_text(encoding="utf-8").splitlines(), 1
    ):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 4:
            raise ValueError(
                "malformed mention line %d: expected 4 tab-separated fields, got %d"
                % (lineno, len(parts))
            )
        article_id, start, end, surface = parts
        try:
            start_i, end_i = int(start), int(end)
        except ValueError as exc:
            raise ValueError("malformed mention line %d: %s" % (lineno, exc)) from exc
        if end_i <= start_i:
            raise ValueError(
                "malformed mention line %d: empty span %d..%d" % (lineno, start_i, end_i)
            )
        by_article.setdefault(article_id, []).append(
            PersonMention(article_id=article_id, start=start_i, end=end_i, surface=surface)
        )
    return by_article


def write_mention_file(mentions: Iterable[PersonMention], path: str | Path) -> None:
    lines = [
        "%s\t%d\t%d\t%s" % (m.article_id, m.start, m.end, m.surface)
        for m in mentions
    ]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


class ExternalTagger:
    """Replays person spans from a mention TSV file."""

    def __init__(self, path: str | Path):
        self.by_article = read_mention_file(path)

    def tag(self, article: Article) -> list[PersonMention]:
        found = self.by_article.get(article.id, [])
        for m in found:
            if m.end > article.length:
                raise ValueError(
                    "mention %r spans beyond article %s (%d tokens)"
                    % (m.surface, article.id, article.length)
                )
        return found


@dataclass
class PersonEntity:
    canonical_name: str  # lowercased surface of the longest mention form
    occurrences: dict = field(default_factory=dict)  # article_id -> PNF

    @property
    def n_articles(self) -> int:
        return len(self.occurrences)

    @property
    def total_mentions(self) -> int:
        return sum(self.occurrences.values())


@dataclass(frozen=True)
class CategoryThresholds:
    lo: int = 4
    hi: int = 16


def categorize(n_articles: int, thresholds: CategoryThresholds | None = None) -> str:
    t = thresholds or CategoryThresholds()
    if n_articles < t.lo:
        return NOT_INFLUENTIAL
    if n_articles < t.hi:
        return POPULAR
    return ELITE


def _merge_targets(mentions: list[PersonMention]) -> list:
    """Pair each mention with its within-article canonical target.

    Targets are mentions of two or more tokens whose token set is not a
    strict subset of a longer mention's.  Every other mention folds into
    the superset target with the most tokens (ties: lexicographic canonical
    name), which makes the result independent of mention order.  Mentions
    with no target and fewer than two tokens are dropped (paired with None).
    """
    targets = []
    for m in mentions:
        if len(m.tokens) < 2:
            continue
        is_sub = any(
            len(o.tokens) > len(m.tokens) and m.token_set < o.token_set
            for o in mentions
        )
        if not is_sub:
            targets.append(m)

    pairs = []
    for m in mentions:
        supers = [t for t in targets if m.token_set <= t.token_set]
        if not supers:
            pairs.append((m, m if len(m.tokens) >= 2 else None))
            continue
        supers.sort(key=lambda t: (-len(t.tokens), t.surface.lower()))
        pairs.append((m, supers[0]))
    return pairs


def canonicalize(mentions: Iterable[PersonMention]) -> list[PersonEntity]:
    """Collapse raw mentions into cross-article person entities.

    Entity identity is the lowercased canonical surface; the per-article
    PNF counts every raw mention that folded into that surface.
    """
    by_article: dict[str, list[PersonMention]] = {}
    for m in mentions:
        by_article.setdefault(m.article_id, []).append(m)

    entities: dict[str, PersonEntity] = {}
    for article_id in sorted(by_article):
        for m, target in _merge_targets(by_article[article_id]):
            if target is None:
                continue
            name = target.surface.lower()
            ent = entities.setdefault(name, PersonEntity(canonical_name=name))
            ent.occurrences[article_id] = ent.occurrences.get(article_id, 0) + 1
    return [entities[name] for name in sorted(entities)]


def tag_corpus(corpus: Corpus, tagger: Tagger) -> list[PersonMention]:
    mentions = []
    for article in corpus:
        mentions.extend(tagger.tag(article))
    return mentions
