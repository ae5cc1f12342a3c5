"""Load and tokenize a directory of plain-text news articles."""

import logging
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

log = logging.getLogger(__name__)


class CorpusLoadError(RuntimeError):
    """Raised when no article in the corpus directory could be read."""


def tokenize(raw_text: str) -> list[str]:
    """Split text into maximal runs of non-whitespace characters.

    Punctuation is kept attached to its token and case is preserved;
    downstream stages decide their own normalization.
    """
    return raw_text.split()


@dataclass
class Article:
    id: str
    raw_text: str
    tokens: list[str] = field(default_factory=list)

    def __post_init__(self):
        if not self.tokens:
            self.tokens = tokenize(self.raw_text)

    @property
    def length(self) -> int:
        return len(self.tokens)


@dataclass
class Corpus:
    articles: list[Article]

    @property
    def max_doc_length(self) -> int:
        if not self.articles:
            return 0
        return max(a.length for a in self.articles)

    @property
    def vocabulary(self) -> Counter:
        """Token -> raw frequency over the whole corpus, case preserved."""
        counts: Counter = Counter()
        for a in self.articles:
            counts.update(a.tokens)
        return counts

    def __len__(self) -> int:
        return len(self.articles)

    def __iter__(self):
        return iter(self.articles)

    def article(self, article_id: str) -> Article:
        for a in self.articles:
            if a.id == article_id:
                return a
        raise KeyError(article_id)


def load_corpus(path: str | Path, manifest: str | Path | None = None) -> Corpus:
    """Read every ``*.txt`` file under ``path`` into a Corpus.

    The article id is the file stem.  Files are read as UTF-8 with invalid
    bytes replaced.  Articles are ordered by id; a manifest file (one id per
    line) restricts the set and dictates the order instead.  Unreadable
    files are skipped with a logged error unless every file fails, which
    raises CorpusLoadError.
    """
    path = Path(path)
    files = {p.stem: p for p in path.glob("*.txt")}

    if manifest is not None:
        wanted = [
            line.strip()
            for line in Path(manifest).read_text(encoding="utf-8").splitlines()
            if line.strip()
        ]
        missing = [w for w in wanted if w not in files]
        if missing:
            raise CorpusLoadError(
                "manifest lists articles not present in %s: %s"
                % (path, ", ".join(missing))
            )
        ordered = [(w, files[w]) for w in wanted]
    else:
        ordered = sorted(files.items())

    if not ordered:
        log.warning("no articles found in %s", path)
        return Corpus(articles=[])

    articles = []
    errors = []
    for article_id, p in ordered:
        try:
            text = p.read_text(encoding="utf-8", errors="replace")
        except OSError as exc:
            errors.append((article_id, exc))
            log.error("could not read %s: %s", p, exc)
            continue
        articles.append(Article(id=article_id, raw_text=text))

    if errors and not articles:
        raise CorpusLoadError(
            "all %d articles failed to load from %s" % (len(errors), path)
        )
    return Corpus(articles=articles)
