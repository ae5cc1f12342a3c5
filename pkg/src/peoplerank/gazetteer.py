"""The people gazetteer: every person mapped to (article, topic) pairs."""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

from .pner import CategoryThresholds, PersonEntity, categorize

FORMAT_VERSION = 1


@dataclass
class GazetteerEntry:
    person: str
    docs: list  # (article_id, topic_id), sorted by article id
    category: str

    @property
    def n_articles(self) -> int:
        return len(self.docs)

    @property
    def topics(self) -> set:
        return {t for _, t in self.docs}


@dataclass
class Gazetteer:
    K: int
    thresholds: CategoryThresholds = field(default_factory=CategoryThresholds)
    entries: dict = field(default_factory=dict)  # person -> GazetteerEntry

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries.values())

    def lookup(self, person: str) -> GazetteerEntry | None:
        return self.entries.get(person.lower())


def build_gazetteer(
    entities: Iterable[PersonEntity],
    assignment: Mapping[str, int],
    K: int,
    thresholds: CategoryThresholds | None = None,
) -> Gazetteer:
    """Join canonical entities with the per-article topic assignment.

    Every article an entity occurs in must have an assigned topic;
    a missing article is a pipeline wiring error and raises KeyError
    naming it.
    """
    thresholds = thresholds or CategoryThresholds()
    gaz = Gazetteer(K=K, thresholds=thresholds)
    for entity in sorted(entities, key=lambda e: e.canonical_name):
        docs = []
        for article_id in sorted(entity.occurrences):
            if article_id not in assignment:
                raise KeyError(
                    "article %s (person %r) has no topic assignment"
                    % (article_id, entity.canonical_name)
                )
            topic = int(assignment[article_id])
            if not 0 <= topic < K:
                raise ValueError(
                    "article %s assigned topic %d outside 0..%d"
                    % (article_id, topic, K - 1)
                )
            docs.append((article_id, topic))
        gaz.entries[entity.canonical_name] = GazetteerEntry(
            person=entity.canonical_name,
            docs=docs,
            category=categorize(len(docs), thresholds),
        )
    return gaz


def export_gazetteer(gaz: Gazetteer, path: str | Path) -> None:
    """Write the versioned text format; exports are byte-stable."""
    lines = [
        "#gazetteer-format %d" % FORMAT_VERSION,
        "#K %d" % gaz.K,
        "#thresholds %d %d" % (gaz.thresholds.lo, gaz.thresholds.hi),
    ]
    for person in sorted(gaz.entries):
        entry = gaz.entries[person]
        pairs = ";".join("%s:%d" % (aid, topic) for aid, topic in entry.docs)
        lines.append("%s\t%s" % (person, pairs))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


class GazetteerFormatError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__("line %d: %s" % (lineno, message))
        self.lineno = lineno


def import_gazetteer(path: str | Path) -> Gazetteer:
    """Parse an exported gazetteer, rejecting malformed or out-of-range rows."""
    text = Path(path).read_text(encoding="utf-8")
    lines = text.splitlines()
    if not lines or not lines[0].startswith("#gazetteer-format"):
        raise GazetteerFormatError(1, "missing format header")
    try:
        version = int(lines[0].split()[-1])
    except ValueError:
        raise GazetteerFormatError(1, "unreadable format version") from None
    if version != FORMAT_VERSION:
        raise GazetteerFormatError(1, "unsupported format version %d" % version)

    K = None
    thresholds = None
    entries: dict[str, GazetteerEntry] = {}
    for lineno, line in enumerate(lines[1:], 2):
        if not line.strip():
            continue
        if line.startswith("#K "):
            K = int(line.split()[1])
            continue
        if line.startswith("#thresholds "):
            lo, hi = (int(x) for x in line.split()[1:3])
            thresholds = CategoryThresholds(lo=lo, hi=hi)
            continue
        if line.startswith("#"):
            continue
        if K is None or thresholds is None:
            raise GazetteerFormatError(lineno, "entry before #K/#thresholds header")
        parts = line.split("\t")
        if len(parts) != 2:
            raise GazetteerFormatError(
                lineno, "expected person<TAB>docs, got %d fields" % len(parts)
            )
        person, pair_field = parts
        docs = []
        for pair in pair_field.split(";") if pair_field else []:
            if ":" not in pair:
                raise GazetteerFormatError(lineno, "malformed doc:topic pair %r" % pair)
            aid, _, topic_s = pair.rpartition(":")
            try:
                topic = int(topic_s)
            except ValueError:
                raise GazetteerFormatError(
                    lineno, "non-integer topic in pair %r" % pair
                ) from None
            if not 0 <= topic < K:
                raise GazetteerFormatError(
                    lineno, "topic %d outside 0..%d" % (topic, K - 1)
                )
            docs.append((aid, topic))
        entries[person] = GazetteerEntry(
            person=person,
            docs=sorted(docs),
            category=categorize(len(docs), thresholds),
        )
    if K is None or thresholds is None:
        raise GazetteerFormatError(len(lines), "missing #K or #thresholds header")
    return Gazetteer(K=K, thresholds=thresholds, entries=entries)
