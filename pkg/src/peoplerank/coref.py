"""Within-article coreference over person mentions.

Mentions come from three detectors: person names from the tagger, a
closed list of gendered pronouns, and honorific+surname nominals that the
tagger did not already cover.  Chains are built by three sieves applied
in decreasing precision order, each seeing the clusters the previous one
produced:

  1. exact match: name mentions with the same lowercased surface corefer;
  2. relaxed head match: a shorter name whose token set is contained in a
     longer name's, with the same final token (honorifics stripped), joins
     the nearest qualifying mention's chain;
  3. pronoun attachment: a gendered pronoun joins the nearest preceding
     name chain with compatible gender within PRONOUN_WINDOW tokens.

Chain gender comes from honorifics (Mrs/Miss/Dame are she-compatible,
Mr/Capt/Sir he-compatible, anything else unknown) and, failing that, from
pronouns already attached.  Unknown matches either pronoun gender.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .corpus import Article
from .pner import PersonEntity, PersonMention, is_honorific, _strip_period

PRONOUN_WINDOW = 50

MALE_PRONOUNS = {"he", "him", "his", "himself"}
FEMALE_PRONOUNS = {"she", "her", "hers", "herself"}

_HONORIFIC_GENDER = {
    "mrs": "female", "miss": "female", "dame": "female",
    "mr": "male", "capt": "male", "sir": "male",
}

NAME = "name"
PRONOUN = "pronoun"
NOMINAL = "nominal"


@dataclass(frozen=True)
class Mention:
    article_id: str
    start: int
    end: int
    surface: str
    kind: str

    @property
    def tokens(self) -> tuple:
        return tuple(self.surface.split())


@dataclass
class Chain:
    article_id: str
    mentions: list  # text order
    representative: Mention
    gender: str | None = None

    @property
    def mention_count(self) -> int:
        return len(self.mentions)

    def has_name(self) -> bool:
        return any(m.kind == NAME for m in self.mentions)


def _capitalized(token: str) -> bool:
    return bool(token) and token[0].isupper()


def detect_mentions(article: Article, person_mentions: Iterable[PersonMention]) -> list:
    """Collect coreference candidates for one article, in text order."""
    mentions = [
        Mention(article.id, m.start, m.end, m.surface, NAME)
        for m in person_mentions
        if m.article_id == article.id
    ]
    covered = set()
    for m in mentions:
        covered.update(range(m.start, m.end))

    tokens = article.tokens
    for i, tok in enumerate(tokens):
        low = tok.lower()
        if low in MALE_PRONOUNS or low in FEMALE_PRONOUNS:
            mentions.append(Mention(article.id, i, i + 1, tok, PRONOUN))
        elif (
            is_honorific(tok)
            and i + 1 < len(tokens)
            and _capitalized(tokens[i + 1])
            and i not in covered
            and i + 1 not in covered
        ):
            mentions.append(
                Mention(article.id, i, i + 2, "%s %s" % (tok, tokens[i + 1]), NOMINAL)
            )
    mentions.sort(key=lambda m: (m.start, m.end))
    return mentions


def _strip_honorific(tokens: tuple) -> tuple:
    if tokens and is_honorific(tokens[0]) and len(tokens) > 1:
        return tokens[1:]
    return tokens


def _head_tokens(m: Mention) -> tuple:
    return tuple(t.lower() for t in _strip_honorific(m.tokens))


def _mention_honorific_gender(m: Mention, article: Article) -> str | None:
    """Gender signal from the mention's own or immediately preceding token."""
    first = _strip_period(m.tokens[0]).lower()
    if first in _HONORIFIC_GENDER:
        return _HONORIFIC_GENDER[first]
    if m.start > 0:
        before = _strip_period(article.tokens[m.start - 1]).lower()
        if is_honorific(article.tokens[m.start - 1]):
            return _HONORIFIC_GENDER.get(before)
    return None


def _pronoun_gender(surface: str) -> str:
    return "male" if surface.lower() in MALE_PRONOUNS else "female"


class _Clusters:
    """Union-find over mention indices."""

    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i: int, j: int) -> None:
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            self.parent[max(ri, rj)] = min(ri, rj)

    def members(self, i: int, n: int) -> list:
        root = self.find(i)
        return [j for j in range(n) if self.find(j) == root]


def _cluster_gender(indices, mentions, article) -> str | None:
    honorific_genders = set()
    pronoun_genders = set()
    for i in indices:
        m = mentions[i]
        if m.kind == PRONOUN:
            pronoun_genders.add(_pronoun_gender(m.surface))
        else:
            g = _mention_honorific_gender(m, article)
            if g:
                honorific_genders.add(g)
    if len(honorific_genders) == 1:
        return honorific_genders.pop()
    if honorific_genders:
        return None
    if len(pronoun_genders) == 1:
        return pronoun_genders.pop()
    return None


def resolve_chains(
    mentions: list, article: Article, pronoun_window: int = PRONOUN_WINDOW
) -> list:
    """Partition mentions into chains; every mention lands in exactly one."""
    mentions = sorted(mentions, key=lambda m: (m.start, m.end))
    n = len(mentions)
    clusters = _Clusters(n)

    # sieve 1: exact lowercased surface match between names
    by_surface: dict[str, int] = {}
    for i, m in enumerate(mentions):
        if m.kind != NAME:
            continue
        key = m.surface.lower()
        if key in by_surface:
            clusters.union(by_surface[key], i)
        else:
            by_surface[key] = i

    # sieve 2: head containment with matching final token
    for i, m in enumerate(mentions):
        if m.kind == PRONOUN:
            continue
        head = _head_tokens(m)
        best = None
        for j, other in enumerate(mentions):
            if j == i or other.kind == PRONOUN:
                continue
            other_head = _head_tokens(other)
            if len(other_head) < len(head):
                continue
            if (
                set(head) <= set(other_head)
                and head
                and head[-1] == other_head[-1]
                and clusters.find(i) != clusters.find(j)
            ):
                distance = (
                    m.start - other.end if other.end <= m.start else other.start - m.end
                )
                preceding = other.end <= m.start
                key = (not preceding, distance)
                if best is None or key < best[0]:
                    best = (key, j)
        if best is not None:
            clusters.union(i, best[1])

    # sieve 3: pronouns attach to the nearest preceding compatible name chain
    for i, m in enumerate(mentions):
        if m.kind != PRONOUN:
            continue
        gender = _pronoun_gender(m.surface)
        for j in range(i - 1, -1, -1):
            other = mentions[j]
            if other.kind == PRONOUN:
                continue
            if other.end > m.start:
                continue
            if m.start - other.end > pronoun_window:
                continue
            chain_gender = _cluster_gender(
                clusters.members(j, n), mentions, article
            )
            if chain_gender is None or chain_gender == gender:
                clusters.union(j, i)
                break

    chains = []
    seen_roots = []
    for i in range(n):
        root = clusters.find(i)
        if root in seen_roots:
            continue
        seen_roots.append(root)
        members = [mentions[j] for j in clusters.members(i, n)]
        chains.append(
            Chain(
                article_id=article.id,
                mentions=members,
                representative=_representative(members),
                gender=_cluster_gender(clusters.members(i, n), mentions, article),
            )
        )
    return chains


def _representative(members: list) -> Mention:
    """Longest name mention wins; ties go to the earliest span."""
    for kinds in ((NAME,), (NOMINAL,), (NAME, NOMINAL, PRONOUN)):
        pool = [m for m in members if m.kind in kinds]
        if pool:
            return min(pool, key=lambda m: (-len(m.tokens), m.start))
    raise ValueError("chain has no mentions")


def persisted_chains(chains: list) -> list:
    """Chains worth keeping: multi-mention, or name singletons (PNF parity)."""
    return [c for c in chains if c.mention_count >= 2 or c.has_name()]


def resolve_article(
    article: Article,
    person_mentions: Iterable[PersonMention],
    pronoun_window: int = PRONOUN_WINDOW,
) -> list:
    return resolve_chains(
        detect_mentions(article, person_mentions), article, pronoun_window
    )


def adjusted_pnf(entity: PersonEntity, chains: Iterable[Chain]) -> dict:
    """Coreference-adjusted per-article PNF for one gazetteer entity.

    A chain speaks for the entity when its representative lowercases to the
    entity's canonical name; the article's PNF becomes the larger of the
    original count and the chain's mention count.
    """
    occurrences = dict(entity.occurrences)
    for chain in chains:
        rep = chain.representative.surface.lower()
        if rep != entity.canonical_name:
            continue
        if chain.article_id not in occurrences:
            continue
        occurrences[chain.article_id] = max(
            occurrences[chain.article_id], chain.mention_count
        )
    return occurrences


def apply_chain_adjustments(entities: Iterable[PersonEntity], chains: list) -> list:
    return [
        PersonEntity(
            canonical_name=e.canonical_name, occurrences=adjusted_pnf(e, chains)
        )
        for e in entities
    ]


def write_chain_file(chains: Iterable[Chain], path: str | Path) -> None:
    """Dump persisted chains as chain_id<TAB>representative<TAB>mention_count."""
    lines = [
        "%d\t%s\t%d" % (i, c.representative.surface, c.mention_count)
        for i, c in enumerate(persisted_chains(list(chains)))
    ]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


def read_chain_file(path: str | Path) -> list:
    """Parse a chain dump into (chain_id, representative, mention_count) rows."""
    rows = []
    for lineno, line in enumerate(
        Path(path).read_text(encoding="utf-8").splitlines(), 1
    ):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ValueError(
                "malformed chain line %d: expected 3 fields, got %d"
                % (lineno, len(parts))
            )
        rows.append((int(parts[0]), parts[1], int(parts[2])))
    return rows
