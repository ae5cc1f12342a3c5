"""Influence scoring over gazetteer entries.

Each (person, article) pair gets a document influence score

    DI = w_ndl * NDL + w_nsim * NSIM + w_npnf * NPNF

where NDL is the article length relative to the longest article, NSIM
the fraction of the person's other articles sharing this article's topic,
and NPNF is 1 + log10 of the person's name frequency in the article.
A person's index of influence is their best DI plus UniqT, the fraction
of all topics their articles cover.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .corpus import Corpus
from .gazetteer import Gazetteer, GazetteerEntry
from .pner import ELITE, NOT_INFLUENTIAL, POPULAR

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Weights:
    ndl: float = 1.0
    nsim: float = 1.0
    npnf: float = 1.0


@dataclass
class CorpusStats:
    doc_lengths: dict
    max_doc_length: int

    @classmethod
    def from_corpus(cls, corpus: Corpus) -> "CorpusStats":
        return cls(
            doc_lengths={a.id: a.length for a in corpus},
            max_doc_length=corpus.max_doc_length,
        )


def ndl(doc_length: int, max_doc_length: int) -> float:
    """Normalized document length in [0, 1]."""
    if doc_length == 0:
        log.warning("zero-length document scores NDL 0")
        return 0.0
    return doc_length / max_doc_length


def npnf(pnf: int) -> float:
    """1 + log10(PNF); a name must occur at least once."""
    if pnf < 1:
        raise ValueError("PNF must be at least 1, got %r" % (pnf,))
    return 1.0 + math.log10(pnf)


def nsim(article_id: str, docs: list) -> float:
    """Share of the person's other articles with this article's topic.

    docs is the gazetteer (article_id, topic_id) list; the scored article
    itself never counts as its own neighbour.
    """
    topic = dict(docs)[article_id]
    same = sum(1 for aid, t in docs if t == topic and aid != article_id)
    return same / len(docs)


def nsim_topn(article_id: str, docs: list, top_topics: Mapping[str, list]) -> float:
    """Top-N generalization: average topic overlap across the article's topics.

    Every document carries its N best topics.  For each topic of the scored
    article, count the person's other documents listing it, then normalize
    by N times the list size.  N=1 reduces to nsim.
    """
    mine = top_topics[article_id]
    if not mine:
        raise ValueError("article %s has no top topics" % article_id)
    total = 0
    for topic in mine:
        total += sum(
            1
            for aid, _ in docs
            if aid != article_id and topic in top_topics[aid]
        )
    return total / (len(mine) * len(docs))


def uniqt(entry: GazetteerEntry, K: int) -> float:
    """Fraction of all K topics covered by the person's articles."""
    if K < 1:
        raise ValueError("K must be positive")
    return len(entry.topics) / K


def truncate2(x: float) -> float:
    """Two-decimal truncation used for display columns (0.0667 -> 0.06)."""
    return math.floor(x * 100 + 1e-9) / 100


@dataclass
class DocumentInfluence:
    article_id: str
    ndl: float
    nsim: float
    npnf: float
    di: float


@dataclass
class PersonInfluence:
    person: str
    category: str
    n_articles: int
    docs: list  # DocumentInfluence, in gazetteer order
    uniqt: float
    ipi: float

    @property
    def best(self) -> DocumentInfluence:
        return max(self.docs, key=lambda d: d.di)


def di_value(ndl_v: float, nsim_v: float, npnf_v: float, weights: Weights) -> float:
    return weights.ndl * ndl_v + weights.nsim * nsim_v + weights.npnf * npnf_v


def score_person(
    entry: GazetteerEntry,
    pnfs: Mapping[str, int],
    stats: CorpusStats,
    K: int,
    weights: Weights | None = None,
    top_topics: Mapping[str, list] | None = None,
) -> PersonInfluence:
    """Score one gazetteer entry.

    pnfs maps this person's article ids to name counts.  When top_topics
    is given, topic similarity uses the top-N variant.
    """
    weights = weights or Weights()
    if not entry.docs:
        raise ValueError("entry %r has no documents" % entry.person)
    records = []
    for article_id, _ in entry.docs:
        ndl_v = ndl(stats.doc_lengths[article_id], stats.max_doc_length)
        npnf_v = npnf(pnfs[article_id])
        if top_topics is None:
            nsim_v = nsim(article_id, entry.docs)
        else:
            nsim_v = nsim_topn(article_id, entry.docs, top_topics)
        records.append(
            DocumentInfluence(
                article_id=article_id,
                ndl=ndl_v,
                nsim=nsim_v,
                npnf=npnf_v,
                di=di_value(ndl_v, nsim_v, npnf_v, weights),
            )
        )
    u = uniqt(entry, K)
    best = max(records, key=lambda r: r.di)
    return PersonInfluence(
        person=entry.person,
        category=entry.category,
        n_articles=len(entry.docs),
        docs=records,
        uniqt=u,
        ipi=best.di + u,
    )


@dataclass
class RankedPerson:
    rank: int  # strict ordinal position, 1-based
    display_rank: int  # competition ranking: ties share the smallest position
    influence: PersonInfluence

    @property
    def person(self) -> str:
        return self.influence.person

    @property
    def ipi(self) -> float:
        return self.influence.ipi


def rank_all(
    gaz: Gazetteer,
    pnfs: Mapping[str, Mapping[str, int]],
    stats: CorpusStats,
    weights: Weights | None = None,
    top_topics: Mapping[str, list] | None = None,
) -> list:
    """Rank every person by IPI descending, names breaking exact ties."""
    scored = [
        score_person(entry, pnfs[entry.person], stats, gaz.K, weights, top_topics)
        for entry in gaz
    ]
    scored.sort(key=lambda p: (-p.ipi, p.person))
    ranked = []
    for i, p in enumerate(scored):
        if i > 0 and p.ipi == scored[i - 1].ipi:
            display = ranked[-1].display_rank
        else:
            display = i + 1
        ranked.append(RankedPerson(rank=i + 1, display_rank=display, influence=p))
    return ranked


@dataclass
class CategoryStats:
    category: str
    n_persons: int
    mean_articles: float
    mean_doc_length: float
    mean_pnf: float
    empty: bool = False


def category_stats(
    gaz: Gazetteer,
    pnfs: Mapping[str, Mapping[str, int]],
    stats: CorpusStats,
    categories: Iterable[str] | None = None,
) -> list:
    """Per-category aggregates over persons and their (person, doc) pairs."""
    wanted = list(categories) if categories else [NOT_INFLUENTIAL, POPULAR, ELITE]
    grouped: dict[str, list[GazetteerEntry]] = {c: [] for c in wanted}
    for entry in gaz:
        if entry.category in grouped:
            grouped[entry.category].append(entry)

    out = []
    for cat in wanted:
        entries = grouped[cat]
        if not entries:
            out.append(CategoryStats(cat, 0, 0.0, 0.0, 0.0, empty=True))
            continue
        pair_lengths = []
        pair_pnfs = []
        for e in entries:
            for aid, _ in e.docs:
                pair_lengths.append(stats.doc_lengths[aid])
                pair_pnfs.append(pnfs[e.person][aid])
        out.append(
            CategoryStats(
                category=cat,
                n_persons=len(entries),
                mean_articles=sum(e.n_articles for e in entries) / len(entries),
                mean_doc_length=sum(pair_lengths) / len(pair_lengths),
                mean_pnf=sum(pair_pnfs) / len(pair_pnfs),
            )
        )
    return out
