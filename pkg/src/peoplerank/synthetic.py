"""Synthetic newspaper generators with planted ground truth.

Test fixtures and demos both need corpora where the right answer is known
by construction: which persons exist, which topic each article belongs
to, and which tokens were corrupted.  Everything here is deterministic in
the seed.
"""

import random
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import Article, Corpus
from .spellcorrect import edit_distance

FIRST_NAMES = (
    "Albert", "Bertha", "Clarence", "Dorothea", "Edmund", "Florence",
    "Gideon", "Harriet", "Isaiah", "Josephine", "Konrad", "Lavinia",
    "Mortimer", "Nellie", "Obadiah", "Prudence", "Quincy", "Rosalind",
    "Silas", "Theodora", "Ulysses", "Violet", "Wendell", "Xenia",
)

SURNAMES = (
    "Ashford", "Blackwood", "Carmichael", "Dunmore", "Eastgate",
    "Fairbanks", "Granville", "Hollister", "Ironside", "Jessop",
    "Kingsley", "Lockhart", "Marchbanks", "Norcross", "Oglethorpe",
    "Pemberton", "Quillfeather", "Ravenscroft", "Stanhope", "Thornbury",
    "Underwood", "Vandermeer", "Wexford", "Yardley",
)

_LETTERS = "abcdefghijklmnopqrstuvwxyz"


def _make_words(rng: random.Random, count: int, avoid: list, min_distance: int = 3):
    """Random 8-letter words pairwise (and vs `avoid`) >= min_distance apart."""
    words = []
    guard = list(avoid)
    while len(words) < count:
        w = "".join(rng.choice(_LETTERS) for _ in range(8))
        if all(edit_distance(w, g) >= min_distance for g in guard):
            words.append(w)
            guard.append(w)
    return words


def _corrupt(rng: random.Random, word: str) -> str:
    """One random in-place edit; never introduces digits or capitals."""
    i = rng.randrange(len(word))
    op = rng.choice(("sub", "del", "ins"))
    if op == "sub":
        c = rng.choice([x for x in _LETTERS if x != word[i]])
        return word[:i] + c + word[i + 1 :]
    if op == "del" and len(word) > 2:
        return word[:i] + word[i + 1 :]
    return word[:i] + rng.choice(_LETTERS) + word[i:]


def make_topic_corpus(
    n_docs: int,
    K: int = 2,
    words_per_topic: int = 100,
    doc_length: int = 25,
    seed: int = 0,
) -> tuple:
    """Corpus with disjoint per-topic vocabularies; returns (corpus, labels)."""
    rng = random.Random(seed)
    vocabs = []
    pool: list = []
    for _ in range(K):
        words = _make_words(rng, words_per_topic, pool, min_distance=1)
        vocabs.append(words)
        pool.extend(words)
    articles = []
    labels = {}
    for i in range(n_docs):
        topic = i % K
        doc_id = "doc%04d" % i
        tokens = rng.choices(vocabs[topic], k=doc_length)
        articles.append(Article(id=doc_id, raw_text=" ".join(tokens)))
        labels[doc_id] = topic
    return Corpus(articles=articles), labels


@dataclass
class PlantedPerson:
    surface: str  # e.g. "Albert Ashford"
    articles: list

    @property
    def canonical(self) -> str:
        return self.surface.lower()


@dataclass
class SyntheticNewspaper:
    texts: dict  # article_id -> raw text
    topic_of: dict  # article_id -> planted topic label
    persons: list  # PlantedPerson, persons[0] is the hero
    general_words: list
    name_words: list
    typos: list = field(default_factory=list)  # (article_id, corrupted, original)

    @property
    def hero(self) -> PlantedPerson:
        return self.persons[0]

    def corpus(self) -> Corpus:
        return Corpus(
            articles=[Article(id=i, raw_text=self.texts[i]) for i in sorted(self.texts)]
        )


def make_synthetic_newspaper(
    n_articles: int = 200,
    K: int = 3,
    n_persons: int = 24,
    doc_length: int = 40,
    typo_rate: float = 0.05,
    seed: int = 0,
) -> SyntheticNewspaper:
    """A corpus with planted persons, topics, and OCR-style corruptions.

    Persons are two-token capitalized names; everything else is lowercase,
    so a capitalization tagger with the shipped name lexicon can recover
    every entity.  The hero (persons[0]) is planted across all K topics,
    and appears ten times in an article three times longer than the rest,
    so it must dominate any unit-weight influence ranking.
    """
    if n_articles < 20:
        raise ValueError("need at least 20 articles to plant the ground truth")
    rng = random.Random(seed)
    name_pairs = [(f, s) for f, s in zip(FIRST_NAMES, SURNAMES)]
    rng.shuffle(name_pairs)
    name_pairs = name_pairs[:n_persons]
    name_words = sorted({t.lower() for pair in name_pairs for t in pair})

    vocabs = []
    pool = list(name_words)
    for _ in range(K):
        words = _make_words(rng, 80, pool)
        vocabs.append(words)
        pool.extend(words)

    doc_ids = ["doc%04d" % i for i in range(n_articles)]
    topic_of = {doc_id: i % K for i, doc_id in enumerate(doc_ids)}

    hero = PlantedPerson(surface="%s %s" % name_pairs[0], articles=[])
    others = [PlantedPerson(surface="%s %s" % p, articles=[]) for p in name_pairs[1:]]

    # hero: one article per topic plus extra topic-0 articles, so the long
    # showcase article scores well on topic similarity too
    hero_docs = {doc_ids[i] for i in range(K)} | {doc_ids[i] for i in (K, 2 * K, 3 * K)}
    showcase = doc_ids[0]
    for p_idx, person in enumerate(others):
        # spread others over 1..4 same-topic articles, skipping hero docs
        n_own = 1 + (p_idx % 4)
        start = K + p_idx
        own = [doc_ids[(start + j * 7) % n_articles] for j in range(n_own)]
        person.articles = sorted({d for d in own if d not in hero_docs})

    texts = {}
    typos = []
    for doc_id in doc_ids:
        topic = topic_of[doc_id]
        length = doc_length * 3 if doc_id == showcase else doc_length
        tokens = rng.choices(vocabs[topic], k=length)
        # plant typos on topic words only
        for i, tok in enumerate(tokens):
            if rng.random() < typo_rate:
                bad = _corrupt(rng, tok)
                if bad != tok:
                    tokens[i] = bad
                    typos.append((doc_id, bad, tok))
        insertions = []
        if doc_id in hero_docs:
            reps = 10 if doc_id == showcase else 2
            insertions.extend([hero.surface] * reps)
            hero.articles.append(doc_id)
        for person in others:
            if doc_id in person.articles:
                insertions.extend([person.surface] * (1 + rng.randrange(3)))
        # keep at least one lowercase token between name insertions so
        # capitalized runs never fuse two different persons
        slots = rng.sample(range(1, len(tokens)), k=min(len(insertions), len(tokens) - 1))
        for slot, surface in sorted(zip(slots, insertions), reverse=True):
            maybe_honorific = "Mr " if rng.random() < 0.2 else ""
            tokens.insert(slot, maybe_honorific + surface)
        texts[doc_id] = " ".join(tokens)
    hero.articles.sort()

    persons = [hero] + [p for p in others if p.articles]
    general_words = sorted(w for v in vocabs for w in v)
    return SyntheticNewspaper(
        texts=texts,
        topic_of=topic_of,
        persons=persons,
        general_words=general_words,
        name_words=name_words,
        typos=typos,
    )


def write_newspaper(paper: SyntheticNewspaper, root: str | Path) -> dict:
    """Materialize articles and lexicons on disk; returns the paths used."""
    root = Path(root)
    corpus_dir = root / "articles"
    corpus_dir.mkdir(parents=True, exist_ok=True)
    for doc_id, text in sorted(paper.texts.items()):
        (corpus_dir / ("%s.txt" % doc_id)).write_text(text, encoding="utf-8")
    general = root / "general_lexicon.txt"
    names = root / "names_lexicon.txt"
    general.write_text("\n".join(paper.general_words) + "\n", encoding="utf-8")
    names.write_text("\n".join(paper.name_words) + "\n", encoding="utf-8")
    return {"corpus_dir": corpus_dir, "general_lexicon": general, "names_lexicon": names}
