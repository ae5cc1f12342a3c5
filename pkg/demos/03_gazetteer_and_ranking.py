"""The whole pipeline in memory: from raw text to a ranked people list.

A synthetic newspaper with planted persons and typos goes through spelling
correction, person tagging, pronoun chains, topic training, the gazetteer,
and finally influence ranking.  The planted hero (long showcase article,
ten name mentions, present in every topic) should come out on top.

Run: python3 demos/03_gazetteer_and_ranking.py
"""

from peoplerank.coref import apply_chain_adjustments, persisted_chains, resolve_article
from peoplerank.gazetteer import build_gazetteer
from peoplerank.influence import CorpusStats, rank_all
from peoplerank.pner import HeuristicTagger, canonicalize, tag_corpus
from peoplerank.spellcorrect import GENERAL, NAMES, Lexicon, correct_corpus
from peoplerank.synthetic import make_synthetic_newspaper
from peoplerank.topics import assign_topics, train_lda


def main() -> None:
    paper = make_synthetic_newspaper(
        n_articles=200, K=3, doc_length=40, typo_rate=0.05, seed=0
    )
    raw = paper.corpus()
    print("corpus: %d articles, %d planted typos" % (len(raw), len(paper.typos)))

    corrected = correct_corpus(
        raw,
        lexicons=[
            Lexicon(words=frozenset(paper.general_words), kind=GENERAL),
            Lexicon(words=frozenset(paper.name_words), kind=NAMES),
        ],
    )

    mentions = tag_corpus(corrected, HeuristicTagger(name_words=set(paper.name_words)))
    entities = canonicalize(mentions)
    print("tagged %d mentions -> %d entities" % (len(mentions), len(entities)))

    chains = []
    for article in corrected:
        article_mentions = [m for m in mentions if m.article_id == article.id]
        chains.extend(persisted_chains(resolve_article(article, article_mentions)))
    entities = apply_chain_adjustments(entities, chains)

    model = train_lda(corrected, K=3, iterations=200, seed=1)
    gaz = build_gazetteer(entities, assign_topics(model), K=model.K)

    pnfs = {e.canonical_name: e.occurrences for e in entities}
    ranked = rank_all(gaz, pnfs, CorpusStats.from_corpus(corrected))

    print()
    print("%-4s %-22s %6s %4s %-16s" % ("rank", "person", "ipi", "arts", "category"))
    for r in ranked[:10]:
        hero = "  <- hero" if r.person == paper.hero.canonical else ""
        print(
            "%-4d %-22s %6.3f %4d %-16s%s"
            % (r.display_rank, r.person, r.ipi, r.influence.n_articles,
               r.influence.category, hero)
        )

    assert ranked[0].person == paper.hero.canonical


if __name__ == "__main__":
    main()
