"""Compare two rankings of the same people with a signed-rank test.

Ranks the synthetic newspaper twice, once with unit weights and once with
the document-length term switched off, then reports how much the orders
disagree: Wilcoxon statistic, the largest individual moves, and bucketed
mean scores down each list.

Run: python3 demos/04_compare_rank_lists.py
"""

from peoplerank.evalcmp import compare_lists
from peoplerank.gazetteer import build_gazetteer
from peoplerank.influence import CorpusStats, Weights, rank_all
from peoplerank.pner import HeuristicTagger, canonicalize, tag_corpus
from peoplerank.spellcorrect import GENERAL, NAMES, Lexicon, correct_corpus
from peoplerank.synthetic import make_synthetic_newspaper
from peoplerank.topics import assign_topics, train_lda


def main() -> None:
    paper = make_synthetic_newspaper(
        n_articles=200, K=3, doc_length=40, typo_rate=0.05, seed=0
    )
    corrected = correct_corpus(
        paper.corpus(),
        lexicons=[
            Lexicon(words=frozenset(paper.general_words), kind=GENERAL),
            Lexicon(words=frozenset(paper.name_words), kind=NAMES),
        ],
    )
    entities = canonicalize(
        tag_corpus(corrected, HeuristicTagger(name_words=set(paper.name_words)))
    )
    model = train_lda(corrected, K=3, iterations=200, seed=1)
    gaz = build_gazetteer(entities, assign_topics(model), K=model.K)
    pnfs = {e.canonical_name: e.occurrences for e in entities}
    stats = CorpusStats.from_corpus(corrected)

    full = rank_all(gaz, pnfs, stats)
    no_length = rank_all(gaz, pnfs, stats, weights=Weights(ndl=0.0, nsim=1.0, npnf=1.0))

    report = compare_lists(full, no_length, bucket_size=5, labels=("full", "no-length"))
    w = report.wilcoxon
    print("common persons: %d" % report.n_common)
    print("wilcoxon: W=%.1f z=%.3f p(two-tailed)=%.4f" % (w.w, w.z, w.p_two_tailed))

    movers = sorted(report.rank_deltas().items(), key=lambda kv: -abs(kv[1]))[:5]
    print("largest moves (full rank - no-length rank):")
    for person, delta in movers:
        print("  %-22s %+d" % (person, delta))

    print("mean ipi per bucket of 5:")
    for label, buckets in ((report.labels[0], report.buckets_a),
                           (report.labels[1], report.buckets_b)):
        head = ["%.2f" % b.mean_ipi for b in buckets[:6]]
        print("  %-10s %s" % (label, " ".join(head)))


if __name__ == "__main__":
    main()
