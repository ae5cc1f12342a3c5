"""Train the Gibbs-sampled topic model and its distributed variant.

Builds a corpus with two planted, disjoint vocabularies, trains on 90% of
it, and checks three things: the planted split is recovered, held-out
perplexity beats the uniform baseline (the vocabulary size), and the
distributed trainer stays close to the sequential one.

Run: python3 demos/02_topic_model.py
"""

from peoplerank.corpus import Corpus
from peoplerank.synthetic import make_topic_corpus
from peoplerank.topics import (
    assign_topics,
    perplexity,
    top_words,
    train_adlda,
    train_lda,
)


def main() -> None:
    corpus, labels = make_topic_corpus(
        n_docs=1000, K=2, words_per_topic=100, doc_length=25, seed=11
    )
    articles = list(corpus)
    train = Corpus(articles[:900])
    heldout = Corpus(articles[900:])

    model = train_lda(train, K=2, iterations=200, seed=3)
    for k, words in enumerate(top_words(model, n=8)):
        print("topic %d: %s" % (k, " ".join(words)))

    assigned = assign_topics(model)
    agree = sum(assigned[a] == labels[a] for a in assigned)
    # topic ids are arbitrary; the larger side is the match rate
    agree = max(agree, len(assigned) - agree)
    print("label agreement: %d/%d" % (agree, len(assigned)))

    res = perplexity(model, heldout)
    print(
        "held-out perplexity %.1f over %d tokens (uniform baseline %d)"
        % (res.value, res.n_scored, model.W)
    )
    assert res.value < model.W

    seq = perplexity(model, heldout).value
    for workers in (1, 2, 4):
        par = train_adlda(train, K=2, iterations=200, seed=3, workers=workers)
        v = perplexity(par, heldout).value
        print("workers=%d perplexity %.2f (sequential %.2f)" % (workers, v, seq))


if __name__ == "__main__":
    main()
