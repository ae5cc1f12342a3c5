import random

import pytest

from peoplerank.corpus import Article, Corpus
from peoplerank.pner import (
    ELITE,
    NOT_INFLUENTIAL,
    POPULAR,
    CategoryThresholds,
    ExternalTagger,
    HeuristicTagger,
    PersonMention,
    canonicalize,
    categorize,
    is_honorific,
    read_mention_file,
    tag_corpus,
    write_mention_file,
)

SAMPLE = (
    "Mr Eugene Kelly bead of the banking house of Eugene Kelly A Co Is dying "
    "at his home 33 West Fiftyfirst street He became ill on Dee 4 and was "
    "forced to lake to his bed"
)


def test_is_honorific():
    assert is_honorific("Mr")
    assert is_honorific("mrs.")
    assert is_honorific("CAPT")
    assert not is_honorific("Mister")
    assert not is_honorific("")


def test_heuristic_finds_name_runs():
    tagger = HeuristicTagger(name_words={"kelly"})
    article = Article(id="a1", raw_text=SAMPLE)
    mentions = tagger.tag(article)
    assert [m.surface for m in mentions] == ["Eugene Kelly", "Eugene Kelly"]
    for m in mentions:
        assert article.tokens[m.start : m.end] == list(m.surface.split())


def test_heuristic_requires_two_capitalized_tokens():
    tagger = HeuristicTagger(name_words={"kelly"})
    assert tagger.tag(Article(id="a", raw_text="then Kelly spoke")) == []


def test_heuristic_requires_anchor():
    # capitalized pair with neither honorific nor known name word: no mention
    tagger = HeuristicTagger(name_words={"kelly"})
    assert tagger.tag(Article(id="a", raw_text="visited Ann Arbor today")) == []


def test_heuristic_honorific_anchors_without_lexicon():
    tagger = HeuristicTagger()
    mentions = tagger.tag(Article(id="a", raw_text="saw Capt Creeten there"))
    assert [m.surface for m in mentions] == ["Capt Creeten"]


def test_heuristic_strips_leading_honorific_when_enough_remains():
    tagger = HeuristicTagger()
    (m,) = tagger.tag(Article(id="a", raw_text="Mr Eugene Kelly arrived"))
    assert m.surface == "Eugene Kelly"
    assert (m.start, m.end) == (1, 3)
    (m,) = tagger.tag(Article(id="a", raw_text="Capt Creeten arrived"))
    assert m.surface == "Capt Creeten"
    assert (m.start, m.end) == (0, 2)


def test_heuristic_breaker_words_split_runs():
    # "A" and "Is" are capitalized but break the run instead of extending it
    tagger = HeuristicTagger(name_words={"kelly"})
    mentions = tagger.tag(Article(id="a", raw_text="Eugene Kelly A Co Is dying"))
    assert [m.surface for m in mentions] == ["Eugene Kelly"]


def test_heuristic_mid_run_honorific_not_stripped():
    tagger = HeuristicTagger(name_words={"creeten"})
    (m,) = tagger.tag(Article(id="a", raw_text="and John Capt Creeten left"))
    assert m.surface == "John Capt Creeten"


def test_mention_token_helpers():
    m = PersonMention(article_id="a", start=0, end=2, surface="Eugene Kelly")
    assert m.tokens == ("Eugene", "Kelly")
    assert m.token_set == frozenset({"eugene", "kelly"})


def test_mention_file_round_trip(tmp_path):
    mentions = [
        PersonMention(article_id="a1", start=0, end=2, surface="Eugene Kelly"),
        PersonMention(article_id="b2", start=5, end=7, surface="Capt Creeten"),
    ]
    path = tmp_path / "mentions.tsv"
    write_mention_file(mentions, path)
    back = read_mention_file(path)
    assert back == {"a1": [mentions[0]], "b2": [mentions[1]]}


def test_mention_file_bad_field_count(tmp_path):
    path = tmp_path / "mentions.tsv"
    path.write_text("a1\t0\t2\n", encoding="utf-8")
    with pytest.raises(ValueError, match="line 1"):
        read_mention_file(path)


def test_mention_file_bad_int(tmp_path):
    path = tmp_path / "mentions.tsv"
    path.write_text("a1\t0\t2\tOk Name\nb\tx\t2\tBad Line\n", encoding="utf-8")
    with pytest.raises(ValueError, match="line 2"):
        read_mention_file(path)


def test_mention_file_empty_span(tmp_path):
    path = tmp_path / "mentions.tsv"
    path.write_text("a1\t3\t3\tName Here\n", encoding="utf-8")
    with pytest.raises(ValueError, match="empty span"):
        read_mention_file(path)


def test_external_tagger_replays_and_validates(tmp_path):
    path = tmp_path / "mentions.tsv"
    path.write_text("a1\t0\t2\tEugene Kelly\n", encoding="utf-8")
    tagger = ExternalTagger(path)
    article = Article(id="a1", raw_text="Eugene Kelly spoke")
    assert [m.surface for m in tagger.tag(article)] == ["Eugene Kelly"]
    assert tagger.tag(Article(id="other", raw_text="nothing here")) == []
    short = Article(id="a1", raw_text="one")
    with pytest.raises(ValueError, match="spans beyond"):
        tagger.tag(short)


def test_categorize_boundaries():
    assert categorize(1) == NOT_INFLUENTIAL
    assert categorize(3) == NOT_INFLUENTIAL
    assert categorize(4) == POPULAR
    assert categorize(15) == POPULAR
    assert categorize(16) == ELITE
    assert categorize(100) == ELITE


def test_categorize_custom_thresholds():
    t = CategoryThresholds(lo=2, hi=3)
    assert categorize(1, t) == NOT_INFLUENTIAL
    assert categorize(2, t) == POPULAR
    assert categorize(3, t) == ELITE


def _m(article_id, start, surface):
    toks = surface.split()
    return PersonMention(
        article_id=article_id, start=start, end=start + len(toks), surface=surface
    )


def test_canonicalize_folds_subsets():
    mentions = [
        _m("a1", 0, "John Smith"),
        _m("a1", 10, "John"),
        _m("a1", 20, "Smith"),
    ]
    (ent,) = canonicalize(mentions)
    assert ent.canonical_name == "john smith"
    assert ent.occurrences == {"a1": 3}


def test_canonicalize_counts_duplicate_mentions():
    mentions = [_m("a1", 0, "John Smith"), _m("a1", 0, "John Smith")]
    (ent,) = canonicalize(mentions)
    assert ent.occurrences == {"a1": 2}


def test_canonicalize_drops_orphan_single_tokens():
    mentions = [_m("a1", 0, "Smith"), _m("a1", 5, "Alice Jones")]
    (ent,) = canonicalize(mentions)
    assert ent.canonical_name == "alice jones"
    assert ent.occurrences == {"a1": 1}


def test_canonicalize_merge_is_per_article():
    # "Smith" folds into "John Smith" only where both appear together
    mentions = [
        _m("a1", 0, "John Smith"),
        _m("a1", 9, "Smith"),
        _m("a2", 0, "Mary Smith"),
        _m("a2", 9, "Smith"),
    ]
    ents = canonicalize(mentions)
    assert {e.canonical_name: e.occurrences for e in ents} == {
        "john smith": {"a1": 2},
        "mary smith": {"a2": 2},
    }


def test_canonicalize_subset_prefers_longest_target():
    mentions = [
        _m("a1", 0, "John Jacob Smith"),
        _m("a1", 10, "John Smith"),
        _m("a1", 20, "Smith"),
    ]
    (ent,) = canonicalize(mentions)
    assert ent.canonical_name == "john jacob smith"
    assert ent.occurrences == {"a1": 3}


def test_canonicalize_cross_article_aggregation():
    mentions = [
        _m("a1", 0, "Eugene Kelly"),
        _m("a2", 0, "Eugene Kelly"),
        _m("a2", 8, "Eugene Kelly"),
    ]
    (ent,) = canonicalize(mentions)
    assert ent.n_articles == 2
    assert ent.total_mentions == 3
    assert ent.occurrences == {"a1": 1, "a2": 2}


def test_canonicalize_order_independent():
    rng = random.Random(5)
    mentions = [
        _m("a1", 0, "John Jacob Smith"),
        _m("a1", 10, "John Smith"),
        _m("a1", 20, "Smith"),
        _m("a1", 30, "Alice Jones"),
        _m("a2", 0, "Alice Jones"),
        _m("a2", 10, "Jones"),
    ]
    baseline = canonicalize(mentions)
    for _ in range(20):
        shuffled = mentions[:]
        rng.shuffle(shuffled)
        got = canonicalize(shuffled)
        assert [(e.canonical_name, e.occurrences) for e in got] == [
            (e.canonical_name, e.occurrences) for e in baseline
        ]


def test_canonicalize_output_sorted_by_name():
    mentions = [_m("a1", 0, "Zoe Young"), _m("a1", 5, "Al Brown")]
    names = [e.canonical_name for e in canonicalize(mentions)]
    assert names == sorted(names)


def test_tag_corpus_collects_in_corpus_order():
    corpus = Corpus(
        [
            Article(id="a1", raw_text="Mr Eugene Kelly arrived"),
            Article(id="a2", raw_text="Capt Creeten left"),
        ]
    )
    mentions = tag_corpus(corpus, HeuristicTagger())
    assert [(m.article_id, m.surface) for m in mentions] == [
        ("a1", "Eugene Kelly"),
        ("a2", "Capt Creeten"),
    ]
