import random

import pytest

from peoplerank.coref import (
    NAME,
    NOMINAL,
    PRONOUN,
    PRONOUN_WINDOW,
    Chain,
    Mention,
    adjusted_pnf,
    apply_chain_adjustments,
    detect_mentions,
    persisted_chains,
    read_chain_file,
    resolve_article,
    resolve_chains,
    write_chain_file,
)
from peoplerank.corpus import Article
from peoplerank.pner import HeuristicTagger, PersonEntity, PersonMention

SAMPLE = (
    "Mr Eugene Kelly bead of the banking house of Eugene Kelly A Co Is dying "
    "at his home 33 West Fiftyfirst street He became ill on Dee 4 and was "
    "forced to lake to his bed"
)


def _article(text, article_id="a1"):
    return Article(id=article_id, raw_text=text)


def _tagged(article, name_words=("kelly",)):
    return HeuristicTagger(name_words=name_words).tag(article)


def test_detect_mentions_names_pronouns_and_order():
    article = _article(SAMPLE)
    mentions = detect_mentions(article, _tagged(article))
    kinds = [(m.surface, m.kind) for m in mentions]
    assert kinds == [
        ("Eugene Kelly", NAME),
        ("Eugene Kelly", NAME),
        ("his", PRONOUN),
        ("He", PRONOUN),
        ("his", PRONOUN),
    ]
    starts = [m.start for m in mentions]
    assert starts == sorted(starts)


def test_detect_mentions_nominal_when_not_covered():
    article = _article("then Capt Williams spoke to him")
    mentions = detect_mentions(article, [])
    assert [(m.surface, m.kind) for m in mentions] == [
        ("Capt Williams", NOMINAL),
        ("him", PRONOUN),
    ]


def test_detect_mentions_nominal_suppressed_by_name_span():
    article = _article("then Capt Williams spoke")
    tagged = [PersonMention(article_id="a1", start=1, end=3, surface="Capt Williams")]
    mentions = detect_mentions(article, tagged)
    assert [(m.surface, m.kind) for m in mentions] == [("Capt Williams", NAME)]


def test_flagship_chain():
    article = _article(SAMPLE)
    chains = resolve_article(article, _tagged(article))
    assert len(chains) == 1
    (chain,) = chains
    assert chain.representative.surface == "Eugene Kelly"
    assert chain.mention_count == 5
    assert chain.gender == "male"


def test_chains_partition_mentions():
    rng = random.Random(31)
    names = ["Alice Ames", "Basil Brown", "Clara Cole"]
    fillers = ["went", "to", "town", "and", "said", "nothing", "much", "at", "all"]
    for trial in range(25):
        words = []
        for _ in range(rng.randint(10, 60)):
            r = rng.random()
            if r < 0.15:
                words.extend(rng.choice(names).split())
            elif r < 0.25:
                words.append(rng.choice(["he", "she", "his", "her", "He", "She"]))
            else:
                words.append(rng.choice(fillers))
        article = _article(" ".join(words), article_id=f"t{trial}")
        mentions = detect_mentions(
            article, _tagged(article, name_words=("ames", "brown", "cole"))
        )
        chains = resolve_chains(mentions, article)
        flat = [m for c in chains for m in c.mentions]
        assert sorted(flat, key=lambda m: (m.start, m.end)) == mentions
        assert len(flat) == len(mentions)


def test_sieve_exact_match_links_repeats():
    article = _article("Alice Ames arrived late but Alice Ames left early")
    chains = resolve_article(article, _tagged(article, name_words=("ames",)))
    assert len(chains) == 1
    assert chains[0].mention_count == 2


def test_sieve_head_match_joins_shorter_name():
    tagged = [
        PersonMention(article_id="a1", start=0, end=3, surface="John Jacob Smith"),
        PersonMention(article_id="a1", start=8, end=9, surface="Smith"),
    ]
    article = _article(
        "John Jacob Smith arrived and later only Mr Smith spoke to the crowd"
    )
    chains = resolve_chains(detect_mentions(article, tagged), article)
    assert len(chains) == 1
    assert chains[0].representative.surface == "John Jacob Smith"


def test_sieve_head_match_requires_same_last_token():
    tagged = [
        PersonMention(article_id="a1", start=0, end=2, surface="John Smith"),
        PersonMention(article_id="a1", start=5, end=6, surface="John"),
    ]
    article = _article("John Smith arrived and then John spoke loudly")
    chains = resolve_chains(detect_mentions(article, tagged), article)
    assert len(chains) == 2


def test_pronoun_attaches_to_nearest_preceding_chain():
    article = _article("Alice Ames arrived and she spoke")
    chains = resolve_article(article, _tagged(article, name_words=("ames",)))
    (chain,) = chains
    assert chain.mention_count == 2
    assert {m.kind for m in chain.mentions} == {NAME, PRONOUN}


def test_pronoun_gender_blocks_incompatible_chain():
    # Mrs Gray is female by honorific: "he" must not attach to her chain
    article = _article("Mrs Alice Gray arrived and he spoke")
    chains = resolve_article(article, _tagged(article, name_words=("gray",)))
    by_kind = {frozenset(m.kind for m in c.mentions) for c in chains}
    assert frozenset({PRONOUN}) in by_kind  # "he" stranded alone
    name_chain = next(c for c in chains if c.has_name())
    assert name_chain.gender == "female"
    assert name_chain.mention_count == 1


def test_unknown_gender_chain_accepts_either_pronoun():
    article = _article("Alice Ames arrived and he spoke")
    chains = resolve_article(article, _tagged(article, name_words=("ames",)))
    (chain,) = chains
    assert chain.mention_count == 2


def test_pronoun_window_cutoff():
    filler = " ".join(["word"] * (PRONOUN_WINDOW + 1))
    article = _article("Alice Ames arrived " + filler + " he spoke")
    chains = resolve_article(article, _tagged(article, name_words=("ames",)))
    assert all(c.mention_count == 1 for c in chains)
    near = _article("Alice Ames arrived " + " ".join(["word"] * 10) + " he spoke")
    chains = resolve_article(near, _tagged(near, name_words=("ames",)))
    assert max(c.mention_count for c in chains) == 2


def test_pronoun_gender_from_attached_pronouns():
    # once "she" joins, the chain reads female and rejects "he"
    article = _article("Alice Ames arrived and she spoke then he left")
    chains = resolve_article(article, _tagged(article, name_words=("ames",)))
    name_chain = next(c for c in chains if c.has_name())
    assert name_chain.gender == "female"
    assert name_chain.mention_count == 2


def test_representative_longest_name_then_earliest():
    members = [
        Mention("a1", 0, 2, "John Smith", NAME),
        Mention("a1", 5, 8, "John Jacob Smith", NAME),
        Mention("a1", 9, 10, "he", PRONOUN),
    ]
    chain = Chain(article_id="a1", mentions=members, representative=members[0])
    from peoplerank.coref import _representative

    assert _representative(members).surface == "John Jacob Smith"
    tie = [
        Mention("a1", 4, 6, "Ann Gray", NAME),
        Mention("a1", 0, 2, "Ann Gray", NAME),
    ]
    assert _representative(tie).start == 0
    assert chain.has_name()


def test_representative_falls_back_to_nominal_then_pronoun():
    from peoplerank.coref import _representative

    nominal = Mention("a1", 0, 2, "Capt Gray", NOMINAL)
    pronoun = Mention("a1", 3, 4, "he", PRONOUN)
    assert _representative([pronoun, nominal]) is nominal
    assert _representative([pronoun]) is pronoun


def test_persisted_chains_rules():
    name_single = Chain(
        "a1", [Mention("a1", 0, 2, "Ann Gray", NAME)], Mention("a1", 0, 2, "Ann Gray", NAME)
    )
    pron_single = Chain(
        "a1", [Mention("a1", 3, 4, "he", PRONOUN)], Mention("a1", 3, 4, "he", PRONOUN)
    )
    pair = Chain(
        "a1",
        [Mention("a1", 3, 4, "he", PRONOUN), Mention("a1", 5, 6, "his", PRONOUN)],
        Mention("a1", 3, 4, "he", PRONOUN),
    )
    kept = persisted_chains([name_single, pron_single, pair])
    assert kept == [name_single, pair]


def test_adjusted_pnf_flagship():
    article = _article(SAMPLE)
    tagged = _tagged(article)
    entity = PersonEntity(canonical_name="eugene kelly", occurrences={"a1": 2})
    chains = resolve_article(article, tagged)
    assert adjusted_pnf(entity, chains) == {"a1": 5}


def test_adjusted_pnf_keeps_larger_original():
    entity = PersonEntity(canonical_name="ann gray", occurrences={"a1": 9})
    chain = Chain(
        "a1",
        [Mention("a1", 0, 2, "Ann Gray", NAME)] * 3,
        Mention("a1", 0, 2, "Ann Gray", NAME),
    )
    assert adjusted_pnf(entity, [chain]) == {"a1": 9}


def test_adjusted_pnf_ignores_other_representatives_and_articles():
    entity = PersonEntity(canonical_name="ann gray", occurrences={"a1": 1})
    other_rep = Chain(
        "a1",
        [Mention("a1", 0, 2, "Bo Hill", NAME)] * 4,
        Mention("a1", 0, 2, "Bo Hill", NAME),
    )
    other_article = Chain(
        "a9",
        [Mention("a9", 0, 2, "Ann Gray", NAME)] * 4,
        Mention("a9", 0, 2, "Ann Gray", NAME),
    )
    assert adjusted_pnf(entity, [other_rep, other_article]) == {"a1": 1}


def test_apply_chain_adjustments_returns_new_entities():
    entity = PersonEntity(canonical_name="ann gray", occurrences={"a1": 1})
    chain = Chain(
        "a1",
        [Mention("a1", 0, 2, "Ann Gray", NAME), Mention("a1", 5, 6, "she", PRONOUN)],
        Mention("a1", 0, 2, "Ann Gray", NAME),
    )
    (adjusted,) = apply_chain_adjustments([entity], [chain])
    assert adjusted.occurrences == {"a1": 2}
    assert entity.occurrences == {"a1": 1}  # original untouched


def test_chain_file_round_trip(tmp_path):
    article = _article(SAMPLE)
    chains = resolve_article(article, _tagged(article))
    path = tmp_path / "chains.tsv"
    write_chain_file(chains, path)
    rows = read_chain_file(path)
    assert rows == [(0, "Eugene Kelly", 5)]


def test_chain_file_malformed_line(tmp_path):
    path = tmp_path / "chains.tsv"
    path.write_text("0\tEugene Kelly\n", encoding="utf-8")
    with pytest.raises(ValueError, match="line 1"):
        read_chain_file(path)
