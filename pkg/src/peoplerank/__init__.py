"""Toolkit for mining influential people from noisy OCR news archives.

The pipeline: load articles, spell-correct OCR noise against lexicons, tag
person mentions, detect latent topics, resolve within-article coreference,
join everything into a people gazetteer, and rank every person with an
influence index.  Two ranked lists can be compared statistically.
"""

__version__ = "0.1.0"

from .corpus import Article, Corpus, CorpusLoadError, load_corpus, tokenize
from .spellcorrect import (
    CorrectionPolicy,
    Lexicon,
    SpellCorrector,
    correct_corpus,
    correct_token,
    edit_distance,
    join_hyphenated,
    load_lexicon,
)
from .pner import (
    CategoryThresholds,
    ExternalTagger,
    HeuristicTagger,
    PersonEntity,
    PersonMention,
    canonicalize,
    categorize,
    tag_corpus,
)
from .topics import (
    TopicModel,
    assign_top_topics,
    assign_topics,
    load_model,
    perplexity,
    save_model,
    top_words,
    train_adlda,
    train_lda,
)
from .coref import (
    Chain,
    Mention,
    adjusted_pnf,
    apply_chain_adjustments,
    detect_mentions,
    persisted_chains,
    resolve_article,
    resolve_chains,
)
from .gazetteer import (
    Gazetteer,
    GazetteerEntry,
    build_gazetteer,
    export_gazetteer,
    import_gazetteer,
)
from .influence import (
    CorpusStats,
    PersonInfluence,
    RankedPerson,
    Weights,
    category_stats,
    di_value,
    ndl,
    npnf,
    nsim,
    nsim_topn,
    rank_all,
    score_person,
    truncate2,
    uniqt,
)
from .evalcmp import (
    ComparisonReport,
    RankPairSample,
    WilcoxonResult,
    average_ipi_buckets,
    compare_lists,
    wilcoxon_signed_rank,
)
from .pipeline import PipelineConfig, run_stage

__all__ = [name for name in dir() if not name.startswith("_")]
