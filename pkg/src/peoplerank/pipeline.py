"""Staged pipeline: ingest -> correct -> ner -> topics -> coref -> gazetteer
-> rank, plus compare and stats reports.

Every stage writes its artifact under <outdir>/<stage>/ together with a
config snapshot and a manifest recording the hash of its effective
configuration (input content included) and the hashes of the upstream
manifests it consumed.  A stage refuses to run against an upstream
artifact whose recorded hash no longer matches the current configuration,
so silent reuse of stale inputs is impossible.  Identical configuration
always reproduces byte-identical artifacts.
"""

import csv
import hashlib
import json
import logging
from dataclasses import asdict, dataclass
from pathlib import Path

from . import coref as coref_mod
from . import evalcmp, gazetteer, influence, pner, spellcorrect, topics
from .corpus import Article, Corpus, load_corpus

log = logging.getLogger(__name__)

STAGES = (
    "ingest", "correct", "ner", "topics", "coref", "gazetteer",
    "rank", "compare", "stats",
)

STAGE_DEPS = {
    "ingest": (),
    "correct": ("ingest",),
    "ner": ("correct",),
    "topics": ("correct",),
    "coref": ("correct", "ner"),
    "gazetteer": ("ner", "topics"),
    "rank": ("correct", "topics", "coref", "gazetteer"),
    "compare": (),
    "stats": ("correct", "coref", "gazetteer"),
}


class StageError(RuntimeError):
    def __init__(self, message: str, exit_code: int = 1):
        super().__init__(message)
        self.exit_code = exit_code


class MissingUpstreamError(StageError):
    def __init__(self, stage: str):
        super().__init__(
            "missing upstream artifact: run stage %r first" % stage, exit_code=2
        )
        self.stage = stage


class StaleUpstreamError(StageError):
    def __init__(self, stage: str):
        super().__init__(
            "stale upstream artifact %r: configuration changed since it was "
            "written, rerun it" % stage,
            exit_code=3,
        )
        self.stage = stage


@dataclass
class PipelineConfig:
    corpus_dir: str = ""
    manifest: str | None = None
    general_lexicon: str | None = None
    names_lexicon: str | None = None
    max_edit_distance: int = 2
    min_token_length: int = 3
    prefer_person_lexicon: bool = True
    tagger: str = "heuristic"
    mentions_file: str | None = None
    topics: int = 30
    alpha: float | None = None
    beta: float = 0.01
    iterations: int = 200
    workers: int = 1
    seed: int = 0
    stopwords_file: str | None = None
    pronoun_window: int = coref_mod.PRONOUN_WINDOW
    category_lo: int = 4
    category_hi: int = 16
    weight_ndl: float = 1.0
    weight_nsim: float = 1.0
    weight_npnf: float = 1.0
    topn: int = 1
    bucket_size: int = 100
    compare_a: str | None = None
    compare_b: str | None = None

    @classmethod
    def from_file(cls, path: str | Path) -> "PipelineConfig":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        unknown = set(data) - {f for f in cls.__dataclass_fields__}
        if unknown:
            raise StageError("unknown config keys: %s" % ", ".join(sorted(unknown)))
        return cls(**data)

    def thresholds(self) -> pner.CategoryThresholds:
        return pner.CategoryThresholds(lo=self.category_lo, hi=self.category_hi)

    def weights(self) -> influence.Weights:
        return influence.Weights(
            ndl=self.weight_ndl, nsim=self.weight_nsim, npnf=self.weight_npnf
        )


def _sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _hash_obj(obj) -> str:
    return _sha256(json.dumps(obj, sort_keys=True).encode("utf-8"))


def _hash_file(path: str | Path | None) -> str | None:
    if path is None:
        return None
    return _sha256(Path(path).read_bytes())


def _hash_corpus_dir(corpus_dir: str, manifest: str | None) -> str:
    files = sorted(Path(corpus_dir).glob("*.txt"))
    listing = [(p.stem, _sha256(p.read_bytes())) for p in files]
    return _hash_obj({"files": listing, "manifest": _hash_file(manifest)})


def _stopwords(config: PipelineConfig):
    if config.stopwords_file is None:
        return topics.DEFAULT_STOPWORDS
    return frozenset(
        w.strip().lower()
        for w in Path(config.stopwords_file).read_text(encoding="utf-8").split()
        if w.strip()
    )


def _stage_params(stage: str, config: PipelineConfig) -> dict:
    """The configuration slice (with input content hashes) a stage depends on."""
    if stage == "ingest":
        return {
            "corpus": _hash_corpus_dir(config.corpus_dir, config.manifest),
        }
    if stage == "correct":
        return {
            "general_lexicon": _hash_file(config.general_lexicon),
            "names_lexicon": _hash_file(config.names_lexicon),
            "max_edit_distance": config.max_edit_distance,
            "min_token_length": config.min_token_length,
            "prefer_person_lexicon": config.prefer_person_lexicon,
        }
    if stage == "ner":
        return {
            "tagger": config.tagger,
            "mentions_file": _hash_file(config.mentions_file),
            "names_lexicon": _hash_file(config.names_lexicon),
        }
    if stage == "topics":
        return {
            "K": config.topics,
            "alpha": config.alpha,
            "beta": config.beta,
            "iterations": config.iterations,
            "workers": config.workers,
            "seed": config.seed,
            "stopwords": _hash_file(config.stopwords_file),
        }
    if stage == "coref":
        return {"pronoun_window": config.pronoun_window}
    if stage == "gazetteer":
        return {"lo": config.category_lo, "hi": config.category_hi}
    if stage == "rank":
        return {
            "weights": [config.weight_ndl, config.weight_nsim, config.weight_npnf],
            "topn": config.topn,
        }
    if stage == "compare":
        return {
            "a": _hash_file(Path(config.compare_a) / "report.json")
            if config.compare_a
            else None,
            "b": _hash_file(Path(config.compare_b) / "report.json")
            if config.compare_b
            else None,
            "bucket_size": config.bucket_size,
        }
    if stage == "stats":
        return {}
    raise StageError("unknown stage %r" % stage)


def _manifest_path(outdir: Path, stage: str) -> Path:
    return outdir / stage / "manifest.json"


def _stage_hash(stage: str, config: PipelineConfig, upstream: dict) -> str:
    return _hash_obj(
        {
            "stage": stage,
            "params": _stage_params(stage, config),
            "upstream": upstream,
        }
    )


def _require_upstream(stage: str, config: PipelineConfig, outdir: Path) -> dict:
    """Check that upstream artifacts exist and are current; return their hashes.

    Currency is transitive: a dependency is stale when its recorded
    parameters no longer match the configuration, or when anything beneath
    it was re-run or changed after it was written.
    """
    upstream = {}
    for dep in STAGE_DEPS[stage]:
        mpath = _manifest_path(outdir, dep)
        if not mpath.exists():
            raise MissingUpstreamError(dep)
        recorded = json.loads(mpath.read_text(encoding="utf-8"))
        current_below = _require_upstream(dep, config, outdir)
        if recorded.get("upstream", {}) != current_below:
            raise StaleUpstreamError(dep)
        expected = _stage_hash(dep, config, current_below)
        if recorded.get("hash") != expected:
            raise StaleUpstreamError(dep)
        upstream[dep] = recorded["hash"]
    return upstream


def _write_stage_meta(stage: str, config: PipelineConfig, outdir: Path, upstream: dict):
    stage_dir = outdir / stage
    stage_dir.mkdir(parents=True, exist_ok=True)
    snapshot = json.dumps(asdict(config), indent=2, sort_keys=True) + "\n"
    (stage_dir / "config.json").write_text(snapshot, encoding="utf-8")
    manifest = {
        "stage": stage,
        "hash": _stage_hash(stage, config, upstream),
        "upstream": upstream,
    }
    _manifest_path(outdir, stage).write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return stage_dir


def _write_articles(corpus: Corpus, path: Path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for a in corpus:
            f.write(json.dumps({"id": a.id, "text": " ".join(a.tokens)}) + "\n")


def _read_articles(path: Path) -> Corpus:
    articles = []
    with open(path, encoding="utf-8") as f:
        for line in f:
            if line.strip():
                row = json.loads(line)
                articles.append(Article(id=row["id"], raw_text=row["text"]))
    return Corpus(articles=articles)


def _write_json(obj, path: Path) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _lexicons(config: PipelineConfig) -> list:
    lexicons = []
    if config.general_lexicon:
        lexicons.append(spellcorrect.load_lexicon(config.general_lexicon, spellcorrect.GENERAL))
    if config.names_lexicon:
        lexicons.append(spellcorrect.load_lexicon(config.names_lexicon, spellcorrect.NAMES))
    return lexicons


def _policy(config: PipelineConfig) -> spellcorrect.CorrectionPolicy:
    return spellcorrect.CorrectionPolicy(
        max_edit_distance=config.max_edit_distance,
        prefer_person_lexicon=config.prefer_person_lexicon,
        min_token_length=config.min_token_length,
    )


def run_ingest(config: PipelineConfig, outdir: Path, upstream: dict) -> None:
    if not config.corpus_dir:
        raise StageError("ingest requires corpus_dir (--corpus)")
    corpus = load_corpus(config.corpus_dir, config.manifest)
    stage_dir = _write_stage_meta("ingest", config, outdir, upstream)
    _write_articles(corpus, stage_dir / "articles.jsonl")
    _write_json(
        {
            "n_articles": len(corpus),
            "max_doc_length": corpus.max_doc_length,
            "n_tokens": sum(a.length for a in corpus),
        },
        stage_dir / "stats.json",
    )


def run_correct(config: PipelineConfig, outdir: Path, upstream: dict) -> None:
    corpus = _read_articles(outdir / "ingest" / "articles.jsonl")
    lexicons = _lexicons(config)
    if not lexicons:
        log.warning("no lexicons configured; correction passes tokens through")
        corrected = corpus
        n_changed = 0
    else:
        corrected = spellcorrect.correct_corpus(corpus, lexicons, _policy(config))
        n_changed = sum(
            1
            for before, after in zip(corpus, corrected)
            for t0, t1 in zip(before.tokens, after.tokens)
            if t0 != t1
        )
    stage_dir = _write_stage_meta("correct", config, outdir, upstream)
    _write_articles(corrected, stage_dir / "articles.jsonl")
    _write_json(
        {
            "n_tokens_before": sum(a.length for a in corpus),
            "n_tokens_after": sum(a.length for a in corrected),
            "n_tokens_changed": n_changed,
        },
        stage_dir / "stats.json",
    )


def run_ner(config: PipelineConfig, outdir: Path, upstream: dict) -> None:
    corpus = _read_articles(outdir / "correct" / "articles.jsonl")
    if config.tagger == "heuristic":
        name_words = set()
        if config.names_lexicon:
            name_words = spellcorrect.load_lexicon(config.names_lexicon).words
        tagger = pner.HeuristicTagger(name_words)
    elif config.tagger == "external":
        if not config.mentions_file:
            raise StageError("external tagger requires mentions_file (--mentions-file)")
        tagger = pner.ExternalTagger(config.mentions_file)
    else:
        raise StageError("unknown tagger %r" % config.tagger)
    mentions = pner.tag_corpus(corpus, tagger)
    entities = pner.canonicalize(mentions)
    stage_dir = _write_stage_meta("ner", config, outdir, upstream)
    pner.write_mention_file(mentions, stage_dir / "mentions.tsv")
    _write_json(
        {e.canonical_name: e.occurrences for e in entities},
        stage_dir / "entities.json",
    )


def run_topics(config: PipelineConfig, outdir: Path, upstream: dict) -> None:
    corpus = _read_articles(outdir / "correct" / "articles.jsonl")
    kwargs = dict(
        K=config.topics,
        iterations=config.iterations,
        alpha=config.alpha,
        beta=config.beta,
        seed=config.seed,
        stopwords=_stopwords(config),
    )
    if config.workers > 1:
        model = topics.train_adlda(corpus, workers=config.workers, **kwargs)
    else:
        model = topics.train_lda(corpus, **kwargs)
    assignment = topics.assign_topics(model)
    stage_dir = _write_stage_meta("topics", config, outdir, upstream)
    topics.save_model(model, stage_dir / "model.npz")
    with open(stage_dir / "assignments.tsv", "w", encoding="utf-8") as f:
        for aid in sorted(assignment):
            f.write("%s\t%d\n" % (aid, assignment[aid]))
    topics.write_topic_report(model, stage_dir / "report.txt")


def _read_assignments(path: Path) -> dict:
    out = {}
    for line in path.read_text(encoding="utf-8").splitlines():
        if line.strip():
            aid, topic = line.split("\t")
            out[aid] = int(topic)
    return out


def run_coref(config: PipelineConfig, outdir: Path, upstream: dict) -> None:
    corpus = _read_articles(outdir / "correct" / "articles.jsonl")
    by_article = pner.read_mention_file(outdir / "ner" / "mentions.tsv")
    entities_raw = json.loads(
        (outdir / "ner" / "entities.json").read_text(encoding="utf-8")
    )
    entities = [
        pner.PersonEntity(canonical_name=name, occurrences=occ)
        for name, occ in sorted(entities_raw.items())
    ]
    all_chains = []
    for article in corpus:
        chains = coref_mod.resolve_article(
            article, by_article.get(article.id, []), config.pronoun_window
        )
        all_chains.extend(coref_mod.persisted_chains(chains))
    adjusted = coref_mod.apply_chain_adjustments(entities, all_chains)
    stage_dir = _write_stage_meta("coref", config, outdir, upstream)
    coref_mod.write_chain_file(all_chains, stage_dir / "chains.tsv")
    _write_json(
        {e.canonical_name: e.occurrences for e in adjusted},
        stage_dir / "entities.json",
    )


def run_gazetteer(config: PipelineConfig, outdir: Path, upstream: dict) -> None:
    entities_raw = json.loads(
        (outdir / "ner" / "entities.json").read_text(encoding="utf-8")
    )
    entities = [
        pner.PersonEntity(canonical_name=name, occurrences=occ)
        for name, occ in sorted(entities_raw.items())
    ]
    assignment = _read_assignments(outdir / "topics" / "assignments.tsv")
    gaz = gazetteer.build_gazetteer(
        entities, assignment, K=config.topics, thresholds=config.thresholds()
    )
    stage_dir = _write_stage_meta("gazetteer", config, outdir, upstream)
    gazetteer.export_gazetteer(gaz, stage_dir / "gazetteer.txt")


def run_rank(config: PipelineConfig, outdir: Path, upstream: dict) -> None:
    gaz = gazetteer.import_gazetteer(outdir / "gazetteer" / "gazetteer.txt")
    pnfs = json.loads((outdir / "coref" / "entities.json").read_text(encoding="utf-8"))
    corpus = _read_articles(outdir / "correct" / "articles.jsonl")
    stats = influence.CorpusStats.from_corpus(corpus)
    model = topics.load_model(outdir / "topics" / "model.npz")
    top_topics = topics.assign_top_topics(model, config.topn) if config.topn > 1 else None
    ranked = influence.rank_all(gaz, pnfs, stats, config.weights(), top_topics)
    words = topics.top_words(model)
    assignment = _read_assignments(outdir / "topics" / "assignments.tsv")

    stage_dir = _write_stage_meta("rank", config, outdir, upstream)
    rows = []
    for r in ranked:
        best = r.influence.best
        rows.append(
            {
                "rank": r.rank,
                "display_rank": r.display_rank,
                "person": r.person,
                "ipi": r.ipi,
                "n_articles": r.influence.n_articles,
                "category": r.influence.category,
                "ndl": best.ndl,
                "npnf": best.npnf,
                "nsim": best.nsim,
                "uniqt": r.influence.uniqt,
                "best_article": best.article_id,
                "topic_words": " ".join(words[assignment[best.article_id]]),
            }
        )
    _write_json(rows, stage_dir / "report.json")
    with open(stage_dir / "report.csv", "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(
            [
                "rank", "person", "ipi", "n_articles", "category",
                "ndl", "npnf", "nsim", "uniqt", "topic_words",
            ]
        )
        for row in rows:
            writer.writerow(
                [
                    row["display_rank"],
                    row["person"],
                    "%.4f" % row["ipi"],
                    row["n_articles"],
                    row["category"],
                    "%.4f" % row["ndl"],
                    "%.4f" % row["npnf"],
                    "%.4f" % row["nsim"],
                    "%.2f" % influence.truncate2(row["uniqt"]),
                    row["topic_words"],
                ]
            )


@dataclass
class RankRow:
    """Minimal view of a rank report row, enough for comparisons."""

    person: str
    rank: int
    ipi: float


def _load_rank_report(path: Path) -> list:
    rows = json.loads(path.read_text(encoding="utf-8"))
    return [RankRow(person=r["person"], rank=r["rank"], ipi=r["ipi"]) for r in rows]


def run_compare(config: PipelineConfig, outdir: Path, upstream: dict) -> None:
    if not config.compare_a or not config.compare_b:
        raise StageError("compare requires two rank artifacts (--l1 and --l2)")
    path_a = Path(config.compare_a) / "report.json"
    path_b = Path(config.compare_b) / "report.json"
    for p in (path_a, path_b):
        if not p.exists():
            raise MissingUpstreamError("rank")
    report = evalcmp.compare_lists(
        _load_rank_report(path_a),
        _load_rank_report(path_b),
        bucket_size=config.bucket_size,
        labels=("l1", "l2"),
    )
    stage_dir = _write_stage_meta("compare", config, outdir, upstream)
    evalcmp.write_comparison_json(report, stage_dir / "report.json")
    evalcmp.write_bucket_csv(report, stage_dir / "buckets.csv")


def run_stats(config: PipelineConfig, outdir: Path, upstream: dict) -> None:
    gaz = gazetteer.import_gazetteer(outdir / "gazetteer" / "gazetteer.txt")
    pnfs = json.loads((outdir / "coref" / "entities.json").read_text(encoding="utf-8"))
    corpus = _read_articles(outdir / "correct" / "articles.jsonl")
    stats = influence.CorpusStats.from_corpus(corpus)
    rows = influence.category_stats(gaz, pnfs, stats)
    stage_dir = _write_stage_meta("stats", config, outdir, upstream)
    _write_json([asdict(r) for r in rows], stage_dir / "categories.json")
    with open(stage_dir / "categories.csv", "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(
            ["category", "n_persons", "mean_articles", "mean_doc_length", "mean_pnf"]
        )
        for r in rows:
            writer.writerow(
                [
                    r.category,
                    r.n_persons,
                    "%.4f" % r.mean_articles,
                    "%.4f" % r.mean_doc_length,
                    "%.4f" % r.mean_pnf,
                ]
            )


_RUNNERS = {
    "ingest": run_ingest,
    "correct": run_correct,
    "ner": run_ner,
    "topics": run_topics,
    "coref": run_coref,
    "gazetteer": run_gazetteer,
    "rank": run_rank,
    "compare": run_compare,
    "stats": run_stats,
}


def run_stage(stage: str, config: PipelineConfig, outdir: str | Path) -> None:
    """Run one stage against <outdir>, verifying upstream artifacts first."""
    if stage not in _RUNNERS:
        raise StageError("unknown stage %r (expected one of %s)" % (stage, ", ".join(STAGES)))
    outdir = Path(outdir)
    upstream = _require_upstream(stage, config, outdir)
    _RUNNERS[stage](config, outdir, upstream)
