"""Command line front end: one subcommand per pipeline stage.

Options given on the command line override the JSON config file, which in
turn overrides the built-in defaults, so a config file plus a couple of
flags is enough to drive any stage.
"""

import argparse
import dataclasses
import logging
import sys

from .corpus import CorpusLoadError
from .pipeline import PipelineConfig, StageError, run_stage


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="peoplerank",
        description="Build a people gazetteer from noisy news text and rank "
        "persons by influence.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress")
    sub = parser.add_subparsers(dest="stage", required=True)

    def stage_parser(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--out", required=True, help="pipeline output directory")
        p.add_argument("--seed", type=int, dest="seed", help="random seed")
        p.add_argument(
            "--jobs", type=int, dest="workers",
            help="worker blocks for distributed topic training",
        )
        return p

    p = stage_parser("ingest", "load and tokenize the article directory")
    p.add_argument("--corpus", dest="corpus_dir", help="directory of *.txt articles")
    p.add_argument("--manifest", dest="manifest", help="article id list to restrict/order")

    p = stage_parser("correct", "spell-correct the ingested articles")
    p.add_argument("--general-lexicon", dest="general_lexicon")
    p.add_argument("--names-lexicon", dest="names_lexicon")
    p.add_argument("--max-edit-distance", type=int, dest="max_edit_distance")

    p = stage_parser("ner", "tag person mentions and build entities")
    p.add_argument("--tagger", choices=("heuristic", "external"), dest="tagger")
    p.add_argument("--mentions-file", dest="mentions_file",
                   help="TSV spans for the external tagger")
    p.add_argument("--names-lexicon", dest="names_lexicon")

    p = stage_parser("topics", "train the topic model and assign topics")
    p.add_argument("--topics", type=int, dest="topics", help="number of topics K")
    p.add_argument("--iters", type=int, dest="iterations", help="Gibbs sweeps")
    p.add_argument("--alpha", type=float, dest="alpha")
    p.add_argument("--beta", type=float, dest="beta")
    p.add_argument("--stopwords", dest="stopwords_file")

    p = stage_parser("coref", "resolve coreference chains, adjust name counts")
    p.add_argument("--pronoun-window", type=int, dest="pronoun_window")

    p = stage_parser("gazetteer", "join entities with topics into the gazetteer")
    p.add_argument("--lo", type=int, dest="category_lo", help="Popular threshold")
    p.add_argument("--hi", type=int, dest="category_hi", help="Elite threshold")

    p = stage_parser("rank", "score and rank every person")
    p.add_argument("--weights", dest="weights",
                   help="DI weights as ndl,nsim,npnf (default 1,1,1)")
    p.add_argument("--topn", type=int, dest="topn",
                   help="use top-N topic similarity instead of single-topic")

    p = stage_parser("compare", "compare two rank artifacts")
    p.add_argument("--l1", dest="compare_a", help="first rank artifact directory")
    p.add_argument("--l2", dest="compare_b", help="second rank artifact directory")
    p.add_argument("--bucket", type=int, dest="bucket_size")

    stage_parser("stats", "per-category aggregate statistics")
    return parser


def _merge_config(args: argparse.Namespace) -> PipelineConfig:
    if getattr(args, "config", None):
        config = PipelineConfig.from_file(args.config)
    else:
        config = PipelineConfig()
    fields = {f.name for f in dataclasses.fields(PipelineConfig)}
    overrides = {}
    for key, value in vars(args).items():
        if key in fields and value is not None:
            overrides[key] = value
    if getattr(args, "weights", None):
        parts = args.weights.split(",")
        if len(parts) != 3:
            raise StageError("--weights expects three comma-separated numbers")
        overrides["weight_ndl"] = float(parts[0])
        overrides["weight_nsim"] = float(parts[1])
        overrides["weight_npnf"] = float(parts[2])
    return dataclasses.replace(config, **overrides)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        config = _merge_config(args)
        run_stage(args.stage, config, args.out)
    except StageError as exc:
        print("peoplerank %s: %s" % (args.stage, exc), file=sys.stderr)
        return exc.exit_code
    except CorpusLoadError as exc:
        print("peoplerank %s: %s" % (args.stage, exc), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
