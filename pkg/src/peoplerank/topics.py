"""Latent topic detection with collapsed Gibbs sampling.

The sampler keeps the usual count matrices: N_wk (word-topic), N_kj
(topic-document) and N_k (topic totals).  One token update removes the
token from the counts, samples a topic from

    p(z = k) ~ (N_wk[w,k] + beta) / (N_k[k] + W*beta) * (N_kj[k,j] + alpha)

and adds it back.  train_adlda runs the same update over P document
blocks, each against a private copy of the word-topic counts taken at the
start of the sweep, then reconciles with

    N_wk <- N_wk_old + sum_p (N_wk_p - N_wk_old)

which is exact bookkeeping because blocks touch disjoint tokens.

Randomness is organized as one stream per document, derived from the
corpus seed and a CRC of the article id.  Every document therefore draws
the same uniforms no matter how the corpus is ordered or partitioned:
train_adlda with workers=1 reproduces train_lda bit for bit, and larger
worker counts differ only through count staleness, not through draws.
"""

import logging
import zlib
from dataclasses import dataclass

import numpy as np
from numba import njit

from .corpus import Corpus

log = logging.getLogger(__name__)

MODEL_FORMAT_VERSION = 1

# The 50 most frequent English function words; enough to keep topics from
# being dominated by glue words without dragging in a full stopword list.
DEFAULT_STOPWORDS = frozenset(
    """
    the of and a to in is was he for it with as his on be at by i this
    had not are but from or have an they which one you were her all she
    there would their we him been has when who will no more if out
    """.split()
)

_STREAM_SAMPLING = 1
_STREAM_FOLD_IN = 2


def _doc_stream(seed: int, tag: int, article_id: str) -> np.random.Generator:
    key = zlib.crc32(article_id.encode("utf-8"))
    return np.random.default_rng(np.random.SeedSequence([seed, tag, key]))


@dataclass
class TopicModel:
    K: int
    W: int
    alpha: float
    beta: float
    vocab: list
    doc_ids: list
    N_wk: np.ndarray  # (W, K) word-topic counts
    N_kj: np.ndarray  # (K, D) topic-document counts
    N_k: np.ndarray  # (K,) topic totals
    seed: int
    iterations: int

    @property
    def D(self) -> int:
        return len(self.doc_ids)

    def theta(self) -> np.ndarray:
        """Document-topic distributions, shape (D, K), rows sum to 1."""
        counts = self.N_kj.T.astype(np.float64) + self.alpha
        return counts / counts.sum(axis=1, keepdims=True)

    def phi(self) -> np.ndarray:
        """Topic-word distributions, shape (K, W), rows sum to 1."""
        counts = self.N_wk.T.astype(np.float64) + self.beta
        return counts / counts.sum(axis=1, keepdims=True)


@dataclass
class PreparedDocs:
    """Corpus flattened to token-id arrays for the sampler."""

    vocab: list
    doc_ids: list
    word_ids: np.ndarray  # token -> vocab index, grouped by document
    doc_offsets: np.ndarray  # (D + 1,) token span of each document


def prepare_documents(corpus: Corpus, stopwords=DEFAULT_STOPWORDS) -> PreparedDocs:
    """Lowercase, drop stopwords, and index tokens against a sorted vocab."""
    kept = []
    for article in corpus:
        kept.append([t for t in (tok.lower() for tok in article.tokens) if t not in stopwords])
    vocab = sorted({t for doc in kept for t in doc})
    if not vocab:
        raise ValueError("empty vocabulary: no tokens survive preprocessing")
    index = {w: i for i, w in enumerate(vocab)}
    offsets = np.zeros(len(kept) + 1, dtype=np.int64)
    ids = []
    for j, doc in enumerate(kept):
        ids.extend(index[t] for t in doc)
        offsets[j + 1] = len(ids)
    return PreparedDocs(
        vocab=vocab,
        doc_ids=[a.id for a in corpus],
        word_ids=np.asarray(ids, dtype=np.int64),
        doc_offsets=offsets,
    )


@njit(cache=True)
def _sweep_span(word_ids, doc_index, z, t0, t1, n_wk, n_kj, n_k, alpha, beta, uniforms):
    """One Gibbs pass over tokens [t0, t1); uniforms[i] drives token t0+i."""
    K = n_wk.shape[1]
    w_beta = n_wk.shape[0] * beta
    for t in range(t0, t1):
        w = word_ids[t]
        j = doc_index[t]
        k = z[t]
        n_wk[w, k] -= 1
        n_kj[k, j] -= 1
        n_k[k] -= 1
        total = 0.0
        for kk in range(K):
            total += (n_wk[w, kk] + beta) / (n_k[kk] + w_beta) * (n_kj[kk, j] + alpha)
        target = uniforms[t - t0] * total
        acc = 0.0
        k_new = K - 1
        for kk in range(K):
            acc += (n_wk[w, kk] + beta) / (n_k[kk] + w_beta) * (n_kj[kk, j] + alpha)
            if acc >= target:
                k_new = kk
                break
        z[t] = k_new
        n_wk[w, k_new] += 1
        n_kj[k_new, j] += 1
        n_k[k_new] += 1


@njit(cache=True)
def _fold_in_doc(word_ids, z, n_jk, phi, alpha, uniforms):
    """Gibbs sweeps for one held-out document against a frozen phi."""
    K = phi.shape[0]
    n = word_ids.shape[0]
    sweeps = uniforms.shape[0] // max(n, 1)
    for s in range(sweeps):
        for i in range(n):
            w = word_ids[i]
            n_jk[z[i]] -= 1
            total = 0.0
            for k in range(K):
                total += phi[k, w] * (n_jk[k] + alpha)
            target = uniforms[s * n + i] * total
            acc = 0.0
            k_new = K - 1
            for k in range(K):
                acc += phi[k, w] * (n_jk[k] + alpha)
                if acc >= target:
                    k_new = k
                    break
            z[i] = k_new
            n_jk[k_new] += 1


def _validate(corpus: Corpus, K: int, iterations: int, seed: int) -> None:
    if K < 1:
        raise ValueError("K must be at least 1")
    if iterations < 0:
        raise ValueError("iterations must be non-negative")
    if seed < 0:
        raise ValueError("seed must be a non-negative integer")
    if len(corpus) == 0:
        raise ValueError("cannot train on an empty corpus")
    if K > len(corpus):
        log.warning("more topics (%d) than documents (%d)", K, len(corpus))


def _init_state(prep: PreparedDocs, K: int, seed: int):
    """Draw initial assignments from each document's own stream."""
    D = len(prep.doc_ids)
    streams = [_doc_stream(seed, _STREAM_SAMPLING, did) for did in prep.doc_ids]
    z = np.empty(prep.word_ids.shape[0], dtype=np.int64)
    doc_index = np.empty_like(prep.word_ids)
    for j in range(D):
        t0, t1 = prep.doc_offsets[j], prep.doc_offsets[j + 1]
        z[t0:t1] = streams[j].integers(0, K, t1 - t0)
        doc_index[t0:t1] = j

    W = len(prep.vocab)
    n_wk = np.zeros((W, K), dtype=np.int64)
    n_kj = np.zeros((K, D), dtype=np.int64)
    np.add.at(n_wk, (prep.word_ids, z), 1)
    np.add.at(n_kj, (z, doc_index), 1)
    return streams, z, doc_index, n_wk, n_kj, n_wk.sum(axis=0)


def _block_uniforms(streams, prep, d0, d1):
    parts = [
        streams[j].random(int(prep.doc_offsets[j + 1] - prep.doc_offsets[j]))
        for j in range(d0, d1)
    ]
    if not parts:
        return np.empty(0, dtype=np.float64)
    return np.concatenate(parts)


def _finish(prep, K, alpha, beta, n_wk, n_kj, seed, iterations) -> TopicModel:
    return TopicModel(
        K=K,
        W=len(prep.vocab),
        alpha=alpha,
        beta=beta,
        vocab=prep.vocab,
        doc_ids=prep.doc_ids,
        N_wk=n_wk,
        N_kj=n_kj,
        N_k=n_wk.sum(axis=0),
        seed=seed,
        iterations=iterations,
    )


def train_lda(
    corpus: Corpus,
    K: int,
    iterations: int = 200,
    alpha: float | None = None,
    beta: float = 0.01,
    seed: int = 0,
    stopwords=DEFAULT_STOPWORDS,
) -> TopicModel:
    """Train by sequential collapsed Gibbs sampling.

    alpha defaults to 50/K.  Identical (corpus, K, iterations, seed) always
    produce an identical model.
    """
    _validate(corpus, K, iterations, seed)
    alpha = 50.0 / K if alpha is None else alpha
    prep = prepare_documents(corpus, stopwords)
    streams, z, doc_index, n_wk, n_kj, n_k = _init_state(prep, K, seed)
    n_tokens = prep.word_ids.shape[0]
    D = len(prep.doc_ids)
    for _ in range(iterations):
        u = _block_uniforms(streams, prep, 0, D)
        _sweep_span(prep.word_ids, doc_index, z, 0, n_tokens, n_wk, n_kj, n_k, alpha, beta, u)
    return _finish(prep, K, alpha, beta, n_wk, n_kj, seed, iterations)


def train_adlda(
    corpus: Corpus,
    K: int,
    iterations: int = 200,
    alpha: float | None = None,
    beta: float = 0.01,
    seed: int = 0,
    workers: int = 1,
    stopwords=DEFAULT_STOPWORDS,
) -> TopicModel:
    """Approximate-distributed variant of train_lda.

    Documents are split into `workers` near-equal contiguous blocks.  Each
    block is swept against a private snapshot of the word-topic counts and
    the per-block deltas are summed back afterwards, so one sweep differs
    from the sequential sampler only in how stale the cross-block counts
    are.  workers=1 is bit-identical to train_lda for the same seed.
    """
    _validate(corpus, K, iterations, seed)
    if workers < 1:
        raise ValueError("workers must be at least 1")
    if workers > len(corpus):
        raise ValueError(
            "cannot split %d documents across %d workers" % (len(corpus), workers)
        )
    alpha = 50.0 / K if alpha is None else alpha
    prep = prepare_documents(corpus, stopwords)
    streams, z, doc_index, n_wk, n_kj, n_k = _init_state(prep, K, seed)
    blocks = np.array_split(np.arange(len(prep.doc_ids)), workers)
    for _ in range(iterations):
        base_wk = n_wk.copy()
        base_k = n_k.copy()
        delta = np.zeros_like(n_wk)
        for block in blocks:
            d0, d1 = int(block[0]), int(block[-1]) + 1
            t0 = int(prep.doc_offsets[d0])
            t1 = int(prep.doc_offsets[d1])
            u = _block_uniforms(streams, prep, d0, d1)
            local_wk = base_wk.copy()
            local_k = base_k.copy()
            _sweep_span(
                prep.word_ids, doc_index, z, t0, t1, local_wk, n_kj, local_k, alpha, beta, u
            )
            delta += local_wk - base_wk
        n_wk = base_wk + delta
        n_k = n_wk.sum(axis=0)
    return _finish(prep, K, alpha, beta, n_wk, n_kj, seed, iterations)


def assign_topics(model: TopicModel) -> dict:
    """Hard topic per document: argmax of smoothed counts, lowest id wins ties."""
    scores = model.N_kj.astype(np.float64) + model.alpha
    best = np.argmax(scores, axis=0)
    return {did: int(best[j]) for j, did in enumerate(model.doc_ids)}


def assign_top_topics(model: TopicModel, n: int) -> dict:
    """Top-n topics per document by smoothed count, ties to the lower id."""
    if not 1 <= n <= model.K:
        raise ValueError("n must be between 1 and K")
    scores = model.N_kj.astype(np.float64) + model.alpha
    out = {}
    for j, did in enumerate(model.doc_ids):
        order = sorted(range(model.K), key=lambda k: (-scores[k, j], k))
        out[did] = order[:n]
    return out


@dataclass
class PerplexityResult:
    value: float
    n_scored: int
    n_oov: int


def perplexity(
    model: TopicModel,
    heldout: Corpus,
    fold_in_iterations: int = 50,
    stopwords=DEFAULT_STOPWORDS,
) -> PerplexityResult:
    """Held-out perplexity exp(-sum log p(w|d) / N).

    Document mixtures for unseen articles are estimated by folding in:
    Gibbs sweeps over the held-out tokens with phi frozen at the trained
    model.  Tokens outside the training vocabulary are dropped and counted
    in n_oov.  A uniform model scores exactly W.
    """
    index = {w: i for i, w in enumerate(model.vocab)}
    phi = model.phi()
    total_log = 0.0
    n_scored = 0
    n_oov = 0
    for article in heldout:
        toks = [t for t in (tok.lower() for tok in article.tokens) if t not in stopwords]
        wids = [index[t] for t in toks if t in index]
        n_oov += len(toks) - len(wids)
        if not wids:
            continue
        wid_arr = np.asarray(wids, dtype=np.int64)
        rng = _doc_stream(model.seed, _STREAM_FOLD_IN, article.id)
        z = rng.integers(0, model.K, wid_arr.shape[0]).astype(np.int64)
        n_jk = np.bincount(z, minlength=model.K).astype(np.int64)
        u = rng.random(fold_in_iterations * wid_arr.shape[0])
        _fold_in_doc(wid_arr, z, n_jk, phi, model.alpha, u)
        theta_d = (n_jk + model.alpha) / (wid_arr.shape[0] + model.K * model.alpha)
        p_w = theta_d @ phi[:, wid_arr]
        total_log += float(np.log(p_w).sum())
        n_scored += wid_arr.shape[0]
    if n_scored == 0:
        raise ValueError("no held-out tokens survive the training vocabulary")
    return PerplexityResult(
        value=float(np.exp(-total_log / n_scored)), n_scored=n_scored, n_oov=n_oov
    )


def top_words(model: TopicModel, n: int = 10) -> list:
    """The n highest-probability words per topic, ties alphabetical."""
    phi = model.phi()
    out = []
    for k in range(model.K):
        order = np.argsort(-phi[k], kind="stable")[:n]
        out.append([model.vocab[i] for i in order])
    return out


def write_topic_report(model: TopicModel, path, n: int = 10) -> None:
    lines = [
        "topic %d: %s" % (k, " ".join(words))
        for k, words in enumerate(top_words(model, n))
    ]
    with open(path, "w", encoding="utf-8") as f:
        f.write("\n".join(lines) + "\n")


def save_model(model: TopicModel, path) -> None:
    np.savez_compressed(
        path,
        format_version=np.int64(MODEL_FORMAT_VERSION),
        K=np.int64(model.K),
        W=np.int64(model.W),
        alpha=np.float64(model.alpha),
        beta=np.float64(model.beta),
        seed=np.int64(model.seed),
        iterations=np.int64(model.iterations),
        vocab=np.asarray(model.vocab, dtype=str),
        doc_ids=np.asarray(model.doc_ids, dtype=str),
        N_wk=model.N_wk,
        N_kj=model.N_kj,
    )


def load_model(path) -> TopicModel:
    with np.load(path) as data:
        version = int(data["format_version"])
        if version != MODEL_FORMAT_VERSION:
            raise ValueError(
                "unsupported model format version %d (expected %d)"
                % (version, MODEL_FORMAT_VERSION)
            )
        n_wk = data["N_wk"]
        return TopicModel(
            K=int(data["K"]),
            W=int(data["W"]),
            alpha=float(data["alpha"]),
            beta=float(data["beta"]),
            vocab=[str(w) for w in data["vocab"]],
            doc_ids=[str(d) for d in data["doc_ids"]],
            N_wk=n_wk,
            N_kj=data["N_kj"],
            N_k=n_wk.sum(axis=0),
            seed=int(data["seed"]),
            iterations=int(data["iterations"]),
        )
