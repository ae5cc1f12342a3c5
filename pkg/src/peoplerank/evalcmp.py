"""Statistical comparison of two ranked people lists.

The signed-rank test follows the textbook normal approximation: zero
differences are dropped, absolute differences get mid-ranks, and

    z = (W - n(n+1)/4) / sqrt(n(n+1)(2n+1)/24 - sum(t^3 - t)/48)

with W = min(W+, W-) and t running over tie group sizes.
"""

import csv
import json
import math
from collections import Counter
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable


@dataclass(frozen=True)
class RankPairSample:
    person: str
    rank_a: int
    rank_b: int

    @property
    def difference(self) -> float:
        return self.rank_a - self.rank_b


@dataclass
class WilcoxonResult:
    n_used: int
    n_zero: int
    w_plus: float
    w_minus: float
    w: float
    z: float | None
    p_one_tailed: float | None
    p_two_tailed: float | None
    degenerate: bool = False


def _normal_cdf(z: float) -> float:
    return 0.5 * math.erfc(-z / math.sqrt(2.0))


def wilcoxon_signed_rank(samples: Iterable) -> WilcoxonResult:
    """Signed-rank test over paired samples (or raw differences).

    Accepts RankPairSample objects or plain numbers.  With no nonzero
    differences the result is flagged degenerate and carries no p-values.
    """
    diffs = [float(getattr(s, "difference", s)) for s in samples]
    nonzero = [d for d in diffs if d != 0]
    n_zero = len(diffs) - len(nonzero)
    n = len(nonzero)
    if n == 0:
        return WilcoxonResult(0, n_zero, 0.0, 0.0, 0.0, None, None, None, True)

    by_abs = sorted(range(n), key=lambda i: abs(nonzero[i]))
    ranks = [0.0] * n
    i = 0
    while i < n:
        j = i
        while j < n and abs(nonzero[by_abs[j]]) == abs(nonzero[by_abs[i]]):
            j += 1
        mid = (i + 1 + j) / 2  # average of positions i+1 .. j
        for idx in by_abs[i:j]:
            ranks[idx] = mid
        i = j

    w_plus = sum(r for d, r in zip(nonzero, ranks) if d > 0)
    w_minus = sum(r for d, r in zip(nonzero, ranks) if d < 0)
    w = min(w_plus, w_minus)

    tie_sizes = Counter(abs(d) for d in nonzero).values()
    var = n * (n + 1) * (2 * n + 1) / 24 - sum(t**3 - t for t in tie_sizes) / 48
    if var <= 0:
        return WilcoxonResult(n, n_zero, w_plus, w_minus, w, None, None, None, True)

    z = (w - n * (n + 1) / 4) / math.sqrt(var)
    p_one = _normal_cdf(z)
    return WilcoxonResult(
        n_used=n,
        n_zero=n_zero,
        w_plus=w_plus,
        w_minus=w_minus,
        w=w,
        z=z,
        p_one_tailed=p_one,
        p_two_tailed=min(1.0, 2 * p_one),
    )


@dataclass
class BucketAverage:
    start_rank: int  # 1-based, inclusive
    end_rank: int
    mean_ipi: float


def average_ipi_buckets(ipis: list, bucket_size: int) -> list:
    """Mean IPI over consecutive rank buckets; the tail bucket may be short."""
    if bucket_size <= 0:
        raise ValueError("bucket_size must be positive")
    out = []
    for start in range(0, len(ipis), bucket_size):
        chunk = ipis[start : start + bucket_size]
        out.append(
            BucketAverage(
                start_rank=start + 1,
                end_rank=start + len(chunk),
                mean_ipi=sum(chunk) / len(chunk),
            )
        )
    return out


@dataclass
class ComparisonReport:
    n_common: int
    only_in_a: list
    only_in_b: list
    samples: list  # RankPairSample for the common persons
    wilcoxon: WilcoxonResult
    buckets_a: list
    buckets_b: list
    labels: tuple = ("a", "b")

    def rank_deltas(self) -> dict:
        return {s.person: s.rank_a - s.rank_b for s in self.samples}


def compare_lists(
    ranked_a: list,
    ranked_b: list,
    bucket_size: int = 100,
    labels: tuple = ("a", "b"),
) -> ComparisonReport:
    """Compare two rank_all outputs over their common persons.

    Persons missing from one list are reported, not scored.  Lists with no
    common person cannot be compared and raise ValueError.
    """
    pos_a = {r.person: r.rank for r in ranked_a}
    pos_b = {r.person: r.rank for r in ranked_b}
    common = sorted(set(pos_a) & set(pos_b))
    if not common:
        raise ValueError("ranked lists share no persons")
    samples = [RankPairSample(p, pos_a[p], pos_b[p]) for p in common]
    return ComparisonReport(
        n_common=len(common),
        only_in_a=sorted(set(pos_a) - set(pos_b)),
        only_in_b=sorted(set(pos_b) - set(pos_a)),
        samples=samples,
        wilcoxon=wilcoxon_signed_rank(samples),
        buckets_a=average_ipi_buckets([r.ipi for r in ranked_a], bucket_size),
        buckets_b=average_ipi_buckets([r.ipi for r in ranked_b], bucket_size),
        labels=labels,
    )


def report_to_dict(report: ComparisonReport) -> dict:
    return {
        "labels": list(report.labels),
        "n_common": report.n_common,
        "only_in_a": report.only_in_a,
        "only_in_b": report.only_in_b,
        "wilcoxon": asdict(report.wilcoxon),
        "rank_deltas": report.rank_deltas(),
        "buckets": {
            report.labels[0]: [asdict(b) for b in report.buckets_a],
            report.labels[1]: [asdict(b) for b in report.buckets_b],
        },
    }


def write_comparison_json(report: ComparisonReport, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(report_to_dict(report), indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )


def write_bucket_csv(report: ComparisonReport, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["list", "start_rank", "end_rank", "mean_ipi"])
        for label, buckets in zip(
            report.labels, (report.buckets_a, report.buckets_b)
        ):
            for b in buckets:
                writer.writerow([label, b.start_rank, b.end_rank, "%.6f" % b.mean_ipi])
