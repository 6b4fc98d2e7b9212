"""Per-key test battery, significance filtering, method comparison and reports."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, replace
from decimal import ROUND_HALF_UP, Decimal
from typing import Iterable, Literal, Sequence

from .corpus import Corpus, EmptyCorpusError, PriorDistribution, compute_priors
from .exact import (
    INF,
    ContingencyTable,
    DegeneratePriorError,
    ExactTestResult,
    OddsResult,
    SentimentScore,
    auto_alternative,
    conditional_mle_odds_ratio,
    exact_test,
    odds_ratio_vs_prior,
    s_score,
)
from .icons import SECTION_ORDER, TABLE_ORDER, IconRating
from .lexer import EmojiKey, IconCounts, KeyMode, group_by_key

Estimate = Literal["conditional-mle", "prior-ratio"]
ESTIMATES = ("conditional-mle", "prior-ratio")
OUTPUT_FORMATS = ("csv", "markdown", "json")

TABLE_COLUMNS = ("odds_type", "hex", "great", "good", "neutral", "sad", "total",
                 "ratio", "ci", "p", "s", "sd")


@dataclass(frozen=True)
class IconResult:
    """Everything computed for one (key, icon) pair.

    ``ratio`` is the reported estimate: the conditional MLE of ``table`` or
    the plain prior-relative ratio ``odds.ratio``, depending on how the
    analysis was run. Both are always available.
    """

    icon: IconRating
    table: ContingencyTable
    odds: OddsResult
    mle: float
    ratio: float
    test: ExactTestResult

    @property
    def p_value(self) -> float:
        return self.test.p_value


@dataclass(frozen=True)
class EmojiSentimentRow:
    key: EmojiKey
    counts: IconCounts
    s: SentimentScore
    results: dict[IconRating, IconResult]
    selected: tuple[IconRating, ...] = ()

    def __post_init__(self) -> None:
        if set(self.results) != set(IconRating):
            raise ValueError("a row needs exactly one result per icon")

    def __getitem__(self, icon: IconRating) -> IconResult:
        return self.results[icon]

    def significant(self, alpha: float) -> tuple[IconRating, ...]:
        return tuple(i for i in SECTION_ORDER if self.results[i].p_value <= alpha)

    def lead(self) -> IconResult | None:
        """The most significant selected entry.

        Smallest p first, then the larger |log ratio|, then section order.
        """
        if not self.selected:
            return None
        entries = [self.results[i] for i in self.selected]
        return min(entries, key=lambda r: (r.p_value, -_abs_log(r.ratio), r.icon.rank))


@dataclass(frozen=True)
class AgreementSummary:
    agree_count: int
    disagree_count: int
    undecided_count: int
    agreement_fraction: float
    empty: bool = False


def _abs_log(x: float) -> float:
    if x == 0 or math.isinf(x):
        return INF
    return abs(math.log(x))


def score_counts(
    counts: IconCounts,
    priors: PriorDistribution,
    *,
    alpha: float = 0.05,
    layout: str = "versus-corpus",
    estimate: Estimate = "conditional-mle",
) -> EmojiSentimentRow:
    """Run the four icon tests for one key against fixed priors."""
    if estimate not in ESTIMATES:
        raise ValueError(f"unknown estimate {estimate!r}")
    n, N = counts.total, priors.N
    results = {}
    for icon in SECTION_ORDER:
        a, K = counts[icon], priors[icon]
        if not 0 < K < N:
            raise DegeneratePriorError(icon, K, N)
        table = ContingencyTable.build(a, n, K, N, layout)
        odds = odds_ratio_vs_prior(a, n, K, N)
        mle = conditional_mle_odds_ratio(table)
        test = exact_test(table, auto_alternative(a, n, K, N), alpha)
        ratio = mle if estimate == "conditional-mle" else odds.ratio
        results[icon] = IconResult(icon, table, odds, mle, ratio, test)
    row = EmojiSentimentRow(counts.key, counts, s_score(counts), results)
    return replace(row, selected=row.significant(alpha))


def _row_order(row: EmojiSentimentRow):
    lead = row.lead()
    if lead is None:
        return (1, 0, 0.0, -row.counts.total, row.key)
    return (0, SECTION_ORDER.index(lead.icon), -lead.ratio, -row.counts.total, row.key)


def analyze_counts(
    rows: Iterable[IconCounts],
    priors: PriorDistribution,
    min_total: int = 3,
    *,
    alpha: float = 0.05,
    layout: str = "versus-corpus",
    estimate: Estimate = "conditional-mle",
) -> list[EmojiSentimentRow]:
    if priors.N < 1:
        raise EmptyCorpusError()
    for icon in SECTION_ORDER:
        if not 0 < priors[icon] < priors.N:
            raise DegeneratePriorError(icon, priors[icon], priors.N)
    out = [
        score_counts(c, priors, alpha=alpha, layout=layout, estimate=estimate)
        for c in rows
        if c.total >= min_total
    ]
    out.sort(key=_row_order)
    return out


def analyze(
    corpus: Corpus,
    min_total: int = 3,
    *,
    alpha: float = 0.05,
    key_mode: KeyMode = "exact-set",
    layout: str = "versus-corpus",
    estimate: Estimate = "conditional-mle",
) -> list[EmojiSentimentRow]:
    """Score every key with at least ``min_total`` comments.

    Priors come from the corpus itself. Each row keeps all four icon results;
    ``row.selected`` holds the icons with p <= ``alpha``.
    """
    priors = compute_priors(corpus)
    counts = group_by_key(corpus, key_mode)
    return analyze_counts(counts, priors, min_total, alpha=alpha, layout=layout, estimate=estimate)


def filter_significant(rows: Iterable[EmojiSentimentRow], alpha: float = 0.05) -> list[EmojiSentimentRow]:
    out = []
    for row in rows:
        sig = row.significant(alpha)
        if sig:
            out.append(replace(row, selected=sig))
    return out


def _polarity_of_entry(entry: IconResult, neutral_negative: bool) -> int:
    if entry.ratio == 1 or math.isnan(entry.ratio):
        return 0
    if entry.icon is IconRating.NEUTRAL and not neutral_negative:
        return 0
    up = 1 if entry.ratio > 1 else -1
    return up if entry.icon.positive else -up


def compare_methods(rows: Iterable[EmojiSentimentRow], neutral_negative: bool = True) -> AgreementSummary:
    """Count rows where the S-score sign and the lead odds entry agree on polarity."""
    agree = disagree = undecided = 0
    for row in rows:
        lead = row.lead()
        if lead is None:
            continue
        s_pol = (row.s.mean > 0) - (row.s.mean < 0)
        o_pol = _polarity_of_entry(lead, neutral_negative)
        if s_pol == 0 or o_pol == 0:
            undecided += 1
        elif s_pol == o_pol:
            agree += 1
        else:
            disagree += 1
    decided = agree + disagree
    if agree + disagree + undecided == 0:
        return AgreementSummary(0, 0, 0, 0.0, empty=True)
    return AgreementSummary(agree, disagree, undecided, agree / decided if decided else 0.0)


# -- rendering -----------------------------------------------------------------

def round_half_up(x: float, places: int) -> float:
    """Decimal rounding of the shortest repr, ties away from zero."""
    if math.isinf(x) or math.isnan(x):
        return x
    q = Decimal(1).scaleb(-places)
    return float(Decimal(repr(x)).quantize(q, rounding=ROUND_HALF_UP))


def _fixed(x: float, places: int) -> str:
    if math.isinf(x):
        return "Inf" if x > 0 else "-Inf"
    r = round_half_up(x, places) + 0.0  # no "-0.00"
    return f"{r:.{places}f}"


def _sig1(p: float) -> str:
    """One significant figure, ties away from zero (0.0174 -> 0.02, 0.00037 -> 0.0004)."""
    if p == 0 or math.isinf(p) or math.isnan(p):
        return _num(p)
    d = Decimal(repr(p))
    r = d.quantize(Decimal(1).scaleb(d.adjusted()), rounding=ROUND_HALF_UP)
    return repr(float(r))


def _num(x: float) -> str:
    if math.isinf(x):
        return "Inf" if x > 0 else "-Inf"
    return repr(float(x))


def entries(rows: Iterable[EmojiSentimentRow]) -> list[tuple[EmojiSentimentRow, IconResult]]:
    """Selected (row, icon) entries in published order: section, then descending ratio."""
    out = [(row, row.results[icon]) for row in rows for icon in row.selected]
    out.sort(key=lambda e: (SECTION_ORDER.index(e[1].icon), -e[1].ratio, e[0].key))
    return out


def _fields(row: EmojiSentimentRow, res: IconResult, paper_style: bool) -> list[str]:
    t = res.test
    if paper_style:
        ratio, lo, hi = _fixed(res.ratio, 1), _fixed(t.ci_low, 1), _fixed(t.ci_high, 1)
        p, s, sd = _sig1(t.p_value), _fixed(row.s.mean, 2), _fixed(row.s.sd, 2)
    else:
        ratio, lo, hi = _num(res.ratio), _num(t.ci_low), _num(t.ci_high)
        p, s, sd = _num(t.p_value), _num(row.s.mean), _num(row.s.sd)
    counts = [str(c) for c in row.counts.as_tuple()]
    return [res.icon.slug, row.key.hex, *counts, str(row.counts.total),
            ratio, f"({lo},{hi})", p, s, sd]


def _json_rows(rows: Iterable[EmojiSentimentRow]) -> list[dict]:
    def num(x: float):
        return "Inf" if math.isinf(x) else (None if math.isnan(x) else x)

    out = []
    for row in rows:
        icons = {}
        for icon in SECTION_ORDER:
            r = row.results[icon]
            icons[icon.slug] = {
                "a": row.counts[icon],
                "ratio": num(r.ratio),
                "prior_ratio": num(r.odds.ratio),
                "conditional_mle": num(r.mle),
                "sample_odds": num(r.odds.sample_odds),
                "prior_odds": r.odds.prior_odds,
                "p_value": r.test.p_value,
                "alternative": r.test.alternative,
                "ci": [num(r.test.ci_low), num(r.test.ci_high)],
                "alpha": r.test.alpha,
                "selected": icon in row.selected,
                "table": {"a": r.table.a, "n": r.table.n, "K": r.table.K, "N": r.table.N},
            }
        out.append({
            "key": row.key.hex,
            "emoji": row.key.glyphs,
            "counts": {i.slug: row.counts[i] for i in TABLE_ORDER},
            "total": row.counts.total,
            "s": {"mean": row.s.mean, "sd": row.s.sd},
            "icons": icons,
        })
    return out


def render_table(
    rows: Sequence[EmojiSentimentRow], format: str = "csv", paper_style: bool = False
) -> str:
    """Serialize rows.

    csv and markdown give one line per selected (key, icon) entry in the
    column order of the published count table; json gives every row in full
    precision, with infinities written as ``"Inf"``.
    """
    if format == "json":
        return json.dumps(_json_rows(rows), ensure_ascii=False, indent=2) + "\n"
    lines = [_fields(row, res, paper_style) for row, res in entries(rows)]
    if format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(TABLE_COLUMNS)
        writer.writerows(lines)
        return buf.getvalue()
    if format == "markdown":
        out = ["| " + " | ".join(TABLE_COLUMNS) + " |",
               "|" + "---|" * len(TABLE_COLUMNS)]
        out += ["| " + " | ".join(line) + " |" for line in lines]
        return "\n".join(out) + "\n"
    raise ValueError(f"unknown output format {format!r}")


def _parse_num(text: str) -> float:
    text = text.strip()
    if text == "Inf":
        return INF
    if text == "-Inf":
        return -INF
    return float(text)


def parse_table_csv(text: str | io.TextIOBase) -> list[dict]:
    """Read back a csv report (or a transcribed published table) into typed dicts."""
    stream = io.StringIO(text) if isinstance(text, str) else text
    out = []
    for rec in csv.DictReader(stream):
        lo, hi = rec["ci"].strip().strip("()").split(",")
        out.append({
            "odds_type": rec["odds_type"],
            "hex": rec["hex"],
            **{k: int(rec[k]) for k in ("great", "good", "neutral", "sad", "total")},
            "ratio": _parse_num(rec["ratio"]),
            "ci": (_parse_num(lo), _parse_num(hi)),
            "p": _parse_num(rec["p"]),
            "s": _parse_num(rec["s"]),
            "sd": _parse_num(rec["sd"]),
        })
    return out
