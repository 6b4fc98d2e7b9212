"""Emoji sentiment scores from icon-rated comments.

Two scores per emoji key: the averaged S score over ratings mapped to
{-1, -0.5, 0, +1}, and per-icon odds ratios against the corpus-wide icon
distribution with exact Fisher p-values and one-sided exact intervals.
"""
__version__ = "0.1.0"

from .icons import IconRating
from .corpus import (
    Comment,
    Corpus,
    EmptyCorpusError,
    IngestError,
    PriorDistribution,
    compute_priors,
    ingest_corpus,
    load_corpus,
    parse_rating,
    read_records,
)
from .lexer import EmojiKey, IconCounts, collocation_key, extract_emoji, group_by_key
from .exact import (
    CIInversionError,
    ContingencyTable,
    DegeneratePriorError,
    ExactTestResult,
    OddsResult,
    SentimentScore,
    StatsError,
    conditional_mle_odds_ratio,
    exact_ci,
    exact_test,
    fisher_p_value,
    log_hypergeom_pmf,
    noncentral_tail,
    odds_ratio_vs_prior,
    prior_odds,
    s_score,
    sample_odds,
)
from .scoring import (
    AgreementSummary,
    EmojiSentimentRow,
    IconResult,
    analyze,
    analyze_counts,
    compare_methods,
    filter_significant,
    parse_table_csv,
    render_table,
)

__all__ = [name for name in dir() if not name.startswith("_")]
