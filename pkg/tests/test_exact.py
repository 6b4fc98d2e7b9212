import math
from fractions import Fraction

import pytest

from emojiodds import (
    ContingencyTable,
    DegeneratePriorError,
    IconCounts,
    EmojiKey,
    StatsError,
    conditional_mle_odds_ratio,
    exact_ci,
    fisher_p_value,
    log_hypergeom_pmf,
    noncentral_tail,
    odds_ratio_vs_prior,
    prior_odds,
    s_score,
    sample_odds,
)
from emojiodds.exact import noncentral_mean

import oracles

KEY = EmojiKey((0x1F922,))


def counts(great, good, neutral, sad):
    return IconCounts(KEY, great, good, neutral, sad)


# -- S score ---------------------------------------------------------------------

@pytest.mark.parametrize("c, mean, sd", [
    ((0, 0, 1, 2), -0.83, 0.29),   # 1f922
    ((7, 2, 3, 4), 0.09, 0.88),    # 1f525
    ((7, 0, 0, 0), 1.00, 0.0),     # 1f438
])
def test_s_score_published_rows(c, mean, sd):
    s = s_score(counts(*c))
    assert round(s.mean, 2) == mean
    assert round(s.sd, 2) == sd


def test_s_score_exact_values():
    s = s_score(counts(0, 0, 1, 2))
    assert s.mean == pytest.approx(-2.5 / 3, abs=1e-15)
    # values -0.5, -1, -1: squared deviations 1/9 + 1/36 + 1/36 = 1/6, over 2
    assert s.sd == pytest.approx(math.sqrt(1 / 12), abs=1e-15)


def test_s_score_single_and_empty():
    assert s_score(counts(0, 0, 0, 1)) == s_score(counts(0, 0, 0, 1))
    assert s_score(counts(0, 1, 0, 0)).sd == 0.0
    with pytest.raises(StatsError, match="no observations"):
        s_score(counts(0, 0, 0, 0))


# -- odds ------------------------------------------------------------------------

def test_sample_odds():
    assert sample_odds(18, 33) == pytest.approx(1.2)
    assert sample_odds(0, 5) == 0
    assert sample_odds(4, 4) == math.inf
    with pytest.raises(StatsError):
        sample_odds(0, 0)


def test_prior_odds():
    assert round(prior_odds(1870, 3680), 3) == 1.033
    assert prior_odds(288, 3680) == pytest.approx(288 / 3392)
    assert round(prior_odds(288, 3680), 4) == 0.0849
    assert prior_odds(5, 10) == 1.0
    for K in (0, 10):
        with pytest.raises(DegeneratePriorError, match="degenerate prior"):
            prior_odds(K, 10)


@pytest.mark.parametrize("a, n, K, ratio", [
    (2, 3, 288, 23.5),   # 1f922; 23.56 before rounding
    (5, 6, 505, 31.4),   # 1f926
    (13, 79, 288, 2.3),  # 1f914
])
def test_odds_ratio_vs_prior(a, n, K, ratio):
    res = odds_ratio_vs_prior(a, n, K, 3680)
    assert res.ratio == pytest.approx(a * (3680 - K) / ((n - a) * K))
    assert abs(res.ratio - ratio) < 0.1


def test_odds_ratio_edges():
    assert odds_ratio_vs_prior(4, 4, 288, 3680).ratio == math.inf
    assert odds_ratio_vs_prior(0, 4, 288, 3680).ratio == 0.0


# -- tables ----------------------------------------------------------------------

def test_table_validation():
    with pytest.raises(StatsError):
        ContingencyTable(5, 4, 5, 10)
    with pytest.raises(StatsError):
        ContingencyTable(0, 8, 5, 10)  # a below n + K - N
    with pytest.raises(TypeError):
        ContingencyTable(1.0, 4, 5, 10)


def test_layouts():
    t = ContingencyTable.versus_corpus(2, 3, 288, 3680)
    assert t.cells == (2, 1, 288, 3392)
    t = ContingencyTable.within_corpus(2, 3, 288, 3680)
    assert t.cells == (2, 1, 286, 3391)


# -- central hypergeometric -------------------------------------------------------------

def test_log_pmf_examples():
    assert log_hypergeom_pmf(ContingencyTable(4, 4, 5, 10), 4) == pytest.approx(math.log(5 / 210), rel=1e-14)
    assert log_hypergeom_pmf(ContingencyTable(1, 1, 1, 2), 1) == pytest.approx(math.log(0.5), rel=1e-14)
    with pytest.raises(StatsError, match="outside support"):
        log_hypergeom_pmf(ContingencyTable(4, 4, 5, 10), 5)


@pytest.mark.parametrize("N, K, n, x", [(10**6, 3 * 10**5, 500, 160), (10**5, 288, 79, 13), (3680, 1870, 33, 18)])
def test_log_pmf_large_n_relative_error(N, K, n, x):
    exact = math.log(float(Fraction(math.comb(K, x) * math.comb(N - K, n - x), math.comb(N, n))))
    got = log_hypergeom_pmf(ContingencyTable(x, n, K, N), x)
    assert abs(got - exact) <= 1e-12 * abs(exact)


def test_fisher_examples():
    t = ContingencyTable.within_corpus(2, 3, 288, 3680)
    assert fisher_p_value(t, "greater") == pytest.approx(0.0174, abs=5e-5)
    assert fisher_p_value(ContingencyTable(0, 3, 288, 3680), "greater") == 1.0
    assert fisher_p_value(ContingencyTable(4, 4, 5, 10), "greater") == pytest.approx(5 / 210, rel=1e-12)


def test_fisher_matches_oracle_small():
    for a, (g, l, two) in oracles.fisher_all(7, 9, 20).items():
        t = ContingencyTable(a, 7, 9, 20)
        assert fisher_p_value(t, "greater") == pytest.approx(float(g), abs=1e-12)
        assert fisher_p_value(t, "less") == pytest.approx(float(l), abs=1e-12)
        assert fisher_p_value(t, "two_sided") == pytest.approx(float(two), abs=1e-12)


def test_two_sided_symmetric_table():
    # symmetric pmf: the observed mode gives p = 1
    assert fisher_p_value(ContingencyTable(5, 10, 10, 20), "two_sided") == pytest.approx(1.0)


def test_unknown_alternative():
    with pytest.raises(ValueError):
        fisher_p_value(ContingencyTable(1, 2, 2, 4), "sideways")


# -- noncentral ------------------------------------------------------------------

def test_noncentral_brute_force():
    t = ContingencyTable(3, 4, 5, 10)
    assert noncentral_tail(t, 2.0, "geq") == pytest.approx(480 / 985, rel=1e-13)
    assert noncentral_tail(t, 2.0, "leq") == pytest.approx(float(oracles.noncentral_tail(3, 4, 5, 10, 2, "leq")), rel=1e-13)


def test_noncentral_central_reduction():
    t = ContingencyTable(3, 4, 5, 10)
    assert noncentral_tail(t, 1.0, "geq") == pytest.approx(fisher_p_value(t, "greater"), abs=1e-12)
    assert noncentral_tail(t, 1.0, "leq") == pytest.approx(fisher_p_value(t, "less"), abs=1e-12)


def test_noncentral_lower_bound_is_one():
    t = ContingencyTable(0, 4, 5, 10)
    for psi in (1e-6, 0.3, 1.0, 40.0):
        assert noncentral_tail(t, psi, "geq") == 1.0


def test_noncentral_rejects_bad_psi():
    for psi in (0.0, -1.0):
        with pytest.raises(StatsError):
            noncentral_tail(ContingencyTable(3, 4, 5, 10), psi)


# -- intervals -------------------------------------------------------------------

def test_ci_published_lower_bounds():
    low, high = exact_ci(ContingencyTable.versus_corpus(2, 3, 288, 3680), "greater")
    assert round(low, 1) == 1.8 and high == math.inf
    low, _ = exact_ci(ContingencyTable.versus_corpus(7, 19, 288, 3680), "greater")
    assert round(low, 1) == 2.7


def test_ci_within_corpus_layout_differs():
    # the nested table is slightly more extreme: 2.75 rather than 2.70
    low, _ = exact_ci(ContingencyTable.within_corpus(7, 19, 288, 3680), "greater")
    assert low == pytest.approx(2.75, abs=0.01)


def test_ci_edges():
    assert exact_ci(ContingencyTable(0, 3, 288, 3680), "greater") == (0.0, math.inf)
    assert exact_ci(ContingencyTable(3, 3, 288, 3680), "less") == (0.0, math.inf)


def test_ci_less_side():
    t = ContingencyTable.versus_corpus(2, 84, 288, 3680)
    low, high = exact_ci(t, "less")
    assert low == 0.0
    assert noncentral_tail(t, high, "leq") == pytest.approx(0.05, abs=1e-8)
    assert round(high, 1) == 0.9  # 1f64c sad


def test_ci_two_sided_brackets_both_one_sided():
    t = ContingencyTable(6, 10, 12, 40)
    low2, high2 = exact_ci(t, "two_sided")
    low1, _ = exact_ci(t, "greater")
    _, high1 = exact_ci(t, "less")
    assert low2 < low1 < high1 < high2


# -- conditional MLE -------------------------------------------------------------

def test_mle_boundaries():
    assert conditional_mle_odds_ratio(ContingencyTable(4, 4, 5, 10)) == math.inf
    assert conditional_mle_odds_ratio(ContingencyTable(0, 4, 5, 10)) == 0.0


def test_mle_symmetric_null():
    assert conditional_mle_odds_ratio(ContingencyTable(5, 10, 10, 20)) == pytest.approx(1.0, abs=1e-9)


def test_mle_scan_oracle():
    # frozen from oracles.mle_scan(3, 4, 5, 10) at resolution 1e-4
    mle = conditional_mle_odds_ratio(ContingencyTable(3, 4, 5, 10))
    assert abs(mle - 4.9184) <= 1e-4
    assert noncentral_mean(ContingencyTable(3, 4, 5, 10), mle) == pytest.approx(3.0, abs=1e-9)


def test_mle_published_ratio():
    # the printed 23.5 for 1f922 is this estimate (the prior ratio is 23.56)
    mle = conditional_mle_odds_ratio(ContingencyTable.versus_corpus(2, 3, 288, 3680))
    assert f"{mle:.1f}" == "23.5"
