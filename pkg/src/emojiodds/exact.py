"""Exact statistics for one (emoji key, icon) pair.

A :class:`ContingencyTable` is stored by its margins: ``a`` is the top-left
cell, ``n`` the first row total, ``K`` the first column total and ``N`` the
grand total. Under fixed margins ``a`` follows a hypergeometric law (Fisher's
noncentral hypergeometric law when the odds ratio is ``psi``), which is all
the tests and intervals here need.

Two ways of building the table from an emoji's counts and the corpus priors
are provided: :meth:`ContingencyTable.versus_corpus` puts the emoji's
comments in one row and the whole corpus in the other (this is what
reproduces the published tables), :meth:`ContingencyTable.within_corpus`
treats the emoji's comments as a subset of the corpus.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Literal

import numpy as np
from scipy.special import gammaln

from .icons import IconRating

Alternative = Literal["greater", "less", "two_sided"]
ALTERNATIVES = ("greater", "less", "two_sided")
Layout = Literal["versus-corpus", "within-corpus"]
LAYOUTS = ("versus-corpus", "within-corpus")

INF = math.inf
TWO_SIDED_SLACK = 1e-7
TAIL_TOL = 1e-8
MAX_STEPS = 200


class StatsError(ValueError):
    pass


class DegeneratePriorError(StatsError):
    def __init__(self, icon: IconRating | None = None, K: int | None = None, N: int | None = None):
        where = f" for {icon.value}" if icon is not None else ""
        super().__init__(f"degenerate prior{where} (K={K}, N={N})")
        self.icon = icon


class CIInversionError(StatsError):
    def __init__(self) -> None:
        super().__init__("CI inversion failed")


@dataclass(frozen=True)
class ContingencyTable:
    a: int
    n: int
    K: int
    N: int

    def __post_init__(self) -> None:
        a, n, K, N = self.a, self.n, self.K, self.N
        if not all(isinstance(v, (int, np.integer)) for v in (a, n, K, N)):
            raise TypeError("table entries must be integers")
        if not (0 <= a <= n <= N and a <= K <= N and a >= max(0, n + K - N)):
            raise StatsError(f"invalid contingency table a={a}, n={n}, K={K}, N={N}")

    @classmethod
    def versus_corpus(cls, a: int, n: int, K: int, N: int) -> ContingencyTable:
        """Rows (a, n-a) for the emoji and (K, N-K) for the whole corpus."""
        return cls(a, n, K + a, N + n)

    @classmethod
    def within_corpus(cls, a: int, n: int, K: int, N: int) -> ContingencyTable:
        """Rows (a, n-a) for the emoji and (K-a, N-n-K+a) for the rest of the corpus."""
        return cls(a, n, K, N)

    @classmethod
    def build(cls, a: int, n: int, K: int, N: int, layout: Layout = "versus-corpus") -> ContingencyTable:
        if layout == "versus-corpus":
            return cls.versus_corpus(a, n, K, N)
        if layout == "within-corpus":
            return cls.within_corpus(a, n, K, N)
        raise ValueError(f"unknown layout {layout!r}")

    @property
    def cells(self) -> tuple[int, int, int, int]:
        a, n, K, N = self.a, self.n, self.K, self.N
        return a, n - a, K - a, N - n - K + a

    @property
    def support(self) -> tuple[int, int]:
        return max(0, self.n + self.K - self.N), min(self.n, self.K)


@dataclass(frozen=True)
class SentimentScore:
    mean: float
    sd: float


@dataclass(frozen=True)
class OddsResult:
    sample_odds: float
    prior_odds: float
    ratio: float


@dataclass(frozen=True)
class ExactTestResult:
    p_value: float
    alternative: str
    ci_low: float
    ci_high: float
    alpha: float = 0.05


# -- S score -----------------------------------------------------------------

def s_score(counts) -> SentimentScore:
    """Mean and sample SD of the icon ratings mapped to -1, -0.5, 0, +1.

    ``counts`` is anything indexable by :class:`IconRating` with a ``total``
    (an ``IconCounts`` row, for instance).
    """
    total = counts.total
    if total <= 0:
        raise StatsError("no observations")
    mean = math.fsum(counts[icon] * icon.score for icon in IconRating) / total
    if total == 1:
        return SentimentScore(mean, 0.0)
    ss = math.fsum(counts[icon] * (icon.score - mean) ** 2 for icon in IconRating)
    return SentimentScore(mean, math.sqrt(ss / (total - 1)))


# -- odds --------------------------------------------------------------------

def sample_odds(a: int, n: int) -> float:
    if n <= 0:
        raise StatsError("sample odds need n >= 1")
    if not 0 <= a <= n:
        raise StatsError(f"count {a} outside [0, {n}]")
    if a == n:
        return INF
    return a / (n - a)


def prior_odds(K: int, N: int) -> float:
    if not 0 < K < N:
        raise DegeneratePriorError(K=K, N=N)
    return K / (N - K)


def odds_ratio_vs_prior(a: int, n: int, K: int, N: int) -> OddsResult:
    """Odds of the icon among the key's ``n`` comments over the corpus odds ``K/(N-K)``."""
    po = prior_odds(K, N)
    so = sample_odds(a, n)
    if a == n:
        ratio = INF
    elif a == 0:
        ratio = 0.0
    else:
        ratio = (a * (N - K)) / ((n - a) * K)
    return OddsResult(so, po, ratio)


# -- central hypergeometric ----------------------------------------------------

_LN_SQRT_2PI = 0.5 * math.log(2 * math.pi)
_LN_2PI = math.log(2 * math.pi)


def _stirlerr(n: np.ndarray) -> np.ndarray:
    """log(n!) - log(sqrt(2 pi n) (n/e)^n), the Stirling-formula error."""
    n = np.atleast_1d(np.asarray(n, dtype=float))
    out = np.zeros_like(n)
    small = (n > 0) & (n <= 15)
    ns = n[small]
    out[small] = gammaln(ns + 1) - (ns + 0.5) * np.log(ns) + ns - _LN_SQRT_2PI
    big = n > 15
    nb = n[big]
    nn = nb * nb
    s0, s1, s2, s3, s4 = 1 / 12, 1 / 360, 1 / 1260, 1 / 1680, 1 / 1188
    out[big] = np.select(
        [nb > 500, nb > 80, nb > 35],
        [(s0 - s1 / nn) / nb,
         (s0 - (s1 - s2 / nn) / nn) / nb,
         (s0 - (s1 - (s2 - s3 / nn) / nn) / nn) / nb],
        (s0 - (s1 - (s2 - (s3 - s4 / nn) / nn) / nn) / nn) / nb,
    )
    return out


def _bd0(x: np.ndarray, m: np.ndarray) -> np.ndarray:
    """Deviance term x log(x/m) + m - x, without cancellation when x ~ m."""
    x, m = np.broadcast_arrays(np.atleast_1d(np.asarray(x, dtype=float)), np.asarray(m, dtype=float))
    with np.errstate(divide="ignore", invalid="ignore"):
        out = x * np.log(x / m) + m - x
        close = np.abs(x - m) < 0.1 * (x + m)
        if close.any():
            xc, mc = x[close], m[close]
            v = (xc - mc) / (xc + mc)
            acc = (xc - mc) * v
            ej = 2 * xc * v
            v2 = v * v
            for j in range(1, 60):
                ej = ej * v2
                nxt = acc + ej / (2 * j + 1)
                if np.array_equal(nxt, acc):
                    break
                acc = nxt
            out[close] = acc
    return out


def _log_dbinom(x, n, p: float, q: float) -> np.ndarray:
    """log of the binomial pmf by Loader's saddle-point expansion."""
    x, n = np.broadcast_arrays(np.atleast_1d(np.asarray(x, dtype=float)), np.asarray(n, dtype=float))
    with np.errstate(divide="ignore", invalid="ignore"):
        inner = (_stirlerr(n) - _stirlerr(x) - _stirlerr(n - x)
                 - _bd0(x, n * p) - _bd0(n - x, n * q))
        inner = inner - 0.5 * (_LN_2PI + np.log(x) + np.log1p(-x / n))
        log_q = math.log1p(-p) if p < 0.5 else (math.log(q) if q > 0 else -math.inf)
        log_p = math.log1p(-q) if q < 0.5 else (math.log(p) if p > 0 else -math.inf)
        edge0 = np.where(n == 0, 0.0, n * log_q)
        edgen = np.where(n == 0, 0.0, n * log_p)
        out = np.where(x == 0, edge0, np.where(x == n, edgen, inner))
    return np.where(n == 0, 0.0, out)


def _log_pmf(x, n: int, K: int, N: int) -> np.ndarray:
    # C(K,x) C(N-K,n-x) / C(N,n) as a ratio of three binomial pmfs at p = n/N
    x = np.atleast_1d(np.asarray(x, dtype=float))
    p, q = n / N, (N - n) / N
    return _log_dbinom(x, K, p, q) + _log_dbinom(n - x, N - K, p, q) - _log_dbinom(n, N, p, q)


# below this N the weights C(K,x) C(N-K,n-x) are summed as exact integers;
# C(N,n) stays above the smallest normal float, so every pmf value is a
# correctly rounded int/int quotient
EXACT_N = 1000


def _exact_pmf(lo: int, hi: int, n: int, K: int, N: int) -> np.ndarray:
    w = math.comb(K, lo) * math.comb(N - K, n - lo)
    out = []
    for x in range(lo, hi + 1):
        out.append(w)
        w = w * (K - x) * (n - x) // ((x + 1) * (N - K - n + x + 1)) if x < hi else 0
    total = math.comb(N, n)
    return np.array([v / total for v in out])


@lru_cache(maxsize=8192)
def _central(n: int, K: int, N: int) -> tuple[int, np.ndarray, np.ndarray, np.ndarray]:
    """Support start, support points, log pmf and pmf of the central law."""
    lo, hi = max(0, n + K - N), min(n, K)
    x = np.arange(lo, hi + 1, dtype=float)
    if N <= EXACT_N:
        pmf = _exact_pmf(lo, hi, n, K, N)
        logp = np.log(pmf)
    else:
        logp = _log_pmf(x, n, K, N)
        pmf = np.exp(logp)
    for arr in (x, logp, pmf):
        arr.setflags(write=False)
    return lo, x, logp, pmf


def log_hypergeom_pmf(table: ContingencyTable, x: int) -> float:
    """log P(X = x) for the central hypergeometric law with the table's margins."""
    lo, hi = table.support
    if not lo <= x <= hi:
        raise StatsError(f"{x} outside support [{lo}, {hi}]")
    return float(_central(table.n, table.K, table.N)[2][x - lo])


def _stable_sum(values: np.ndarray) -> float:
    return math.fsum(np.sort(values))


def fisher_p_value(table: ContingencyTable, alternative: Alternative = "greater") -> float:
    """Exact Fisher test p-value for the table.

    ``greater`` and ``less`` are the upper and lower hypergeometric tails at
    ``a``. ``two_sided`` sums every outcome no more likely than ``a``, with a
    relative slack of 1e-7 so ties survive rounding.
    """
    lo, hi = table.support
    a = table.a
    if alternative == "greater":
        if a == lo:
            return 1.0
    elif alternative == "less":
        if a == hi:
            return 1.0
    elif alternative != "two_sided":
        raise ValueError(f"unknown alternative {alternative!r}")
    base, _, _, pmf = _central(table.n, table.K, table.N)
    i = a - base
    if alternative == "greater":
        p = _stable_sum(pmf[i:])
    elif alternative == "less":
        p = _stable_sum(pmf[: i + 1])
    else:
        p = _stable_sum(pmf[pmf <= pmf[i] * (1 + TWO_SIDED_SLACK)])
    return min(p, 1.0)


# -- noncentral hypergeometric -------------------------------------------------

def _weights(table: ContingencyTable, log_psi: float) -> tuple[int, np.ndarray]:
    base, x, logp, _ = _central(table.n, table.K, table.N)
    logw = logp + x * log_psi
    w = np.exp(logw - logw.max())
    return base, w


def _tail(table: ContingencyTable, log_psi: float, direction: str) -> float:
    lo, hi = table.support
    a = table.a
    if direction == "geq":
        if a == lo:
            return 1.0
    elif direction == "leq":
        if a == hi:
            return 1.0
    else:
        raise ValueError(f"unknown direction {direction!r}")
    base, w = _weights(table, log_psi)
    i = a - base
    part = w[i:] if direction == "geq" else w[: i + 1]
    return min(_stable_sum(part) / _stable_sum(w), 1.0)


def _tail_fn(table: ContingencyTable, direction: str):
    """Fast tail evaluator in log psi for root finding (plain float sums)."""
    base, x, logp, _ = _central(table.n, table.K, table.N)
    i = table.a - base
    sl = slice(i, None) if direction == "geq" else slice(None, i + 1)

    def tail(log_psi: float) -> float:
        logw = logp + x * log_psi
        w = np.exp(logw - logw.max())
        return float(w[sl].sum() / w.sum())

    return tail


def noncentral_tail(table: ContingencyTable, psi: float, direction: str = "geq") -> float:
    """P(X >= a) (``geq``) or P(X <= a) (``leq``) with odds ratio ``psi``."""
    if not psi > 0:
        raise StatsError("psi must be positive")
    if math.isinf(psi):
        raise StatsError("psi must be finite")
    return _tail(table, math.log(psi), direction)


def noncentral_mean(table: ContingencyTable, psi: float) -> float:
    if not 0 < psi < INF:
        raise StatsError("psi must be positive and finite")
    return _mean_var(table, math.log(psi))[0]


def _mean_var(table: ContingencyTable, log_psi: float) -> tuple[float, float]:
    base, w = _weights(table, log_psi)
    _, x, _, _ = _central(table.n, table.K, table.N)
    p = w / w.sum()
    mean = float(p @ x)
    var = float(p @ (x - mean) ** 2)
    return mean, var


def _bracket(f, target: float) -> tuple[float, float]:
    """Expand [lo, hi] in log-psi until the increasing ``f`` straddles ``target``."""
    lo, hi, step = -1.0, 1.0, 2.0
    while f(lo) > target:
        lo -= step
        step *= 2
        if lo < -745:
            raise CIInversionError()
    step = 2.0
    while f(hi) < target:
        hi += step
        step *= 2
        if hi > 745:
            raise CIInversionError()
    return lo, hi


def _bisect_log_psi(f, target: float, tol: float = TAIL_TOL) -> float:
    """Root of increasing ``f(log_psi) = target`` by bisection; returns psi."""
    lo, hi = _bracket(f, target)
    for _ in range(MAX_STEPS):
        mid = 0.5 * (lo + hi)
        diff = f(mid) - target
        if abs(diff) <= tol or mid in (lo, hi):
            return math.exp(mid)
        if diff < 0:
            lo = mid
        else:
            hi = mid
    raise CIInversionError()


def exact_ci(
    table: ContingencyTable, alternative: Alternative = "greater", alpha: float = 0.05
) -> tuple[float, float]:
    """Exact confidence interval for the odds ratio by inverting the tails.

    One-sided intervals are ``(psi_L, inf)`` for ``greater`` and
    ``(0, psi_U)`` for ``less``; ``two_sided`` combines both at ``alpha/2``.
    """
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    lo, hi = table.support
    if alternative == "two_sided":
        low, _ = exact_ci(table, "greater", alpha / 2)
        _, high = exact_ci(table, "less", alpha / 2)
        return low, high
    if alternative == "greater":
        if table.a == lo:
            return 0.0, INF
        psi = _bisect_log_psi(_tail_fn(table, "geq"), alpha)
        return psi, INF
    if alternative == "less":
        if table.a == hi:
            return 0.0, INF
        # P(X <= a) falls as psi grows
        leq = _tail_fn(table, "leq")
        psi = _bisect_log_psi(lambda t: -leq(t), -alpha)
        return 0.0, psi
    raise ValueError(f"unknown alternative {alternative!r}")


def conditional_mle_odds_ratio(table: ContingencyTable, tol: float = 1e-10) -> float:
    """Conditional maximum-likelihood odds ratio.

    The psi whose noncentral mean equals the observed ``a``; 0 and inf at the
    lower and upper ends of the support, NaN when the support is one point.
    Safeguarded Newton steps on log psi (the mean's derivative there is the
    variance), falling back to bisection when a step leaves the bracket.
    """
    lo, hi = table.support
    a = table.a
    if lo == hi:
        return math.nan
    if a == lo:
        return 0.0
    if a == hi:
        return INF
    f = lambda t: _mean_var(table, t)[0]  # noqa: E731
    left, right = _bracket(f, a)
    t = 0.0 if left < 0.0 < right else 0.5 * (left + right)
    for _ in range(MAX_STEPS):
        mean, var = _mean_var(table, t)
        diff = mean - a
        if abs(diff) <= tol * max(1.0, a):
            return math.exp(t)
        if diff < 0:
            left = t
        else:
            right = t
        step = t - diff / var if var > 0 else math.nan
        t = step if left < step < right else 0.5 * (left + right)
        if right - left <= 4 * np.finfo(float).eps * max(1.0, abs(t)):
            return math.exp(t)
    raise StatsError("conditional MLE did not converge")


def exact_test(
    table: ContingencyTable, alternative: Alternative = "greater", alpha: float = 0.05
) -> ExactTestResult:
    """p-value and matching exact interval in one result."""
    p = fisher_p_value(table, alternative)
    low, high = exact_ci(table, alternative, alpha)
    return ExactTestResult(p, alternative, low, high, alpha)


def auto_alternative(a: int, n: int, K: int, N: int) -> str:
    """``greater`` when the key's icon odds are at least the prior odds, else ``less``."""
    return "greater" if a * (N - K) >= (n - a) * K else "less"
