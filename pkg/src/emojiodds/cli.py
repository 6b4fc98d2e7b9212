"""Command-line driver: ``emojiodds {analyze,test,priors,compare}``."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .corpus import FORMATS, EmptyCorpusError, IngestError, compute_priors, load_corpus
from .exact import LAYOUTS, ContingencyTable, StatsError, exact_test, odds_ratio_vs_prior, conditional_mle_odds_ratio
from .lexer import KEY_MODES
from .scoring import ESTIMATES, OUTPUT_FORMATS, _fixed, _sig1, analyze, compare_methods, render_table

PROG = "emojiodds"


class CliError(Exception):
    def __init__(self, message: str, where: str | None = None):
        super().__init__(message)
        self.where = where


def _alpha(text: str) -> float:
    value = float(text)
    if not 0 < value < 1:
        raise argparse.ArgumentTypeError("alpha must lie in (0, 1)")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _add_input(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", required=True, type=Path, help="CSV or JSONL file of rated comments")
    p.add_argument("--format", choices=FORMATS, help="input format (default: from the file suffix)")
    p.add_argument("--text-col", default="text")
    p.add_argument("--rating-col", default="rating")
    p.add_argument("--include-non-emoji", action="store_true",
                   help="keep comments without emoji (changes the priors)")


def _add_analysis(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alpha", type=_alpha, default=0.05)
    p.add_argument("--min-total", type=_positive_int, default=3)
    p.add_argument("--key-mode", choices=KEY_MODES, default="exact-set")
    p.add_argument("--layout", choices=LAYOUTS, default="versus-corpus",
                   help="how the 2x2 table is formed from key counts and priors")
    p.add_argument("--estimate", choices=ESTIMATES, default="conditional-mle",
                   help="which odds ratio goes in the ratio column")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog=PROG, description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="score every emoji key and print the significant entries")
    _add_input(p)
    _add_analysis(p)
    p.add_argument("--out", choices=OUTPUT_FORMATS, default="csv")
    p.add_argument("--paper-style", action="store_true", help="round like the published tables")

    p = sub.add_parser("compare", help="polarity agreement between S score and odds ratios")
    _add_input(p)
    _add_analysis(p)
    p.add_argument("--neutral-undecided", action="store_true",
                   help="treat a leading Neutral entry as carrying no polarity")

    p = sub.add_parser("priors", help="print the corpus icon totals")
    _add_input(p)

    p = sub.add_parser("test", help="exact test for one key/icon against a prior")
    for name, desc in (("a", "comments with the key and the icon"), ("n", "comments with the key"),
                       ("K", "corpus comments with the icon"), ("N", "corpus size")):
        p.add_argument(name, type=int, help=desc)
    p.add_argument("--alt", choices=("greater", "less", "two-sided"), default="greater")
    p.add_argument("--alpha", type=_alpha, default=0.05)
    p.add_argument("--layout", choices=LAYOUTS, default="versus-corpus")
    p.add_argument("--estimate", choices=ESTIMATES, default="conditional-mle")
    return parser


def _load(args):
    try:
        return load_corpus(args.input, args.format, emoji_only=not args.include_non_emoji,
                           text_field=args.text_col, rating_field=args.rating_col)
    except FileNotFoundError:
        raise CliError("no such file", str(args.input)) from None
    except IngestError as exc:
        where = f"{args.input}:{exc.line}" if exc.line else str(args.input)
        raise CliError(str(exc), where) from None


def _analysis_kwargs(args) -> dict:
    return dict(alpha=args.alpha, key_mode=args.key_mode, layout=args.layout, estimate=args.estimate)


def run_analyze(args) -> str:
    rows = analyze(_load(args), args.min_total, **_analysis_kwargs(args))
    return render_table(rows, args.out, args.paper_style)


def run_compare(args) -> str:
    rows = analyze(_load(args), args.min_total, **_analysis_kwargs(args))
    s = compare_methods(rows, neutral_negative=not args.neutral_undecided)
    line = (f"agree {s.agree_count}, disagree {s.disagree_count}, "
            f"undecided {s.undecided_count}, agreement {s.agreement_fraction:.3f}")
    return line + (", empty" if s.empty else "") + "\n"


def run_priors(args) -> str:
    return f"{compute_priors(_load(args))}\n"


def run_test(args) -> str:
    alt = args.alt.replace("-", "_")
    table = ContingencyTable.build(args.a, args.n, args.K, args.N, args.layout)
    result = exact_test(table, alt, args.alpha)
    if args.estimate == "conditional-mle":
        ratio = conditional_mle_odds_ratio(table)
    else:
        ratio = odds_ratio_vs_prior(args.a, args.n, args.K, args.N).ratio
    ci = f"({_fixed(result.ci_low, 1)},{_fixed(result.ci_high, 1)})"
    return f"ratio {_fixed(ratio, 1)}, p {_sig1(result.p_value)}, CI {ci}\n"


COMMANDS = {"analyze": run_analyze, "compare": run_compare, "priors": run_priors, "test": run_test}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        out = COMMANDS[args.command](args)
    except CliError as exc:
        where = f"{exc.where}: " if exc.where else ""
        print(f"{PROG}: error: {where}{exc}", file=sys.stderr)
        return 2
    except (EmptyCorpusError, StatsError) as exc:
        where = f"{args.input}: " if getattr(args, "input", None) else ""
        print(f"{PROG}: error: {where}{exc}", file=sys.stderr)
        return 2
    sys.stdout.write(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
