"""Recompute the published emoji table from its own counts and report agreement.

For each section and each (layout, estimate) combination, counts how many
internally consistent rows reproduce the printed ratio (1 dp), p (1
significant figure) and CI (1 dp). With ``--scan-great`` it also searches for
the Great prior total that best explains the great section.

    python scripts/reproduce_published_table.py [--table tests/fixtures/published_table.csv] [--scan-great]
"""
from __future__ import annotations

import argparse
import math
from pathlib import Path

from emojiodds import ContingencyTable, EmojiKey, IconCounts, PriorDistribution, parse_table_csv
from emojiodds.exact import auto_alternative, fisher_p_value
from emojiodds.icons import TABLE_ORDER, IconRating
from emojiodds.scoring import _sig1, round_half_up, score_counts

ROOT = Path(__file__).resolve().parents[1]
PRIORS = PriorDistribution(great=1870, good=1017, neutral=505, sad=288)
SECTIONS = ("sad", "neutral", "good", "great")


def r1(x: float) -> float:
    return x if math.isinf(x) else round_half_up(x, 1)


def load(path: Path) -> list[dict]:
    with open(path, encoding="utf-8") as fh:
        rows = parse_table_csv(fh)
    out = []
    for rec in rows:
        counts = IconCounts(EmojiKey.from_hex(rec["hex"]), *(rec[i.slug] for i in TABLE_ORDER))
        if counts.total == rec["total"]:
            out.append({**rec, "counts": counts, "icon": IconRating(rec["odds_type"].capitalize())})
    return out


def score(rows, priors, layout, estimate):
    hits = {"ratio": 0, "p": 0, "ci": 0}
    for rec in rows:
        res = score_counts(rec["counts"], priors, layout=layout, estimate=estimate)[rec["icon"]]
        hits["ratio"] += r1(res.ratio) == rec["ratio"]
        hits["p"] += float(_sig1(res.p_value)) == rec["p"]
        hits["ci"] += (r1(res.test.ci_low), r1(res.test.ci_high)) == rec["ci"]
    return hits


def _great_hits(rows, k: int) -> int:
    hits = 0
    for r in rows:
        a, n = r["counts"].great, r["counts"].total
        table = ContingencyTable.versus_corpus(a, n, k, PRIORS.N)
        p = fisher_p_value(table, auto_alternative(a, n, k, PRIORS.N))
        hits += float(_sig1(p)) == r["p"]
    return hits


def scan_great(rows, step: int = 25):
    """Great prior total whose p-values match the most great-section rows (coarse, then fine)."""
    coarse = max(range(500, PRIORS.N, step), key=lambda k: _great_hits(rows, k))
    fine = range(coarse - step, coarse + step + 1)
    k = max(fine, key=lambda k: (_great_hits(rows, k), -abs(k - coarse)))
    return k, _great_hits(rows, k)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--table", type=Path, default=ROOT / "tests/fixtures/published_table.csv")
    parser.add_argument("--scan-great", action="store_true")
    args = parser.parse_args()
    rows = load(args.table)
    print(f"{len(rows)} internally consistent rows; priors {PRIORS}")
    print(f"{'section':8} {'layout':14} {'estimate':16} {'rows':>4} {'ratio':>5} {'p':>4} {'ci':>4}")
    for section in SECTIONS:
        part = [r for r in rows if r["odds_type"] == section]
        for layout in ("versus-corpus", "within-corpus"):
            for estimate in ("conditional-mle", "prior-ratio"):
                h = score(part, PRIORS, layout, estimate)
                print(f"{section:8} {layout:14} {estimate:16} {len(part):4} "
                      f"{h['ratio']:5} {h['p']:4} {h['ci']:4}")
    if args.scan_great:
        great = [r for r in rows if r["odds_type"] == "great"]
        k, hits = scan_great(great)
        print(f"great section: Great prior {k} matches {hits}/{len(great)} printed p-values")


if __name__ == "__main__":
    main()
