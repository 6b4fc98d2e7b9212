"""Build a synthetic rated-comment corpus consistent with the published tables.

Every internally consistent row of ``tests/fixtures/published_table.csv`` (icon counts
summing to the printed total) becomes a block of comments carrying that emoji
key. Filler keys, each rated close to the corpus-wide icon mix, top the icon
totals up to Great 1870, Good 1017, Neutral 505, Sad 288 (N = 3680).

    python scripts/build_published_corpus.py [--out tests/fixtures/published_corpus.csv]
"""
from __future__ import annotations

import argparse
import csv
import random
from pathlib import Path

from emojiodds import IconCounts, PriorDistribution, analyze_counts, extract_emoji
from emojiodds.icons import TABLE_ORDER
from emojiodds.lexer import EmojiKey

ROOT = Path(__file__).resolve().parents[1]
PUBLISHED_PRIORS = PriorDistribution(great=1870, good=1017, neutral=505, sad=288)
FILLER_SIZE = 40
# transport and map symbols: none of them appear in the published tables
FILLER_POOL = range(0x1F680, 0x1F6C6)


def consistent_rows(path: Path) -> dict[str, tuple[int, int, int, int]]:
    keys: dict[str, tuple[int, int, int, int]] = {}
    with open(path, encoding="utf-8", newline="") as fh:
        for rec in csv.DictReader(fh):
            counts = tuple(int(rec[i.slug]) for i in TABLE_ORDER)
            if sum(counts) != int(rec["total"]):
                continue
            hex_key = EmojiKey.from_hex(rec["hex"]).hex
            if keys.setdefault(hex_key, counts) != counts:
                raise SystemExit(f"conflicting counts for {hex_key}")
    return keys


def filler_blocks(remaining: list[int], used: set[int]) -> list[tuple[int, list[int]]]:
    """Split the leftover icon totals into keys of ~FILLER_SIZE comments in prior proportion."""
    pool = [cp for cp in FILLER_POOL if cp not in used and extract_emoji(chr(cp))]
    blocks = []
    left = list(remaining)
    while sum(left) > 0:
        total = sum(left)
        size = min(FILLER_SIZE, total)
        share = [round(size * c / total) for c in left]
        share = [min(s, c) for s, c in zip(share, left)]
        if sum(share) == 0:
            share[left.index(max(left))] = 1
        blocks.append((pool.pop(0), share))
        left = [c - s for c, s in zip(left, share)]
    return blocks


def build(published: Path, seed: int = 2018) -> list[dict]:
    keys = consistent_rows(published)
    target = [PUBLISHED_PRIORS[i] for i in TABLE_ORDER]
    used_sum = [sum(c[j] for c in keys.values()) for j in range(4)]
    remaining = [t - u for t, u in zip(target, used_sum)]
    if min(remaining) < 0:
        raise SystemExit("table rows exceed the priors")
    used = {int(p, 16) for k in keys for p in k.split()}

    blocks = [(EmojiKey.from_hex(k), list(c)) for k, c in keys.items()]
    blocks += [(EmojiKey((cp,)), share) for cp, share in filler_blocks(remaining, used)]

    # filler must stay non-significant so the table rows are the only findings
    filler = [IconCounts(key, *share) for key, share in blocks[len(keys):]]
    for row in analyze_counts(filler, PUBLISHED_PRIORS, min_total=1):
        if row.selected:
            raise SystemExit(f"filler key {row.key} is significant: {row.selected}")

    records = []
    for key, share in blocks:
        for icon, count in zip(TABLE_ORDER, share):
            for _ in range(count):
                records.append({"text": f"comentario {key.glyphs}", "rating": icon.value})
    random.Random(seed).shuffle(records)
    return [{"id": i, **r} for i, r in enumerate(records)]


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--table", type=Path, default=ROOT / "tests/fixtures/published_table.csv")
    parser.add_argument("--out", type=Path, default=ROOT / "tests/fixtures/published_corpus.csv")
    args = parser.parse_args()
    records = build(args.table)
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=["id", "text", "rating"], lineterminator="\n")
        writer.writeheader()
        writer.writerows(records)
    print(f"wrote {len(records)} comments to {args.out}")


if __name__ == "__main__":
    main()
