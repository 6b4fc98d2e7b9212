"""Emoji extraction and collocation keys.

A comment is reduced to the set of distinct emoji base scalars it contains.
Variation selectors, zero-width joiners and skin-tone modifiers are dropped,
and ZWJ sequences are split into their members, so the key of a comment is
always a set of bare code points ("1f44d", "1f381 1f382", ...).
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Literal

import regex

from .icons import IconRating, TABLE_ORDER

if TYPE_CHECKING:
    from .corpus import Corpus

KeyMode = Literal["exact-set", "per-single"]
KEY_MODES = ("exact-set", "per-single")

# pictographic symbols in the emoji planes count too: some older ones
# (e.g. U+1F592 reversed thumbs up) lack the Extended_Pictographic property
_CANDIDATE = regex.compile(
    r"[\p{Extended_Pictographic}\p{Emoji_Presentation}[\U0001F000-\U0001FAFF&&\p{So}]]",
    regex.V1,
)

_ZWJ = 0x200D
_DROPPED = frozenset(
    [_ZWJ, 0xFE0E, 0xFE0F, 0x20E3]
    + list(range(0x1F3FB, 0x1F400))  # Fitzpatrick skin tones
)


def extract_emoji(text: str) -> frozenset[int]:
    """Return the distinct emoji scalars in ``text``.

    Repeats collapse to one element; modifiers and joiners never appear in
    the result.

    >>> sorted(hex(c) for c in extract_emoji("gracias 👍👍"))
    ['0x1f44d']
    """
    found = set()
    for match in _CANDIDATE.finditer(text):
        cp = ord(match.group())
        if cp not in _DROPPED:
            found.add(cp)
    return frozenset(found)


def has_emoji(text: str) -> bool:
    return bool(extract_emoji(text))


@dataclass(frozen=True, order=True)
class EmojiKey:
    """Sorted, duplicate-free code points of one collocation."""

    codepoints: tuple[int, ...]

    def __post_init__(self) -> None:
        cps = self.codepoints
        if not cps:
            raise ValueError("no emoji")
        if any(b <= a for a, b in zip(cps, cps[1:])):
            raise ValueError(f"codepoints not strictly ascending: {cps}")

    @classmethod
    def from_hex(cls, text: str) -> EmojiKey:
        """Parse the canonical form, e.g. ``"1f381 1f382"`` (any order accepted)."""
        return collocation_key(int(part, 16) for part in text.split())

    @property
    def hex(self) -> str:
        return " ".join(f"{cp:x}" for cp in self.codepoints)

    @property
    def glyphs(self) -> str:
        return "".join(chr(cp) for cp in self.codepoints)

    def __str__(self) -> str:
        return self.hex


def collocation_key(scalars: Iterable[int]) -> EmojiKey:
    """Canonical key of a set of emoji scalars; input order is irrelevant."""
    cps = tuple(sorted(set(scalars)))
    if not cps:
        raise ValueError("no emoji")
    return EmojiKey(cps)


@dataclass(frozen=True)
class IconCounts:
    """Per-icon comment counts for one emoji key (one row of the count table)."""

    key: EmojiKey
    great: int = 0
    good: int = 0
    neutral: int = 0
    sad: int = 0

    def __post_init__(self) -> None:
        for icon in TABLE_ORDER:
            if self[icon] < 0:
                raise ValueError(f"negative count for {icon.value}")

    @property
    def total(self) -> int:
        return self.great + self.good + self.neutral + self.sad

    def __getitem__(self, icon: IconRating) -> int:
        return getattr(self, icon.slug)

    def as_tuple(self) -> tuple[int, int, int, int]:
        """Counts in table order (great, good, neutral, sad)."""
        return (self.great, self.good, self.neutral, self.sad)


def group_by_key(corpus: Corpus, mode: KeyMode = "exact-set") -> list[IconCounts]:
    """Tally ratings per collocation key.

    In ``exact-set`` mode every emoji-bearing comment adds one to the row of
    its full emoji set, so rows are disjoint. In ``per-single`` mode each
    distinct emoji of a comment adds one to its own singleton row instead.
    Comments without emoji are skipped. Rows come back by descending total,
    ties broken by key.
    """
    if mode not in KEY_MODES:
        raise ValueError(f"unknown key mode {mode!r}")
    tallies: dict[EmojiKey, dict[IconRating, int]] = defaultdict(
        lambda: dict.fromkeys(IconRating, 0)
    )
    for comment in corpus.comments:
        scalars = extract_emoji(comment.text)
        if not scalars:
            continue
        if mode == "exact-set":
            tallies[collocation_key(scalars)][comment.rating] += 1
        else:
            for cp in scalars:
                tallies[EmojiKey((cp,))][comment.rating] += 1

    rows = [
        IconCounts(key, **{icon.slug: c for icon, c in counts.items()})
        for key, counts in tallies.items()
    ]
    rows.sort(key=lambda r: (-r.total, r.key))
    return rows
