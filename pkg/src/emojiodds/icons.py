"""The four-icon rating scale and its numeric mapping."""
from __future__ import annotations

import enum


class IconRating(enum.Enum):
    SAD = "Sad"
    NEUTRAL = "Neutral"
    GOOD = "Good"
    GREAT = "Great"

    @property
    def rank(self) -> int:
        """1 (Sad) through 4 (Great), the integer code used by raw exports."""
        return _RANK[self]

    @property
    def score(self) -> float:
        return ICON_SCORES[self]

    @property
    def positive(self) -> bool:
        return self in (IconRating.GOOD, IconRating.GREAT)

    @property
    def slug(self) -> str:
        return self.value.lower()

    def __lt__(self, other: IconRating) -> bool:
        if not isinstance(other, IconRating):
            return NotImplemented
        return self.rank < other.rank


_RANK = {
    IconRating.SAD: 1,
    IconRating.NEUTRAL: 2,
    IconRating.GOOD: 3,
    IconRating.GREAT: 4,
}

ICON_SCORES = {
    IconRating.SAD: -1.0,
    IconRating.NEUTRAL: -0.5,
    IconRating.GOOD: 0.0,
    IconRating.GREAT: 1.0,
}

# column order of the published tables
TABLE_ORDER = (IconRating.GREAT, IconRating.GOOD, IconRating.NEUTRAL, IconRating.SAD)
# section order of the published tables (and tie-break order)
SECTION_ORDER = (IconRating.SAD, IconRating.NEUTRAL, IconRating.GOOD, IconRating.GREAT)
