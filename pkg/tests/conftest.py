from pathlib import Path

import pytest

from emojiodds import EmojiKey, IconCounts, PriorDistribution, load_corpus, parse_table_csv
from emojiodds.icons import TABLE_ORDER

FIXTURES = Path(__file__).parent / "fixtures"
PUBLISHED_PRIORS = PriorDistribution(great=1870, good=1017, neutral=505, sad=288)

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def load_published_table() -> list[dict]:
    with open(FIXTURES / "published_table.csv", encoding="utf-8") as fh:
        rows = parse_table_csv(fh)
    for row in rows:
        row["counts"] = IconCounts(EmojiKey.from_hex(row["hex"]),
                                   *(row[i.slug] for i in TABLE_ORDER))
        row["consistent"] = row["counts"].total == row["total"]
    return rows


@pytest.fixture(scope="session")
def published():
    return load_published_table()


@pytest.fixture(scope="session")
def published_priors():
    return PUBLISHED_PRIORS


@pytest.fixture(scope="session")
def published_corpus():
    return load_corpus(FIXTURES / "published_corpus.csv")
