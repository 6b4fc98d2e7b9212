"""Loading rated comments and computing the corpus-wide icon priors."""
from __future__ import annotations

import csv
import io
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Iterator, Mapping

from .icons import IconRating, TABLE_ORDER
from .lexer import has_emoji

log = logging.getLogger(__name__)

FORMATS = ("csv", "jsonl")

_BASE_LABELS: dict[str, IconRating] = {
    **{icon.value.lower(): icon for icon in IconRating},
    **{str(icon.rank): icon for icon in IconRating},
}


class IngestError(ValueError):
    """A record could not be turned into a Comment.

    ``index`` is the 0-based record number, ``line`` the 1-based source line
    when the record came from a file.
    """

    def __init__(self, message: str, index: int | None = None, line: int | None = None):
        super().__init__(message)
        self.index = index
        self.line = line


class EmptyCorpusError(ValueError):
    def __init__(self, message: str = "empty corpus"):
        super().__init__(message)


@dataclass(frozen=True)
class Comment:
    id: Any
    text: str
    rating: IconRating


@dataclass(frozen=True)
class Corpus:
    comments: tuple[Comment, ...]
    emoji_only: bool = True

    def __len__(self) -> int:
        return len(self.comments)

    def __iter__(self) -> Iterator[Comment]:
        return iter(self.comments)


@dataclass(frozen=True)
class PriorDistribution:
    """Icon totals over the corpus; ``N`` is their sum."""

    great: int
    good: int
    neutral: int
    sad: int

    def __post_init__(self) -> None:
        if min(self.great, self.good, self.neutral, self.sad) < 0:
            raise ValueError("prior totals must be non-negative")

    @property
    def N(self) -> int:
        return self.great + self.good + self.neutral + self.sad

    def __getitem__(self, icon: IconRating) -> int:
        return getattr(self, icon.slug)

    def odds(self, icon: IconRating) -> float:
        k = self[icon]
        return k / (self.N - k)

    def __str__(self) -> str:
        parts = [f"{icon.value} {self[icon]}" for icon in TABLE_ORDER]
        return ", ".join(parts) + f", N {self.N}"


def parse_rating(value: Any, aliases: Mapping[str, IconRating | str] | None = None) -> IconRating:
    """Map a raw rating cell to an icon.

    Accepts the four English labels in any case, integer codes 1-4
    (1 = Sad ... 4 = Great) and any extra ``aliases``.
    """
    if isinstance(value, IconRating):
        return value
    if isinstance(value, bool) or value is None:
        raise ValueError(f"unknown rating label {value!r}")
    if isinstance(value, float) and value.is_integer():
        value = int(value)
    label = str(value).strip().lower()
    table = _BASE_LABELS
    if aliases:
        table = dict(table)
        for alias, icon in aliases.items():
            table[alias.strip().lower()] = icon if isinstance(icon, IconRating) else parse_rating(icon)
    try:
        return table[label]
    except KeyError:
        raise ValueError(f"unknown rating label {value!r}") from None


def ingest_corpus(
    records: Iterable[Mapping[str, Any]],
    emoji_only: bool = True,
    *,
    text_field: str = "text",
    rating_field: str = "rating",
    id_field: str = "id",
    aliases: Mapping[str, IconRating | str] | None = None,
) -> Corpus:
    """Validate records into a Corpus, keeping input order.

    With ``emoji_only`` (the default) comments whose text has no emoji are
    dropped, so priors are taken over the emoji-bearing subset.
    """
    comments = []
    dropped = 0
    for index, record in enumerate(records):
        line = getattr(record, "line", None)
        if not isinstance(record, Mapping):
            raise IngestError(f"record {index}: not a mapping", index, line)
        for field in (text_field, rating_field):
            if field not in record:
                raise IngestError(f"record {index}: missing field {field!r}", index, line)
        text = record[text_field]
        if text is None:
            text = ""
        if not isinstance(text, str):
            raise IngestError(f"record {index}: text is not a string", index, line)
        try:
            rating = parse_rating(record[rating_field], aliases)
        except ValueError as exc:
            raise IngestError(f"record {index}: {exc}", index, line) from None
        if emoji_only and not has_emoji(text):
            dropped += 1
            continue
        comments.append(Comment(record.get(id_field, index), text, rating))
    if dropped:
        log.debug("dropped %d comments without emoji", dropped)
    return Corpus(tuple(comments), emoji_only)


def compute_priors(corpus: Corpus) -> PriorDistribution:
    if not corpus.comments:
        raise EmptyCorpusError()
    totals = dict.fromkeys(IconRating, 0)
    for comment in corpus.comments:
        totals[comment.rating] += 1
    return PriorDistribution(**{icon.slug: n for icon, n in totals.items()})


class _Record(dict):
    """A dict that remembers the source line it came from."""

    line: int | None = None


def _csv_records(stream: io.TextIOBase, required: tuple[str, ...]) -> Iterator[_Record]:
    reader = csv.DictReader(stream)
    if reader.fieldnames is None:
        return
    missing = [c for c in required if c not in reader.fieldnames]
    if missing:
        raise IngestError(f"header lacks column(s) {', '.join(map(repr, missing))}", line=1)
    index = 0
    while True:
        try:
            row = next(reader)
        except StopIteration:
            return
        except csv.Error as exc:
            raise IngestError(f"record {index}: {exc}", index, reader.line_num) from None
        if None in row:
            raise IngestError(f"record {index}: too many fields", index, reader.line_num)
        rec = _Record(row)
        rec.line = reader.line_num
        index += 1
        yield rec


def _jsonl_records(stream: io.TextIOBase) -> Iterator[_Record]:
    index = 0
    for lineno, raw in enumerate(stream, start=1):
        if not raw.strip():
            continue
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise IngestError(f"record {index}: invalid JSON ({exc.msg})", index, lineno) from None
        if not isinstance(obj, dict):
            raise IngestError(f"record {index}: not a JSON object", index, lineno)
        rec = _Record(obj)
        rec.line = lineno
        index += 1
        yield rec


def read_records(
    source: str | Path | io.TextIOBase,
    fmt: str | None = None,
    *,
    text_field: str = "text",
    rating_field: str = "rating",
) -> Iterator[Mapping[str, Any]]:
    """Stream records from a CSV (header row required) or JSONL source."""
    if isinstance(source, (str, Path)):
        path = Path(source)
        fmt = fmt or ("jsonl" if path.suffix.lower() in (".jsonl", ".ndjson") else "csv")
        with open(path, encoding="utf-8", newline="") as stream:
            yield from read_records(stream, fmt, text_field=text_field, rating_field=rating_field)
        return
    fmt = fmt or "csv"
    if fmt not in FORMATS:
        raise ValueError(f"unknown input format {fmt!r}")
    try:
        if fmt == "csv":
            yield from _csv_records(source, (text_field, rating_field))
        else:
            yield from _jsonl_records(source)
    except UnicodeDecodeError as exc:
        raise IngestError(f"invalid UTF-8 ({exc.reason})") from None


def load_corpus(
    source: str | Path | io.TextIOBase,
    fmt: str | None = None,
    emoji_only: bool = True,
    *,
    text_field: str = "text",
    rating_field: str = "rating",
    aliases: Mapping[str, IconRating | str] | None = None,
) -> Corpus:
    records = read_records(source, fmt, text_field=text_field, rating_field=rating_field)
    return ingest_corpus(
        records, emoji_only, text_field=text_field, rating_field=rating_field, aliases=aliases
    )
