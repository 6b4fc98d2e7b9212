import pytest

from emojiodds import Corpus, Comment, EmojiKey, IconRating, collocation_key, extract_emoji, group_by_key

G, S = IconRating.GREAT, IconRating.SAD


def test_repeats_count_once():
    assert extract_emoji("gracias 👍👍") == {0x1F44D}


def test_plain_text():
    assert extract_emoji("plain ascii text") == frozenset()
    assert extract_emoji("") == frozenset()
    assert extract_emoji("# 1 2 3 * ok") == frozenset()


def test_pair():
    assert extract_emoji("🎂 y 🎁!") == {0x1F381, 0x1F382}


@pytest.mark.parametrize("text, expected", [
    ("👍🏽", {0x1F44D}),                     # skin tone dropped
    ("❤️", {0x2764}),                        # variation selector dropped
    ("👨‍👩‍👧", {0x1F468, 0x1F469, 0x1F467}),  # ZWJ family split into members
    ("#️⃣", frozenset()),                    # keycap base is plain text
    ("\U0001F592", {0x1F592}),               # reversed thumbs up, listed in the published table
    ("🇪🇸", {0x1F1EA, 0x1F1F8}),
])
def test_normalisation(text, expected):
    assert extract_emoji(text) == expected


def test_collocation_key():
    assert collocation_key({0x1F382, 0x1F381}).hex == "1f381 1f382"
    assert collocation_key({0x1F922}).hex == "1f922"
    assert collocation_key({0x1F62D, 0x1F614}).hex == "1f614 1f62d"
    assert str(EmojiKey.from_hex("1f62d 1f614")) == "1f614 1f62d"
    with pytest.raises(ValueError, match="no emoji"):
        collocation_key(set())


def test_key_invariants():
    with pytest.raises(ValueError):
        EmojiKey((0x1F382, 0x1F381))
    with pytest.raises(ValueError):
        EmojiKey((0x1F382, 0x1F382))


def _corpus(*pairs):
    return Corpus(tuple(Comment(i, t, r) for i, (t, r) in enumerate(pairs)))


def test_group_single_comment():
    rows = group_by_key(_corpus(("👍 ok", G)))
    assert len(rows) == 1
    assert rows[0].key.hex == "1f44d"
    assert rows[0].as_tuple() == (1, 0, 0, 0) and rows[0].total == 1


def test_group_two_keys():
    # counted by hand: 🎂 twice (Great, Sad), 🎂🎁 three times (all Great)
    corpus = _corpus(("🎂", G), ("🎂🎁", G), ("🎁 🎂🎂", G), ("torta 🎂", S), ("🎁🎂", G))
    rows = group_by_key(corpus)
    assert [(r.key.hex, r.as_tuple()) for r in rows] == [
        ("1f381 1f382", (3, 0, 0, 0)),
        ("1f382", (1, 0, 0, 1)),
    ]
    assert sum(r.total for r in rows) == 5


def test_group_per_single_mode():
    corpus = _corpus(("🎂", G), ("🎂🎁", G), ("torta 🎂", S))
    rows = {r.key.hex: r.as_tuple() for r in group_by_key(corpus, "per-single")}
    assert rows == {"1f382": (2, 0, 0, 1), "1f381": (1, 0, 0, 0)}


def test_group_skips_comments_without_emoji():
    corpus = Corpus((Comment(0, "hola", G), Comment(1, "🔥", S)), emoji_only=False)
    assert [r.key.hex for r in group_by_key(corpus)] == ["1f525"]


def test_group_unknown_mode():
    with pytest.raises(ValueError):
        group_by_key(_corpus(("🔥", S)), "pairs")
