"""Tests for text utilities."""

from rankfraud.utils.text import contains_any, contains_phrase, read_word_list, sentence_split, tokenize


def test_sentence_split():
    text = "Hello world. How are you? I'm fine!"
    assert sentence_split(text) == ["Hello world.", "How are you?", "I'm fine!"]


def test_sentence_split_keeps_abbreviations():
    text = "Hi there. It is e.g. fine! Really? yes"
    assert sentence_split(text) == ["Hi there.", "It is e.g. fine!", "Really?", "yes"]


def test_sentence_split_ignores_inner_periods():
    assert sentence_split("Version 2.5 works. Great") == ["Version 2.5 works.", "Great"]


def test_sentence_split_empty():
    assert sentence_split("") == []
    assert sentence_split("   ") == []


def test_tokenize():
    assert tokenize("Don't STOP, 5 stars!!") == ["don't", "stop", "5", "stars"]


def test_tokenize_keeps_non_ascii_words():
    assert tokenize("Très BIEN, Straße! вирус") == ["très", "bien", "strasse", "вирус"]


def test_word_lists_match_tokens(tmp_path):
    path = tmp_path / "words.txt"
    path.write_text("STRASSE\nВирус\n", encoding="utf-8")
    words = frozenset(read_word_list(path))
    assert contains_any(tokenize("die Straße"), words)
    assert contains_any(tokenize("ВИРУС найден"), words)


def test_contains_any():
    assert contains_any(["a", "virus"], frozenset({"virus"}))
    assert not contains_any([], frozenset({"virus"}))


def test_contains_phrase():
    tokens = tokenize("they make you rate five stars first")
    assert contains_phrase(tokens, ("rate", "five", "stars"))
    assert not contains_phrase(tokens, ("five", "rate"))
    assert contains_phrase(tokens, ("first",))
    assert not contains_phrase(tokens, ())


def test_read_word_list(tmp_path):
    path = tmp_path / "words.txt"
    path.write_text("# header\nVirus\n\nspy ware  # two words\n", encoding="utf-8")
    assert read_word_list(path) == ["virus", "spy ware"]
