import numpy as np
import pytest

from convattack.attacks.tokenizer import detokenize, tokenize, words


class TestTokenize:
    def test_punctuation_is_split_off(self):
        assert [t.text for t in tokenize("Good, thanks!")] == ["good", ",", "thanks", "!"]

    def test_empty(self):
        assert tokenize("") == []

    def test_flags_and_spans(self):
        tokens = tokenize("Hi (there).")
        assert [(t.text, t.is_punct) for t in tokens] == [
            ("hi", False),
            ("(", True),
            ("there", False),
            (")", True),
            (".", True),
        ]
        assert [("Hi (there)."[t.start : t.end]) for t in tokens] == ["Hi", "(", "there", ")", "."]

    def test_inner_punctuation_stays(self):
        assert words("don't re-use it") == ["don't", "re-use", "it"]

    def test_unicode_whitespace(self):
        assert words("a b c") == ["a", "b", "c"]


class TestDetokenize:
    def test_round_trip_on_random_strings(self):
        rng = np.random.default_rng(0)
        alphabet = list("abcXYZ ,.!?'\"()-\t\n") + ["é", "ß", " ", "日"]
        for _ in range(1000):
            s = "".join(rng.choice(alphabet, size=int(rng.integers(0, 30))))
            tokens = tokenize(s)
            assert detokenize(s, tokens) == s
            # rebuilding every slot from its span must also give s back
            identity = {i: s[t.start : t.end] for i, t in enumerate(tokens)}
            assert detokenize(s, tokens, identity) == s

    def test_replacement_only_touches_its_slot(self):
        text = "The  Movie was GOOD!"
        tokens = tokenize(text)
        assert detokenize(text, tokens, {1: "film"}) == "The  film was GOOD!"

    def test_deletion(self):
        text = "the movie was good ."
        assert detokenize(text, tokenize(text), deletions=[3]) == "the movie was  ."

    @pytest.mark.parametrize("text", ["", "   ", "...", "a"])
    def test_trivial_inputs_round_trip(self, text):
        assert detokenize(text, tokenize(text), {}) == text

    def test_deletion_wins_over_replacement_of_the_same_slot(self):
        text = "the movie was very good"
        tokens = tokenize(text)
        out = detokenize(text, tokens, {1: "film", 3: "really"}, deletions=[3])
        assert out == "the film was  good"
