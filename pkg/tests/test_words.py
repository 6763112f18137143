import random

import pytest

from cayleylab.errors import InputError
from cayleylab.groups import get_group
from cayleylab.words import Alphabet, free_reduce, invert


@pytest.fixture
def ab():
    return Alphabet.with_inverses(["a", "b"])


def w(alphabet, text):
    return alphabet.parse_word(text)


def test_alphabet_is_inverse_closed(ab):
    for g in ab.generators:
        assert ab.inverse(ab.inverse(g.id)) == g.id
    labels = [g.label for g in ab.generators]
    assert len(set(labels)) == len(labels)


def test_free_reduce_examples(ab):
    assert free_reduce(ab, w(ab, "a,b,b^,a^")) == ()
    assert free_reduce(ab, w(ab, "a,a^,a")) == w(ab, "a")
    assert free_reduce(ab, w(ab, "b,a^,a,b")) == w(ab, "b,b")


def test_invert_examples(ab):
    assert invert(ab, w(ab, "a,b")) == w(ab, "b^,a^")
    assert invert(ab, ()) == ()
    word = w(ab, "a,b^,a")
    assert invert(ab, invert(ab, word)) == word


def test_invert_cancels_against_word(ab):
    group = get_group("f2")
    rng = random.Random(3)
    for _ in range(50):
        word = tuple(rng.randrange(4) for _ in range(rng.randrange(9)))
        assert group.evaluate(word + invert(ab, word)) == group.identity()


def test_unknown_label_rejected(ab):
    with pytest.raises(InputError):
        ab.id_of("z")
    with pytest.raises(InputError):
        ab.check_word((17,))


def test_free_reduce_preserves_free_class(ab):
    rng = random.Random(11)
    group = get_group("f2")
    for _ in range(200):
        word = tuple(rng.randrange(4) for _ in range(rng.randrange(12)))
        assert group.evaluate(word) == group.evaluate(free_reduce(ab, word))
