import itertools
import random

import pytest

from cayleylab.errors import InputError
from cayleylab.groups import get_group

FAMILIES = ["z2-std", "z2-abc", "f2", "heisenberg"]


def test_z2_std_evaluate():
    g = get_group("z2-std")
    assert g.evaluate(g.alphabet.parse_word("a,b,a^")) == (0, 1)


def test_f2_evaluate_reduces():
    g = get_group("f2")
    word = g.alphabet.parse_word("a,a^,b")
    assert g.evaluate(word) == g.alphabet.parse_word("b")


def test_heisenberg_commutator():
    g = get_group("heisenberg")
    word = g.alphabet.parse_word("a,b,a^,b^")
    assert g.evaluate(word) == (0, 0, 1)


def test_heisenberg_against_matrix_model():
    # oracle: multiply upper unitriangular matrices [[1,p,r],[0,1,q],[0,0,1]]
    def mat_mul(m, n):
        return tuple(
            tuple(sum(m[i][k] * n[k][j] for k in range(3)) for j in range(3))
            for i in range(3)
        )

    def to_mat(e):
        p, q, r = e
        return ((1, p, r), (0, 1, q), (0, 0, 1))

    g = get_group("heisenberg")
    rng = random.Random(5)
    for _ in range(300):
        a = (rng.randrange(-4, 5), rng.randrange(-4, 5), rng.randrange(-9, 10))
        b = (rng.randrange(-4, 5), rng.randrange(-4, 5), rng.randrange(-9, 10))
        assert to_mat(g.multiply(a, b)) == mat_mul(to_mat(a), to_mat(b))
        assert mat_mul(to_mat(a), to_mat(g.inverse(a)))[0][1:] == (0, 0)


@pytest.mark.parametrize("name", FAMILIES)
def test_evaluate_is_a_homomorphism_exhaustive(name):
    g = get_group(name)
    n = len(g.alphabet)
    words = [()]
    for length in range(1, 5):
        words.extend(itertools.product(range(n), repeat=length))
    # split each word at the midpoint; enough to cover all concatenations
    for word in words:
        word = tuple(word)
        for cut in range(len(word) + 1):
            u, v = word[:cut], word[cut:]
            assert g.evaluate(word) == g.multiply(g.evaluate(u), g.evaluate(v))


@pytest.mark.parametrize("name", FAMILIES)
def test_evaluate_is_a_homomorphism_sampled(name):
    g = get_group(name)
    n = len(g.alphabet)
    rng = random.Random(77)
    for _ in range(200):
        u = tuple(rng.randrange(n) for _ in range(rng.randrange(9)))
        v = tuple(rng.randrange(n) for _ in range(rng.randrange(9)))
        assert g.evaluate(u + v) == g.multiply(g.evaluate(u), g.evaluate(v))


@pytest.mark.parametrize("name", FAMILIES)
def test_inverse_and_identity(name):
    g = get_group(name)
    rng = random.Random(13)
    n = len(g.alphabet)
    assert g.evaluate(()) == g.identity()
    for _ in range(100):
        e = g.evaluate(tuple(rng.randrange(n) for _ in range(8)))
        assert g.multiply(e, g.inverse(e)) == g.identity()
        assert g.multiply(g.inverse(e), e) == g.identity()


def test_unknown_selector():
    with pytest.raises(InputError):
        get_group("no-such-group")
