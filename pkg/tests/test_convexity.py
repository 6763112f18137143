import random
from fractions import Fraction

import pytest

from cayleylab.ball import build_ball
from cayleylab.convexity import (INFINITE, ac_constant, inside_ball_path,
                                 verify_theorem1)
from cayleylab.errors import InputError
from cayleylab.groups import get_group


@pytest.fixture(scope="module")
def z2ball():
    return build_ball(get_group("z2-std"), 8)


@pytest.fixture(scope="module")
def f2ball():
    return build_ball(get_group("f2"), 8)


def test_f2_constant_is_two(f2ball):
    for n in range(1, 7):
        rep = ac_constant(f2ball, n)
        assert rep.c_n == 2
        assert rep.pairs_examined > 0


def test_z2_std_constants_small(z2ball):
    assert ac_constant(z2ball, 0).c_n == 0
    for n in range(1, 7):
        rep = ac_constant(z2ball, n)
        assert 2 <= rep.c_n <= 4


def test_inside_ball_path_validity(z2ball):
    group = z2ball.group
    for n in (2, 4):
        for u, v in z2ball.sphere_pairs(n):
            w = inside_ball_path(z2ball, u, v, n)
            assert w is not None
            # walk the word, checking every vertex stays inside B(n)
            cur = u
            for gen in w:
                cur = z2ball.adj[cur][gen]
                assert cur >= 0 and z2ball.dist[cur] <= n
            assert cur == v
            assert len(w) <= 2 * n  # any inside-ball detour fits in B(n)


def test_inside_ball_path_rejects_bad_input(z2ball):
    u = z2ball.index[(2, 0)]
    v = z2ball.index[(0, 2)]
    with pytest.raises(InputError):
        inside_ball_path(z2ball, u, v, 2)  # distance 4, too far apart
    with pytest.raises(InputError):
        inside_ball_path(z2ball, u, z2ball.index[(0, 3)], 2)


def test_worst_pair_attains_constant(z2ball):
    rep = ac_constant(z2ball, 5)
    u = z2ball.index[rep.worst_pair[0]]
    v = z2ball.index[rep.worst_pair[1]]
    w = inside_ball_path(z2ball, u, v, 5)
    assert len(w) == rep.c_n


def test_thread_count_invariance(z2ball):
    for n in (3, 5):
        one = ac_constant(z2ball, n, threads=1)
        four = ac_constant(z2ball, n, threads=4)
        assert one.c_n == four.c_n
        assert one.worst_pair == four.worst_pair
        assert one.pairs_examined == four.pairs_examined


def test_verify_theorem1_f2(f2ball):
    reports = verify_theorem1(f2ball, 6, Fraction(0))
    assert all(r.bound == 2 for r in reports)
    assert all(r.passed for r in reports)
    assert [r.n for r in reports] == list(range(7))


def test_verify_theorem1_z2(z2ball):
    # delta_hat 1 gives bound 5, comfortably above the grid's constant 4
    reports = verify_theorem1(z2ball, 6, Fraction(1))
    assert all(r.passed for r in reports)
    assert all(r.c_n != INFINITE for r in reports)


def test_bound_failure_reported(z2ball):
    rep = ac_constant(z2ball, 4, bound=Fraction(1))
    assert rep.passed is False
