"""Empirical almost-convexity constants and the 3*delta + 2 bound check.

For each sphere radius n, C_n is the longest connecting path needed
between norm-n vertices at word distance at most 2, where the path must
stay inside the closed ball of radius n.  A disconnected pair is reported
as infinite and fails the bound check.

The theorem's bound is checked against an estimated delta, which is a
lower bound for the true constant; a failed comparison therefore flags an
anomaly to investigate, not a refutation.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .ball import BallIndex
from .errors import InputError
from .words import Word

INFINITE = -1  # marker for "no inside-ball path"


@dataclass
class ACReport:
    n: int
    pairs_examined: int
    c_n: int                       # max path length, INFINITE if disconnected
    worst_pair: tuple | None       # canonical element forms
    bound: Fraction | None         # 3*delta_hat + 2
    passed: bool | None


def inside_ball_path(ball: BallIndex, g: int, g2: int, n: int) -> Word | None:
    """Shortest word from g to g2 through vertices of norm <= n, or None."""
    if ball.dist[g] != n or ball.dist[g2] != n:
        raise InputError("both endpoints must lie on the sphere of radius n")
    if n > ball.radius - 1:
        raise InputError("need n <= ball radius - 1")
    d = ball.vertex_distance(g, g2)
    if d is None or d > 2:
        raise InputError("endpoints must be at most 2 apart")
    try:
        return ball._inball_path(g, g2, n)
    except InputError:
        return None


def _pair_lengths(ball: BallIndex, n: int, sources: list[int]) -> list[tuple]:
    """(length or INFINITE, canonical pair) for each sphere pair grouped by
    its smaller endpoint; one norm-restricted BFS per source."""
    out = []
    by_source: dict[int, list[int]] = {}
    for u, v in ball.sphere_pairs(n):
        by_source.setdefault(u, []).append(v)
    for u in sources:
        targets = by_source.get(u)
        if not targets:
            continue
        dist = {u: 0}
        frontier = [u]
        while frontier:
            nxt = []
            for a in frontier:
                for b in ball.adj[a]:
                    if b >= 0 and b not in dist and ball.dist[b] <= n:
                        dist[b] = dist[a] + 1
                        nxt.append(b)
            frontier = nxt
        for v in targets:
            pair = tuple(sorted((ball.elements[u], ball.elements[v])))
            out.append((dist.get(v, INFINITE), pair))
    return out


def ac_constant(ball: BallIndex, n: int, bound: Fraction | None = None,
                threads: int = 1) -> ACReport:
    """Exhaustive C_n over all sphere pairs at radius n."""
    pairs = ball.sphere_pairs(n)
    sources = sorted({u for u, _ in pairs})
    if threads > 1 and len(sources) > 1:
        chunks = [sources[i::threads] for i in range(threads)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = []
            for part in pool.map(lambda c: _pair_lengths(ball, n, c), chunks):
                results.extend(part)
    else:
        results = _pair_lengths(ball, n, sources)

    c_n = 0
    worst = None
    for length, pair in results:
        key = (length == INFINITE, length)
        best_key = (c_n == INFINITE, c_n)
        if key > best_key or (key == best_key and
                              (worst is None or pair < worst)):
            c_n = length
            worst = pair
    passed = None
    if bound is not None:
        passed = c_n != INFINITE and c_n <= bound
    return ACReport(n, len(results), c_n, worst, bound, passed)


def verify_theorem1(ball: BallIndex, n_max: int, delta_hat: Fraction,
                    threads: int = 1) -> list[ACReport]:
    """C_n against the almost-convexity bound 3*delta_hat + 2 for each
    n <= n_max.  delta_hat underestimates the true constant, so failures
    here are anomalies to examine rather than counterexamples."""
    bound = 3 * delta_hat + 2
    return [ac_constant(ball, n, bound, threads) for n in range(n_max + 1)]
