"""Finite-radius Cayley graph balls and exact word-metric queries.

A BallIndex stores the closed ball of radius R around the identity:
canonical elements in BFS discovery order (so norms are nondecreasing in
the dense vertex id), per-vertex adjacency restricted to the ball, and
the BFS tree used to read off geodesic words from the identity.

Vertex-to-vertex distances use translation invariance: d(u, v) is the
word norm of u^-1 v, a single table lookup.  This is the exact word
metric whenever u^-1 v lies in the ball; when it does not, we fall back
to a cached breadth-first search inside the ball, which can only
overestimate.  Callers that need exactness keep their query points within
the documented radius margins.

Distances may take half-integer values: the geometric realization admits
edge midpoints ("half-edge points"), and the distance from a midpoint of
(u, v) to any point s is 1/2 + min(d(u, s), d(v, s)).
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction

from .errors import InputError, ResourceError
from .groups import Element, Group
from .words import Word, invert

VERTEX = 0
HALF = 1

HALF_STEP = Fraction(1, 2)


@dataclass(frozen=True, order=True)
class Point:
    """A vertex or an edge midpoint of the ball's geometric realization."""

    kind: int
    a: int       # vertex id, or smaller endpoint id of the edge
    b: int = -1  # larger endpoint id for midpoints

    @staticmethod
    def vertex(vid: int) -> "Point":
        return Point(VERTEX, vid)

    @staticmethod
    def half(u: int, v: int) -> "Point":
        if u == v:
            raise InputError("half-edge point needs two distinct endpoints")
        return Point(HALF, min(u, v), max(u, v))


@dataclass(frozen=True)
class GeodesicPath:
    """A shortest path, possibly with half-steps at either end.

    The word runs from start_vertex to end_vertex; a half-edge start or
    end contributes an extra half step from the midpoint onto that vertex.
    """

    start: Point
    end: Point
    start_vertex: int
    end_vertex: int
    word: Word
    length: Fraction


class BallIndex:
    def __init__(self, group: Group, radius: int, max_vertices: int = 2_000_000):
        if radius < 0:
            raise InputError("ball radius must be >= 0")
        self.group = group
        self.radius = radius
        self.max_vertices = max_vertices

        elements: list[Element] = [group.identity()]
        index: dict[Element, int] = {elements[0]: 0}
        dist: list[int] = [0]
        parent_gen: list[int] = [-1]
        alphabet = group.alphabet
        frontier = [0]
        for layer in range(radius):
            nxt: list[int] = []
            for vid in frontier:
                e = elements[vid]
                for gen in range(len(alphabet)):
                    f = group.apply(e, gen)
                    if f not in index:
                        if len(elements) >= max_vertices:
                            raise ResourceError(
                                f"ball exceeds max_vertices cap ({max_vertices})"
                            )
                        index[f] = len(elements)
                        elements.append(f)
                        dist.append(layer + 1)
                        parent_gen.append(gen)
                        nxt.append(index[f])
            frontier = nxt

        self.elements = elements
        self.index = index
        self.dist = dist
        self.parent_gen = parent_gen
        self.identity_id = 0

        n_gens = len(alphabet)
        adj: list[list[int]] = []
        for vid, e in enumerate(elements):
            row = []
            for gen in range(n_gens):
                row.append(index.get(group.apply(e, gen), -1))
            adj.append(row)
        self.adj = adj

        self.shell_start = [0] * (radius + 2)
        for d in range(1, radius + 2):
            self.shell_start[d] = len(elements)
        for vid, d in enumerate(dist):
            if self.shell_start[d] > vid:
                self.shell_start[d] = vid
        # make boundaries monotone for empty shells
        for d in range(radius, -1, -1):
            self.shell_start[d] = min(self.shell_start[d], self.shell_start[d + 1])

        self._edges: list[tuple[int, int]] | None = None
        self._bfs_cache: dict[int, list[int]] = {}
        self._cache_lock = threading.Lock()
        self._inverse_cache: dict[int, Element] = {}

    # -- basic structure ---------------------------------------------------

    def __len__(self) -> int:
        return len(self.elements)

    def shell(self, n: int) -> range:
        if not (0 <= n <= self.radius):
            raise InputError(f"shell {n} outside ball radius {self.radius}")
        return range(self.shell_start[n], self.shell_start[n + 1])

    @property
    def edges(self) -> list[tuple[int, int]]:
        """Unordered vertex-id pairs carrying at least one edge, u < v."""
        if self._edges is None:
            seen = set()
            for u, row in enumerate(self.adj):
                for v in row:
                    if v >= 0 and v != u:
                        seen.add((u, v) if u < v else (v, u))
            self._edges = sorted(seen)
        return self._edges

    # -- vertex distances --------------------------------------------------

    def _inv_element(self, vid: int) -> Element:
        e = self._inverse_cache.get(vid)
        if e is None:
            e = self.group.inverse(self.elements[vid])
            self._inverse_cache[vid] = e
        return e

    def norm_of(self, e: Element) -> int | None:
        exact = self.group.exact_norm(e)
        if exact is not None:
            return exact
        vid = self.index.get(e)
        return self.dist[vid] if vid is not None else None

    def vertex_distance(self, u: int, v: int) -> int | None:
        """Exact word distance when determinable, else in-ball BFS distance.

        Returns None when neither route resolves within the ball.
        """
        if u == v:
            return 0
        diff = self.group.multiply(self._inv_element(u), self.elements[v])
        d = self.norm_of(diff)
        if d is not None:
            return d
        row = self._bfs_from(u)
        return row[v] if row[v] >= 0 else None

    def _bfs_from(self, source: int) -> list[int]:
        with self._cache_lock:
            row = self._bfs_cache.get(source)
        if row is not None:
            return row
        row = [-1] * len(self.elements)
        row[source] = 0
        frontier = [source]
        while frontier:
            nxt = []
            for u in frontier:
                du = row[u]
                for v in self.adj[u]:
                    if v >= 0 and row[v] < 0:
                        row[v] = du + 1
                        nxt.append(v)
            frontier = nxt
        with self._cache_lock:
            self._bfs_cache.setdefault(source, row)
        return row

    # -- realization points ------------------------------------------------

    def check_point(self, p: Point) -> None:
        ids = (p.a,) if p.kind == VERTEX else (p.a, p.b)
        for vid in ids:
            if not (0 <= vid < len(self.elements)):
                raise InputError(f"point references vertex {vid} outside ball")
        if p.kind == HALF and p.b not in self.adj[p.a]:
            raise InputError("half-edge point references a non-edge")

    def point_norm(self, p: Point) -> Fraction:
        if p.kind == VERTEX:
            return Fraction(self.dist[p.a])
        return HALF_STEP + min(self.dist[p.a], self.dist[p.b])

    def point_of_element(self, e: Element) -> Point:
        vid = self.index.get(e)
        if vid is None:
            raise InputError("element outside ball")
        return Point.vertex(vid)

    def distance(self, p: Point, q: Point) -> Fraction:
        self.check_point(p)
        self.check_point(q)
        d = self.try_distance(p, q)
        if d is None:
            raise ResourceError(
                "distance not determinable inside this ball; increase the radius"
            )
        return d

    def try_distance(self, p: Point, q: Point) -> Fraction | None:
        if p == q:
            return Fraction(0)
        if p.kind == VERTEX and q.kind == VERTEX:
            d = self.vertex_distance(p.a, q.a)
            return None if d is None else Fraction(d)
        if p.kind == HALF and q.kind == HALF:
            best = None
            for e in (p.a, p.b):
                for f in (q.a, q.b):
                    d = self.vertex_distance(e, f)
                    if d is not None and (best is None or d < best):
                        best = d
            return None if best is None else Fraction(best) + 1
        if p.kind == HALF:
            p, q = q, p
        best = None
        for f in (q.a, q.b):
            d = self.vertex_distance(p.a, f)
            if d is not None and (best is None or d < best):
                best = d
        return None if best is None else Fraction(best) + HALF_STEP

    # -- geodesics ---------------------------------------------------------

    def word_to(self, e: Element) -> Word:
        """A geodesic word from the identity to e."""
        w = self.group.geodesic_word(e)
        if w is not None:
            return w
        vid = self.index.get(e)
        if vid is None:
            raise InputError("element outside ball")
        letters: list[int] = []
        while vid != self.identity_id:
            gen = self.parent_gen[vid]
            letters.append(gen)
            vid = self.adj[vid][self.group.alphabet.inverse(gen)]
        return tuple(reversed(letters))

    def vertex_geodesic_word(self, u: int, v: int) -> Word:
        """A geodesic word from vertex u to vertex v."""
        if u == v:
            return ()
        diff = self.group.multiply(self._inv_element(u), self.elements[v])
        try:
            w = self.word_to(diff)
        except InputError:
            w = None
        if w is not None and len(w) == self.vertex_distance(u, v):
            # accept only if the translated path stays inside the ball
            cur = u
            for gen in w:
                cur = self.adj[cur][gen]
                if cur < 0:
                    w = None
                    break
            if w is not None and cur == v:
                return w
        return self._inball_path(u, v, None)

    def _inball_path(self, u: int, v: int, max_norm: int | None) -> Word:
        """Shortest path word inside the ball, optionally norm-restricted."""
        if u == v:
            return ()
        prev: dict[int, tuple[int, int]] = {u: (-1, -1)}
        frontier = [u]
        while frontier and v not in prev:
            nxt = []
            for a in frontier:
                for gen, b in enumerate(self.adj[a]):
                    if b >= 0 and b not in prev:
                        if max_norm is not None and self.dist[b] > max_norm:
                            continue
                        prev[b] = (a, gen)
                        nxt.append(b)
            frontier = nxt
        if v not in prev:
            raise InputError("no path inside the ball")
        letters: list[int] = []
        cur = v
        while cur != u:
            a, gen = prev[cur]
            letters.append(gen)
            cur = a
        return tuple(reversed(letters))

    def geodesic(self, p: Point, q: Point) -> GeodesicPath:
        """A path realizing distance(p, q), staying inside the ball."""
        self.check_point(p)
        self.check_point(q)
        total = self.distance(p, q)
        best: tuple[Fraction, int, int] | None = None
        p_ends = (p.a,) if p.kind == VERTEX else (p.a, p.b)
        q_ends = (q.a,) if q.kind == VERTEX else (q.a, q.b)
        if p.kind == HALF and q.kind == HALF and (p.a, p.b) == (q.a, q.b):
            return GeodesicPath(p, q, p.a, q.a, (), Fraction(0))
        for e in p_ends:
            for f in q_ends:
                d = self.vertex_distance(e, f)
                if d is None:
                    continue
                length = Fraction(d)
                if p.kind == HALF:
                    length += HALF_STEP
                if q.kind == HALF:
                    length += HALF_STEP
                if best is None or length < best[0]:
                    best = (length, e, f)
        if best is None or best[0] != total:
            raise ResourceError("geodesic not determinable inside this ball")
        _, e, f = best
        return GeodesicPath(p, q, e, f, self.vertex_geodesic_word(e, f), total)

    # -- sphere structure --------------------------------------------------

    def sphere_pairs(self, n: int) -> list[tuple[int, int]]:
        """Unordered pairs of norm-n vertices at word distance <= 2."""
        if not (0 <= n <= self.radius - 1):
            raise InputError(
                f"sphere_pairs needs 0 <= n <= radius-1, got n={n}, R={self.radius}"
            )
        pairs: set[tuple[int, int]] = set()
        for u in self.shell(n):
            for w1 in self.adj[u]:
                if w1 < 0:
                    continue
                if self.dist[w1] == n and w1 > u:
                    pairs.add((u, w1))
                for w2 in self.adj[w1]:
                    if w2 >= 0 and w2 > u and self.dist[w2] == n:
                        pairs.add((u, w2))
        return sorted(pairs)


def build_ball(group: Group, radius: int, max_vertices: int = 2_000_000) -> BallIndex:
    return BallIndex(group, radius, max_vertices)


def loop_word_closure(ball: BallIndex, walk: Word) -> Word:
    """Close a walk from the identity back to it along a geodesic."""
    e = ball.group.evaluate(walk)
    back = invert(ball.group.alphabet, ball.word_to(e))
    return tuple(walk) + back
