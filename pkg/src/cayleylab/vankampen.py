"""Recursive trisection fillings of identity words and area scans.

A loop is split into three arcs A, B, C at vertex-rounded thirds; with
geodesics p, q, r from the split vertices and the base to a median point
t, the free-group identity

    A B C = (A p r^-1) (r p^-1 B q r^-1) (r q^-1 C)

rewrites the loop as a conjugated product of the three strictly shorter
cells A p r^-1, B q p^-1 and C r q^-1, based at
z, x and y with conjugators e, r p^-1 and r q^-1.  Iterating until every
piece fits under a threshold T yields a subdivision tree whose leaves are
the cells of a van Kampen filling, exported as a verified conjugate
product.  The expected cell count scales like n^c with
c = 1/(1 - log_3 2), just under cubic.

Cells may be non-embedded loops; no part of this module assumes or
checks simplicity.
"""
from __future__ import annotations

import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .ball import BallIndex, Point, build_ball
from .errors import CayleyLabError, InputError, InternalError, ResourceError
from .groups import Group, ZnGroup
from .ldelta import median
from .words import Word, concat, free_reduce, invert

SUBCUBIC_EXPONENT = 1.0 / (1.0 - math.log(2, 3))  # about 2.7095


class ContractionError(CayleyLabError):
    """A split produced a child loop at least as long as its parent."""

    def __init__(self, child: "Loop"):
        super().__init__(f"child loop of length {len(child.word)} did not shrink")
        self.child = child


@dataclass(frozen=True)
class Loop:
    """A closed path: a base element and a word evaluating to identity."""
    base: tuple
    word: Word


@dataclass(frozen=True)
class ThresholdPolicy:
    kind: str  # "fixed" or "adaptive"
    t0: int


def fixed(t0: int) -> ThresholdPolicy:
    return ThresholdPolicy("fixed", t0)


def adaptive(t0: int = 4) -> ThresholdPolicy:
    return ThresholdPolicy("adaptive", t0)


def default_threshold(delta_hat) -> int:
    """The theorem-style starting threshold, never below 4."""
    return max(math.ceil(3 * delta_hat + 2), 4)


@dataclass
class SubdivisionNode:
    loop: Loop
    offsets: tuple[int, int] | None = None       # split positions of x and y
    t: tuple | None = None                       # median element
    pqr: tuple[Word, Word, Word] | None = None   # geodesics x->t, y->t, z->t
    children: list["SubdivisionNode"] = field(default_factory=list)

    @property
    def is_leaf(self) -> bool:
        return not self.children


@dataclass
class SubdivisionTree:
    root: SubdivisionNode
    threshold: int       # effective T after any adaptive restarts
    depth: int
    leaf_count: int
    max_leaf_length: int


@dataclass
class ConjugateProduct:
    word: Word
    factors: list[tuple[Word, Word]]  # (conjugator g_i, relator r_i)
    threshold: int


@dataclass
class AreaScan:
    records: list[tuple]  # (n, samples, max cells, mean cells as Fraction)
    slope: float | None
    reference_exponent: float
    threshold: int


def trisection_cells(alphabet, a: Word, b: Word, c: Word, p: Word, q: Word,
                     r: Word) -> tuple[tuple[Word, ...], tuple[Word, ...]]:
    """Cell words and conjugators of the decomposition identity.

    The conjugated product of the cells freely reduces to a b c for any
    six words; the geometry only enters through the choice of p, q, r.
    """
    pi, qi, ri = (invert(alphabet, w) for w in (p, q, r))
    cells = (concat(a, p, ri), concat(b, q, pi), concat(c, r, qi))
    conjs = ((), concat(r, pi), concat(r, qi))
    return cells, conjs


def _loop_vertices(ball: BallIndex, loop: Loop) -> list[int]:
    """Vertex ids along the loop; the walk must close up inside the ball."""
    vid = ball.index.get(loop.base)
    if vid is None:
        raise ResourceError("loop base outside the ball")
    ids = [vid]
    for gen in loop.word:
        vid = ball.adj[vid][gen]
        if vid < 0:
            raise ResourceError("loop leaves the ball; use a larger radius")
        ids.append(vid)
    if ids[-1] != ids[0]:
        raise InputError("loop word does not evaluate to the identity")
    return ids


@dataclass
class SplitResult:
    children: tuple[Loop, Loop, Loop]
    conjugators: tuple[Word, Word, Word]  # relative to the parent base
    t: tuple
    offsets: tuple[int, int]
    pqr: tuple[Word, Word, Word]


def split_loop(ball: BallIndex, loop: Loop) -> SplitResult:
    """Trisect a loop through a median of its third-points.

    Splits at vertex offsets floor(n/3) and n - floor(n/3), connects the
    three marked vertices to a minimum-slack vertex t, verifies the
    decomposition identity by free reduction, and checks that each child
    is strictly shorter.  Coincident marked vertices short-circuit the
    median search.
    """
    word = loop.word
    n = len(word)
    if n < 3:
        raise InputError("loop too short to trisect")
    ids = _loop_vertices(ball, loop)
    n1, n2 = n // 3, n - n // 3
    zid, xid, yid = ids[0], ids[n1], ids[n2]
    distinct = {zid, xid, yid}
    if len(distinct) == 3:
        med = median(ball, Point.vertex(xid), Point.vertex(yid),
                     Point.vertex(zid), t_halves=False)
        if med is None:
            raise ResourceError("median search failed inside this ball")
        tid = med.t.a
    else:
        # a repeated marked vertex is already a perfect meeting point
        tid = xid if xid in (yid, zid) else yid
    p = ball.vertex_geodesic_word(xid, tid)
    q = ball.vertex_geodesic_word(yid, tid)
    r = ball.vertex_geodesic_word(zid, tid)
    a, b, c = word[:n1], word[n1:n2], word[n2:]

    alphabet = ball.group.alphabet
    cells, conjs = trisection_cells(alphabet, a, b, c, p, q, r)
    witness = concat(cells[0], conjs[1], cells[1], invert(alphabet, conjs[1]),
                     conjs[2], cells[2], invert(alphabet, conjs[2]))
    if free_reduce(alphabet, witness) != free_reduce(alphabet, word):
        raise InternalError("trisection decomposition identity failed")

    bases = (loop.base, ball.elements[xid], ball.elements[yid])
    children = []
    for base, cell in zip(bases, cells):
        child = Loop(base, free_reduce(alphabet, cell))
        if len(child.word) >= n:
            raise ContractionError(child)
        children.append(child)
    t_elem = ball.elements[tid]
    return SplitResult(tuple(children), conjs, t_elem, (n1, n2), (p, q, r))


def fill_ball_radius(group: Group, w: Word, threshold: int) -> int:
    """A radius keeping every split vertex, median and geodesic exact."""
    max_norm = 0
    if group.exact_norm(group.identity()) is not None:
        e = group.identity()
        for gen in w:
            e = group.apply(e, gen)
            max_norm = max(max_norm, group.exact_norm(e))
    else:
        # a loop's prefix is reachable forwards or backwards, so its
        # norm never exceeds half the loop length
        max_norm = len(w) // 2
    return max_norm + len(w) + threshold


def _fill_once(ball: BallIndex, loop: Loop, threshold: int,
               depth: int) -> tuple[SubdivisionNode, int, int, int]:
    """Recursive subdivision; returns (node, depth, leaves, max leaf len)."""
    if len(loop.word) <= threshold:
        return SubdivisionNode(loop), depth, 1, len(loop.word)
    split = split_loop(ball, loop)
    node = SubdivisionNode(loop, split.offsets, split.t, split.pqr)
    max_d, leaves, max_len = depth, 0, 0
    for child in split.children:
        sub, d, l, m = _fill_once(ball, child, threshold, depth + 1)
        node.children.append(sub)
        max_d = max(max_d, d)
        leaves += l
        max_len = max(max_len, m)
    return node, max_d, leaves, max_len


def fill(ball: BallIndex, w: Word, policy: ThresholdPolicy | None = None,
         ) -> SubdivisionTree:
    """Subdivide an identity word down to cells of length <= T.

    The fixed policy raises on a contraction failure; the adaptive policy
    doubles T (at least to the offending length) and restarts, so it
    always terminates: once T reaches |w| the root is a leaf.
    """
    group = ball.group
    w = free_reduce(group.alphabet, tuple(w))
    if group.evaluate(w) != group.identity():
        raise InputError("fill needs a word evaluating to the identity")
    if policy is None:
        policy = adaptive()
    threshold = policy.t0
    if threshold < 1:
        raise InputError("threshold must be positive")
    root_loop = Loop(group.identity(), w)
    while True:
        needed = fill_ball_radius(group, w, threshold)
        if ball.radius < needed:
            raise ResourceError(
                f"ball radius {ball.radius} too small for fill; need {needed}")
        try:
            root, depth, leaves, max_len = _fill_once(ball, root_loop,
                                                      threshold, 0)
            return SubdivisionTree(root, threshold, depth, leaves, max_len)
        except ContractionError as exc:
            if policy.kind == "fixed":
                raise
            threshold = max(2 * threshold, len(exc.child.word))


def to_conjugate_product(ball: BallIndex, tree: SubdivisionTree,
                         ) -> ConjugateProduct:
    """Flatten a subdivision tree into Van Kampen factors g_i r_i g_i^-1.

    Leaves are visited left to right; each contributes its loop word
    conjugated by the accumulated path from the root base to its own
    base.  The flattening is re-verified by free reduction.
    """
    alphabet = ball.group.alphabet
    factors: list[tuple[Word, Word]] = []

    def walk(node: SubdivisionNode, prefix: Word) -> None:
        if node.is_leaf:
            factors.append((free_reduce(alphabet, prefix), node.loop.word))
            return
        p, q, r = node.pqr
        pi, qi = invert(alphabet, p), invert(alphabet, q)
        local = ((), concat(r, pi), concat(r, qi))
        for child, conj in zip(node.children, local):
            walk(child, concat(prefix, conj))

    walk(tree.root, ())
    product: list[int] = []
    for g, rel in factors:
        product.extend(concat(g, rel, invert(alphabet, g)))
    w = tree.root.loop.word
    if free_reduce(alphabet, tuple(product)) != free_reduce(alphabet, w):
        raise InternalError("conjugate product failed free-reduction check")
    return ConjugateProduct(w, factors, tree.threshold)


def random_identity_word(group: Group, n: int, seed,
                         ball: BallIndex | None = None) -> Word:
    """A seeded identity word of length at most n.

    Walks n // 2 uniform generator steps, then returns along a geodesic.
    Deterministic per (group, n, seed).
    """
    if n < 2:
        raise InputError("identity words need length at least 2")
    rng = random.Random(seed)
    steps = n // 2
    k = len(group.alphabet)
    walk = tuple(rng.randrange(k) for _ in range(steps))
    e = group.evaluate(walk)
    back = group.geodesic_word(e)
    if back is None:
        if ball is None or ball.index.get(e) is None:
            ball = build_ball(group, steps)
        back = ball.word_to(e)
    return free_reduce(group.alphabet, walk + invert(group.alphabet, back))


def canonical_identity_word(group: Group, n: int) -> Word | None:
    """The commutator word a^j b^j a^-j b^-j when the family admits one."""
    if not isinstance(group, ZnGroup) or len(group.alphabet) < 4 or n < 4:
        return None
    j = n // 4
    a, b = 0, 2  # first two positive generators
    ai = group.alphabet.inverse(a)
    bi = group.alphabet.inverse(b)
    return (a,) * j + (b,) * j + (ai,) * j + (bi,) * j


def _scan_tasks(group: Group, lengths: list[int], samples: int, seed: int):
    tasks = []
    for n in lengths:
        for s in range(samples):
            tasks.append((n, s, None))
        if canonical_identity_word(group, n) is not None:
            tasks.append((n, samples, "commutator"))
    return tasks


def dehn_scan(group: Group, lengths: list[int], samples_per_length: int,
              policy: ThresholdPolicy | None = None, seed: int = 0,
              threads: int = 1) -> AreaScan:
    """Fill sampled identity words per length and fit a cell-count slope.

    Each length gets `samples_per_length` random identity words plus the
    canonical commutator word when the family defines one.  The fitted
    exponent is the least-squares slope of log(max cells) against log(n),
    absent with fewer than two distinct lengths.  Results are merged by
    (length, sample index) and do not depend on the thread count.
    """
    if policy is None:
        policy = adaptive()
    lengths = sorted(set(lengths))
    if not lengths or min(lengths) < 4:
        raise InputError("scan lengths must be at least 4")
    balls: dict[int, BallIndex] = {}

    def ball_for(n: int, threshold: int) -> BallIndex:
        radius = n // 2 + n + threshold
        if n not in balls or balls[n].radius < radius:
            balls[n] = build_ball(group, radius)
        return balls[n]

    def run_task(task):
        n, s, kind = task
        b = ball_for(n, policy.t0)
        if kind == "commutator":
            w = canonical_identity_word(group, n)
        else:
            w = random_identity_word(group, n, f"{seed}:{n}:{s}", ball=b)
        while True:
            try:
                tree = fill(b, w, policy)
                return (n, s, tree.leaf_count, tree.threshold)
            except ResourceError:
                b = build_ball(group, 2 * b.radius)

    tasks = _scan_tasks(group, lengths, samples_per_length, seed)
    for n in lengths:
        ball_for(n, policy.t0)  # build serially before any threading
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run_task, tasks))
    else:
        results = [run_task(t) for t in tasks]
    results.sort(key=lambda rec: (rec[0], rec[1]))

    records = []
    max_threshold = policy.t0
    for n in lengths:
        cells = [c for (m, _, c, _) in results if m == n]
        max_threshold = max([max_threshold] +
                            [t for (m, _, _, t) in results if m == n])
        records.append((n, len(cells), max(cells),
                        Fraction(sum(cells), len(cells))))

    slope = None
    pts = [(math.log(n), math.log(mx)) for n, _, mx, _ in records if mx >= 1]
    if len({x for x, _ in pts}) >= 2:
        mean_x = sum(x for x, _ in pts) / len(pts)
        mean_y = sum(y for _, y in pts) / len(pts)
        num = sum((x - mean_x) * (y - mean_y) for x, y in pts)
        den = sum((x - mean_x) ** 2 for x, _ in pts)
        slope = num / den
    return AreaScan(records, slope, SUBCUBIC_EXPONENT, max_threshold)
