"""Slack of candidate median points and estimation of the L_delta constant.

For three points x, y, z and a candidate t, the slack of t is the worst
detour excess over the three pairs:

    max over {x,y}, {y,z}, {z,x} of d(., t) + d(t, .) - d(., .)

A triple's delta is the minimum slack over all admissible t, and the
estimated constant of a generating set at radius R is the maximum of that
over a triple domain.  All values are exact rationals with denominator
dividing 2.

The median search scans candidate points in shells of increasing distance
from x.  Any t improving a current best slack U must satisfy
d(x, t) <= d(x, y) + U/2 (because d(t, y) >= d(x, t) - d(x, y)), and any
t improving only the tie-break must have d(x, t) no larger than the
incumbent's, so the scan stops once the shell distance passes both
bounds.  Ties are broken by smaller d(t, x), then smaller d(t, y), then
vertices before midpoints, then smallest vertex id, which makes the
result independent of scan order.
"""
from __future__ import annotations

import itertools
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .ball import HALF, VERTEX, BallIndex, Point
from .errors import InputError, ResourceError

EXHAUSTIVE_TRIPLE_CAP = 10 ** 7
DEFAULT_FORCED_SAMPLES = 100_000


@dataclass(frozen=True)
class MedianResult:
    t: Point
    slack: Fraction
    pair_slacks: tuple[Fraction, Fraction, Fraction]  # pairs xy, yz, zx


@dataclass
class DeltaEstimate:
    radius: int
    domain: str               # "vertices" or "half"
    sampling: str             # "exhaustive" or "sampled(count,seed)"
    value: Fraction
    witness: tuple[Point, Point, Point] | None
    witness_median: MedianResult | None
    triples_examined: int


def _pd2(ball: BallIndex, p: Point, tid: int) -> int | None:
    """Twice the distance from a point to a vertex id, None if
    undeterminable.  The search runs on doubled integer distances to stay
    off Fraction arithmetic."""
    if p.kind == VERTEX:
        d = ball.vertex_distance(p.a, tid)
        return None if d is None else 2 * d
    da = ball.vertex_distance(p.a, tid)
    db = ball.vertex_distance(p.b, tid)
    if da is None:
        if db is None:
            return None
        da = db
    elif db is not None and db < da:
        da = db
    return 2 * da + 1


def slack(ball: BallIndex, t: Point, x: Point, y: Point, z: Point) -> Fraction:
    """Worst pair slack of t for the triple (x, y, z)."""
    return max(pair_slacks(ball, t, x, y, z))


def pair_slacks(ball: BallIndex, t: Point, x: Point, y: Point,
                z: Point) -> tuple[Fraction, Fraction, Fraction]:
    dxt, dyt, dzt = (ball.distance(p, t) for p in (x, y, z))
    return (dxt + dyt - ball.distance(x, y),
            dyt + dzt - ball.distance(y, z),
            dzt + dxt - ball.distance(z, x))


class _MedianSearch:
    """Shell scan state; all distances are doubled integers internally."""

    def __init__(self, ball: BallIndex, x: Point, y: Point, z: Point,
                 t_halves: bool):
        self.ball = ball
        self.x, self.y, self.z = x, y, z
        self.t_halves = t_halves
        dxy = ball.try_distance(x, y)
        dyz = ball.try_distance(y, z)
        dzx = ball.try_distance(z, x)
        if None in (dxy, dyz, dzx):
            raise ResourceError("triple distances not determinable in this ball")
        self.dxy2, self.dyz2, self.dzx2 = int(2 * dxy), int(2 * dyz), int(2 * dzx)
        self.best_key: tuple | None = None
        self.seen_mids: set[tuple[int, int]] = set()

    def consider_vertex(self, tid: int) -> None:
        dx = _pd2(self.ball, self.x, tid)
        dy = _pd2(self.ball, self.y, tid)
        dz = _pd2(self.ball, self.z, tid)
        if dx is None or dy is None or dz is None:
            return
        self._offer(VERTEX, tid, -1, dx, dy, dz)

    def consider_mid(self, u: int, v: int) -> None:
        key = (u, v) if u < v else (v, u)
        if key in self.seen_mids:
            return
        self.seen_mids.add(key)
        ds = []
        for p in (self.x, self.y, self.z):
            if p.kind == HALF and key == (p.a, p.b):
                ds.append(0)
                continue
            du = _pd2(self.ball, p, u)
            dv = _pd2(self.ball, p, v)
            if du is None:
                if dv is None:
                    return
                du = dv
            elif dv is not None and dv < du:
                du = dv
            ds.append(du + 1)
        self._offer(HALF, key[0], key[1], *ds)

    def _offer(self, kind: int, a: int, b: int,
               dx: int, dy: int, dz: int) -> None:
        s = dx + dy - self.dxy2
        s2 = dy + dz - self.dyz2
        if s2 > s:
            s = s2
        s2 = dz + dx - self.dzx2
        if s2 > s:
            s = s2
        key = (s, dx, dy, kind, a, b)
        if self.best_key is None or key < self.best_key:
            self.best_key = key
            self._best_dz = dz

    def _aborted(self, cap2: int | None) -> bool:
        return cap2 is not None and self.best_key is not None \
            and self.best_key[0] <= cap2

    def seed(self, cap2: int | None) -> bool:
        """Evaluate the triple's own points and the points along one
        geodesic per pair; in well-behaved groups this already contains a
        minimum-slack t.  Returns True when the cap aborts the triple."""
        for p in (self.x, self.y, self.z):
            if p.kind == VERTEX:
                self.consider_vertex(p.a)
            elif self.t_halves:
                self.consider_mid(p.a, p.b)
            if self._aborted(cap2):
                return True
        for a, b in ((self.x, self.y), (self.y, self.z), (self.z, self.x)):
            try:
                path = self.ball.geodesic(a, b)
            except ResourceError:
                continue
            cur = path.start_vertex
            self.consider_vertex(cur)
            for gen in path.word:
                nxt = self.ball.adj[cur][gen]
                if nxt < 0:
                    break
                if self.t_halves:
                    self.consider_mid(cur, nxt)
                self.consider_vertex(nxt)
                cur = nxt
                if self._aborted(cap2):
                    return True
            if self._aborted(cap2):
                return True
        return False

    def _result(self) -> MedianResult | None:
        if self.best_key is None:
            return None
        s, dx, dy, kind, a, b = self.best_key
        dz = self._best_dz
        half = Fraction(1, 2)
        pairs = (half * (dx + dy - self.dxy2),
                 half * (dy + dz - self.dyz2),
                 half * (dz + dx - self.dzx2))
        return MedianResult(Point(kind, a, b), half * s, pairs)

    def run(self, cap: Fraction | None, prune: bool) -> MedianResult | None:
        ball = self.ball
        cap2 = None if cap is None else int(2 * cap)
        if self.seed(cap2):
            return None
        anchor = self.x.a
        anchor_elem = ball.elements[anchor]
        mult = ball.group.multiply
        elements = ball.elements
        index_get = ball.index.get
        m = 0
        while m <= ball.radius:
            if prune and self.best_key is not None:
                # any improver satisfies 2 d(x,t) <= min(dxy2 + slack2, best dx2),
                # and shell-m candidates all have 2 d(x,t) >= 2(m-1)
                bound2 = min(self.dxy2 + self.best_key[0] // 2,
                             self.best_key[1])
                if 2 * (m - 1) > bound2:
                    break
            for sid in ball.shell(m):
                tid = index_get(mult(anchor_elem, elements[sid]))
                if tid is None:
                    continue
                self.consider_vertex(tid)
                if self.t_halves:
                    for w in ball.adj[tid]:
                        if w >= 0:
                            self.consider_mid(tid, w)
                if self._aborted(cap2):
                    return None
            m += 1
        return self._result()


def median(ball: BallIndex, x: Point, y: Point, z: Point,
           cap: Fraction | None = None, t_halves: bool = True,
           prune: bool = True) -> MedianResult | None:
    """The minimum-slack point t for the triple, or None if every slack at
    or below `cap` (when given) was ruled out early."""
    for p in (x, y, z):
        ball.check_point(p)
    if len({x, y, z}) != 3:
        raise InputError("median needs three distinct points")
    return _MedianSearch(ball, x, y, z, t_halves).run(cap, prune)


def domain_points(ball: BallIndex, radius: int, domain: str) -> list[Point]:
    """The triple domain: vertices of norm <= radius, plus edge midpoints
    of norm <= radius when domain == "half"."""
    if radius > ball.radius:
        raise InputError("domain radius exceeds ball radius")
    if domain not in ("vertices", "half"):
        raise InputError(f"unknown triple domain {domain!r}")
    pts = [Point.vertex(v) for v in range(len(ball.elements))
           if ball.dist[v] <= radius]
    if domain == "half":
        for u, v in ball.edges:
            if min(ball.dist[u], ball.dist[v]) + Fraction(1, 2) <= radius:
                pts.append(Point(HALF, u, v))
    return pts


def recommended_ball_radius(group, domain_radius: int) -> int:
    """A build radius that keeps all triple and t-search distances exact."""
    if group.exact_norm(group.identity()) is not None:
        return domain_radius + 2
    return 2 * domain_radius + 2


_CHUNK = 4096


def _process_chunk(ball, points, triples, start_index, cap, t_halves):
    records = []
    local_cap = cap
    for offset, (i, j, k) in enumerate(triples):
        med = median(ball, points[i], points[j], points[k],
                     cap=local_cap, t_halves=t_halves)
        if med is not None and med.slack > local_cap:
            records.append((start_index + offset, (i, j, k), med))
            local_cap = med.slack
    return records


def estimate_delta(ball: BallIndex, radius: int, domain: str = "half",
                   sampling: str = "exhaustive", samples: int = 0,
                   seed: int = 0, threads: int = 1) -> DeltaEstimate:
    """Maximize the triple delta over the domain.

    Exhaustive mode iterates all unordered triples and is permitted only
    while (domain size)^3 stays under 10^7; beyond that, seeded sampling
    is forced.  The result is deterministic for a given configuration and
    independent of the thread count: chunks are merged by an associative
    maximum, and the witness is the earliest triple attaining it.
    """
    points = domain_points(ball, radius, domain)
    n = len(points)
    label = sampling
    if sampling == "exhaustive" and n ** 3 > EXHAUSTIVE_TRIPLE_CAP:
        sampling = "sampled"
        samples = samples or DEFAULT_FORCED_SAMPLES
        label = f"sampled({samples},{seed})"
    elif sampling == "sampled":
        if samples <= 0:
            raise InputError("sampled mode needs a positive sample count")
        label = f"sampled({samples},{seed})"

    if sampling == "exhaustive":
        triple_iter = itertools.combinations(range(n), 3)
        total = n * (n - 1) * (n - 2) // 6
    elif sampling == "sampled":
        if n < 3:
            raise InputError("domain has fewer than three points")
        rng = random.Random(seed)
        triple_iter = iter([tuple(rng.sample(range(n), 3))
                            for _ in range(samples)])
        total = samples
    else:
        raise InputError(f"unknown sampling mode {sampling!r}")

    t_halves = True  # the t-search always admits midpoints
    records: list[tuple[int, tuple[int, int, int], MedianResult]] = []
    cap = Fraction(-1)  # below any slack, so the first triple is recorded
    index = 0
    done = False
    while not done:
        wave: list[list[tuple[int, int, int]]] = []
        for _ in range(max(1, threads)):
            chunk = list(itertools.islice(triple_iter, _CHUNK))
            if not chunk:
                done = True
                break
            wave.append(chunk)
        if not wave:
            break
        if threads > 1 and len(wave) > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                futs = []
                off = index
                for chunk in wave:
                    futs.append(pool.submit(_process_chunk, ball, points,
                                            chunk, off, cap, t_halves))
                    off += len(chunk)
                for fut in futs:
                    records.extend(fut.result())
                index = off
        else:
            for chunk in wave:
                records.extend(_process_chunk(ball, points, chunk, index,
                                              cap, t_halves))
                index += len(chunk)
        for rec in records:
            if rec[2].slack > cap:
                cap = rec[2].slack

    value = Fraction(0)
    witness = None
    witness_median = None
    if records:
        top = max(r[2].slack for r in records)
        idx, (i, j, k), med = min((r for r in records if r[2].slack == top),
                                  key=lambda r: r[0])
        value = max(top, Fraction(0))
        witness = (points[i], points[j], points[k])
        witness_median = med
    return DeltaEstimate(radius, domain, label, value, witness,
                         witness_median, total)
