"""Finite edge-labeled graphs stored as per-label vertex maps.

A graph is the action graph of a family of partial injections, one per
alphabet label, on the vertex set {0..n-1}.  An edge is a (vertex, label)
pair; inverse labels are the inverse partial maps and are never stored
separately.  When every map is a total permutation the graph is *complete*
and is exactly the coset/action graph of a permutation representation.

All values are immutable after construction; every operation returns new
objects and may run concurrently on shared graphs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

NO_EDGE = -1


class DisconnectedGraphError(ValueError):
    pass


@dataclass(frozen=True)
class Alphabet:
    """Ordered generator names.  Order is fixed and drives all traversals.

    Each label has a formal inverse written as the upper-cased name; signed
    letters are encoded as ints: +(i+1) for labels[i], -(i+1) for its inverse.
    """

    labels: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.labels)) != len(self.labels):
            raise ValueError(f"duplicate labels in {self.labels}")
        uppers = {lab.upper() for lab in self.labels}
        if uppers & set(self.labels) and any(lab != lab.upper() for lab in self.labels):
            # a label equal to another's inverse name would make words ambiguous
            clash = uppers & set(self.labels)
            raise ValueError(f"labels clash with inverse names: {sorted(clash)}")

    def __len__(self):
        return len(self.labels)

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def signed(self, label: str, sign: int = 1) -> int:
        return (self.index(label) + 1) * (1 if sign > 0 else -1)

    def signed_letters(self) -> tuple[int, ...]:
        """All signed letters in traversal order: +1, -1, +2, -2, ..."""
        out = []
        for i in range(len(self.labels)):
            out.extend((i + 1, -(i + 1)))
        return tuple(out)

    def letter_name(self, s: int) -> str:
        lab = self.labels[abs(s) - 1]
        return lab if s > 0 else lab.upper()


class LabeledGraph:
    """Vertices 0..n-1 with one partial injective map per label.

    ``steps[i][v]`` is the endpoint of the labels[i]-edge out of v, or
    NO_EDGE.  Inverse maps are derived on construction.  ``basepoint`` is
    the distinguished vertex (a coset graph's trivial coset).
    """

    __slots__ = ("alphabet", "n", "basepoint", "_fwd", "_inv", "_complete")

    def __init__(self, alphabet: Alphabet, steps, basepoint: int = 0):
        fwd = np.array(steps, dtype=np.int64)
        if fwd.ndim != 2 or fwd.shape[0] != len(alphabet):
            raise ValueError("steps must be one row per label")
        n = fwd.shape[1]
        if not (0 <= basepoint < n):
            raise ValueError(f"basepoint {basepoint} out of range for {n} vertices")
        inv = np.full_like(fwd, NO_EDGE)
        for i in range(fwd.shape[0]):
            row = fwd[i]
            defined = row != NO_EDGE
            tgt = row[defined]
            if tgt.size and (tgt.min() < 0 or tgt.max() >= n):
                raise ValueError(f"label {alphabet.labels[i]!r} maps outside the vertex set")
            if np.unique(tgt).size != tgt.size:
                raise ValueError(f"label {alphabet.labels[i]!r} is not injective")
            inv[i][tgt] = np.nonzero(defined)[0]
        self.alphabet = alphabet
        self.n = int(n)
        self.basepoint = int(basepoint)
        self._fwd = fwd
        self._fwd.setflags(write=False)
        self._inv = inv
        self._inv.setflags(write=False)
        self._complete = bool((fwd != NO_EDGE).all())

    # -- basic queries ----------------------------------------------------

    @property
    def complete(self) -> bool:
        return self._complete

    def step(self, v: int, s: int) -> int:
        """Follow the signed letter s from v; NO_EDGE if undefined."""
        return int(self._fwd[s - 1, v] if s > 0 else self._inv[-s - 1, v])

    def step_array(self, s: int) -> np.ndarray:
        return self._fwd[s - 1] if s > 0 else self._inv[-s - 1]

    def same_as(self, other: "LabeledGraph") -> bool:
        return (
            self.alphabet == other.alphabet
            and self.n == other.n
            and self.basepoint == other.basepoint
            and bool((self._fwd == other._fwd).all())
        )

    def connected_from_basepoint(self) -> bool:
        seen = np.zeros(self.n, dtype=bool)
        seen[self.basepoint] = True
        frontier = [self.basepoint]
        letters = self.alphabet.signed_letters()
        while frontier:
            nxt = []
            for v in frontier:
                for s in letters:
                    w = self.step(v, s)
                    if w != NO_EDGE and not seen[w]:
                        seen[w] = True
                        nxt.append(w)
            frontier = nxt
        return bool(seen.all())

    def __repr__(self):
        flag = "complete" if self._complete else "partial"
        return f"LabeledGraph({self.n} vertices, labels={list(self.alphabet.labels)}, {flag})"


@dataclass(frozen=True)
class BallSnapshot:
    """Exact BFS distances around a center, up to a radius.

    ``members`` maps vertex -> distance and iterates in discovery order
    (distance, then label order, then vertex id).  ``host_level`` records
    the tower level the ball was computed in, when applicable.
    """

    center: int
    radius: int
    members: dict[int, int]
    host_level: int | None = None

    @property
    def size(self) -> int:
        return len(self.members)


class UnionFind:
    """Array-backed union-find with path compression."""

    __slots__ = ("parent",)

    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        p = self.parent
        root = x
        while p[root] != root:
            root = p[root]
        while p[x] != root:
            p[x], x = root, p[x]
        return root

    def union(self, a: int, b: int) -> int:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra
        return ra


# -- BFS helpers shared with the tower-level machinery ---------------------

def bfs_distances(stepfn, signed_letters, center: int, radius: int) -> dict[int, int]:
    """Distances from center up to radius, for any complete step function."""
    dist = {center: 0}
    frontier = [center]
    for d in range(1, radius + 1):
        nxt = []
        for v in frontier:
            for s in signed_letters:
                w = stepfn(v, s)
                if w not in dist:
                    dist[w] = d
                    nxt.append(w)
        if not nxt:
            break
        frontier = nxt
    return dist


def annulus_counts(stepfn, signed_letters, dist: dict[int, int], r: int, R: int) -> tuple[int, int]:
    """Component counts of the induced subgraph on {v : r < dist[v] <= R}.

    Returns (count, touching) where touching is the number of components
    containing a vertex at distance exactly R.  An edge belongs to the
    induced subgraph iff both endpoints do.
    """
    members = {}
    for v, d in dist.items():
        if r < d <= R:
            members[v] = len(members)
    if not members:
        return 0, 0
    uf = UnionFind(len(members))
    for v, i in members.items():
        for s in signed_letters:
            w = stepfn(v, s)
            j = members.get(w)
            if j is not None:
                uf.union(i, j)
    roots = {uf.find(i) for i in members.values()}
    touching = {uf.find(members[v]) for v in members if dist[v] == R}
    return len(roots), len(touching)


# -- graph-core operations --------------------------------------------------

def make_action_graph(n: int, perms, basepoint: int = 0, alphabet: Alphabet | None = None) -> LabeledGraph:
    """Action graph of a permutation representation.

    ``perms`` maps label -> permutation of {0..n-1} (dict, ordered).  Every
    map must be a bijection; the offending label is reported otherwise.
    """
    if alphabet is None:
        alphabet = Alphabet(tuple(perms.keys()))
    steps = []
    for lab in alphabet.labels:
        row = np.asarray(perms[lab], dtype=np.int64)
        if row.shape != (n,) or np.unique(row).size != n or row.min() < 0 or row.max() >= n:
            raise ValueError(f"map for label {lab!r} is not a bijection on 0..{n - 1}")
        steps.append(row)
    return LabeledGraph(alphabet, np.stack(steps), basepoint)


def ball(G: LabeledGraph, v: int, r: int, host_level: int | None = None) -> BallSnapshot:
    """Exact metric ball of radius r around v (unit edge lengths)."""
    if not G.complete:
        raise ValueError("ball requires a complete graph")
    dist = bfs_distances(G.step, G.alphabet.signed_letters(), v, r)
    return BallSnapshot(center=v, radius=r, members=dist, host_level=host_level)


def distance(G: LabeledGraph, u: int, v: int) -> int:
    """Length of a shortest edge path from u to v."""
    if not G.complete:
        raise ValueError("distance requires a complete graph")
    if u == v:
        return 0
    letters = G.alphabet.signed_letters()
    dist = {u: 0}
    frontier = [u]
    d = 0
    while frontier:
        d += 1
        nxt = []
        for x in frontier:
            for s in letters:
                w = G.step(x, s)
                if w == v:
                    return d
                if w not in dist:
                    dist[w] = d
                    nxt.append(w)
        frontier = nxt
    raise DisconnectedGraphError(f"vertex {v} not reachable from {u}")


def annulus_components(G: LabeledGraph, v: int, r: int, R: int) -> tuple[int, int]:
    """Components of the annulus r < d(v, .) <= R; see annulus_counts."""
    if not G.complete:
        raise ValueError("annulus_components requires a complete graph")
    if not r < R:
        raise ValueError("need r < R")
    letters = G.alphabet.signed_letters()
    dist = bfs_distances(G.step, letters, v, R)
    return annulus_counts(G.step, letters, dist, r, R)


def prune_loops(G: LabeledGraph, drop) -> LabeledGraph:
    """Remove labels whose edges are all loops.  Vertices are unchanged,
    so the retraction onto the result is the identity on vertices."""
    drop = set(drop)
    keep = []
    for i, lab in enumerate(G.alphabet.labels):
        if lab in drop:
            row = G.step_array(i + 1)
            if not (row == np.arange(G.n)).all():
                raise ValueError(f"label {lab!r} has a non-loop edge; only loops may be dropped")
            drop.remove(lab)
        else:
            keep.append(i)
    if drop:
        raise ValueError(f"labels not in graph: {sorted(drop)}")
    alphabet = Alphabet(tuple(G.alphabet.labels[i] for i in keep))
    steps = np.stack([G.step_array(i + 1) for i in keep]) if keep else np.empty((0, G.n), np.int64)
    return LabeledGraph(alphabet, steps, G.basepoint)


def decorate_with_loops(G: LabeledGraph, add) -> LabeledGraph:
    """Append labels acting as the identity (a loop at every vertex)."""
    add = tuple(add)
    if set(add) & set(G.alphabet.labels):
        raise ValueError(f"labels already present: {sorted(set(add) & set(G.alphabet.labels))}")
    alphabet = Alphabet(G.alphabet.labels + add)
    ident = np.arange(G.n, dtype=np.int64)
    rows = [G.step_array(i + 1) for i in range(len(G.alphabet))] + [ident] * len(add)
    return LabeledGraph(alphabet, np.stack(rows), G.basepoint)


def covering_failure(hi: LabeledGraph, lo: LabeledGraph, vmap) -> tuple | None:
    """First witness that vmap is not a label-equivariant covering, or None.

    A witness is (vertex, label) with vmap(step(v)) != step(vmap(v)), or a
    ('fiber', ...) tuple when fiber sizes are uneven or the map misses
    vertices of the base.
    """
    vmap = np.asarray(vmap, dtype=np.int64)
    if vmap.shape != (hi.n,):
        raise ValueError("vmap must be total on the cover's vertices")
    for i, lab in enumerate(hi.alphabet.labels):
        upstairs = vmap[hi.step_array(i + 1)]
        downstairs = lo.step_array(i + 1)[vmap]
        bad = np.nonzero(upstairs != downstairs)[0]
        if bad.size:
            return (int(bad[0]), lab)
    sizes = np.bincount(vmap, minlength=lo.n)
    if sizes.min() == 0:
        return ("fiber", "not surjective", int(np.argmin(sizes)))
    if sizes.min() != sizes.max():
        return ("fiber", "uneven", int(sizes.min()), int(sizes.max()))
    return None


def is_covering(hi: LabeledGraph, lo: LabeledGraph, vmap) -> bool:
    """True iff vmap is label-equivariant, surjective, with constant fibers."""
    if hi.alphabet != lo.alphabet or not (hi.complete and lo.complete):
        return False
    return covering_failure(hi, lo, vmap) is None


def covering_map(hi: LabeledGraph, lo: LabeledGraph) -> np.ndarray | None:
    """The basepoint-preserving equivariant map hi -> lo, if one exists.

    Built by BFS from the basepoints; on connected complete graphs such a
    map is unique when it exists.
    """
    if hi.alphabet != lo.alphabet or not (hi.complete and lo.complete):
        return None
    vmap = np.full(hi.n, NO_EDGE, dtype=np.int64)
    vmap[hi.basepoint] = lo.basepoint
    letters = hi.alphabet.signed_letters()
    frontier = [hi.basepoint]
    while frontier:
        nxt = []
        for v in frontier:
            for s in letters:
                w, img = hi.step(v, s), lo.step(int(vmap[v]), s)
                if vmap[w] == NO_EDGE:
                    vmap[w] = img
                    nxt.append(w)
                elif vmap[w] != img:
                    return None
        frontier = nxt
    if (vmap == NO_EDGE).any():
        return None  # cover not connected; map not determined
    return vmap


def labeled_iso(G1: LabeledGraph, G2: LabeledGraph) -> np.ndarray | None:
    """The basepoint-preserving label-equivariant bijection, if one exists."""
    if G1.n != G2.n:
        return None
    vmap = covering_map(G1, G2)
    if vmap is None:
        return None
    if np.unique(vmap).size != G2.n:
        return None
    return vmap
