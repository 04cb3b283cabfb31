"""Freely reduced words, the recursive generator sets of the 3-fold
surface chain, and Stallings folding into coset graphs.

Word syntax for CLI/config: lowercase letters are generators, uppercase
their inverses, no whitespace: ``aabA`` is a.a.b.a^-1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import NO_EDGE, Alphabet, LabeledGraph, UnionFind


class InfiniteIndexError(ValueError):
    """Raised where a finite coset count is required but the folded graph
    is incomplete (the subgroup has infinite index)."""


def _reduce_letters(letters) -> tuple[int, ...]:
    out = []
    for s in letters:
        if out and out[-1] == -s:
            out.pop()
        else:
            out.append(int(s))
    return tuple(out)


@dataclass(frozen=True)
class Word:
    """A freely reduced word; letters are signed label indices (+/-(i+1))."""

    letters: tuple[int, ...]

    @staticmethod
    def of(letters) -> "Word":
        return Word(_reduce_letters(letters))

    @staticmethod
    def identity() -> "Word":
        return Word(())

    def __mul__(self, other: "Word") -> "Word":
        return Word(_reduce_letters(self.letters + other.letters))

    def inverse(self) -> "Word":
        return Word(tuple(-s for s in reversed(self.letters)))

    def conjugate_by(self, w: "Word") -> "Word":
        """w . self . w^-1"""
        return w * self * w.inverse()

    def __len__(self):
        return len(self.letters)

    def format(self, alphabet: Alphabet) -> str:
        return "".join(alphabet.letter_name(s) for s in self.letters)


def reduce(letters) -> Word:
    """Freely reduce a raw signed-letter sequence.  Idempotent."""
    return Word.of(letters)


def parse_word(text: str, alphabet: Alphabet) -> Word:
    """Parse ``aabA``-style syntax (single-character labels only)."""
    letters = []
    for ch in text:
        low = ch.lower()
        if low not in alphabet.labels:
            raise ValueError(f"unknown label {ch!r} (alphabet {list(alphabet.labels)})")
        idx = alphabet.index(low) + 1
        letters.append(idx if ch == low else -idx)
    return Word.of(letters)


def power(letter: int, exponent: int) -> Word:
    if exponent >= 0:
        return Word((letter,) * exponent)
    return Word((-letter,) * (-exponent))


# -- the recursive generator sets ------------------------------------------

FULL_ALPHABET = Alphabet(("a", "b", "p", "q"))  # p, q: the loop generators
SIMPLE_ALPHABET = Alphabet(("a", "b"))

_A, _B, _P, _Q = 1, 2, 3, 4


@dataclass(frozen=True)
class SubgroupChainSpec:
    """Level-k generator sets of the 3^k-index subgroup chain.

    ``simplified`` is over the free group on a, b; ``full`` keeps the two
    extra generators that act trivially at every level (the per-vertex
    loops), which the folding routines never consume.
    """

    k: int
    variant: str
    s_ab: tuple[Word, ...]
    s_ba: tuple[Word, ...]
    s_a: tuple[Word, ...]
    s_b: tuple[Word, ...]

    def generators(self) -> tuple[Word, ...]:
        return _sorted_words(set(self.s_a) | set(self.s_b))


def _sorted_words(ws) -> tuple[Word, ...]:
    return tuple(sorted(ws, key=lambda w: (len(w), w.letters)))


def schori_generator_sets(k: int, variant: str = "simplified") -> SubgroupChainSpec:
    """Unroll the doubling recursion for the level-k generator sets.

    At level 0 the a-part is {a} and the cross sets are empty; each step
    conjugates the previous b-part and cross set by the current a-power
    (and symmetrically), then adjoins the doubled powers.  Words are kept
    freely reduced and deduplicated.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    if variant not in ("simplified", "full"):
        raise ValueError(f"unknown variant {variant!r}")
    full = variant == "full"
    s_ab: set[Word] = set()
    s_ba: set[Word] = set()
    s_a = {Word((_A,))} | ({Word((_P,))} if full else set())
    s_b = {Word((_B,))} | ({Word((_Q,))} if full else set())
    for j in range(1, k + 1):
        half_a = power(_A, 2 ** (j - 1))
        half_b = power(_B, 2 ** (j - 1))
        new_ab = s_ab | {w.conjugate_by(half_a) for w in (s_ab | s_b)}
        new_ba = s_ba | {w.conjugate_by(half_b) for w in (s_ba | s_a)}
        s_ab, s_ba = new_ab, new_ba
        s_a = {power(_A, 2 ** j)} | ({Word((_P,))} if full else set()) | s_ab
        s_b = {power(_B, 2 ** j)} | ({Word((_Q,))} if full else set()) | s_ba
    return SubgroupChainSpec(
        k=k,
        variant=variant,
        s_ab=_sorted_words(s_ab),
        s_ba=_sorted_words(s_ba),
        s_a=_sorted_words(s_a),
        s_b=_sorted_words(s_b),
    )


# -- Stallings folding -------------------------------------------------------

def stallings_fold(gens, alphabet: Alphabet = SIMPLE_ALPHABET) -> LabeledGraph:
    """Folded core graph of the subgroup generated by ``gens``.

    Builds a wedge of word-loops at a basepoint, then merges endpoints of
    same-label darts until every map is deterministic, with a union-find
    over vertices.  The result is based at the subgroup's coset; when it
    is complete it equals the coset graph, one vertex per coset.
    """
    gens = list(gens)
    if not gens:
        raise ValueError("need a nonempty generator set")
    nlabels = len(alphabet)
    edges: list[tuple[int, int, int]] = []
    nv = 1
    for w in gens:
        for s in w.letters:
            if abs(s) > nlabels:
                raise ValueError(f"word uses a letter outside {list(alphabet.labels)}")
        cur = 0
        for i, s in enumerate(w.letters):
            tgt = 0 if i == len(w.letters) - 1 else nv
            if tgt != 0:
                nv += 1
            edges.append((cur, s, tgt))
            cur = tgt

    uf = UnionFind(nv)
    out: list[dict[int, int]] = [dict() for _ in range(nv)]

    def do_merge(a: int, b: int) -> None:
        stack = [(a, b)]
        while stack:
            x, y = stack.pop()
            x, y = uf.find(x), uf.find(y)
            if x == y:
                continue
            if len(out[x]) < len(out[y]):
                x, y = y, x
            uf.parent[y] = x
            moved = out[y]
            out[y] = {}
            for s, w in moved.items():
                cur = out[x].get(s)
                if cur is None:
                    out[x][s] = w
                else:
                    cur, w = uf.find(cur), uf.find(w)
                    if cur != w:
                        stack.append((cur, w))

    for u, s, v in edges:
        # assert dart u --s--> v and its reverse, folding on clashes
        while True:
            ru, rv = uf.find(u), uf.find(v)
            cur = out[ru].get(s)
            if cur is not None and uf.find(cur) != rv:
                do_merge(cur, rv)
                continue
            out[ru][s] = rv
            rcur = out[rv].get(-s)
            if rcur is not None and uf.find(rcur) != ru:
                do_merge(rcur, ru)
                continue
            # no merges happened in this pass: both darts are consistent
            out[rv][-s] = ru
            break

    return _canonical_graph(out, uf, alphabet)


def _canonical_graph(out, uf, alphabet: Alphabet) -> LabeledGraph:
    """Renumber folded classes by BFS from the basepoint class, exploring
    letters in alphabet order, so that folding output is canonical
    regardless of generator insertion order."""
    from collections import deque

    base = uf.find(0)
    order = {base: 0}
    queue = deque([base])
    letters = alphabet.signed_letters()
    while queue:
        v = queue.popleft()
        for s in letters:
            w = out[v].get(s)
            if w is None:
                continue
            w = uf.find(w)
            if w not in order:
                order[w] = len(order)
                queue.append(w)
    n = len(order)
    steps = np.full((len(alphabet), n), NO_EDGE, dtype=np.int64)
    for v, vid in order.items():
        for s, w in out[v].items():
            if s > 0:
                steps[s - 1, vid] = order[uf.find(w)]
    return LabeledGraph(alphabet, steps, basepoint=0)


def coset_count(G: LabeledGraph) -> int:
    """Vertex count of a complete folded graph (the subgroup's index)."""
    if not G.complete:
        raise InfiniteIndexError("folded graph is incomplete: the subgroup has infinite index")
    return G.n


def trace_word(G: LabeledGraph, start: int, w: Word) -> int:
    """Endpoint of the unique lift of w starting at ``start``."""
    v = start
    for s in w.letters:
        v = G.step(v, s)
        if v == NO_EDGE:
            raise ValueError("word leaves the partial graph")
    return v
