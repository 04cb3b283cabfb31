"""Towers of finite covering graphs with coherent basepoints.

A tower holds level graphs L_0, L_1, ... and per-level bonding maps
(coverings) L_{k+1} -> L_k.  Levels up to an eager depth are materialized
as arrays; deeper levels are evaluated lazily, one edge step at a time,
so classification and ball computations can reach depths whose full
graphs would never fit in memory.

Vertex ids are chosen so that the basepoint of every level is 0 and, for
cover constructions, v = parent * degree + sheet; the bonding map is then
integer division.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

import numpy as np

from .graphs import (
    NO_EDGE,
    Alphabet,
    LabeledGraph,
    covering_map,
    decorate_with_loops,
    make_action_graph,
)
from .words import schori_generator_sets, stallings_fold

DEFAULT_MATERIALIZE_BUDGET = 600_000  # vertices per level held as arrays
DEFAULT_MAX_LEVEL = 14

_LABEL_POOL = "abcdefghijklm"


class LevelBudgetError(RuntimeError):
    """A computation needed tower levels beyond the configured budget."""

    def __init__(self, message, last_counts=None):
        super().__init__(message)
        self.last_counts = last_counts


# -- permutation-voltage covers ---------------------------------------------

@dataclass
class VoltageAssignment:
    """Sheet permutations on darts of a base graph.

    ``darts`` maps (vertex, label-name) to a permutation of {0..d-1};
    missing darts carry the identity.  A dart given on an inverse label
    is normalized to the forward dart with the inverse permutation; giving
    both inconsistently is an error.
    """

    base: LabeledGraph
    degree: int
    darts: dict

    def normalized(self) -> dict[tuple[int, int], tuple[int, ...]]:
        """Forward darts only: (vertex, label_index) -> permutation tuple."""
        out: dict[tuple[int, int], tuple[int, ...]] = {}
        for (v, label), perm in self.darts.items():
            perm = tuple(int(x) for x in perm)
            if sorted(perm) != list(range(self.degree)):
                raise ValueError(f"dart ({v}, {label}): not a permutation of 0..{self.degree - 1}")
            name = label.lower()
            idx = self.base.alphabet.index(name)
            if label == name:
                key, val = (int(v), idx), perm
            else:
                w = self.base.step(int(v), -(idx + 1))
                inv = [0] * self.degree
                for i, x in enumerate(perm):
                    inv[x] = i
                key, val = (int(w), idx), tuple(inv)
            if key in out and out[key] != val:
                raise ValueError(f"inconsistent voltages for the dart {key} and its reverse")
            out[key] = val
        return out


def voltage_cover(G: LabeledGraph, va: VoltageAssignment) -> tuple[LabeledGraph, np.ndarray]:
    """Degree-d cover with vertex set V x {0..d-1}.

    step_g(v, i) = (step_g(v), sigma_(v,g)(i)); vertex (v, i) gets id
    v*d + i, the bonding map is first-coordinate projection and the
    basepoint is (base, 0).  Connectivity is not guaranteed.
    """
    if va.base is not G and not va.base.same_as(G):
        raise ValueError("voltage assignment built for a different base graph")
    if not G.complete:
        raise ValueError("voltage covers need a complete base")
    d = va.degree
    darts = va.normalized()
    n = G.n
    sheets = np.arange(d, dtype=np.int64)
    rows = []
    for idx in range(len(G.alphabet)):
        tgt = G.step_array(idx + 1)
        block = tgt[:, None] * d + sheets[None, :]
        for (v, lidx), perm in darts.items():
            if lidx == idx:
                block[v] = tgt[v] * d + np.asarray(perm, dtype=np.int64)
        rows.append(block.reshape(-1))
    cover = LabeledGraph(G.alphabet, np.stack(rows), basepoint=G.basepoint * d)
    bonding = np.arange(n * d, dtype=np.int64) // d
    return cover, bonding


@dataclass(frozen=True)
class LevelTaxonomy:
    """Orbit data of the basepoint-dart voltages for one cover step.

    ``orbits[i]`` is the cycle of sheet 0 under the voltage of label i's
    basepoint dart; the nonzero sheets of these cycles partition the
    nonzero sheets, so every sheet other than 0 is owned by exactly one
    label (``owner``).  This is what drives the fast component taxonomy.
    """

    degree: int
    orbits: tuple[tuple[int, ...], ...]
    owner: tuple[int, ...]

    @staticmethod
    def from_sigma(degree: int, sigma: dict[int, tuple[int, ...]], nlabels: int) -> "LevelTaxonomy":
        orbits = []
        owner = [-1] * degree
        for i in range(nlabels):
            perm = sigma.get(i)
            if perm is None:
                raise ValueError("every label needs a basepoint dart voltage")
            cyc = [0]
            s = perm[0]
            while s != 0:
                cyc.append(s)
                s = perm[s]
            orbits.append(tuple(cyc))
            for s in cyc[1:]:
                if owner[s] != -1:
                    raise ValueError(f"sheet {s} lies in two basepoint orbits")
                owner[s] = i
        if any(o == -1 for o in owner[1:]):
            raise ValueError("basepoint orbits do not cover all sheets")
        return LevelTaxonomy(degree, tuple(orbits), tuple(owner))

    def orbit(self, label_idx: int) -> tuple[int, ...]:
        return self.orbits[label_idx]


# -- level families -----------------------------------------------------------

class VoltagePatternFamily:
    """Iterated voltage covers of a one-vertex rose, all voltage darts
    based at the level basepoint."""

    def __init__(self, alphabet: Alphabet, sigma_for_level):
        self.alphabet = alphabet
        self._sigma_for_level = sigma_for_level  # k -> {label_idx: perm tuple}
        self._sigma_cache: dict[int, dict[int, tuple[int, ...]]] = {}
        self._sigma_inv_cache: dict[int, dict[int, tuple[int, ...]]] = {}
        self._tax_cache: dict[int, LevelTaxonomy] = {}

    def sigma(self, k: int) -> dict[int, tuple[int, ...]]:
        if k not in self._sigma_cache:
            sig = {i: tuple(p) for i, p in self._sigma_for_level(k).items()}
            self._sigma_cache[k] = sig
            inv = {}
            for i, p in sig.items():
                q = [0] * len(p)
                for a, b in enumerate(p):
                    q[b] = a
                inv[i] = tuple(q)
            self._sigma_inv_cache[k] = inv
        return self._sigma_cache[k]

    def degree(self, k: int) -> int:
        return len(self.sigma(k)[0])

    def taxonomy(self, k: int) -> LevelTaxonomy:
        if k not in self._tax_cache:
            self._tax_cache[k] = LevelTaxonomy.from_sigma(
                self.degree(k), self.sigma(k), len(self.alphabet)
            )
        return self._tax_cache[k]

    def base_graph(self) -> LabeledGraph:
        return LabeledGraph(
            self.alphabet, np.zeros((len(self.alphabet), 1), dtype=np.int64), 0
        )

    def materialize(self, tower: "Tower", k: int) -> LabeledGraph:
        if k == 0:
            return self.base_graph()
        below = tower.level(k - 1)
        sig = self.sigma(k - 1)
        va = VoltageAssignment(
            base=below,
            degree=self.degree(k - 1),
            darts={(0, self.alphabet.labels[i]): perm for i, perm in sig.items()},
        )
        cover, _ = voltage_cover(below, va)
        return cover

    def lazy_step(self, tower: "Tower", k: int, v: int, s: int) -> int:
        if k == 0:
            return 0
        d = self.degree(k - 1)
        p, sh = divmod(v, d)
        if s > 0:
            p2 = tower.step(k - 1, p, s)
            if p == 0:
                sh = self.sigma(k - 1)[s - 1][sh]
        else:
            p2 = tower.step(k - 1, p, s)
            if p2 == 0:
                self.sigma(k - 1)  # ensure inverse cache
                sh = self._sigma_inv_cache[k - 1][-s - 1][sh]
        return p2 * d + sh

    def project(self, k: int, v: int) -> int:
        return v // self.degree(k - 1)

    def bonding_array(self, tower: "Tower", k: int) -> np.ndarray:
        return np.arange(tower.vertex_count(k + 1), dtype=np.int64) // self.degree(k)

    def lifts(self, k: int, v: int) -> list[int]:
        d = self.degree(k)
        return [v * d + i for i in range(d)]


class _ArithmeticFamily:
    """Shared plumbing for towers given by closed-form actions on Z/m."""

    taxonomy_available = False

    def taxonomy(self, k: int):
        return None

    def bonding_array(self, tower: "Tower", k: int) -> np.ndarray:
        n = tower.vertex_count(k + 1)
        return np.fromiter((self.project(k + 1, v) for v in range(n)), np.int64, n)


class CycleDoublingFamily(_ArithmeticFamily):
    """Level k is the 2^k-cycle; one label steps +1."""

    def __init__(self):
        self.alphabet = Alphabet(("a",))

    def degree(self, k: int) -> int:
        return 2

    def materialize(self, tower, k: int) -> LabeledGraph:
        m = 2 ** k
        perm = (np.arange(m, dtype=np.int64) + 1) % m
        return make_action_graph(m, {"a": perm})

    def lazy_step(self, tower, k: int, v: int, s: int) -> int:
        m = 2 ** k
        return (v + (1 if s > 0 else -1)) % m

    def project(self, k: int, v: int) -> int:
        return v % 2 ** (k - 1)

    def lifts(self, k: int, v: int) -> list[int]:
        return [v, v + 2 ** k]


class TorusFamily(_ArithmeticFamily):
    """Level k is the (Z/2^k)^2 grid torus; a and b step the two axes."""

    def __init__(self):
        self.alphabet = Alphabet(("a", "b"))

    def degree(self, k: int) -> int:
        return 4

    def materialize(self, tower, k: int) -> LabeledGraph:
        m = 2 ** k
        ids = np.arange(m * m, dtype=np.int64)
        x, y = ids // m, ids % m
        return make_action_graph(
            m * m, {"a": ((x + 1) % m) * m + y, "b": x * m + (y + 1) % m}
        )

    def lazy_step(self, tower, k: int, v: int, s: int) -> int:
        m = 2 ** k
        x, y = divmod(v, m)
        delta = 1 if s > 0 else -1
        if abs(s) == 1:
            x = (x + delta) % m
        else:
            y = (y + delta) % m
        return x * m + y

    def project(self, k: int, v: int) -> int:
        m, h = 2 ** k, 2 ** (k - 1)
        x, y = divmod(v, m)
        return (x % h) * h + (y % h)

    def lifts(self, k: int, v: int) -> list[int]:
        m, m2 = 2 ** k, 2 ** (k + 1)
        x, y = divmod(v, m)
        return [(x + e1 * m) * m2 + (y + e2 * m) for e1 in (0, 1) for e2 in (0, 1)]


class HalfTurnFamily(_ArithmeticFamily):
    """Level k is Z/2^k with a: i -> i+1 and b: i -> -i (so bab^-1 = a^-1)."""

    def __init__(self):
        self.alphabet = Alphabet(("a", "b"))

    def degree(self, k: int) -> int:
        return 2

    def materialize(self, tower, k: int) -> LabeledGraph:
        m = 2 ** k
        ids = np.arange(m, dtype=np.int64)
        return make_action_graph(m, {"a": (ids + 1) % m, "b": (-ids) % m})

    def lazy_step(self, tower, k: int, v: int, s: int) -> int:
        m = 2 ** k
        if abs(s) == 1:
            return (v + (1 if s > 0 else -1)) % m
        return (-v) % m

    def project(self, k: int, v: int) -> int:
        return v % 2 ** (k - 1)

    def lifts(self, k: int, v: int) -> list[int]:
        return [v, v + 2 ** k]


class ExplicitFamily:
    """A tower given by prebuilt level graphs and bonding arrays."""

    def __init__(self, levels: list[LabeledGraph], bondings: list[np.ndarray]):
        if len(bondings) != len(levels) - 1:
            raise ValueError("need one bonding map per consecutive level pair")
        self.alphabet = levels[0].alphabet
        self.levels = levels
        self.bondings = [np.asarray(b, dtype=np.int64) for b in bondings]
        self._lifts: list[dict[int, list[int]]] = []
        for b in self.bondings:
            fibers: dict[int, list[int]] = {}
            for v, img in enumerate(b):
                fibers.setdefault(int(img), []).append(v)
            self._lifts.append(fibers)

    def degree(self, k: int) -> int:
        if k >= len(self.bondings):
            raise LevelBudgetError(f"explicit tower has no level {k + 1}")
        return self.levels[k + 1].n // self.levels[k].n

    def taxonomy(self, k: int):
        return None

    def bonding_array(self, tower, k: int) -> np.ndarray:
        return self.bondings[k]

    def materialize(self, tower, k: int) -> LabeledGraph:
        if k >= len(self.levels):
            raise LevelBudgetError(f"explicit tower has no level {k}")
        return self.levels[k]

    def lazy_step(self, tower, k: int, v: int, s: int) -> int:
        return self.levels[k].step(v, s)

    def project(self, k: int, v: int) -> int:
        return int(self.bondings[k - 1][v])

    def lifts(self, k: int, v: int) -> list[int]:
        return list(self._lifts[k][v])


class DecoratedFamily:
    """Wraps a family, adding labels that act as loops at every vertex."""

    def __init__(self, inner, extra: tuple[str, ...]):
        self.inner = inner
        self.extra = extra
        self.alphabet = Alphabet(inner.alphabet.labels + extra)
        self._ncore = len(inner.alphabet)

    def degree(self, k: int) -> int:
        return self.inner.degree(k)

    def taxonomy(self, k: int):
        return self.inner.taxonomy(k)

    def materialize(self, tower, k: int) -> LabeledGraph:
        core = self.inner.materialize(tower._core_proxy(), k)
        return decorate_with_loops(core, self.extra)

    def lazy_step(self, tower, k: int, v: int, s: int) -> int:
        if abs(s) > self._ncore:
            return v
        return self.inner.lazy_step(tower._core_proxy(), k, v, s)

    def project(self, k: int, v: int) -> int:
        return self.inner.project(k, v)

    def bonding_array(self, tower, k: int) -> np.ndarray:
        arr = getattr(self.inner, "bonding_array", None)
        if arr is not None:
            return arr(tower._core_proxy(), k)
        n = tower.vertex_count(k + 1)
        return np.fromiter((self.inner.project(k + 1, v) for v in range(n)), np.int64, n)

    def lifts(self, k: int, v: int) -> list[int]:
        return self.inner.lifts(k, v)


# -- the tower ---------------------------------------------------------------

class Tower:
    """A coherent sequence of covering graphs with lazy deep levels.

    Construction is sequential per tower; once built, towers are immutable
    apart from internal caches and may be shared between workers.
    """

    def __init__(
        self,
        name: str,
        family,
        params: dict | None = None,
        eager_levels: int = 0,
        materialize_budget: int = DEFAULT_MATERIALIZE_BUDGET,
        max_level: int = DEFAULT_MAX_LEVEL,
    ):
        self.name = name
        self.family = family
        self.params = dict(params or {})
        self.materialize_budget = materialize_budget
        self.max_level = max_level
        self._levels: dict[int, LabeledGraph] = {}
        self._counts: list[int] = [1]
        self._cycle_cache: dict[tuple[int, int], int] = {}
        self.eager_levels = eager_levels
        self._core = None  # for DecoratedFamily delegation
        # materialize eagerly while the memory budget allows; deeper levels
        # stay lazy and are still reachable through step()/project()
        for k in range(eager_levels + 1):
            if self.vertex_count(k) > self.materialize_budget:
                break
            self.level(k)

    # -- structural queries

    @property
    def alphabet(self) -> Alphabet:
        return self.family.alphabet

    def signed_letters(self) -> tuple[int, ...]:
        return self.alphabet.signed_letters()

    def degree(self, k: int) -> int:
        return self.family.degree(k)

    def degrees(self, upto: int) -> list[int]:
        return [self.degree(k) for k in range(upto)]

    def vertex_count(self, k: int) -> int:
        while len(self._counts) <= k:
            j = len(self._counts)
            self._counts.append(self._counts[-1] * self.degree(j - 1))
        return self._counts[k]

    def base(self, k: int) -> int:
        return 0

    def taxonomy(self, k: int) -> LevelTaxonomy | None:
        return self.family.taxonomy(k)

    @property
    def has_taxonomy(self) -> bool:
        try:
            return self.family.taxonomy(0) is not None
        except Exception:
            return False

    # -- levels and maps

    def level(self, k: int) -> LabeledGraph:
        """Materialized level graph (cached); budget-checked."""
        if k not in self._levels:
            if self.vertex_count(k) > self.materialize_budget:
                raise LevelBudgetError(
                    f"level {k} of {self.name} has {self.vertex_count(k)} vertices, "
                    f"over the materialize budget {self.materialize_budget}"
                )
            self._levels[k] = self.family.materialize(self, k)
        return self._levels[k]

    def bonding(self, k: int) -> np.ndarray:
        """Vertex map from level k+1 onto level k, as an array."""
        n = self.vertex_count(k + 1)
        arr = getattr(self.family, "bonding_array", None)
        if arr is not None:
            return arr(self, k)
        return np.fromiter((self.family.project(k + 1, v) for v in range(n)), np.int64, n)

    def step(self, k: int, v: int, s: int) -> int:
        g = self._levels.get(k)
        if g is not None:
            return g.step(v, s)
        return self.family.lazy_step(self, k, v, s)

    def stepper(self, k: int):
        """A (v, s) -> v' closure for level k, array-backed when possible."""
        if self.vertex_count(k) <= self.materialize_budget:
            g = self.level(k)
            return g.step
        return lambda v, s: self.family.lazy_step(self, k, v, s)

    def project(self, k: int, v: int) -> int:
        return self.family.project(k, v)

    def lifts(self, k: int, v: int) -> list[int]:
        """Bonding preimages at level k+1 of a level-k vertex, in a fixed order."""
        return self.family.lifts(k, v)

    def cycle_length(self, k: int, label_idx: int) -> int:
        """Length of the label's cycle through the basepoint at level k."""
        if self.taxonomy(0) is not None:
            L = 1
            for j in range(k):
                L *= len(self.taxonomy(j).orbit(label_idx))
            return L
        key = (k, label_idx)
        if key not in self._cycle_cache:
            # no orbit data: walk the cycle once
            s = label_idx + 1
            v, L = self.step(k, self.base(k), s), 1
            while v != self.base(k):
                v, L = self.step(k, v, s), L + 1
            self._cycle_cache[key] = L
        return self._cycle_cache[key]

    def power_vertex(self, k: int, label_idx: int, t: int) -> int:
        """Vertex of the coset label^t at level k.

        With basepoint-orbit data this goes digit by digit: the walk from
        the basepoint crosses the level-j voltage dart once per basepoint
        cycle, so the sheet digit at level j is the orbit element indexed
        by ceil(t / L_{j-1}) modulo the orbit size.  Otherwise the power
        is traced stepwise (reduced modulo the basepoint cycle first).
        """
        if t < 0:
            raise ValueError("only nonnegative powers")
        if self.taxonomy(0) is None:
            t %= self.cycle_length(k, label_idx)
            v = self.base(k)
            for _ in range(t):
                v = self.step(k, v, label_idx + 1)
            return v
        v, L = 0, 1
        for j in range(k):
            tax = self.taxonomy(j)
            orb = tax.orbit(label_idx)
            crossings = -(-t // L)  # ceil
            v = v * tax.degree + orb[crossings % len(orb)]
            L *= len(orb)
        return v

    def trace(self, k: int, start: int, letters) -> int:
        v = start
        for s in letters:
            v = self.step(k, v, s)
        return v

    # -- derived towers

    def decorated(self, extra: tuple[str, ...] = ("p", "q")) -> "Tower":
        """The same tower with per-vertex loop labels appended."""
        t = Tower(
            name=f"{self.name}+loops",
            family=DecoratedFamily(self.family, tuple(extra)),
            params=self.params,
            eager_levels=0,
            materialize_budget=self.materialize_budget,
            max_level=self.max_level,
        )
        t._core = self
        return t

    def _core_proxy(self) -> "Tower":
        return self._core if self._core is not None else self


# -- builders -----------------------------------------------------------------

def _transposition(d: int, i: int, j: int) -> tuple[int, ...]:
    p = list(range(d))
    p[i], p[j] = p[j], p[i]
    return tuple(p)


def _cycle_perm(d: int, cycle: tuple[int, ...]) -> tuple[int, ...]:
    p = list(range(d))
    for a, b in zip(cycle, cycle[1:] + cycle[:1]):
        p[a] = b
    return tuple(p)


def build_dyadic_tower(K: int, **kw) -> Tower:
    """Circle tower: level k is the 2^k-cycle, bonding is reduction mod 2^(k-1)."""
    return Tower("dyadic", CycleDoublingFamily(), params={"K": K}, eager_levels=min(K, 10), **kw)


def build_torus_tower(K: int, **kw) -> Tower:
    """Product of two circle towers over the 2-torus; degree 4 per level."""
    return Tower("torus", TorusFamily(), params={"K": K}, eager_levels=min(K, 8), **kw)


def build_rt_tower(K: int, **kw) -> Tower:
    """Klein-bottle self-cover tower: Z/2^k with a = +1 and b = negation."""
    return Tower("rt", HalfTurnFamily(), params={"K": K}, eager_levels=min(K, 10), **kw)


def _handle_sigma(m: int) -> dict[int, tuple[int, ...]]:
    # one cut per handle label; label j exchanges the base sheet with sheet j+1
    d = m + 1
    return {j: _transposition(d, 0, j + 1) for j in range(m)}


def build_generalized_schori_tower(n: int, variant: str, K: int, **kw) -> Tower:
    """Constant-degree handle towers with a central leaf of 4n or 4n+2 ends.

    The base rose has one label per distinguished handle; every level cuts
    each handle cycle once at the basepoint and swaps the base sheet with
    the handle's own sheet.  The ``4n`` variant uses 2n handles (degree
    2n+1), the ``4n+2`` variant 2n+1 handles (degree 2n+2), so the central
    point's line count doubles to the advertised end count.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if variant in ("4n", "4n+0"):
        m = 2 * n
    elif variant in ("4n+2", "4n2"):
        m = 2 * n + 1
    else:
        raise ValueError(f"unknown variant {variant!r} (use '4n' or '4n+2')")
    if m > len(_LABEL_POOL):
        raise ValueError("too many handles for single-letter labels")
    alphabet = Alphabet(tuple(_LABEL_POOL[:m]))
    sigma = _handle_sigma(m)
    fam = VoltagePatternFamily(alphabet, lambda k: sigma)
    return Tower(
        f"generalized[{n},{variant}]",
        fam,
        params={"n": n, "variant": variant, "K": K},
        eager_levels=min(K, 6),
        **kw,
    )


def build_schori_tower(K: int, method: str = "voltage", **kw) -> Tower:
    """The 3-fold tower over the figure-eight rose.

    ``voltage`` iterates the two-handle voltage pattern; ``folding`` folds
    the recursive generator sets level by level and reads the bonding maps
    off the coset graphs.  The two methods agree up to labeled isomorphism.
    """
    if method == "voltage":
        t = build_generalized_schori_tower(1, "4n", K, **kw)
        t.name = "schori"
        t.params = {"K": K, "method": "voltage"}
        return t
    if method != "folding":
        raise ValueError(f"unknown method {method!r}")
    levels = []
    bondings = []
    for k in range(K + 1):
        g = stallings_fold(schori_generator_sets(k).generators())
        if not g.complete:
            raise RuntimeError(f"level {k} generator set folded to an incomplete graph")
        levels.append(g)
        if k:
            vmap = covering_map(levels[k], levels[k - 1])
            if vmap is None:
                raise RuntimeError(f"levels {k}->{k - 1} are not a labeled covering")
            bondings.append(vmap)
    fam = ExplicitFamily(levels, bondings)
    return Tower("schori", fam, params={"K": K, "method": "folding"}, eager_levels=K, **kw)


_MIXED_SIGMA = {
    3: {0: _transposition(3, 0, 1), 1: _transposition(3, 0, 2)},
    5: {0: _cycle_perm(5, (0, 1, 2)), 1: _cycle_perm(5, (0, 3, 4))},
}


def mixed_degree_sequence(count: int) -> tuple[int, ...]:
    """5 3 3 5 3 3 3 5 ... with one more 3 between consecutive 5s each time."""
    out: list[int] = []
    gap = 2
    while len(out) < count:
        out.append(5)
        out.extend([3] * gap)
        gap += 1
    return tuple(out[:count])


def build_mixed_tower(degree_sequence, K: int | None = None, **kw) -> Tower:
    """Variable-degree tower alternating 3-fold and 5-fold handle covers.

    Degree-3 levels use the two-handle pattern; degree-5 levels cut each
    handle cycle once and rotate three sheets through the basepoint, so
    the basepoint has five bonding preimages: the basepoint itself plus
    two on the a-cycle and two on the b-cycle.
    """
    degs = tuple(int(d) for d in degree_sequence)
    if any(d not in (3, 5) for d in degs):
        raise ValueError("degree entries must be 3 or 5")
    if K is None:
        K = len(degs)
    if K > len(degs):
        raise ValueError("K exceeds the degree sequence length")
    alphabet = Alphabet(("a", "b"))

    def sigma_for_level(k: int):
        if k >= len(degs):
            raise LevelBudgetError(f"mixed tower degree sequence ends at level {len(degs)}")
        return _MIXED_SIGMA[degs[k]]

    fam = VoltagePatternFamily(alphabet, sigma_for_level)
    return Tower(
        "mixed", fam, params={"degrees": degs, "K": K}, eager_levels=min(K, 6), **kw
    )
