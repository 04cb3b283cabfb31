"""Fiber points of the inverse limit, their per-level taxonomy, stabilized
leaf balls, the end-count estimator, and the Monte Carlo sampler.

A fiber point is a coherent vertex thread (v_k) with bonding(v_{k+1}) = v_k,
generated by a named extension policy.  End counts are read off annuli in
level graphs once the ball around v_k has stopped growing with the level;
the verdicts are exact integers or the honest strings "unstable" and
"undetermined" - the tool never extrapolates past its budget.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .graphs import BallSnapshot, annulus_counts, bfs_distances
from .towers import LevelBudgetError, Tower
from .words import Word, parse_word


# -- extension policies -------------------------------------------------------

class IdPolicy:
    """The basepoint thread (id_k)."""

    name = "id"

    def realize(self, tower: Tower, k: int) -> int:
        return tower.base(k)


class PowerThreadPolicy:
    """Threads of powers of the first label: v_k = a^(l_k).

    The exponent rule keeps l at odd levels and adds the previous level's
    basepoint a-cycle length at even levels; started from an odd level j
    with a chosen l_j.  Such threads eventually avoid every hanging
    component, so their leaves carry exactly two ends.
    """

    def __init__(self, j: int, ell: int):
        if j < 1 or j % 2 == 0:
            raise ValueError("dyadic threads start at an odd level j >= 1")
        self.j = j
        self.ell = ell
        self._ells: dict[int, int] = {}

    @property
    def name(self) -> str:
        return f"dyadic({self.j},{self.ell})"

    def _ell_at(self, tower: Tower, k: int) -> int:
        if k in self._ells:
            return self._ells[k]
        if self.ell >= tower.cycle_length(self.j, 0):
            raise ValueError(
                f"l_j={self.ell} out of range at level {self.j} "
                f"(a-cycle length {tower.cycle_length(self.j, 0)})"
            )
        if k <= self.j:
            val = self.ell % tower.cycle_length(k, 0)
        else:
            prev = self._ell_at(tower, k - 1)
            val = prev + tower.cycle_length(k - 1, 0) if k % 2 == 0 else prev
        self._ells[k] = val
        return val

    def realize(self, tower: Tower, k: int) -> int:
        return tower.power_vertex(k, 0, self._ell_at(tower, k))


class PrependPowerPolicy:
    """The zigzag threads: each level prepends the closing power of the
    previous level's a- or b-cycle, alternating letters.

    v_k is the trace of w_k where w_k = s^(L_{k-1}) w_{k-1}, s alternating
    between the two labels; the prepended word closes one level down, so
    the thread is coherent.  These points sit in a hanging component at
    every level and their leaves have one end.
    """

    def __init__(self, start_label: int = 0):
        # start_label 0: levels 1,3,5,... prepend label 0 ("q" flavor);
        # start_label 1: the mirror thread ("qprime")
        self.start_label = start_label
        self._cache: dict[int, int] = {0: 0}
        self._words: dict[int, list[tuple[int, int]]] = {0: []}

    @property
    def name(self) -> str:
        return "q" if self.start_label == 0 else "qprime"

    def _word(self, tower: Tower, k: int) -> list[tuple[int, int]]:
        # run-length form [(label_idx, exponent), ...], outermost first
        if k not in self._words:
            label = self.start_label if k % 2 == 1 else 1 - self.start_label
            run = (label, tower.cycle_length(k - 1, label))
            self._words[k] = [run] + self._word(tower, k - 1)
        return self._words[k]

    def realize(self, tower: Tower, k: int) -> int:
        if k not in self._cache:
            v = tower.base(k)
            for label, exp in self._word(tower, k):
                s = label + 1
                for _ in range(exp):
                    v = tower.step(k, v, s)
            self._cache[k] = v
        return self._cache[k]


class WordPolicy:
    """A fixed word traced at every level: v_k = [w] in L_k.

    Always coherent, since bonding maps commute with tracing.
    """

    def __init__(self, word: Word, text: str):
        self.word = word
        self.name = f"word:{text}"

    def realize(self, tower: Tower, k: int) -> int:
        return tower.trace(k, tower.base(k), self.word.letters)


class RandomPolicy:
    """Uniform choice among bonding preimages at each level (the natural
    fiber measure), reproducible from an explicit seed."""

    def __init__(self, seed):
        self.seed = seed
        self._rng = random.Random(str(seed))
        self._cache: list[int] = [0]

    @property
    def name(self) -> str:
        return f"random({self.seed})"

    def realize(self, tower: Tower, k: int) -> int:
        while len(self._cache) <= k:
            j = len(self._cache) - 1
            choices = tower.lifts(j, self._cache[-1])
            self._cache.append(choices[self._rng.randrange(len(choices))])
        return self._cache[k]


def make_policy(spec, tower: Tower):
    """Parse a policy descriptor: id | q | qprime | dyadic:j,l | random:seed
    | word:<letters>."""
    if not isinstance(spec, str):
        return spec
    head, _, arg = spec.partition(":")
    if head == "id":
        return IdPolicy()
    if head == "q":
        return PrependPowerPolicy(0)
    if head == "qprime":
        return PrependPowerPolicy(1)
    if head == "dyadic":
        j, ell = (int(x) for x in arg.split(","))
        return PowerThreadPolicy(j, ell)
    if head == "random":
        if arg == "":
            raise ValueError("random policy needs an explicit seed")
        return RandomPolicy(arg)
    if head == "word":
        return WordPolicy(parse_word(arg, tower.alphabet), arg)
    raise ValueError(f"unknown policy {spec!r} (id, q, qprime, dyadic:j,l, random:seed, word:w)")


class FiberPoint:
    """A coherent vertex thread through a tower, realized on demand."""

    def __init__(self, tower: Tower, policy):
        self.tower = tower
        self.policy = policy
        self._prefix: list[int] = []

    @property
    def name(self) -> str:
        return self.policy.name

    def vertex(self, k: int) -> int:
        while len(self._prefix) <= k:
            j = len(self._prefix)
            v = self.policy.realize(self.tower, j)
            if j > 0 and self.tower.project(j, v) != self._prefix[j - 1]:
                raise ValueError(
                    f"policy {self.policy.name} broke coherence at level {j}: "
                    f"bonding({v}) = {self.tower.project(j, v)} != {self._prefix[j - 1]}"
                )
            self._prefix.append(v)
        return self._prefix[k]

    @property
    def realized(self) -> tuple[int, ...]:
        return tuple(self._prefix)


# -- per-level taxonomy --------------------------------------------------------

@dataclass(frozen=True)
class LevelTag:
    """Where v_{k+1} sits among the components left after deleting the
    basepoint fiber from level k+1.

    kind 'main' components carry the line of their label; 'tcomp'
    components hang off a deleted vertex of another line; 'base' marks
    v_k at the basepoint itself, where the taxonomy does not apply.
    ``position`` is the sheet's index along the owning basepoint cycle.
    """

    kind: str  # "base" | "main" | "tcomp"
    line: str | None = None  # main: own line; tcomp: the line it hangs from
    content: str | None = None  # tcomp only: the label populating it
    sheet: int | None = None
    position: int | None = None
    orbit_size: int | None = None

    @property
    def name(self) -> str:
        if self.kind == "base":
            return "AtBase"
        L = self.line.upper()
        if self.kind == "main":
            if self.orbit_size == 2:
                return f"{L}plus" if self.position else f"{L}minus"
            return f"{L}{self.position if self.position else self.orbit_size}"
        return f"T{L}" if self.orbit_size == 2 else f"T{L}{self.position}"

    def __str__(self):
        return self.name


def _make_tag(tax, side: str | None, sheet: int, alphabet) -> tuple[LevelTag, str | None]:
    """Tag for the transition into a child on ``sheet`` when the parent sits
    on ``side`` (a label name, or None at the basepoint); returns the tag
    and the child's side."""
    if side is None:
        new_side = None if sheet == 0 else alphabet.labels[tax.owner[sheet]]
        return LevelTag(kind="base"), new_side
    side_idx = alphabet.index(side)
    owner = side_idx if sheet == 0 else tax.owner[sheet]
    orbit = tax.orbit(owner)
    if owner == side_idx:
        tag = LevelTag(
            kind="main",
            line=side,
            sheet=sheet,
            position=orbit.index(sheet),
            orbit_size=len(orbit),
        )
        return tag, side
    new_side = alphabet.labels[owner]
    tag = LevelTag(
        kind="tcomp",
        line=new_side,
        content=side,
        sheet=sheet,
        position=orbit.index(sheet),
        orbit_size=len(orbit),
    )
    return tag, new_side


def side_of(tower: Tower, k: int, v: int) -> str | None:
    """Which label's component of L_k minus the basepoint contains v
    (None for the basepoint itself).  O(k) from the sheet digits."""
    digits = []
    for j in range(k, 0, -1):
        v, s = divmod(v, tower.degree(j - 1))
        digits.append(s)
    digits.reverse()
    side = None
    for j, sheet in enumerate(digits):
        tax = _require_taxonomy(tower, j)
        if side is None:
            side = None if sheet == 0 else tower.alphabet.labels[tax.owner[sheet]]
        elif sheet != 0:
            side = tower.alphabet.labels[tax.owner[sheet]]
    return side


def _require_taxonomy(tower: Tower, k: int):
    tax = tower.taxonomy(k)
    if tax is None:
        raise ValueError(
            f"tower {tower.name!r} has no component taxonomy "
            "(only basepoint-cut voltage towers carry one)"
        )
    return tax


def classify_level(tower: Tower, k: int, v_k: int, v_k1: int) -> LevelTag:
    """Tag of the component of level k+1 minus the basepoint fiber that
    contains v_{k+1}."""
    tax = _require_taxonomy(tower, k)
    if tower.project(k + 1, v_k1) != v_k:
        raise ValueError("v_{k+1} does not lie over v_k")
    sheet = v_k1 % tax.degree
    side = None if v_k == tower.base(k) else side_of(tower, k, v_k)
    tag, _ = _make_tag(tax, side, sheet, tower.alphabet)
    return tag


@dataclass
class ClassificationTrace:
    """Per-level tags of a fiber point and the finite-budget verdict."""

    point: str
    tower: str
    budget: int
    tags: tuple[LevelTag, ...]
    verdict: str  # special | dyadic | flipflopping | undetermined

    def tag_names(self) -> tuple[str, ...]:
        return tuple(t.name for t in self.tags)


def classify_fiber_point(point: FiberPoint, budget: int = 20) -> ClassificationTrace:
    """Classify by the tail behavior of the level tags.

    special: at the basepoint on every level.  dyadic: no hanging-component
    tags in the budget tail.  flipflopping: hanging-component tags recur
    into the tail.  undetermined: the window cannot separate the two.
    """
    if budget < 4:
        raise ValueError("classification budget must be >= 4")
    tower = point.tower
    side: str | None = None
    tags: list[LevelTag] = []
    for k in range(budget):
        tax = _require_taxonomy(tower, k)
        v_k1 = point.vertex(k + 1)
        sheet = v_k1 % tax.degree
        tag, side = _make_tag(tax, side, sheet, tower.alphabet)
        tags.append(tag)
    window = max(2, budget // 4)
    t_tail = sum(t.kind == "tcomp" for t in tags[-window:])
    t_total = sum(t.kind == "tcomp" for t in tags)
    if all(t.kind == "base" for t in tags):
        verdict = "special"
    elif t_tail == 0:
        verdict = "dyadic"
    elif t_total >= 2:
        verdict = "flipflopping"
    else:
        verdict = "undetermined"
    return ClassificationTrace(
        point=point.name,
        tower=tower.name,
        budget=budget,
        tags=tuple(tags),
        verdict=verdict,
    )


def classify_level_by_components(tower: Tower, k: int, v_k: int, v_k1: int) -> LevelTag:
    """Reference implementation: delete the basepoint fiber from the
    materialized level k+1 and find v_{k+1}'s component by search.
    Used to cross-check the digit-based tagging."""
    tax = _require_taxonomy(tower, k)
    g = tower.level(k + 1)
    d = tax.degree
    deleted = {u for u in range(g.n) if tower.project(k + 1, u) == tower.base(k)}
    if v_k1 in deleted:
        return LevelTag(kind="base")
    comp = _component_of(g, v_k1, deleted)
    # probe every candidate component for a match
    for t_idx, t_lab in enumerate(tower.alphabet.labels):
        orbit = tax.orbit(t_idx)
        L = tower.cycle_length(k, t_idx)
        for c in range(len(orbit)):
            probe = tower.power_vertex(k + 1, t_idx, c * L + 1)
            if probe in comp:
                sheet = probe % d
                return LevelTag(
                    kind="main",
                    line=t_lab,
                    sheet=sheet,
                    position=orbit.index(sheet),
                    orbit_size=len(orbit),
                )
        for c in range(1, len(orbit)):
            p = tower.power_vertex(k + 1, t_idx, c * L)
            for u_idx, u_lab in enumerate(tower.alphabet.labels):
                if u_idx == t_idx:
                    continue
                hang = g.step(p, u_idx + 1)
                if hang in comp:
                    return LevelTag(
                        kind="tcomp",
                        line=t_lab,
                        content=u_lab,
                        sheet=p % d,
                        position=orbit.index(p % d),
                        orbit_size=len(orbit),
                    )
    raise RuntimeError("component matched no probe (taxonomy violated)")


def _component_of(g, start: int, deleted: set[int]) -> set[int]:
    seen = {start}
    frontier = [start]
    letters = g.alphabet.signed_letters()
    while frontier:
        nxt = []
        for v in frontier:
            for s in letters:
                w = g.step(v, s)
                if w not in seen and w not in deleted:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return seen


# -- stabilized balls and end counts -------------------------------------------

def stable_ball(point: FiberPoint, R: int, confirm: int = 2, max_level: int | None = None) -> BallSnapshot:
    """The ball of radius R around the thread once its vertex count has
    stopped changing for ``confirm`` further levels.

    The count is non-decreasing in the level (a covering-map invariant,
    asserted here); its plateau value is the leaf ball size and the
    returned snapshot is isometric to the leaf ball.
    """
    if confirm < 1:
        raise ValueError("confirm must be >= 1")
    tower = point.tower
    top = tower.max_level if max_level is None else max_level
    letters = tower.signed_letters()
    prev_size = -1
    run = 0
    candidate: BallSnapshot | None = None
    sizes = []
    for k in range(top + 1):
        v = point.vertex(k)
        dist = bfs_distances(tower.stepper(k), letters, v, R)
        size = len(dist)
        sizes.append(size)
        if size < prev_size:
            raise RuntimeError(
                f"ball count shrank between levels {k - 1} and {k}: covering bug"
            )
        if size == prev_size:
            run += 1
            if run >= confirm and candidate is not None:
                return candidate
        else:
            run = 0
            candidate = BallSnapshot(center=v, radius=R, members=dist, host_level=k)
        prev_size = size
    raise LevelBudgetError(
        f"ball of radius {R} around {point.name} did not stabilize by level {top}",
        last_counts=tuple(sizes[-2:]),
    )


@dataclass
class EndsRow:
    r: int
    R: int
    level: int
    count: int
    touching: int


@dataclass
class EndsReport:
    """Annulus-component counts E(r, R) with stabilization metadata."""

    point: str
    tower: str
    r_schedule: tuple[int, ...]
    R_factor: int
    confirm: int
    level: int
    rows: list[EndsRow]
    plateaus: dict[int, int | None]
    verdict: object  # int or "unstable"

    @property
    def stable(self) -> bool:
        return isinstance(self.verdict, int)


# Hanging components attached within distance r reach out to roughly 2r
# (each hangs a cycle of the attachment scale plus geometrically shrinking
# sub-bushes), so the constancy window for E(r, R) starts safely above 2r.
WINDOW_STEPS = (1.0, 0.5, 0.0)  # R = (R_factor - step) * r


def estimate_ends(
    point: FiberPoint,
    r_schedule=(2, 4, 8, 16),
    R_factor: int = 4,
    confirm: int = 2,
    max_level: int | None = None,
) -> EndsReport:
    """Count ends as stabilized annulus components touching the outer sphere.

    For each r the annulus (r, R] is examined for a window of increasing R
    up to R_factor * r; the per-r plateau is the touching count if it is
    constant across the window.  The verdict is the plateau of the largest
    r when the last two r values agree, else "unstable".
    """
    r_schedule = tuple(r_schedule)
    if list(r_schedule) != sorted(set(r_schedule)) or not r_schedule:
        raise ValueError("r_schedule must be strictly increasing")
    if R_factor < 4:
        raise ValueError("R_factor must be >= 4")
    tower = point.tower
    R_big = R_factor * max(r_schedule)
    snap = stable_ball(point, R_big, confirm=confirm, max_level=max_level)
    stepfn = tower.stepper(snap.host_level)
    letters = tower.signed_letters()
    rows: list[EndsRow] = []
    plateaus: dict[int, int | None] = {}
    for r in r_schedule:
        radii = sorted({math.ceil((R_factor - step) * r) for step in WINDOW_STEPS})
        touches = []
        for R in radii:
            count, touching = annulus_counts(stepfn, letters, snap.members, r, R)
            rows.append(EndsRow(r=r, R=R, level=snap.host_level, count=count, touching=touching))
            touches.append(touching)
        plateaus[r] = touches[0] if len(set(touches)) == 1 else None
    last = plateaus[r_schedule[-1]]
    prev = plateaus[r_schedule[-2]] if len(r_schedule) > 1 else None
    if last is not None and last == prev:
        verdict: object = last
    else:
        verdict = "unstable"
    return EndsReport(
        point=point.name,
        tower=tower.name,
        r_schedule=r_schedule,
        R_factor=R_factor,
        confirm=confirm,
        level=snap.host_level,
        rows=rows,
        plateaus=plateaus,
        verdict=verdict,
    )


# -- sampling -------------------------------------------------------------------

@dataclass
class SampleReport:
    """Aggregated verdicts over independently seeded random fiber points."""

    tower: str
    n: int
    seed: object
    budget: int
    ends_histogram: dict[str, int]
    class_histogram: dict[str, int]
    points: list[dict]


def sample_fiber_points(
    tower: Tower,
    n: int,
    seed,
    budget: int = 20,
    ends_params: dict | None = None,
) -> SampleReport:
    """n random-policy fiber points with per-point classification and end
    verdicts.  Reproducible from the seed alone: each sample derives its
    own sub-seed, so results do not depend on execution order."""
    if n < 1:
        raise ValueError("n must be >= 1")
    ends_params = dict(ends_params or {})
    ends_hist: dict[str, int] = {}
    class_hist: dict[str, int] = {}
    points = []
    for i in range(n):
        p = FiberPoint(tower, RandomPolicy(f"{seed}:{i}"))
        if tower.has_taxonomy:
            cls = classify_fiber_point(p, budget=budget).verdict
        else:
            cls = "n/a"
        try:
            ends = estimate_ends(p, **ends_params).verdict
        except LevelBudgetError:
            ends = "unstable"
        ends_key = str(ends)
        ends_hist[ends_key] = ends_hist.get(ends_key, 0) + 1
        class_hist[cls] = class_hist.get(cls, 0) + 1
        points.append({"index": i, "classification": cls, "ends": ends})
    return SampleReport(
        tower=tower.name,
        n=n,
        seed=seed,
        budget=budget,
        ends_histogram=dict(sorted(ends_hist.items())),
        class_histogram=dict(sorted(class_hist.items())),
        points=points,
    )
