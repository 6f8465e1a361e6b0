"""Exact enumeration of small discrete systems.

Every move sequence is enumerated together with every assignment of the
random environment (scenery values or line orientations) on the sites it
touches.  An environment value is branched on at its first visit only, so
each leaf carries the exact probability of its path and the leaves of one
horizon form a partition of the probability space.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..lattice import WalkSpec
from ..mdm import MdmSpec
from ..rwrs import RwrsSpec

MAX_HORIZON = 8
DEFAULT_BUDGET = 10**8
HALF = Fraction(1, 2)


class EnumerationBudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class ExactResult:
    probability: Fraction
    enumerated_states: int


def rational(x: float) -> Fraction:
    """The simplest fraction for a float parameter such as 1/3 or 0.25."""
    return Fraction(x).limit_denominator(10**6)


def _walk_moves(walk: WalkSpec):
    if walk.dimension != 1 or walk.kind not in ("simple", "lazy"):
        raise ValueError("enumeration supports one-dimensional simple or lazy walks")
    if walk.kind == "simple" or walk.hold == 0.0:
        return [(-1, HALF), (1, HALF)]
    h = rational(walk.hold)
    return [(0, h), (-1, (1 - h) / 2), (1, (1 - h) / 2)]


def _scenery_values(spec: RwrsSpec):
    law = spec.scenery.law
    if law == "rademacher":
        values = [(-1, HALF), (1, HALF)]
    elif law == "lazy_rademacher":
        q = rational(spec.scenery.q)
        values = [(0, q), (-1, (1 - q) / 2), (1, (1 - q) / 2)]
    else:
        raise ValueError(f"enumeration needs a discrete scenery, got {law!r}")
    s = spec.scenery.scale
    if not float(s).is_integer():
        raise ValueError("enumeration needs an integer scenery scale")
    return [(int(s) * v, w) for v, w in values if w]


class _Counter:
    def __init__(self, budget: int):
        self.budget = budget
        self.leaves = 0

    def tick(self):
        self.leaves += 1
        if self.leaves > self.budget:
            raise EnumerationBudgetExceeded(f"enumeration exceeded {self.budget} branches")


def _walk_leaves(walk: WalkSpec, n: int, counter: _Counter):
    moves = [(d, w) for d, w in _walk_moves(walk) if w]

    def rec(path, weight):
        if len(path) == n + 1:
            counter.tick()
            yield weight, tuple(path)
            return
        for d, w in moves:
            path.append(path[-1] + d)
            yield from rec(path, weight * w)
            path.pop()

    yield from rec([0], Fraction(1))


def _rwrs_leaves(spec: RwrsSpec, n: int, counter: _Counter):
    moves = [(d, w) for d, w in _walk_moves(spec.walk) if w]
    values = _scenery_values(spec)
    scenery: dict[int, int] = {}

    def rec(path, pos, weight):
        if len(path) == n + 1:
            counter.tick()
            yield weight, tuple(path)
            return
        for d, w in moves:
            site = pos + d
            if site in scenery:
                path.append(path[-1] + scenery[site])
                yield from rec(path, site, weight * w)
                path.pop()
                continue
            for v, wv in values:
                scenery[site] = v
                path.append(path[-1] + v)
                yield from rec(path, site, weight * w * wv)
                path.pop()
            del scenery[site]

    yield from rec([0], 0, Fraction(1))


def _mdm_leaves(spec: MdmSpec, n: int, counter: _Counter):
    p = rational(spec.p)
    vertical = (1 - p) / 2
    lines: dict[int, int] = {}

    def rec(path, y, weight):
        if len(path) == n + 1:
            counter.tick()
            yield weight, tuple(path)
            return
        if y in lines:
            path.append(path[-1] + lines[y])
            yield from rec(path, y, weight * p)
            path.pop()
        else:
            for o in (-1, 1):
                lines[y] = o
                path.append(path[-1] + o)
                yield from rec(path, y, weight * p * HALF)
                path.pop()
            del lines[y]
        for dy in (-1, 1):
            path.append(path[-1])
            yield from rec(path, y + dy, weight * vertical)
            path.pop()

    yield from rec([0], 0, Fraction(1))


def enumerate_paths(system, n: int, budget: int = DEFAULT_BUDGET):
    """Yield (exact probability, (Z_0, ..., Z_n)) over the whole enumeration tree.

    Raises ``EnumerationBudgetExceeded`` once more than ``budget`` leaves
    have been produced.
    """
    if not 1 <= n <= MAX_HORIZON:
        raise ValueError(f"enumeration needs 1 <= n <= {MAX_HORIZON}, got {n}")
    counter = _Counter(budget)
    if isinstance(system, RwrsSpec):
        if system.walk.dimension != 1:
            raise ValueError("enumeration supports one-dimensional RWRS only")
        return _rwrs_leaves(system, n, counter)
    if isinstance(system, WalkSpec):
        return _walk_leaves(system, n, counter)
    if isinstance(system, MdmSpec):
        return _mdm_leaves(system, n, counter)
    raise ValueError(f"no enumeration for {type(system).__name__}")


def _first_return(path) -> int:
    for k in range(1, len(path)):
        if path[k] == 0:
            return k
    return len(path)


@dataclass
class ExactLaw:
    """Exact path functionals of one system at horizon n, level -1 unless stated."""

    n: int
    level: int
    leaves: int = 0
    total: Fraction = Fraction(0)
    p_event: Fraction = Fraction(0)
    p_survive_down: Fraction = Fraction(0)
    survival: list[Fraction] = field(default_factory=list)
    mean_range: Fraction = Fraction(0)
    mean_max0: Fraction = Fraction(0)
    range_violations: int = 0
    event_violations: int = 0
    unit_steps: bool = True


def exact_law(system, n: int, level: int = -1, budget: int = DEFAULT_BUDGET) -> ExactLaw:
    law = ExactLaw(n, level, survival=[Fraction(0)] * (n + 1))
    for w, path in enumerate_paths(system, n, budget):
        law.leaves += 1
        law.total += w
        top = max(path[1:])
        t0 = _first_return(path)
        event = top <= level
        if event:
            law.p_event += w
        survived_down = t0 > n and path[1] <= -1
        if survived_down:
            law.p_survive_down += w
        if event != survived_down:
            law.event_violations += 1
        for k in range(min(t0, n + 1)):
            law.survival[k] += w
        visited = len(set(path))
        law.mean_range += w * visited
        law.mean_max0 += w * max(path)
        if visited != max(path) - min(path) + 1:
            law.range_violations += 1
        if any(abs(b - a) > 1 for a, b in zip(path, path[1:])):
            law.unit_steps = False
    return law


def brute_force_persistence(system, n: int, level: int = -1,
                            budget: int = DEFAULT_BUDGET) -> ExactResult:
    """Exact P(max_{1..n} Z <= level) by full enumeration."""
    total = Fraction(0)
    prob = Fraction(0)
    leaves = 0
    for w, path in enumerate_paths(system, n, budget):
        leaves += 1
        total += w
        if max(path[1:]) <= level:
            prob += w
    if total != 1:
        raise AssertionError(f"enumeration weights sum to {total}, not 1")
    return ExactResult(prob, leaves)


def brute_force_survival(system, n: int, budget: int = DEFAULT_BUDGET) -> ExactResult:
    """Exact P(T_0 > n) by full enumeration."""
    prob = Fraction(0)
    leaves = 0
    for w, path in enumerate_paths(system, n, budget):
        leaves += 1
        if _first_return(path) > n:
            prob += w
    return ExactResult(prob, leaves)
